#pragma once

#include <filesystem>
#include <string>

#include "resetfreq/hosidf.hpp"
#include "resetfreq/hybrid_sim.hpp"
#include "resetfreq/stability.hpp"

namespace resetfreq {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit, hex-encoded; identifies a run by its canonical config text.
std::string config_hash(const std::string& canonical_text);

/// Deterministic 10-significant-digit float formatting shared by all CSVs.
std::string format_number(double v);

/// `# resetfreq <version> config=<hash>` header comment.
std::string csv_preamble(const std::string& hash);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Sweep CSV: omega_radps,n,mag,phase_rad (mag linear, or dB with db=true).
std::string sweep_csv(const HarmonicResponse& r, bool db, const std::string& hash);

/// Prediction CSV: omega_radps,channel,signal,n,mag,phase_rad.
std::string prediction_csv(const std::vector<ClosedLoopPrediction>& preds,
                           const std::string& hash);

/// Norm CSV: omega_radps,channel,signal,l2,linf.
struct NormRow {
    double omega;
    Channel channel;
    Signal signal;
    NormReport report;
};
std::string norm_csv(const std::vector<NormRow>& rows, const std::string& hash);

/// PER CSV: omega_radps,channel,metric,per_df,per_hosidf plus campaign flags.
struct PerRow {
    double omega;
    Channel channel;
    std::string metric;
    double per_df;
    double per_hosidf;
    bool converged;
    int resets_per_period;
    bool assumption2_violated;  // more than two resets per period
    bool l3_dominates;          // |L3| > |L1| at this frequency
};
std::string per_csv(const std::vector<PerRow>& rows, const std::string& hash);

std::string trajectory_csv(const HybridTrajectory& traj, const std::string& hash);
std::string events_csv(const std::vector<double>& reset_times, const std::string& hash);
std::string steady_csv(const SteadyStateRecord& rec, const std::string& hash);

std::string certificate_report(const StabilityCertificate& cert);
std::string superpose_report(const SuperposeReport& rep,
                             const std::vector<ExogenousInput>& inputs);

/// Two-panel (magnitude dB / phase deg) log-frequency SVG, one trace per
/// harmonic. Figures are a convenience; the CSVs carry the data.
std::string bode_svg(const HarmonicResponse& r, const std::string& title);

}  // namespace resetfreq
