#pragma once

#include <optional>
#include <string>

#include "resetfreq/elements.hpp"

namespace resetfreq {

/// Benchmark positioning-stage plant, single-mode fit:
/// 6.615e5 / (83.57 s^2 + 279.4 s + 5.837e5).
RationalTf benchmark_plant();

struct CglpPresetRow {
    const char* name;
    double pm_deg;        // published design phase margin
    double phi_cglp_deg;  // published element phase-lead label
    double gamma;
    double omega_r_hz;
    double alpha;
    double omega_d_hz;
    double omega_t_hz;
};

/// The ten CgLp-PID benchmark rows (shared corners: omega_i 15 Hz,
/// omega_f 1500 Hz, crossover 150 Hz).
const std::vector<CglpPresetRow>& cglp_preset_table();

/// Named controller fixtures, all gain-tuned for 150 Hz crossover against
/// benchmark_plant() (except `clegg`, a bare element):
///   c01..c10                      CgLp-PID designs
///   rci_p02, rci_000, rci_m02     resetting-integrator PIDs, gamma +0.2/0/-0.2
///   rpci_p02, rpci_000, rpci_m02  resetting-PI PIDs
///   pid                           linear PID (84.34/266.75 Hz lead, 1.5 kHz lowpass)
///   clegg                         generalized Clegg integrator, gamma 0
/// gamma_override replaces the preset's gamma (gain retuned accordingly).
ResetController make_preset(const std::string& name,
                            std::optional<double> gamma_override = std::nullopt);

std::vector<std::string> preset_names();

}  // namespace resetfreq
