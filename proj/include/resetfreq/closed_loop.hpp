#pragma once

#include "resetfreq/hosidf.hpp"

namespace resetfreq {

enum class Channel { Reference, Disturbance, Noise };
enum class Signal { Error, Output, Control };

const char* to_string(Channel c);
const char* to_string(Signal s);

/// First-harmonic loop quantities at one excitation frequency.
struct LoopQuantities {
    Complex l1;     // H_1(w) P(w)
    Complex sl1;    // 1/(1 + L_1)
    Complex h1;     // controller first harmonic
    Complex l_bl;   // base-linear loop at w
    Complex sl_bl;  // 1/(1 + L_bl)
};

LoopQuantities loop_at(const ResetController& ctrl, const Plant& plant, double omega,
                       FrfMode mode = FrfMode::Strict, FrfWarnings* warnings = nullptr);

/// |S1| rotated by n times the phase of S1; the sensitivity carried by every
/// harmonic generated from the first error harmonic.
Complex phase_rotated_gain(Complex s1, int n);

/// Predicted harmonic content of e, y, u_R for a unit-amplitude sinusoid on
/// one exogenous channel. Odd harmonics only; even queries return zero.
struct ClosedLoopPrediction {
    Channel channel = Channel::Reference;
    double omega = 0.0;
    int n_max = 1;
    std::vector<Complex> e, y, u;  // index k holds harmonic n = 2k+1

    Complex at(Signal s, int n) const;
    const std::vector<Complex>& table(Signal s) const;
};

ClosedLoopPrediction predict(const ResetController& ctrl, const Plant& plant, double omega,
                             int n_max, Channel channel, FrfMode mode = FrfMode::Strict,
                             FrfWarnings* warnings = nullptr);

inline ClosedLoopPrediction predict_reference(const ResetController& c, const Plant& p,
                                              double omega, int n_max) {
    return predict(c, p, omega, n_max, Channel::Reference);
}
inline ClosedLoopPrediction predict_disturbance(const ResetController& c, const Plant& p,
                                                double omega, int n_max) {
    return predict(c, p, omega, n_max, Channel::Disturbance);
}
inline ClosedLoopPrediction predict_noise(const ResetController& c, const Plant& p, double omega,
                                          int n_max) {
    return predict(c, p, omega, n_max, Channel::Noise);
}

/// One period of the harmonic sum, samples_per_period >= 2 n_max + 2.
std::vector<double> reconstruct_time(const ClosedLoopPrediction& pred, Signal signal,
                                     int samples_per_period);

struct NormReport {
    double l2 = 0.0;
    double linf = 0.0;
};

/// l2 by Parseval, linf by dense scan over one period.
NormReport norms(const ClosedLoopPrediction& pred, Signal signal, int samples_per_period = 10000);
NormReport norms_of_harmonics(const std::vector<Complex>& table, int samples_per_period = 10000);

/// Prediction error ratio |measured - predicted| / predicted.
double per(double measured, double predicted);

struct ExogenousInput {
    Channel channel = Channel::Reference;
    double omega = 0.0;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Multi-input prediction by dominance: the largest first-harmonic error
/// passes through the full reset prediction, the rest through base-linear
/// sensitivities. Peak contributions add (same caveat as the phase-aligned
/// measurement arithmetic; combined_is_sum_of_peaks flags it).
struct SuperposeReport {
    bool dominance_ok = false;
    size_t dominant_index = 0;
    double threshold = 0.5;
    std::vector<double> first_harmonic_error;  // |E1_i| per input
    std::vector<double> peak_error;            // per-input predicted ||e||inf contribution
    std::vector<bool> through_reset;           // true only for the dominant input
    double combined_linf_e = 0.0;
    bool combined_is_sum_of_peaks = true;
    std::vector<std::pair<size_t, size_t>> violations;  // (j, k) pairs breaking dominance
};

SuperposeReport superpose(const ResetController& ctrl, const Plant& plant,
                          const std::vector<ExogenousInput>& inputs, int n_max,
                          double dominance_threshold = 0.5);

}  // namespace resetfreq
