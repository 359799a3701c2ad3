#pragma once

#include "resetfreq/elements.hpp"

namespace resetfreq {

/// Frequency-dependent matrices entering the describing-function equations,
/// all n x n real at a fixed excitation frequency.
struct HarmonicKernel {
    Mat lambda;   // w^2 I + A_R^2
    Mat delta;    // I + e^{(pi/w) A_R}
    Mat delta_r;  // I + A_rho e^{(pi/w) A_R}
    Mat gamma_r;  // delta_r^-1 A_rho delta lambda^-1
    Mat theta_d;  // -(2 w^2 / pi) delta (gamma_r - lambda^-1)
};

HarmonicKernel kernel(const ResetController& ctrl, double omega);

/// First-harmonic gain H_1(w) = C_R (jwI - A_R)^-1 (I + j Theta_D) B_R + D_R.
Complex describing_function(const ResetController& ctrl, double omega);

/// n-th harmonic gain. n = 1 is the describing function; even n are exactly
/// zero; odd n >= 3 use C_R (jnwI - A_R)^-1 j Theta_D B_R (no feedthrough).
Complex hosidf(const ResetController& ctrl, double omega, int n);

/// All harmonics 1..n_max at one frequency sharing a single kernel evaluation.
/// Entry k holds H_{k+1}; even entries are zero.
std::vector<Complex> harmonics(const ResetController& ctrl, double omega, int n_max);

/// L_n(w) = H_n(w) P(nw) for odd n, 0 for even n.
Complex open_loop_hosidf(const ResetController& ctrl, const Plant& plant, double omega, int n,
                         FrfMode mode = FrfMode::Strict, FrfWarnings* warnings = nullptr);

/// Per-frequency table of H_n (or L_n when a plant is attached), odd n only.
struct HarmonicResponse {
    std::vector<double> omega_grid;
    int n_max = 1;
    bool open_loop = false;
    CMat values;  // rows: grid index, cols: odd harmonic 1,3,5,...

    Complex at(Eigen::Index grid_index, int n) const {
        if (n <= 0) throw std::invalid_argument("harmonic index must be >= 1");
        if (n % 2 == 0) return {0.0, 0.0};
        if (n > n_max) throw std::invalid_argument("harmonic index beyond table n_max");
        return values(grid_index, (n - 1) / 2);
    }
};

HarmonicResponse sweep(const ResetController& ctrl, const Plant* plant,
                       const std::vector<double>& omega_grid, int n_max,
                       FrfMode mode = FrfMode::Strict, FrfWarnings* warnings = nullptr);

}  // namespace resetfreq
