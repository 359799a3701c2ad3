#pragma once

#include <optional>

#include "resetfreq/frf.hpp"
#include "resetfreq/lti.hpp"

namespace resetfreq {

/// Reset controller: base-linear flow dynamics plus a jump map acting on the
/// leading n_r states. The full reset matrix is blockdiag(A_rho_r, I).
struct ResetController {
    StateSpace base;  // A_R, B_R, C_R, D_R
    Eigen::Index n_r = 0;
    Mat A_rho_r;

    ResetController() : A_rho_r(0, 0) {}
    ResetController(StateSpace b, Eigen::Index nr, Mat arho);

    Eigen::Index states() const { return base.states(); }

    /// blockdiag(A_rho_r, I_{n_nr}).
    Mat full_reset_matrix() const;

    /// Flow dynamics with the jump rule dropped (the gamma=1 limit).
    const StateSpace& base_linear() const { return base; }
};

enum class ElementKind { Gci, Gfore, Gsore, Cglp, PciReset };

/// Tuning parameters shared by the element constructors and config parsing.
/// alpha = 0 requests the automatic gain-correction rule.
struct ElementParams {
    double gamma = 0.0;
    double omega_r = 0.0;
    double omega_f = 0.0;
    double beta_r = 1.0;
    double kappa = 1.0;
    double alpha = 0.0;
    double K = 1.0;
    double omega_i = 0.0;  // PCI-style reset zero
};

/// One factor of the non-resetting linear controller part.
struct LinearFactor {
    enum class Kind { Integrator, TamedIntegrator, Lead, Lowpass, LeadZero, Gain };
    Kind kind;
    double p1 = 0.0;  // first corner (rad/s) or gain value
    double p2 = 0.0;  // second corner where applicable

    static LinearFactor integrator(double wi) { return {Kind::Integrator, wi, 0.0}; }
    static LinearFactor tamed_integrator(double wi, double wf) {
        return {Kind::TamedIntegrator, wi, wf};
    }
    static LinearFactor lead(double wd, double wt) { return {Kind::Lead, wd, wt}; }
    static LinearFactor lowpass(double wlpf) { return {Kind::Lowpass, wlpf, 0.0}; }
    static LinearFactor lead_zero(double wr, double wf) { return {Kind::LeadZero, wr, wf}; }
    static LinearFactor gain(double k) { return {Kind::Gain, k, 0.0}; }

    StateSpace to_state_space() const;
};

using LinearPartSpec = std::vector<LinearFactor>;

StateSpace realize(const LinearPartSpec& spec);

/// Gain correction making the element's first-harmonic gain match the
/// corresponding non-reset filter. Closed form for the integrator kinds,
/// bisection against the nominal filter gain at probe = 100*omega_r for
/// the first/second-order kinds (tolerance 1e-6).
double compute_alpha(ElementKind kind, double gamma, double omega_r = 1.0, double beta_r = 1.0,
                     double kappa = 1.0);

/// Generalized Clegg integrator 1/(alpha s) with state reset to gamma*x.
ResetController make_gci(double gamma, std::optional<double> alpha = std::nullopt);

/// Generalized first-order reset element 1/(s/(alpha omega_r) + 1).
ResetController make_gfore(double omega_r, double gamma, std::optional<double> alpha = std::nullopt);

/// Generalized second-order reset element; both states reset (A_rho_r = gamma I).
ResetController make_gsore(double omega_r, double beta_r, double gamma, double kappa = 1.0,
                           std::optional<double> alpha = std::nullopt);

/// Constant-gain lead-phase element: first-order reset lowpass plus linear
/// lead, 2 states, only the lowpass state resets (A_rho_r = diag(gamma, 1)).
ResetController make_cglp(double omega_r, double omega_f, double gamma,
                          std::optional<double> alpha = std::nullopt);

/// Resetting PI factor (s + omega_i)/(alpha s); biproper, so D_R = 1/alpha.
ResetController make_pci_reset(double omega_i, double gamma,
                               std::optional<double> alpha = std::nullopt);

/// Series composition with the reset part first; resetting states stay leading.
ResetController compose(const ResetController& reset_part, const LinearPartSpec& linear_part);
ResetController compose(const ResetController& reset_part, const StateSpace& linear_part);

/// Scale the controller output by k (applies to C_R and D_R).
ResetController with_gain(const ResetController& ctrl, double k);

/// K = 1/|H_1(omega_c) P(omega_c)| so the open-loop first harmonic crosses
/// unity gain at omega_c.
double tune_gain_for_crossover(const ResetController& ctrl, const Plant& plant, double omega_c);

}  // namespace resetfreq
