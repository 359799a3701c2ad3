#pragma once

#include "resetfreq/hybrid_sim.hpp"

namespace resetfreq {

/// Structured transfer [P_r 0 beta*C_p](sI - A)^-1 [I_{n_r}; 0], kept as an
/// exact evaluable object (its poles are the eigenvalues of A).
struct HBeta {
    Mat A;  // closed-loop flow matrix
    Mat W;  // n_r x n selector row block
    Mat V;  // n x n_r injection block

    CMat eval(Complex s) const;
    CVec poles() const;
};

HBeta h_beta(const Mat& a_closed, const RowVec& c_p, Eigen::Index n_r, const Mat& p_r,
             const Vec& beta);

struct SprResult {
    bool ok = false;
    double margin = 0.0;        // min eigenvalue of the Hermitian part over the sweep
    double omega_at_min = 0.0;
};

/// Strict positive realness surrogate: poles strictly in the open left half
/// plane, Hermitian part positive definite on a log sweep, plus the exact
/// limits at omega -> 0 and omega -> infinity.
SprResult check_spr(const HBeta& tf, const std::vector<double>& sweep);
std::vector<double> default_spr_grid();

struct ResetMatrixResult {
    bool ok = false;
    double margin = 0.0;  // max eigenvalue of A_rho_r' P_r A_rho_r - P_r
};

ResetMatrixResult check_reset_matrix(const Mat& a_rho_r, const Mat& p_r);

struct StabilityCertificate {
    enum class Verdict { Feasible, Unknown, PrereqFailed };
    Verdict verdict = Verdict::Unknown;
    Mat P_r;
    Vec beta;
    double spr_margin = 0.0;
    double reset_margin = 0.0;
    double min_re_hbeta = 0.0;
    std::string diagnostics;  // prerequisite outcomes; BIBO note on Feasible
};

const char* to_string(StabilityCertificate::Verdict v);

/// Bounded certificate search (grid, not an LMI solver): exhaustion yields
/// Unknown, which is not an instability verdict.
StabilityCertificate certify(const ResetController& ctrl, const Plant& plant);

}  // namespace resetfreq
