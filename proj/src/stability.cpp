#include "resetfreq/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace resetfreq {

namespace {

double min_hermitian_eig(const CMat& h) {
    const CMat herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double min_symmetric_eig(const Mat& m) {
    const Mat sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_positive_definite(const Mat& p) { return min_symmetric_eig(p) > 0.0; }

std::vector<double> logspace(double lo_exp, double hi_exp, int count) {
    std::vector<double> v(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        v[static_cast<size_t>(i)] =
            std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / double(count - 1));
    return v;
}

// Candidate-independent pieces of H_beta(jw): the top n_r x n_r block of the
// resolvent injection and the plant-output row through it.
struct SweepCache {
    std::vector<CMat> g_top;  // P_r multiplies these
    std::vector<CMat> g_cp;   // 1 x n_r, beta multiplies these
    CMat g_top0, g_cp0;       // omega -> 0 limit (-A^-1 V blocks)
    Mat m_inf_top, m_inf_cp;  // omega -> inf: W A V decomposed the same way
};

SweepCache build_cache(const Mat& a, const RowVec& c_p, Eigen::Index n_r,
                       const std::vector<double>& sweep) {
    const auto n = a.rows();
    const auto np = c_p.cols();
    Mat v = Mat::Zero(n, n_r);
    v.topLeftCorner(n_r, n_r).setIdentity();

    SweepCache cache;
    cache.g_top.reserve(sweep.size());
    cache.g_cp.reserve(sweep.size());
    for (double w : sweep) {
        const CMat m = CMat::Identity(n, n) * Complex(0.0, w) - a.cast<Complex>();
        const CMat g = m.partialPivLu().solve(v.cast<Complex>());
        cache.g_top.push_back(g.topRows(n_r));
        cache.g_cp.push_back(c_p.cast<Complex>() * g.bottomRows(np));
    }
    const Mat g0 = -a.partialPivLu().solve(v);
    cache.g_top0 = g0.topRows(n_r).cast<Complex>();
    cache.g_cp0 = (c_p * g0.bottomRows(np)).cast<Complex>();
    const Mat av = a * v;
    cache.m_inf_top = av.topRows(n_r);
    cache.m_inf_cp = c_p * av.bottomRows(np);
    return cache;
}

// min Hermitian eigenvalue of H_beta over sweep and limits for one candidate
double candidate_margin(const SweepCache& cache, const Mat& p_r, const Vec& beta,
                        double* omega_at_min, const std::vector<double>& sweep) {
    const CMat pc = p_r.cast<Complex>();
    const CVec bc = beta.cast<Complex>();
    double worst = std::numeric_limits<double>::infinity();
    double w_at = 0.0;
    for (size_t i = 0; i < cache.g_top.size(); ++i) {
        const CMat h = pc * cache.g_top[i] + bc * cache.g_cp[i];
        const double m = min_hermitian_eig(h);
        if (m < worst) {
            worst = m;
            w_at = sweep[i];
        }
    }
    // omega -> 0 limit
    {
        const CMat h0 = pc * cache.g_top0 + bc * cache.g_cp0;
        const double m = min_hermitian_eig(h0);
        if (m < worst) {
            worst = m;
            w_at = 0.0;
        }
    }
    // omega -> infinity: Re H ~ Hermitian(-W A V)/w^2, sign decided exactly
    {
        const Mat minf = -(p_r * cache.m_inf_top + beta * cache.m_inf_cp);
        if (min_symmetric_eig(minf) <= 0.0) {
            worst = std::min(worst, 0.0);
            w_at = std::numeric_limits<double>::infinity();
        }
    }
    if (omega_at_min) *omega_at_min = w_at;
    return worst;
}

}  // namespace

CMat HBeta::eval(Complex s) const {
    const auto n = A.rows();
    const CMat m = CMat::Identity(n, n) * s - A.cast<Complex>();
    Eigen::FullPivLU<CMat> lu(m);
    if (!lu.isInvertible()) throw EvaluationError("H_beta evaluated at a pole");
    return W.cast<Complex>() * lu.solve(V.cast<Complex>());
}

CVec HBeta::poles() const {
    Eigen::EigenSolver<Mat> es(A, false);
    return es.eigenvalues();
}

HBeta h_beta(const Mat& a_closed, const RowVec& c_p, Eigen::Index n_r, const Mat& p_r,
             const Vec& beta) {
    const auto n = a_closed.rows();
    const auto np = c_p.cols();
    const auto n_nr = n - n_r - np;
    if (n_nr < 0) throw std::invalid_argument("h_beta: dimensions inconsistent");
    if (p_r.rows() != n_r || p_r.cols() != n_r || beta.size() != n_r)
        throw std::invalid_argument("h_beta: P_r must be n_r x n_r and beta length n_r");
    HBeta tf;
    tf.A = a_closed;
    tf.W = Mat::Zero(n_r, n);
    tf.W.leftCols(n_r) = p_r;
    tf.W.rightCols(np) = beta * c_p;
    tf.V = Mat::Zero(n, n_r);
    tf.V.topLeftCorner(n_r, n_r).setIdentity();
    return tf;
}

std::vector<double> default_spr_grid() { return logspace(-3.0, 6.0, 2000); }

SprResult check_spr(const HBeta& tf, const std::vector<double>& sweep) {
    SprResult r;
    const CVec poles = tf.poles();
    if (poles.size() > 0 && poles.real().maxCoeff() >= -1e-10) {
        r.ok = false;
        r.margin = -std::numeric_limits<double>::infinity();
        return r;
    }
    double worst = std::numeric_limits<double>::infinity();
    double w_at = 0.0;
    for (double w : sweep) {
        const double m = min_hermitian_eig(tf.eval(Complex(0.0, w)));
        if (m < worst) {
            worst = m;
            w_at = w;
        }
    }
    {  // limits
        const Mat g0 = -tf.A.partialPivLu().solve(tf.V);
        const double m0 = min_symmetric_eig(tf.W * g0);
        if (m0 < worst) {
            worst = m0;
            w_at = 0.0;
        }
        const double minf = min_symmetric_eig(-(tf.W * (tf.A * tf.V)));
        if (minf <= 0.0 && worst > 0.0) {
            worst = std::min(worst, 0.0);
            w_at = std::numeric_limits<double>::infinity();
        }
    }
    r.margin = worst;
    r.omega_at_min = w_at;
    r.ok = worst > 0.0;
    return r;
}

ResetMatrixResult check_reset_matrix(const Mat& a_rho_r, const Mat& p_r) {
    if ((p_r - p_r.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("check_reset_matrix: P_r must be symmetric");
    const Mat q = a_rho_r.transpose() * p_r * a_rho_r - p_r;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q + q.transpose()), Eigen::EigenvaluesOnly);
    ResetMatrixResult r;
    r.margin = es.eigenvalues().maxCoeff();
    r.ok = r.margin <= 1e-12;
    return r;
}

const char* to_string(StabilityCertificate::Verdict v) {
    switch (v) {
        case StabilityCertificate::Verdict::Feasible: return "Feasible";
        case StabilityCertificate::Verdict::Unknown: return "Unknown";
        case StabilityCertificate::Verdict::PrereqFailed: return "PrereqFailed";
    }
    return "?";
}

StabilityCertificate certify(const ResetController& ctrl, const Plant& plant) {
    StabilityCertificate cert;
    const StateSpace p = plant.to_state_space();
    const HybridSystem sys = assemble(ctrl, plant);
    const auto n_r = ctrl.n_r;
    const RowVec c_p = p.C.row(0);

    std::ostringstream diag;
    const bool hurwitz = is_hurwitz(sys.A);
    diag << "base-linear closed loop Hurwitz: " << (hurwitz ? "yes" : "no");
    Eigen::EigenSolver<Mat> es(ctrl.A_rho_r, false);
    const double rho = n_r > 0 ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    diag << "; reset matrix spectral radius: " << rho;
    if (!hurwitz || rho > 1.0 + 1e-12) {
        cert.verdict = StabilityCertificate::Verdict::PrereqFailed;
        cert.diagnostics = diag.str();
        return cert;
    }
    if (n_r == 0) {  // fully linear controller
        cert.verdict = StabilityCertificate::Verdict::Feasible;
        cert.diagnostics = diag.str() + "; no resetting states, Hurwitz flow suffices";
        return cert;
    }

    const std::vector<double> sweep = default_spr_grid();
    const SweepCache cache = build_cache(sys.A, c_p, n_r, sweep);

    auto try_candidate = [&](const Mat& p_r, const Vec& beta) -> bool {
        if (!is_positive_definite(p_r)) return false;
        const auto rm = check_reset_matrix(ctrl.A_rho_r, p_r);
        if (!rm.ok) return false;
        double w_at = 0.0;
        const double margin = candidate_margin(cache, p_r, beta, &w_at, sweep);
        if (margin <= 0.0) return false;
        cert.verdict = StabilityCertificate::Verdict::Feasible;
        cert.P_r = p_r;
        cert.beta = beta;
        cert.spr_margin = margin;
        cert.reset_margin = rm.margin;
        cert.min_re_hbeta = margin;
        diag << "; SPR margin " << margin << " (min over sweep at omega " << w_at
             << " rad/s); quadratic Lyapunov certificate found, BIBO stability follows";
        cert.diagnostics = diag.str();
        return true;
    };

    std::vector<double> beta_mags{0.0};
    for (double b : logspace(-6.0, 6.0, 200)) beta_mags.push_back(b);

    if (n_r == 1) {
        const Mat p_r = Mat::Identity(1, 1);
        for (double b : beta_mags) {
            for (double sign : {1.0, -1.0}) {
                if (b == 0.0 && sign < 0.0) continue;
                Vec beta(1);
                beta << sign * b;
                if (try_candidate(p_r, beta)) return cert;
            }
        }
    } else if (n_r == 2) {
        const std::vector<double> diag_grid = logspace(-2.0, 2.0, 5);
        const std::vector<double> rho_grid{0.0, 0.45, -0.45, 0.9, -0.9};
        std::vector<double> bg{0.0};
        for (double b : logspace(-4.0, 4.0, 9)) {
            bg.push_back(b);
            bg.push_back(-b);
        }
        for (double p11 : diag_grid)
            for (double p22 : diag_grid)
                for (double rho_c : rho_grid) {
                    Mat p_r(2, 2);
                    const double p12 = rho_c * std::sqrt(p11 * p22);
                    p_r << p11, p12, p12, p22;
                    for (double b1 : bg)
                        for (double b2 : bg) {
                            Vec beta(2);
                            beta << b1, b2;
                            if (try_candidate(p_r, beta)) return cert;
                        }
                }
    } else {
        diag << "; certificate search implemented for n_r <= 2";
    }

    cert.verdict = StabilityCertificate::Verdict::Unknown;
    diag << "; search exhausted without a certificate (not an instability verdict)";
    cert.diagnostics = diag.str();
    return cert;
}

}  // namespace resetfreq
