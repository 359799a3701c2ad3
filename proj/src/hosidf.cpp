#include "resetfreq/hosidf.hpp"

namespace resetfreq {

namespace {

Mat checked_inverse(const Mat& m, const char* name, double omega) {
    Eigen::FullPivLU<Mat> lu(m);
    if (!lu.isInvertible()) {
        throw EvaluationError(std::string("harmonic kernel: ") + name +
                              " singular at omega = " + std::to_string(omega) + " rad/s");
    }
    return lu.inverse();
}

CMat resolvent_solve(const Mat& a, double omega_eff, const CMat& rhs, double omega_report) {
    const auto n = a.rows();
    CMat m = CMat::Identity(n, n) * Complex(0.0, omega_eff) - a.cast<Complex>();
    Eigen::FullPivLU<CMat> lu(m);
    if (!lu.isInvertible()) {
        throw EvaluationError("harmonic evaluation singular at omega = " +
                              std::to_string(omega_report) + " rad/s");
    }
    return lu.solve(rhs);
}

}  // namespace

HarmonicKernel kernel(const ResetController& ctrl, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("kernel: omega must be positive");
    const Mat& a = ctrl.base.A;
    const auto n = a.rows();
    const Mat i = Mat::Identity(n, n);
    const Mat arho = ctrl.full_reset_matrix();

    HarmonicKernel k;
    k.lambda = omega * omega * i + a * a;
    const Mat ea = matrix_exp((kPi / omega) * a);
    k.delta = i + ea;
    k.delta_r = i + arho * ea;
    const Mat lambda_inv = checked_inverse(k.lambda, "Lambda", omega);
    const Mat delta_r_inv = checked_inverse(k.delta_r, "Delta_r", omega);
    k.gamma_r = delta_r_inv * arho * k.delta * lambda_inv;
    k.theta_d = (-2.0 * omega * omega / kPi) * k.delta * (k.gamma_r - lambda_inv);
    return k;
}

Complex describing_function(const ResetController& ctrl, double omega) {
    return harmonics(ctrl, omega, 1)[0];
}

Complex hosidf(const ResetController& ctrl, double omega, int n) {
    if (n < 1) throw std::invalid_argument("hosidf: harmonic index must be >= 1");
    if (n % 2 == 0) return {0.0, 0.0};
    return harmonics(ctrl, omega, n)[n - 1];
}

std::vector<Complex> harmonics(const ResetController& ctrl, double omega, int n_max) {
    if (n_max < 1) throw std::invalid_argument("harmonics: n_max must be >= 1");
    const HarmonicKernel k = kernel(ctrl, omega);
    const auto ns = ctrl.states();
    const CMat cb = ctrl.base.B.cast<Complex>();
    const CMat cc = ctrl.base.C.cast<Complex>();
    const CMat jtheta = Complex(0.0, 1.0) * k.theta_d.cast<Complex>();

    std::vector<Complex> out(static_cast<size_t>(n_max), Complex(0.0, 0.0));
    // n = 1 carries the base-linear path and the feedthrough; higher odd
    // harmonics see only the reset-induced term.
    {
        const CMat rhs = (CMat::Identity(ns, ns) + jtheta) * cb;
        out[0] = (cc * resolvent_solve(ctrl.base.A, omega, rhs, omega))(0, 0) +
                 Complex(ctrl.base.D(0, 0), 0.0);
    }
    const CMat rhs_h = jtheta * cb;
    for (int n = 3; n <= n_max; n += 2) {
        out[static_cast<size_t>(n) - 1] =
            (cc * resolvent_solve(ctrl.base.A, n * omega, rhs_h, omega))(0, 0);
    }
    return out;
}

Complex open_loop_hosidf(const ResetController& ctrl, const Plant& plant, double omega, int n,
                         FrfMode mode, FrfWarnings* warnings) {
    if (n % 2 == 0) return {0.0, 0.0};
    return hosidf(ctrl, omega, n) * plant.eval(n * omega, mode, warnings);
}

HarmonicResponse sweep(const ResetController& ctrl, const Plant* plant,
                       const std::vector<double>& omega_grid, int n_max, FrfMode mode,
                       FrfWarnings* warnings) {
    if (n_max < 1) throw std::invalid_argument("sweep: n_max must be >= 1");
    for (size_t i = 0; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] > 0.0)) throw std::invalid_argument("sweep: grid must be positive");
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
            throw std::invalid_argument("sweep: grid must be ascending");
    }
    HarmonicResponse r;
    r.omega_grid = omega_grid;
    r.n_max = n_max;
    r.open_loop = plant != nullptr;
    const Eigen::Index cols = (n_max + 1) / 2;
    r.values.resize(static_cast<Eigen::Index>(omega_grid.size()), cols);
    for (size_t i = 0; i < omega_grid.size(); ++i) {
        const double w = omega_grid[i];
        std::vector<Complex> h;
        try {
            h = harmonics(ctrl, w, n_max);
        } catch (const EvaluationError& e) {
            throw EvaluationError("sweep failed at omega = " + std::to_string(w) +
                                  " rad/s: " + e.what());
        }
        for (int n = 1; n <= n_max; n += 2) {
            Complex v = h[static_cast<size_t>(n) - 1];
            if (plant) v *= plant->eval(n * w, mode, warnings);
            r.values(static_cast<Eigen::Index>(i), (n - 1) / 2) = v;
        }
    }
    return r;
}

}  // namespace resetfreq
