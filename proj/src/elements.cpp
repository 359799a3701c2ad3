#include "resetfreq/elements.hpp"

#include <cmath>

#include "resetfreq/hosidf.hpp"

namespace resetfreq {

namespace {

// biproper first-order section (n1 s + n0)/(d1 s + d0), d1 != 0
StateSpace first_order(double n1, double n0, double d1, double d0) {
    const double a = -d0 / d1;
    const double d = n1 / d1;
    const double c = (n0 - d * d0) / d1;
    Mat A = Mat::Constant(1, 1, a);
    Mat B = Mat::Constant(1, 1, 1.0);
    Mat C = Mat::Constant(1, 1, c);
    Mat D = Mat::Constant(1, 1, d);
    return {A, B, C, D};
}

double clegg_theta(double gamma) { return (4.0 / kPi) * (1.0 - gamma) / (1.0 + gamma); }

void check_gamma(double gamma) {
    if (!(gamma >= -1.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must lie in [-1, 1]");
}

double spectral_radius(const Mat& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::EigenSolver<Mat> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

ResetController::ResetController(StateSpace b, Eigen::Index nr, Mat arho)
    : base(std::move(b)), n_r(nr), A_rho_r(std::move(arho)) {
    if (n_r < 0 || n_r > base.states())
        throw std::invalid_argument("n_r must not exceed the state dimension");
    if (A_rho_r.rows() != n_r || A_rho_r.cols() != n_r)
        throw std::invalid_argument("A_rho_r must be n_r x n_r");
    if (spectral_radius(A_rho_r) > 1.0 + 1e-12)
        throw std::invalid_argument("reset matrix must have spectral radius <= 1");
}

Mat ResetController::full_reset_matrix() const {
    Mat r = Mat::Identity(states(), states());
    r.topLeftCorner(n_r, n_r) = A_rho_r;
    return r;
}

StateSpace LinearFactor::to_state_space() const {
    switch (kind) {
        case Kind::Integrator:  // (s + wi)/s
            if (!(p1 > 0.0)) throw std::invalid_argument("integrator corner must be positive");
            return {Mat::Zero(1, 1), Mat::Constant(1, 1, 1.0), Mat::Constant(1, 1, p1),
                    Mat::Constant(1, 1, 1.0)};
        case Kind::TamedIntegrator:  // (s + wi)/(s/wf + 1)
            if (!(p1 > 0.0 && p2 > 0.0))
                throw std::invalid_argument("tamed integrator corners must be positive");
            return first_order(1.0, p1, 1.0 / p2, 1.0);
        case Kind::Lead:  // (s/wd + 1)/(s/wt + 1)
        case Kind::LeadZero:
            if (!(p1 > 0.0 && p2 > 0.0)) throw std::invalid_argument("lead corners must be positive");
            return first_order(1.0 / p1, 1.0, 1.0 / p2, 1.0);
        case Kind::Lowpass:  // 1/(s/wlpf + 1)
            if (!(p1 > 0.0)) throw std::invalid_argument("lowpass corner must be positive");
            return first_order(0.0, 1.0, 1.0 / p1, 1.0);
        case Kind::Gain:
            return StateSpace::gain(p1);
    }
    throw std::logic_error("unreachable factor kind");
}

StateSpace realize(const LinearPartSpec& spec) {
    StateSpace acc = StateSpace::gain(1.0);
    for (const auto& f : spec) acc = series(acc, f.to_state_space());
    return acc;
}

double compute_alpha(ElementKind kind, double gamma, double omega_r, double beta_r, double kappa) {
    check_gamma(gamma);
    if (kind == ElementKind::Gci || kind == ElementKind::PciReset) {
        const double th = clegg_theta(gamma);
        return std::sqrt(1.0 + th * th);
    }
    if (!(omega_r > 0.0)) throw std::invalid_argument("compute_alpha: omega_r must be positive");
    const double probe = 100.0 * omega_r;
    const bool second = kind == ElementKind::Gsore;
    const double q = probe / omega_r;
    const Complex jq(0.0, q);
    const double target =
        second ? std::abs(1.0 / (jq * jq + 2.0 * beta_r * jq + 1.0)) : std::abs(1.0 / (jq + 1.0));

    auto gain_at_probe = [&](double alpha) {
        ResetController el = second ? make_gsore(omega_r, beta_r, gamma, kappa, alpha)
                                    : make_gfore(omega_r, gamma, alpha);
        return std::abs(describing_function(el, probe));
    };
    double lo = 0.02, hi = 8.0;
    if ((gain_at_probe(lo) - target) * (gain_at_probe(hi) - target) > 0.0)
        throw EvaluationError("compute_alpha: bisection bracket failed");
    for (int i = 0; i < 200 && hi - lo > 1e-7; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gain_at_probe(mid) > target) hi = mid;  // gain grows with the corner
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

ResetController make_gci(double gamma, std::optional<double> alpha) {
    check_gamma(gamma);
    const double a = alpha ? *alpha : compute_alpha(ElementKind::Gci, gamma);
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    StateSpace ss(Mat::Zero(1, 1), Mat::Constant(1, 1, 1.0 / a), Mat::Constant(1, 1, 1.0),
                  Mat::Zero(1, 1));
    return {std::move(ss), 1, Mat::Constant(1, 1, gamma)};
}

ResetController make_gfore(double omega_r, double gamma, std::optional<double> alpha) {
    check_gamma(gamma);
    if (!(omega_r > 0.0)) throw std::invalid_argument("omega_r must be positive");
    const double a = alpha ? *alpha : compute_alpha(ElementKind::Gfore, gamma, omega_r);
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    const double corner = a * omega_r;
    StateSpace ss(Mat::Constant(1, 1, -corner), Mat::Constant(1, 1, corner),
                  Mat::Constant(1, 1, 1.0), Mat::Zero(1, 1));
    return {std::move(ss), 1, Mat::Constant(1, 1, gamma)};
}

ResetController make_gsore(double omega_r, double beta_r, double gamma, double kappa,
                           std::optional<double> alpha) {
    check_gamma(gamma);
    if (!(omega_r > 0.0 && beta_r > 0.0 && kappa > 0.0))
        throw std::invalid_argument("omega_r, beta_r and kappa must be positive");
    const double a = alpha ? *alpha : compute_alpha(ElementKind::Gsore, gamma, omega_r, beta_r, kappa);
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    const double aw = a * omega_r;
    Mat A(2, 2);
    A << 0.0, 1.0, -aw * aw, -2.0 * kappa * a * beta_r * omega_r;
    Mat B(2, 1);
    B << 0.0, aw * aw;
    Mat C(1, 2);
    C << 1.0, 0.0;
    return {StateSpace(A, B, C, Mat::Zero(1, 1)), 2, gamma * Mat::Identity(2, 2)};
}

ResetController make_cglp(double omega_r, double omega_f, double gamma,
                          std::optional<double> alpha) {
    check_gamma(gamma);
    if (!(omega_r > 0.0)) throw std::invalid_argument("omega_r must be positive");
    if (!(omega_f > omega_r)) throw std::invalid_argument("omega_f must exceed omega_r");
    const double a = alpha ? *alpha : compute_alpha(ElementKind::Gfore, gamma, omega_r);
    const double aw = a * omega_r;
    Mat A(2, 2);
    A << -aw, 0.0, omega_f, -omega_f;
    Mat B(2, 1);
    B << aw, 0.0;
    Mat C(1, 2);
    C << omega_f / omega_r, 1.0 - omega_f / omega_r;
    Mat arho(2, 2);
    arho << gamma, 0.0, 0.0, 1.0;  // only the lowpass state resets
    return {StateSpace(A, B, C, Mat::Zero(1, 1)), 2, arho};
}

ResetController make_pci_reset(double omega_i, double gamma, std::optional<double> alpha) {
    check_gamma(gamma);
    if (!(omega_i > 0.0)) throw std::invalid_argument("omega_i must be positive");
    const double a = alpha ? *alpha : compute_alpha(ElementKind::PciReset, gamma);
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    StateSpace ss(Mat::Zero(1, 1), Mat::Constant(1, 1, 1.0 / a), Mat::Constant(1, 1, omega_i),
                  Mat::Constant(1, 1, 1.0 / a));
    return {std::move(ss), 1, Mat::Constant(1, 1, gamma)};
}

ResetController compose(const ResetController& reset_part, const StateSpace& linear_part) {
    if (reset_part.base.inputs() != 1 || reset_part.base.outputs() != 1)
        throw std::invalid_argument("compose: reset part must be SISO");
    return {series(reset_part.base, linear_part), reset_part.n_r, reset_part.A_rho_r};
}

ResetController compose(const ResetController& reset_part, const LinearPartSpec& linear_part) {
    return compose(reset_part, realize(linear_part));
}

ResetController with_gain(const ResetController& ctrl, double k) {
    StateSpace scaled = ctrl.base;
    scaled.C *= k;
    scaled.D *= k;
    return {std::move(scaled), ctrl.n_r, ctrl.A_rho_r};
}

double tune_gain_for_crossover(const ResetController& ctrl, const Plant& plant, double omega_c) {
    const Complex l1 = describing_function(ctrl, omega_c) * plant.eval(omega_c);
    const double mag = std::abs(l1);
    if (!(mag > 0.0))
        throw EvaluationError("tune_gain_for_crossover: zero open-loop gain at omega_c");
    return 1.0 / mag;
}

}  // namespace resetfreq
