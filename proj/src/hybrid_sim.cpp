#include "resetfreq/hybrid_sim.hpp"

#include <cmath>

namespace resetfreq {

namespace {

constexpr double kDivergenceNorm = 1e12;
constexpr double kCrossingTol = 1e-12;

// RK4 integrator for dx/dt = A x + b w(t), with preallocated scratch.
class Stepper {
public:
    Stepper(const Mat& a, const Vec& b, const SineInput& in)
        : a_(a), b_(b), in_(in), k1_(a.rows()), k2_(a.rows()), k3_(a.rows()), k4_(a.rows()),
          xt_(a.rows()) {}

    void step(double t, const Vec& x, double h, Vec& out) {
        rhs(t, x, k1_);
        xt_ = x + (0.5 * h) * k1_;
        rhs(t + 0.5 * h, xt_, k2_);
        xt_ = x + (0.5 * h) * k2_;
        rhs(t + 0.5 * h, xt_, k3_);
        xt_ = x + h * k3_;
        rhs(t + h, xt_, k4_);
        out = x + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    void rhs(double t, const Vec& x, Vec& out) {
        out.noalias() = a_ * x;
        out.noalias() += b_ * in_.value(t);
    }

    const Mat& a_;
    const Vec& b_;
    const SineInput& in_;
    Vec k1_, k2_, k3_, k4_, xt_;
};

struct SignalProbe {
    const HybridSystem& sys;
    const SineInput& input;
    double e_gain;

    double error(double t, const Vec& x) const {
        return e_gain * input.value(t) - sys.y_row.dot(x);
    }
    double output(const Vec& x) const { return sys.y_row.dot(x); }
    double control(double t, const Vec& x) const {
        return sys.u_state_row.dot(x) + sys.u_feed * error(t, x);
    }
};

// Core integration loop shared by simulate() and run_to_steady_state().
// on_sample(t, e, y, u) is called after every completed step.
template <typename SampleFn>
bool integrate(const HybridSystem& sys, const SineInput& input, double dt, long long steps,
               Vec& x, double t0, double& last_reset, std::vector<double>* reset_times,
               double& e_scale, double& escape_time, SampleFn on_sample) {
    Stepper stepper(sys.A, sys.input_vector(input.channel), input);
    const SignalProbe probe{sys, input, HybridSystem::error_input_gain(input.channel)};
    Vec x_next(x.size()), x_mid(x.size()), x_cross(x.size());

    double t = t0;
    for (long long k = 0; k < steps; ++k) {
        stepper.step(t, x, dt, x_next);
        const double e0 = probe.error(t, x);
        const double e1 = probe.error(t + dt, x_next);
        e_scale = std::max({e_scale, std::abs(e0), std::abs(e1)});

        const bool strict_crossing = e0 != 0.0 && std::signbit(e0) != std::signbit(e1) && e1 != 0.0;
        if (strict_crossing && t - last_reset >= 2.0 * dt) {
            // bisection on the interpolated error over the partial step
            double lo = 0.0, hi = dt, ec = e1;
            double theta = dt;
            for (int it = 0; it < 80; ++it) {
                theta = 0.5 * (lo + hi);
                stepper.step(t, x, theta, x_mid);
                ec = probe.error(t + theta, x_mid);
                if (std::abs(ec) <= kCrossingTol * e_scale) break;
                if (std::signbit(ec) == std::signbit(e0)) lo = theta;
                else hi = theta;
            }
            stepper.step(t, x, theta, x_cross);
            x_cross = sys.reset_map * x_cross;
            last_reset = t + theta;
            if (reset_times) reset_times->push_back(last_reset);
            if (dt - theta > 0.0) stepper.step(t + theta, x_cross, dt - theta, x_next);
            else x_next = x_cross;
        }

        x.swap(x_next);
        t = t0 + static_cast<double>(k + 1) * dt;
        if (x.cwiseAbs().maxCoeff() > kDivergenceNorm) {
            escape_time = t;
            return false;
        }
        on_sample(t, probe.error(t, x), probe.output(x), probe.control(t, x));
    }
    return true;
}

}  // namespace

const Vec& HybridSystem::input_vector(Channel c) const {
    switch (c) {
        case Channel::Reference: return b_r;
        case Channel::Disturbance: return b_d;
        case Channel::Noise: return b_n;
    }
    throw std::logic_error("unreachable channel");
}

HybridSystem assemble(const ResetController& ctrl, const Plant& plant) {
    if (ctrl.base.inputs() != 1 || ctrl.base.outputs() != 1)
        throw std::invalid_argument("assemble: controller must be SISO");
    const StateSpace p = plant.to_state_space();
    if (p.inputs() != 1 || p.outputs() != 1)
        throw std::invalid_argument("assemble: plant must be SISO");
    if (p.D(0, 0) != 0.0)
        throw std::invalid_argument("assemble: plant must be strictly proper");

    const auto nr = ctrl.states();
    const auto np = p.states();
    const auto n = nr + np;
    const double d_r = ctrl.base.D(0, 0);

    HybridSystem sys;
    sys.A = Mat::Zero(n, n);
    sys.A.topLeftCorner(nr, nr) = ctrl.base.A;
    sys.A.topRightCorner(nr, np) = -ctrl.base.B * p.C;
    sys.A.bottomLeftCorner(np, nr) = p.B * ctrl.base.C;
    sys.A.bottomRightCorner(np, np) = p.A - p.B * (d_r * p.C);

    sys.b_r = Vec::Zero(n);
    sys.b_r.head(nr) = ctrl.base.B.col(0);
    sys.b_r.tail(np) = p.B.col(0) * d_r;
    sys.b_d = Vec::Zero(n);
    sys.b_d.tail(np) = p.B.col(0);
    sys.b_n = -sys.b_r;

    sys.y_row = RowVec::Zero(n);
    sys.y_row.tail(np) = p.C.row(0);
    sys.u_state_row = RowVec::Zero(n);
    sys.u_state_row.head(nr) = ctrl.base.C.row(0);
    sys.u_feed = d_r;

    sys.reset_map = Mat::Identity(n, n);
    sys.reset_map.topLeftCorner(ctrl.n_r, ctrl.n_r) = ctrl.A_rho_r;
    sys.n_r = ctrl.n_r;
    sys.open_loop = false;
    return sys;
}

HybridSystem assemble_open_loop(const ResetController& ctrl) {
    if (ctrl.base.inputs() != 1 || ctrl.base.outputs() != 1)
        throw std::invalid_argument("assemble_open_loop: controller must be SISO");
    const auto n = ctrl.states();
    HybridSystem sys;
    sys.A = ctrl.base.A;
    sys.b_r = ctrl.base.B.col(0);
    sys.b_d = Vec::Zero(n);
    sys.b_n = -sys.b_r;
    sys.y_row = RowVec::Zero(n);
    sys.u_state_row = ctrl.base.C.row(0);
    sys.u_feed = ctrl.base.D(0, 0);
    sys.reset_map = ctrl.full_reset_matrix();
    sys.n_r = ctrl.n_r;
    sys.open_loop = true;
    return sys;
}

HybridTrajectory simulate(const HybridSystem& sys, const SineInput& input, double dt,
                          double duration) {
    if (!(input.omega > 0.0)) throw std::invalid_argument("simulate: omega must be positive");
    const double period = kTwoPi / input.omega;
    if (!(dt > 0.0) || dt > period / 1000.0)
        throw std::invalid_argument("simulate: dt must satisfy dt <= period/1000");
    if (duration < 10.0 * period)
        throw std::invalid_argument("simulate: duration must cover at least 10 periods");

    const auto steps = static_cast<long long>(std::llround(duration / dt));
    HybridTrajectory traj;
    traj.dt = dt;
    traj.t.reserve(static_cast<size_t>(steps) + 1);
    traj.e.reserve(static_cast<size_t>(steps) + 1);
    traj.y.reserve(static_cast<size_t>(steps) + 1);
    traj.u.reserve(static_cast<size_t>(steps) + 1);

    Vec x = Vec::Zero(sys.A.rows());
    const SignalProbe probe{sys, input, HybridSystem::error_input_gain(input.channel)};
    traj.t.push_back(0.0);
    traj.e.push_back(probe.error(0.0, x));
    traj.y.push_back(probe.output(x));
    traj.u.push_back(probe.control(0.0, x));

    double last_reset = -1e300, e_scale = 1e-300, escape = 0.0;
    const bool ok = integrate(sys, input, dt, steps, x, 0.0, last_reset, &traj.reset_times, e_scale,
                              escape, [&](double t, double e, double y, double u) {
                                  traj.t.push_back(t);
                                  traj.e.push_back(e);
                                  traj.y.push_back(y);
                                  traj.u.push_back(u);
                              });
    traj.diverged = !ok;
    traj.escape_time = escape;
    return traj;
}

namespace {

double period_residual(const std::vector<double>& prev, const std::vector<double>& cur) {
    double diff = 0.0, scale = 0.0;
    for (size_t i = 0; i < cur.size(); ++i) {
        diff = std::max(diff, std::abs(cur[i] - prev[i]));
        scale = std::max(scale, std::abs(cur[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

SteadyStateRecord steady_state(const HybridTrajectory& traj, double omega) {
    const double period = kTwoPi / omega;
    const auto n_pp = static_cast<long long>(std::llround(period / traj.dt));
    if (n_pp < 2 || std::abs(static_cast<double>(n_pp) * traj.dt - period) > traj.dt)
        throw std::invalid_argument("steady_state: period is not resolved by the sample grid");
    const auto total = static_cast<long long>(traj.t.size()) - 1;
    if (total < 2 * n_pp) throw std::invalid_argument("steady_state: need at least two periods");

    SteadyStateRecord rec;
    rec.omega = omega;
    rec.dt = traj.dt;
    rec.periods_simulated = static_cast<int>(total / n_pp);

    auto window = [&](const std::vector<double>& s, long long first) {
        return std::vector<double>(s.begin() + first, s.begin() + first + n_pp);
    };
    const long long last_start = total - n_pp + 1;
    const long long prev_start = last_start - n_pp;
    rec.t_start = traj.t[static_cast<size_t>(last_start)];
    rec.e = window(traj.e, last_start);
    rec.y = window(traj.y, last_start);
    rec.u = window(traj.u, last_start);

    double residual = 0.0;
    residual = std::max(residual, period_residual(window(traj.e, prev_start), rec.e));
    residual = std::max(residual, period_residual(window(traj.y, prev_start), rec.y));
    residual = std::max(residual, period_residual(window(traj.u, prev_start), rec.u));
    rec.residual = residual;
    rec.converged = !traj.diverged && residual < 1e-6;

    const double t_lo = traj.t.back() - period;
    for (double tr : traj.reset_times)
        if (tr > t_lo) ++rec.resets_per_period;
    return rec;
}

SteadyStateRecord run_to_steady_state(const HybridSystem& sys, const SineInput& input,
                                      const SteadyStateOptions& opts) {
    if (!(input.omega > 0.0)) throw std::invalid_argument("omega must be positive");
    const double period = kTwoPi / input.omega;
    const auto n_pp =
        static_cast<long long>(std::max(1000.0, std::ceil(period / opts.dt_target)));
    const double dt = period / static_cast<double>(n_pp);

    SteadyStateRecord rec;
    rec.omega = input.omega;
    rec.dt = dt;

    Vec x = Vec::Zero(sys.A.rows());
    std::vector<double> prev_e, prev_y, prev_u;
    std::vector<double> cur_e, cur_y, cur_u;
    cur_e.reserve(static_cast<size_t>(n_pp));
    cur_y.reserve(static_cast<size_t>(n_pp));
    cur_u.reserve(static_cast<size_t>(n_pp));

    double last_reset = -1e300, e_scale = 1e-300, escape = 0.0;
    std::vector<double> resets;
    for (int p = 0; p < opts.max_periods; ++p) {
        cur_e.clear();
        cur_y.clear();
        cur_u.clear();
        const double t0 = static_cast<double>(p) * period;
        const size_t resets_before = resets.size();
        const bool ok = integrate(sys, input, dt, n_pp, x, t0, last_reset, &resets, e_scale, escape,
                                  [&](double, double e, double y, double u) {
                                      cur_e.push_back(e);
                                      cur_y.push_back(y);
                                      cur_u.push_back(u);
                                  });
        rec.periods_simulated = p + 1;
        if (!ok) {
            rec.converged = false;
            rec.residual = std::numeric_limits<double>::infinity();
            break;
        }
        if (!prev_e.empty()) {
            double residual = period_residual(prev_e, cur_e);
            residual = std::max(residual, period_residual(prev_y, cur_y));
            residual = std::max(residual, period_residual(prev_u, cur_u));
            rec.residual = residual;
            if (p + 1 >= opts.min_periods && residual < opts.tol) {
                rec.converged = true;
                rec.resets_per_period = static_cast<int>(resets.size() - resets_before);
                rec.t_start = t0 + dt;
                rec.e = cur_e;
                rec.y = cur_y;
                rec.u = cur_u;
                return rec;
            }
        }
        prev_e = cur_e;
        prev_y = cur_y;
        prev_u = cur_u;
        rec.resets_per_period = static_cast<int>(resets.size() - resets_before);
        rec.t_start = t0 + dt;
    }
    // best effort: hand back the final period with the flag down
    rec.e = cur_e;
    rec.y = cur_y;
    rec.u = cur_u;
    return rec;
}

HarmonicMeasurement fft_harmonics(const SteadyStateRecord& record, double omega, int n_max) {
    const auto n_samples = record.e.size();
    if (n_max < 1) throw std::invalid_argument("fft_harmonics: n_max must be >= 1");
    if (n_samples < static_cast<size_t>(4 * n_max))
        throw std::invalid_argument("fft_harmonics: need at least 4*n_max samples per period");
    if (record.y.size() != n_samples || record.u.size() != n_samples)
        throw std::invalid_argument("fft_harmonics: record signals must share the sample grid");

    HarmonicMeasurement m;
    m.e.resize(static_cast<size_t>(n_max));
    m.y.resize(static_cast<size_t>(n_max));
    m.u.resize(static_cast<size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        Complex se(0, 0), sy(0, 0), su(0, 0);
        for (size_t k = 0; k < n_samples; ++k) {
            const double tk = record.t_start + static_cast<double>(k) * record.dt;
            const Complex w = std::exp(Complex(0.0, -static_cast<double>(n) * omega * tk));
            se += record.e[k] * w;
            sy += record.y[k] * w;
            su += record.u[k] * w;
        }
        const Complex scale = Complex(0.0, 2.0) / static_cast<double>(n_samples);
        m.e[static_cast<size_t>(n) - 1] = scale * se;
        m.y[static_cast<size_t>(n) - 1] = scale * sy;
        m.u[static_cast<size_t>(n) - 1] = scale * su;
    }
    return m;
}

NormReport measure_norms(const SteadyStateRecord& record, Signal signal) {
    const std::vector<double>* s = nullptr;
    switch (signal) {
        case Signal::Error: s = &record.e; break;
        case Signal::Output: s = &record.y; break;
        case Signal::Control: s = &record.u; break;
    }
    NormReport r;
    double acc = 0.0;
    for (double v : *s) {
        acc += v * v;
        r.linf = std::max(r.linf, std::abs(v));
    }
    r.l2 = s->empty() ? 0.0 : std::sqrt(acc / static_cast<double>(s->size()));
    return r;
}

}  // namespace resetfreq
