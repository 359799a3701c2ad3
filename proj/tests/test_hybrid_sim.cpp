#include <doctest.h>

#include <cmath>

#include "resetfreq/hybrid_sim.hpp"
#include "resetfreq/presets.hpp"

using namespace resetfreq;

namespace {

// exact sampled solution of the gamma = 1 loop: augment the sine drive as two
// extra states and step with the matrix exponential
struct LinearOracle {
    Mat step;            // (n+2) x (n+2) propagator over dt
    Vec state;           // [x; s; c]
    const HybridSystem& sys;
    double e_gain;

    LinearOracle(const HybridSystem& s, const SineInput& in, double dt)
        : sys(s), e_gain(HybridSystem::error_input_gain(in.channel)) {
        const auto n = s.A.rows();
        Mat aug = Mat::Zero(n + 2, n + 2);
        aug.topLeftCorner(n, n) = s.A;
        aug.block(0, n, n, 1) = s.input_vector(in.channel) * in.amplitude;
        aug(n, n + 1) = in.omega;
        aug(n + 1, n) = -in.omega;
        step = matrix_exp(dt * aug);
        state = Vec::Zero(n + 2);
        state(n) = std::sin(in.phase);
        state(n + 1) = std::cos(in.phase);
    }

    double advance_and_error(double amplitude_sin) {
        state = step * state;
        const auto n = sys.A.rows();
        return e_gain * amplitude_sin * state(n) - sys.y_row.dot(state.head(n));
    }
};

}  // namespace

TEST_CASE("assembly dimensions and structure") {
    const ResetController c04 = make_preset("c04");
    const Plant plant(benchmark_plant());
    const HybridSystem sys = assemble(c04, plant);
    CHECK(sys.A.rows() == c04.states() + 2);
    CHECK(sys.n_r == 1);

    // gamma = 1 jump map is the identity
    const HybridSystem lin = assemble(make_preset("c04", 1.0), plant);
    CHECK((lin.reset_map - Mat::Identity(lin.A.rows(), lin.A.cols())).cwiseAbs().maxCoeff() ==
          0.0);

    // flow eigenvalues satisfy the closed-loop characteristic equation
    // 1 + C_bl(s) P(s) = 0 of the base-linear design
    Eigen::EigenSolver<Mat> es(sys.A);
    const RationalTf p = benchmark_plant();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex s = es.eigenvalues()(i);
        const auto n = c04.states();
        const CMat resolvent =
            (CMat::Identity(n, n) * s - c04.base.A.cast<Complex>()).fullPivLu().solve(
                c04.base.B.cast<Complex>());
        const Complex c_bl = (c04.base.C.cast<Complex>() * resolvent)(0, 0) + c04.base.D(0, 0);
        CHECK(std::abs(1.0 + c_bl * p.eval(s)) < 1e-6);
    }

    // measured-FRF plants cannot be simulated
    std::vector<FrfTable::Row> rows{{1.0, {1.0, 0.0}}, {100.0, {0.01, 0.0}}};
    CHECK_THROWS_AS(assemble(c04, Plant(FrfTable(rows))), EvaluationError);
}

TEST_CASE("precondition checks on simulate") {
    const HybridSystem sys = assemble_open_loop(make_gci(0.0, 1.0));
    const SineInput in{Channel::Reference, kTwoPi, 1.0, 0.0};
    CHECK_THROWS_AS(simulate(sys, in, 0.01, 100.0), std::invalid_argument);   // dt too coarse
    CHECK_THROWS_AS(simulate(sys, in, 1e-4, 2.0), std::invalid_argument);     // too short
}

TEST_CASE("open-loop Clegg resets at the input zero crossings") {
    const ResetController clegg = make_gci(0.0, 1.0);
    const HybridSystem sys = assemble_open_loop(clegg);
    const double w = kTwoPi * 3.0;
    const double period = kTwoPi / w;
    const double dt = period / 2000.0;
    const HybridTrajectory traj = simulate(sys, {Channel::Reference, w, 1.0, 0.0}, dt, 12 * period);
    REQUIRE(traj.reset_times.size() >= 20);
    for (double tr : traj.reset_times) {
        const double k = tr * w / kPi;
        CHECK(std::abs(k - std::round(k)) * kPi / w < dt);
    }
    // determinism: identical run reproduces identical instants bit for bit
    const HybridTrajectory again =
        simulate(sys, {Channel::Reference, w, 1.0, 0.0}, dt, 12 * period);
    REQUIRE(again.reset_times.size() == traj.reset_times.size());
    for (size_t i = 0; i < traj.reset_times.size(); ++i)
        CHECK(again.reset_times[i] == traj.reset_times[i]);
}

TEST_CASE("gamma = 1 trajectory matches the linear propagator") {
    const ResetController lin = make_preset("c04", 1.0);
    const Plant plant(benchmark_plant());
    const HybridSystem sys = assemble(lin, plant);
    const SineInput in{Channel::Reference, hz_to_radps(75.0), 1.0, 0.0};
    const double period = kTwoPi / in.omega;
    const double dt = period / 1500.0;
    const HybridTrajectory traj = simulate(sys, in, dt, 12.0 * period);
    CHECK(traj.reset_times.empty());

    LinearOracle oracle(sys, in, dt);
    double worst = 0.0, scale = 0.0;
    for (size_t k = 1; k < traj.t.size(); ++k) {
        const double e_exact = oracle.advance_and_error(in.amplitude);
        worst = std::max(worst, std::abs(traj.e[k] - e_exact));
        scale = std::max(scale, std::abs(e_exact));
    }
    CHECK(worst / scale < 1e-8);
}

TEST_CASE("reset counts across operating regimes") {
    const Plant plant(benchmark_plant());
    const HybridSystem c04 = assemble(make_preset("c04"), plant);

    const auto at_110 = run_to_steady_state(c04, {Channel::Reference, hz_to_radps(110.0), 1.0, 0.0});
    CHECK(at_110.converged);
    CHECK(at_110.resets_per_period == 2);  // two-reset regime

    const auto at_75 = run_to_steady_state(c04, {Channel::Reference, hz_to_radps(75.0), 1.0, 0.0});
    CHECK(at_75.converged);
    CHECK(at_75.resets_per_period == 6);  // strong third harmonic adds crossings

    // resetting integrator at low frequency: limit cycling, many resets
    const HybridSystem rci = assemble(make_preset("rci_000"), plant);
    SteadyStateOptions fast;
    fast.dt_target = 5e-5;
    const auto at_5 = run_to_steady_state(rci, {Channel::Reference, hz_to_radps(5.0), 1.0, 0.0}, fast);
    CHECK(at_5.converged);
    CHECK(at_5.resets_per_period > 2);
}

TEST_CASE("steady-state extraction bookkeeping") {
    const HybridSystem sys = assemble_open_loop(make_gci(0.3, 1.0));
    const double w = kTwoPi * 2.0;
    const double period = kTwoPi / w;
    const double dt = period / 1200.0;
    const HybridTrajectory traj = simulate(sys, {Channel::Reference, w, 1.0, 0.0}, dt, 15 * period);
    const SteadyStateRecord rec = steady_state(traj, w);
    CHECK(rec.converged);
    CHECK(rec.e.size() == 1200);
    CHECK(rec.resets_per_period == 2);
    CHECK(rec.periods_simulated == 15);
    CHECK_THROWS_AS(steady_state(traj, 1.37 * w), std::invalid_argument);
}

TEST_CASE("harmonic measurement conventions") {
    // synthetic record: e = sin(wt), y = 0.5 sin(3wt + 0.4), u = 0
    const double w = kTwoPi * 4.0;
    SteadyStateRecord rec;
    rec.omega = w;
    const int n = 512;
    rec.dt = (kTwoPi / w) / n;
    rec.t_start = 3.0;  // arbitrary absolute start; phases are referenced to t
    for (int k = 0; k < n; ++k) {
        const double t = rec.t_start + k * rec.dt;
        rec.e.push_back(std::sin(w * t));
        rec.y.push_back(0.5 * std::sin(3.0 * w * t + 0.4));
        rec.u.push_back(0.0);
    }
    const HarmonicMeasurement m = fft_harmonics(rec, w, 5);
    CHECK(std::abs(m.e[0] - Complex(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(m.e[1]) < 1e-10);
    CHECK(std::abs(m.e[2]) < 1e-10);
    CHECK(std::abs(m.y[2] - std::polar(0.5, 0.4)) < 1e-10);
    CHECK_THROWS_AS(fft_harmonics(rec, w, 200), std::invalid_argument);

    const NormReport nr = measure_norms(rec, Signal::Error);
    CHECK(nr.linf == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(nr.l2 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
    const NormReport nz = measure_norms(rec, Signal::Control);
    CHECK(nz.linf == 0.0);
    CHECK(nz.l2 == 0.0);
}

TEST_CASE("open-loop Clegg measurement matches the analytic ratio") {
    const ResetController clegg = make_gci(0.0, 1.0);
    const HybridSystem sys = assemble_open_loop(clegg);
    const double w = kTwoPi * 1.5;
    SteadyStateOptions opts;
    opts.dt_target = (kTwoPi / w) / 4096.0;
    const auto rec = run_to_steady_state(sys, {Channel::Reference, w, 1.0, 0.0}, opts);
    REQUIRE(rec.converged);
    const HarmonicMeasurement m = fft_harmonics(rec, w, 4);
    CHECK(std::abs(m.u[2]) / std::abs(m.u[0]) == doctest::Approx(0.262146).epsilon(0.01));
    // odd symmetry of the steady output: negligible even content
    CHECK(std::abs(m.u[1]) < 1e-6 * std::abs(m.u[0]));
    // Parseval cross-check between the sampled rms and the harmonic table
    const HarmonicMeasurement wide = fft_harmonics(rec, w, 25);
    double sum = 0.0;
    for (const Complex& c : wide.u) sum += std::norm(c);
    CHECK(measure_norms(rec, Signal::Control).l2 ==
          doctest::Approx(std::sqrt(0.5 * sum)).epsilon(0.005));
}

TEST_CASE("amplitude independence of the harmonic ratios") {
    const ResetController el = make_gfore(hz_to_radps(20.0), 0.0, 1.0);
    const HybridSystem sys = assemble_open_loop(el);
    const double w = 2.0 * hz_to_radps(20.0);
    SteadyStateOptions opts;
    opts.dt_target = (kTwoPi / w) / 2048.0;
    const auto one = fft_harmonics(
        run_to_steady_state(sys, {Channel::Reference, w, 1.0, 0.0}, opts), w, 5);
    const auto big = fft_harmonics(
        run_to_steady_state(sys, {Channel::Reference, w, 7.5, 0.0}, opts), w, 5);
    CHECK(std::abs(big.u[0] / one.u[0] - 7.5) < 1e-6);
    CHECK(std::abs(big.u[2] / one.u[2] - 7.5) < 1e-6);
}

TEST_CASE("grid convergence at the default step") {
    const Plant plant(benchmark_plant());
    const HybridSystem sys = assemble(make_preset("c04"), plant);
    const SineInput in{Channel::Reference, hz_to_radps(120.0), 1.0, 0.0};
    SteadyStateOptions coarse, fine;
    coarse.dt_target = (kTwoPi / in.omega) / 1000.0;
    fine.dt_target = (kTwoPi / in.omega) / 2000.0;
    const double a = measure_norms(run_to_steady_state(sys, in, coarse), Signal::Error).linf;
    const double b = measure_norms(run_to_steady_state(sys, in, fine), Signal::Error).linf;
    CHECK(std::abs(a - b) / b < 1e-3);
}

TEST_CASE("instability is detected and reported") {
    const Plant flipped(RationalTf({-6.615e5}, {83.57, 279.4, 5.837e5}));
    const HybridSystem sys = assemble(make_preset("c04"), flipped);
    const double w = hz_to_radps(20.0);
    const double period = kTwoPi / w;
    const HybridTrajectory traj =
        simulate(sys, {Channel::Reference, w, 1.0, 0.0}, period / 1000.0, 10.0 * period);
    CHECK(traj.diverged);
    CHECK(traj.escape_time > 0.0);
}
