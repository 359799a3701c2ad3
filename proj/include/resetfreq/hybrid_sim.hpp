#pragma once

#include "resetfreq/closed_loop.hpp"

namespace resetfreq {

/// Closed-loop (or open-loop) reset system in flow/jump form. The error
/// signal e = e_in_gain(channel)*w(t) - y_row*x triggers jumps on strict
/// zero crossings; the jump applies reset_map to the state.
struct HybridSystem {
    Mat A;
    Vec b_r, b_d, b_n;   // input injection per exogenous channel
    RowVec y_row;        // plant output (zero row in open loop)
    RowVec u_state_row;  // controller-state part of u_R
    double u_feed = 0.0; // D_R, multiplies e
    Mat reset_map;
    Eigen::Index n_r = 0;
    bool open_loop = false;

    const Vec& input_vector(Channel c) const;
    static double error_input_gain(Channel c) {
        return c == Channel::Reference ? 1.0 : (c == Channel::Noise ? -1.0 : 0.0);
    }
};

/// Closed loop of controller and plant; r and -n enter through the error,
/// d adds to the control signal at the plant input.
HybridSystem assemble(const ResetController& ctrl, const Plant& plant);

/// Element driven directly by the sinusoid (resets at input zero crossings).
HybridSystem assemble_open_loop(const ResetController& ctrl);

struct SineInput {
    Channel channel = Channel::Reference;
    double omega = 0.0;
    double amplitude = 1.0;
    double phase = 0.0;

    double value(double t) const { return amplitude * std::sin(omega * t + phase); }
};

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HybridTrajectory {
    double dt = 0.0;
    std::vector<double> t, e, y, u;
    std::vector<double> reset_times;
    bool diverged = false;
    double escape_time = 0.0;
};

/// Fixed-step RK4 with bisection-refined strict-crossing resets and a 2*dt
/// refractory window after each jump. Grazing contact does not reset.
HybridTrajectory simulate(const HybridSystem& sys, const SineInput& input, double dt,
                          double duration);

struct SteadyStateRecord {
    double omega = 0.0;
    double dt = 0.0;
    double t_start = 0.0;            // absolute time of the first stored sample
    std::vector<double> e, y, u;     // one period, uniformly sampled
    int resets_per_period = 0;
    bool converged = false;
    double residual = 0.0;           // worst per-signal relative period-to-period change
    int periods_simulated = 0;
};

/// Last full period of a finished trajectory; converged when consecutive
/// periods agree to 1e-6 relative in the L-infinity sense.
SteadyStateRecord steady_state(const HybridTrajectory& traj, double omega);

struct SteadyStateOptions {
    double dt_target = 1e-5;  // ten-fold oversampling of the 10 kHz reference rate
    int min_periods = 10;
    int max_periods = 400;
    double tol = 1e-6;
};

/// Streamed period-by-period integration with early exit on convergence.
SteadyStateRecord run_to_steady_state(const HybridSystem& sys, const SineInput& input,
                                      const SteadyStateOptions& opts = {});

/// Complex harmonic content (sine-phasor convention) of one steady period.
struct HarmonicMeasurement {
    std::vector<Complex> e, y, u;  // index n-1 holds harmonic n, n = 1..n_max
};

HarmonicMeasurement fft_harmonics(const SteadyStateRecord& record, double omega, int n_max);

NormReport measure_norms(const SteadyStateRecord& record, Signal signal);

}  // namespace resetfreq
