#include "resetfreq/closed_loop.hpp"

#include <algorithm>
#include <cmath>

namespace resetfreq {

const char* to_string(Channel c) {
    switch (c) {
        case Channel::Reference: return "r";
        case Channel::Disturbance: return "d";
        case Channel::Noise: return "n";
    }
    return "?";
}

const char* to_string(Signal s) {
    switch (s) {
        case Signal::Error: return "e";
        case Signal::Output: return "y";
        case Signal::Control: return "u";
    }
    return "?";
}

LoopQuantities loop_at(const ResetController& ctrl, const Plant& plant, double omega, FrfMode mode,
                       FrfWarnings* warnings) {
    LoopQuantities q;
    q.h1 = describing_function(ctrl, omega);
    const Complex p = plant.eval(omega, mode, warnings);
    q.l1 = q.h1 * p;
    if (std::abs(1.0 + q.l1) < 1e-14)
        throw EvaluationError("closed loop singular: 1 + L1 = 0 at omega = " + std::to_string(omega));
    q.sl1 = 1.0 / (1.0 + q.l1);
    q.l_bl = ctrl.base_linear().freq_response(omega) * p;
    q.sl_bl = 1.0 / (1.0 + q.l_bl);
    return q;
}

Complex phase_rotated_gain(Complex s1, int n) {
    return std::polar(std::abs(s1), static_cast<double>(n) * std::arg(s1));
}

Complex ClosedLoopPrediction::at(Signal s, int n) const {
    if (n < 1) throw std::invalid_argument("harmonic index must be >= 1");
    if (n % 2 == 0) return {0.0, 0.0};
    if (n > n_max) throw std::invalid_argument("harmonic index beyond n_max");
    return table(s)[static_cast<size_t>((n - 1) / 2)];
}

const std::vector<Complex>& ClosedLoopPrediction::table(Signal s) const {
    switch (s) {
        case Signal::Error: return e;
        case Signal::Output: return y;
        case Signal::Control: return u;
    }
    throw std::logic_error("unreachable signal kind");
}

ClosedLoopPrediction predict(const ResetController& ctrl, const Plant& plant, double omega,
                             int n_max, Channel channel, FrfMode mode, FrfWarnings* warnings) {
    if (!(omega > 0.0)) throw std::invalid_argument("predict: omega must be positive");
    if (n_max < 1) throw std::invalid_argument("predict: n_max must be >= 1");

    const LoopQuantities q = loop_at(ctrl, plant, omega, mode, warnings);
    const Complex p = plant.eval(omega, mode, warnings);

    // first-harmonic channel ratios
    Complex s1, t1, cs1;
    switch (channel) {
        case Channel::Reference:
            s1 = q.sl1;
            t1 = q.l1 * q.sl1;
            cs1 = q.h1 * q.sl1;
            break;
        case Channel::Disturbance:
            s1 = -p * q.sl1;
            t1 = p * q.sl1;
            cs1 = -q.l1 * q.sl1;
            break;
        case Channel::Noise:
            s1 = -q.sl1;
            t1 = q.sl1;
            cs1 = -q.h1 * q.sl1;
            break;
    }

    ClosedLoopPrediction pred;
    pred.channel = channel;
    pred.omega = omega;
    pred.n_max = n_max;
    const size_t terms = static_cast<size_t>((n_max + 1) / 2);
    pred.e.assign(terms, {0.0, 0.0});
    pred.y.assign(terms, {0.0, 0.0});
    pred.u.assign(terms, {0.0, 0.0});
    pred.e[0] = s1;
    pred.y[0] = t1;
    pred.u[0] = cs1;

    if (n_max >= 3) {
        const std::vector<Complex> hn = harmonics(ctrl, omega, n_max);
        for (int n = 3; n <= n_max; n += 2) {
            const Complex pn = plant.eval(n * omega, mode, warnings);
            const Complex ln = hn[static_cast<size_t>(n) - 1] * pn;
            const Complex lbl_n = ctrl.base_linear().freq_response(n * omega) * pn;
            const Complex slbl_n = 1.0 / (1.0 + lbl_n);
            const Complex rot = phase_rotated_gain(s1, n);
            const size_t k = static_cast<size_t>((n - 1) / 2);
            pred.e[k] = -ln * slbl_n * rot;
            pred.y[k] = ln * slbl_n * rot;
            pred.u[k] = hn[static_cast<size_t>(n) - 1] * (1.0 - lbl_n * slbl_n) * rot;
        }
    }
    return pred;
}

std::vector<double> reconstruct_time(const ClosedLoopPrediction& pred, Signal signal,
                                     int samples_per_period) {
    if (samples_per_period < 2 * pred.n_max + 2)
        throw std::invalid_argument("reconstruct_time: need at least 2*n_max + 2 samples per period");
    const auto& tab = pred.table(signal);
    std::vector<double> out(static_cast<size_t>(samples_per_period), 0.0);
    for (int k = 0; k < samples_per_period; ++k) {
        const double wt = kTwoPi * static_cast<double>(k) / samples_per_period;
        double acc = 0.0;
        for (size_t i = 0; i < tab.size(); ++i) {
            const int n = static_cast<int>(2 * i + 1);
            acc += std::abs(tab[i]) * std::sin(n * wt + std::arg(tab[i]));
        }
        out[static_cast<size_t>(k)] = acc;
    }
    return out;
}

NormReport norms_of_harmonics(const std::vector<Complex>& table, int samples_per_period) {
    NormReport r;
    double sum = 0.0;
    for (const auto& c : table) sum += std::norm(c);
    r.l2 = std::sqrt(0.5 * sum);
    double peak = 0.0;
    for (int k = 0; k < samples_per_period; ++k) {
        const double wt = kTwoPi * static_cast<double>(k) / samples_per_period;
        double acc = 0.0;
        for (size_t i = 0; i < table.size(); ++i) {
            const int n = static_cast<int>(2 * i + 1);
            acc += std::abs(table[i]) * std::sin(n * wt + std::arg(table[i]));
        }
        peak = std::max(peak, std::abs(acc));
    }
    r.linf = peak;
    return r;
}

NormReport norms(const ClosedLoopPrediction& pred, Signal signal, int samples_per_period) {
    return norms_of_harmonics(pred.table(signal), samples_per_period);
}

double per(double measured, double predicted) {
    if (!(predicted > 0.0))
        throw std::invalid_argument("per: predicted value must be positive");
    return std::abs(measured - predicted) / predicted;
}

SuperposeReport superpose(const ResetController& ctrl, const Plant& plant,
                          const std::vector<ExogenousInput>& inputs, int n_max,
                          double dominance_threshold) {
    if (inputs.size() < 2) throw std::invalid_argument("superpose: need at least 2 inputs");

    SuperposeReport rep;
    rep.threshold = dominance_threshold;
    rep.first_harmonic_error.resize(inputs.size());
    rep.peak_error.assign(inputs.size(), 0.0);
    rep.through_reset.assign(inputs.size(), false);

    for (size_t i = 0; i < inputs.size(); ++i) {
        const LoopQuantities q = loop_at(ctrl, plant, inputs[i].omega);
        Complex s1;
        switch (inputs[i].channel) {
            case Channel::Reference: s1 = q.sl1; break;
            case Channel::Disturbance: s1 = -plant.eval(inputs[i].omega) * q.sl1; break;
            case Channel::Noise: s1 = -q.sl1; break;
        }
        rep.first_harmonic_error[i] = std::abs(s1) * inputs[i].amplitude;
    }

    const size_t k = static_cast<size_t>(
        std::max_element(rep.first_harmonic_error.begin(), rep.first_harmonic_error.end()) -
        rep.first_harmonic_error.begin());
    rep.dominant_index = k;
    for (size_t j = 0; j < inputs.size(); ++j) {
        if (j == k) continue;
        if (rep.first_harmonic_error[j] > dominance_threshold * rep.first_harmonic_error[k])
            rep.violations.emplace_back(j, k);
    }
    rep.dominance_ok = rep.violations.empty();
    if (!rep.dominance_ok) return rep;

    // dominant input through the full reset prediction, the rest through the
    // base-linear sensitivities (no additional harmonics created there)
    for (size_t i = 0; i < inputs.size(); ++i) {
        if (i == k) {
            const ClosedLoopPrediction p =
                predict(ctrl, plant, inputs[i].omega, n_max, inputs[i].channel);
            rep.peak_error[i] = inputs[i].amplitude * norms(p, Signal::Error).linf;
            rep.through_reset[i] = true;
        } else {
            const LoopQuantities q = loop_at(ctrl, plant, inputs[i].omega);
            Complex sj;
            switch (inputs[i].channel) {
                case Channel::Reference: sj = q.sl_bl; break;
                case Channel::Disturbance: sj = -plant.eval(inputs[i].omega) * q.sl_bl; break;
                case Channel::Noise: sj = -q.sl_bl; break;
            }
            rep.peak_error[i] = inputs[i].amplitude * std::abs(sj);
        }
        rep.combined_linf_e += rep.peak_error[i];
    }
    return rep;
}

}  // namespace resetfreq
