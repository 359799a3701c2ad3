#include "resetfreq/frf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace resetfreq {

FrfTable::FrfTable(std::vector<Row> rows) : rows_(std::move(rows)) {
    if (rows_.size() < 2) throw std::invalid_argument("FRF table needs at least 2 rows");
    for (size_t i = 0; i < rows_.size(); ++i) {
        if (!(rows_[i].f_hz > 0.0)) throw std::invalid_argument("FRF frequencies must be positive");
        if (i > 0 && !(rows_[i].f_hz > rows_[i - 1].f_hz))
            throw std::invalid_argument("FRF frequencies must be strictly increasing");
        if (!std::isfinite(rows_[i].response.real()) || !std::isfinite(rows_[i].response.imag()))
            throw std::invalid_argument("FRF responses must be finite");
    }
    log_f_.reserve(rows_.size());
    log_mag_.reserve(rows_.size());
    phase_.reserve(rows_.size());
    double prev_phase = 0.0;
    for (size_t i = 0; i < rows_.size(); ++i) {
        const double mag = std::abs(rows_[i].response);
        if (!(mag > 0.0)) throw std::invalid_argument("FRF rows must have nonzero magnitude");
        log_f_.push_back(std::log10(rows_[i].f_hz));
        log_mag_.push_back(std::log10(mag));
        double ph = std::arg(rows_[i].response);
        if (i > 0) {  // unwrap against the previous row
            while (ph - prev_phase > kPi) ph -= kTwoPi;
            while (ph - prev_phase < -kPi) ph += kTwoPi;
        }
        phase_.push_back(ph);
        prev_phase = ph;
    }
}

FrfTable FrfTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open FRF file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty FRF file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool polar;
    if (line == "freq_hz,real,imag") polar = false;
    else if (line == "freq_hz,mag_db,phase_deg") polar = true;
    else throw std::runtime_error("unrecognized FRF header: '" + line + "'");

    std::vector<Row> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        double a, b, c;
        char c1, c2;
        if (!(ss >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',') {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": malformed FRF row '" + line + "'");
        }
        if (polar) {
            const double mag = std::pow(10.0, b / 20.0);
            const double ph = c * kPi / 180.0;
            rows.push_back({a, std::polar(mag, ph)});
        } else {
            rows.push_back({a, Complex(b, c)});
        }
    }
    return FrfTable(std::move(rows));
}

Complex FrfTable::eval(double omega, FrfMode mode, FrfWarnings* warnings) const {
    if (!(omega > 0.0)) throw EvaluationError("FRF evaluation requires omega > 0");
    const double f = radps_to_hz(omega);
    const double lf = std::log10(f);
    size_t i;
    if (f < f_min() || f > f_max()) {
        if (mode == FrfMode::Strict) {
            throw EvaluationError("FRF query " + std::to_string(f) + " Hz outside measured span [" +
                                  std::to_string(f_min()) + ", " + std::to_string(f_max()) + "] Hz");
        }
        if (warnings) warnings->push_back({f, f > f_max()});
        i = f < f_min() ? 0 : rows_.size() - 2;  // extend the end segment's slope
    } else {
        // bracketing segment; exact hit falls out of the interpolation
        i = static_cast<size_t>(std::upper_bound(log_f_.begin(), log_f_.end(), lf) - log_f_.begin());
        if (i > 0) --i;
        if (i >= rows_.size() - 1) i = rows_.size() - 2;
    }
    const double t = (lf - log_f_[i]) / (log_f_[i + 1] - log_f_[i]);
    const double mag = std::pow(10.0, log_mag_[i] + t * (log_mag_[i + 1] - log_mag_[i]));
    const double ph = phase_[i] + t * (phase_[i + 1] - phase_[i]);
    return std::polar(mag, ph);
}

Complex Plant::eval(double omega, FrfMode mode, FrfWarnings* warnings) const {
    return std::visit(
        [&](const auto& m) -> Complex {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FrfTable>) return m.eval(omega, mode, warnings);
            else return m.freq_response(omega);
        },
        model_);
}

StateSpace Plant::to_state_space() const {
    if (const auto* tf = std::get_if<RationalTf>(&model_)) return tf->to_state_space();
    if (const auto* ss = std::get_if<StateSpace>(&model_)) return *ss;
    throw EvaluationError(
        "measured-FRF plants cannot be simulated or certified; fit a rational model first");
}

}  // namespace resetfreq
