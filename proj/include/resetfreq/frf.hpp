#pragma once

#include <filesystem>
#include <optional>
#include <variant>

#include "resetfreq/lti.hpp"

namespace resetfreq {

/// Out-of-span FRF query handling.
enum class FrfMode { Strict, Permissive };

/// Record of a permissive-mode extrapolation beyond the measured span.
struct FrfExtrapolation {
    double f_hz = 0.0;
    bool above_span = false;
};
using FrfWarnings = std::vector<FrfExtrapolation>;

/// Measured frequency-response table. Magnitude interpolates log-log,
/// phase linearly in log-frequency; queries at a knot return the row exactly.
class FrfTable {
public:
    struct Row {
        double f_hz;
        Complex response;
    };

    explicit FrfTable(std::vector<Row> rows);

    /// CSV with header `freq_hz,real,imag` or `freq_hz,mag_db,phase_deg`.
    static FrfTable load_csv(const std::filesystem::path& path);

    Complex eval(double omega, FrfMode mode = FrfMode::Strict,
                 FrfWarnings* warnings = nullptr) const;

    const std::vector<Row>& rows() const { return rows_; }
    double f_min() const { return rows_.front().f_hz; }
    double f_max() const { return rows_.back().f_hz; }

private:
    std::vector<Row> rows_;
    std::vector<double> log_f_;
    std::vector<double> log_mag_;
    std::vector<double> phase_;  // unwrapped, rad
};

/// A plant is a rational model, a state-space model, or a measured table.
class Plant {
public:
    Plant(RationalTf tf) : model_(std::move(tf)) {}
    Plant(StateSpace ss) : model_(std::move(ss)) {}
    Plant(FrfTable table) : model_(std::move(table)) {}

    Complex eval(double omega, FrfMode mode = FrfMode::Strict,
                 FrfWarnings* warnings = nullptr) const;

    bool has_state_space() const { return !std::holds_alternative<FrfTable>(model_); }

    /// Throws for FRF-only plants: time simulation and the stability
    /// certificate need a state-space model (fit a rational model first).
    StateSpace to_state_space() const;

    const FrfTable* frf() const { return std::get_if<FrfTable>(&model_); }

private:
    std::variant<RationalTf, StateSpace, FrfTable> model_;
};

}  // namespace resetfreq
