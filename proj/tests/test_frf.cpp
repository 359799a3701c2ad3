#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "resetfreq/frf.hpp"
#include "resetfreq/presets.hpp"

using namespace resetfreq;

namespace {

FrfTable two_row_table() {
    return FrfTable({{1.0, Complex(1.0, 0.0)}, {100.0, Complex(0.01, 0.0)}});
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("table validation") {
    CHECK_THROWS_AS(FrfTable({{1.0, Complex(1.0, 0.0)}}), std::invalid_argument);
    CHECK_THROWS_AS(FrfTable({{2.0, Complex(1, 0)}, {1.0, Complex(1, 0)}}), std::invalid_argument);
    CHECK_THROWS_AS(FrfTable({{-1.0, Complex(1, 0)}, {1.0, Complex(1, 0)}}), std::invalid_argument);
}

TEST_CASE("interpolation hits knots exactly") {
    const FrfTable t = two_row_table();
    CHECK(std::abs(t.eval(hz_to_radps(1.0)) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(t.eval(hz_to_radps(100.0)) - Complex(0.01, 0.0)) < 1e-12);
}

TEST_CASE("log-log magnitude, linear phase in log frequency") {
    const FrfTable t = two_row_table();
    const Complex mid = t.eval(hz_to_radps(10.0));
    CHECK(std::abs(mid) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::arg(mid) == doctest::Approx(0.0));

    // phase interpolates without wrapping artifacts
    const FrfTable p({{1.0, std::polar(1.0, 0.9 * kPi)}, {100.0, std::polar(1.0, -0.9 * kPi)}});
    const double mid_phase = std::arg(p.eval(hz_to_radps(10.0)));
    // unwrapped path goes 0.9pi -> 1.1pi, midpoint at pi
    CHECK(std::abs(std::abs(mid_phase) - kPi) < 1e-9);
}

TEST_CASE("out-of-span behaviour") {
    const FrfTable t = two_row_table();
    CHECK_THROWS_AS(t.eval(hz_to_radps(0.5), FrfMode::Strict), EvaluationError);
    CHECK_THROWS_AS(t.eval(hz_to_radps(101.0), FrfMode::Strict), EvaluationError);

    FrfWarnings warnings;
    const Complex extrapolated = t.eval(hz_to_radps(1000.0), FrfMode::Permissive, &warnings);
    CHECK(std::abs(extrapolated) == doctest::Approx(0.001).epsilon(1e-9));  // -40 dB/dec slope
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].f_hz == doctest::Approx(1000.0));
    CHECK(warnings[0].above_span);
}

TEST_CASE("csv loading, both header forms") {
    const auto cart = write_temp("frf_cart.csv", "freq_hz,real,imag\n1.0,1.0,0.0\n100.0,0.01,0.0\n");
    const FrfTable t1 = FrfTable::load_csv(cart);
    CHECK(std::abs(t1.eval(hz_to_radps(10.0))) == doctest::Approx(0.1).epsilon(1e-9));

    const auto polar =
        write_temp("frf_polar.csv", "freq_hz,mag_db,phase_deg\n1.0,0.0,0.0\n100.0,-40.0,-90.0\n");
    const FrfTable t2 = FrfTable::load_csv(polar);
    CHECK(std::abs(t2.eval(hz_to_radps(100.0))) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(std::arg(t2.eval(hz_to_radps(100.0))) == doctest::Approx(-kPi / 2).epsilon(1e-9));

    const auto bad = write_temp("frf_bad.csv", "freq_hz,real,imag\n1.0,1.0\n");
    CHECK_THROWS(FrfTable::load_csv(bad));
    const auto bad_header = write_temp("frf_badh.csv", "hz,mag,phase\n");
    CHECK_THROWS(FrfTable::load_csv(bad_header));
}

TEST_CASE("plant variant dispatch") {
    const Plant rational(benchmark_plant());
    CHECK(rational.has_state_space());
    CHECK_NOTHROW(rational.to_state_space());

    // synthetic table sampled from the rational fit
    std::vector<FrfTable::Row> rows;
    for (double f = 1.0; f <= 1000.0; f *= 1.3)
        rows.push_back({f, benchmark_plant().freq_response(hz_to_radps(f))});
    const Plant measured(FrfTable(std::move(rows)));
    CHECK_FALSE(measured.has_state_space());
    CHECK_THROWS_AS(measured.to_state_space(), EvaluationError);

    // the interpolant tracks the model it was sampled from
    const double w = hz_to_radps(47.0);
    const Complex a = measured.eval(w);
    const Complex b = rational.eval(w);
    CHECK(std::abs(a - b) < 0.02 * std::abs(b));
}
