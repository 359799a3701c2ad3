#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "resetfreq/closed_loop.hpp"
#include "resetfreq/presets.hpp"

namespace resetfreq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double start_hz = 1.0;
    double stop_hz = 1000.0;
    int points_per_decade = 10;

    /// Ascending rad/s grid, endpoints included.
    std::vector<double> omegas() const;
};

struct SimSpec {
    double dt = 1e-5;
    int min_periods = 10;
    int max_periods = 400;
    double duration = 0.0;  // 0: run adaptively to steady state
};

/// One batch run: one plant, one controller, one analysis.
struct RunConfig {
    std::string source_text;  // canonical config text, hashed into outputs

    // plant: benchmark fit, explicit rational, measured FRF csv, or none
    std::string plant_kind = "benchmark";  // benchmark | rational | frf | none
    std::vector<double> plant_num, plant_den;
    std::filesystem::path frf_csv;

    // controller: preset or explicit composition
    std::string preset;
    std::optional<double> gamma_override;
    std::optional<ElementParams> element;
    std::string element_kind;
    LinearPartSpec linear_part;
    std::optional<double> gain;
    std::optional<double> tune_crossover_hz;

    GridSpec grid;
    int n_max = 11;
    std::vector<Channel> channels{Channel::Reference, Channel::Disturbance};
    double amplitude = 1.0;
    SimSpec sim;
    std::vector<ExogenousInput> inputs;  // superpose
    double dominance_threshold = 0.5;
    std::string out_dir = "runs";

    bool has_plant() const { return plant_kind != "none"; }
    Plant make_plant() const;
    ResetController make_controller() const;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

}  // namespace resetfreq
