#include "resetfreq/presets.hpp"

#include <algorithm>

#include "resetfreq/hosidf.hpp"

namespace resetfreq {

namespace {

constexpr double kCrossoverHz = 150.0;
constexpr double kOmegaIHz = 15.0;
constexpr double kOmegaFHz = 1500.0;

ResetController tuned(ResetController ctrl, const Plant& plant) {
    const double k = tune_gain_for_crossover(ctrl, plant, hz_to_radps(kCrossoverHz));
    return with_gain(ctrl, k);
}

ResetController make_cglp_pid(const CglpPresetRow& row, std::optional<double> gamma_override) {
    const double gamma = gamma_override.value_or(row.gamma);
    const double wr = hz_to_radps(row.omega_r_hz);
    const ResetController rst = make_gfore(wr, gamma, row.alpha);
    const LinearPartSpec lin{
        LinearFactor::lead_zero(wr, hz_to_radps(kOmegaFHz)),
        LinearFactor::integrator(hz_to_radps(kOmegaIHz)),
        LinearFactor::lead(hz_to_radps(row.omega_d_hz), hz_to_radps(row.omega_t_hz)),
    };
    return tuned(compose(rst, lin), benchmark_plant());
}

// shared non-reset part of the integrator-reset designs: omega_d 50 Hz,
// omega_t 450 Hz, taming/lowpass at 1500 Hz
ResetController make_rci(double gamma) {
    const ResetController rst = make_gci(gamma);
    const LinearPartSpec lin{
        LinearFactor::tamed_integrator(hz_to_radps(kOmegaIHz), hz_to_radps(kOmegaFHz)),
        LinearFactor::lead(hz_to_radps(50.0), hz_to_radps(450.0)),
    };
    return tuned(compose(rst, lin), benchmark_plant());
}

ResetController make_rpci(double gamma) {
    const ResetController rst = make_pci_reset(hz_to_radps(kOmegaIHz), gamma);
    const LinearPartSpec lin{
        LinearFactor::lowpass(hz_to_radps(kOmegaFHz)),
        LinearFactor::lead(hz_to_radps(50.0), hz_to_radps(450.0)),
    };
    return tuned(compose(rst, lin), benchmark_plant());
}

ResetController make_pid() {
    // gamma = 1 keeps the structure linear; alpha = 1 so the flow equals the
    // textbook PID with corners 15 / 84.34 / 266.75 / 1500 Hz
    const ResetController rst = make_pci_reset(hz_to_radps(kOmegaIHz), 1.0, 1.0);
    const LinearPartSpec lin{
        LinearFactor::lead(hz_to_radps(84.34), hz_to_radps(266.75)),
        LinearFactor::lowpass(hz_to_radps(kOmegaFHz)),
    };
    return tuned(compose(rst, lin), benchmark_plant());
}

}  // namespace

RationalTf benchmark_plant() { return RationalTf({6.615e5}, {83.57, 279.4, 5.837e5}); }

const std::vector<CglpPresetRow>& cglp_preset_table() {
    static const std::vector<CglpPresetRow> rows{
        {"c01", 50, 30, 0.0, 76.08, 1.27, 80.17, 280.65},
        {"c02", 50, 20, 0.2, 98.93, 1.12, 64.05, 351.27},
        {"c03", 50, 20, 0.1, 114.83, 1.14, 64.05, 351.27},
        {"c04", 50, 20, 0.0, 129.24, 1.16, 64.05, 351.27},
        {"c05", 50, 20, -0.1, 142.64, 1.18, 64.05, 351.27},
        {"c06", 50, 20, -0.2, 153.33, 1.21, 64.05, 351.27},
        {"c07", 50, 10, 0.0, 230.42, 1.07, 49.09, 548.29},
        {"c08", 60, 10, 0.0, 230.42, 1.07, 34.97, 643.40},
        {"c09", 70, 20, 0.0, 129.24, 1.16, 34.97, 643.40},
        {"c10", 80, 30, 0.0, 76.08, 1.27, 34.97, 643.40},
    };
    return rows;
}

ResetController make_preset(const std::string& name, std::optional<double> gamma_override) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    for (const auto& row : cglp_preset_table())
        if (key == row.name) return make_cglp_pid(row, gamma_override);

    if (key == "rci_p02") return make_rci(gamma_override.value_or(0.2));
    if (key == "rci_000") return make_rci(gamma_override.value_or(0.0));
    if (key == "rci_m02") return make_rci(gamma_override.value_or(-0.2));
    if (key == "rpci_p02") return make_rpci(gamma_override.value_or(0.2));
    if (key == "rpci_000") return make_rpci(gamma_override.value_or(0.0));
    if (key == "rpci_m02") return make_rpci(gamma_override.value_or(-0.2));
    if (key == "pid") return make_pid();
    if (key == "clegg") return make_gci(gamma_override.value_or(0.0));

    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& row : cglp_preset_table()) names.emplace_back(row.name);
    for (const char* n : {"rci_p02", "rci_000", "rci_m02", "rpci_p02", "rpci_000", "rpci_m02",
                          "pid", "clegg"})
        names.emplace_back(n);
    return names;
}

}  // namespace resetfreq
