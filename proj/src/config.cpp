#include "resetfreq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace resetfreq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& field,
                       const std::string& what) {
    throw ConfigError(origin + ": field '" + field + "': " + what);
}

double require_positive(const std::string& origin, const std::string& field, double v) {
    if (!(v > 0.0)) fail(origin, field, "must be positive");
    return v;
}

Channel parse_channel(const std::string& origin, const std::string& s) {
    if (s == "r" || s == "reference") return Channel::Reference;
    if (s == "d" || s == "disturbance") return Channel::Disturbance;
    if (s == "n" || s == "noise") return Channel::Noise;
    fail(origin, "channels", "unknown channel '" + s + "' (use r, d or n)");
}

LinearFactor parse_factor(const std::string& origin, const json& j) {
    const std::string type = j.value("type", "");
    auto corner = [&](const char* key) {
        if (!j.contains(key)) fail(origin, std::string("linear.") + type, std::string("missing '") + key + "'");
        return hz_to_radps(require_positive(origin, key, j.at(key).get<double>()));
    };
    if (type == "integrator") return LinearFactor::integrator(corner("corner_hz"));
    if (type == "tamed_integrator")
        return LinearFactor::tamed_integrator(corner("corner_hz"), corner("pole_hz"));
    if (type == "lead") return LinearFactor::lead(corner("zero_hz"), corner("pole_hz"));
    if (type == "lead_zero") return LinearFactor::lead_zero(corner("zero_hz"), corner("pole_hz"));
    if (type == "lowpass") return LinearFactor::lowpass(corner("corner_hz"));
    if (type == "gain") {
        if (!j.contains("value")) fail(origin, "linear.gain", "missing 'value'");
        return LinearFactor::gain(j.at("value").get<double>());
    }
    fail(origin, "linear", "unknown factor type '" + type + "'");
}

}  // namespace

std::vector<double> GridSpec::omegas() const {
    if (!(start_hz > 0.0) || !(stop_hz > start_hz))
        throw ConfigError("grid: need 0 < start_hz < stop_hz");
    if (points_per_decade < 1) throw ConfigError("grid: points_per_decade must be >= 1");
    std::vector<double> out;
    const double decades = std::log10(stop_hz / start_hz);
    const int count = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    for (int i = 0; i < count; ++i) {
        const double f = start_hz * std::pow(10.0, decades * i / (count - 1));
        out.push_back(hz_to_radps(f));
    }
    return out;
}

Plant RunConfig::make_plant() const {
    if (plant_kind == "benchmark") return Plant(benchmark_plant());
    if (plant_kind == "rational") return Plant(RationalTf(plant_num, plant_den));
    if (plant_kind == "frf") return Plant(FrfTable::load_csv(frf_csv));
    throw ConfigError("this command requires a plant, but config says plant = none");
}

ResetController RunConfig::make_controller() const {
    ResetController ctrl;
    if (!preset.empty()) {
        ctrl = make_preset(preset, gamma_override);
    } else if (element) {
        const ElementParams& p = *element;
        std::optional<double> alpha =
            p.alpha > 0.0 ? std::optional<double>(p.alpha) : std::nullopt;
        ResetController rst;
        if (element_kind == "gci") rst = make_gci(p.gamma, alpha);
        else if (element_kind == "gfore") rst = make_gfore(p.omega_r, p.gamma, alpha);
        else if (element_kind == "gsore")
            rst = make_gsore(p.omega_r, p.beta_r, p.gamma, p.kappa, alpha);
        else if (element_kind == "cglp") rst = make_cglp(p.omega_r, p.omega_f, p.gamma, alpha);
        else if (element_kind == "pci") rst = make_pci_reset(p.omega_i, p.gamma, alpha);
        else throw ConfigError("unknown element kind '" + element_kind + "'");
        ctrl = linear_part.empty() ? rst : compose(rst, linear_part);
    } else {
        throw ConfigError("controller: give either a preset name or an element description");
    }
    if (tune_crossover_hz) {
        const double k =
            tune_gain_for_crossover(ctrl, make_plant(), hz_to_radps(*tune_crossover_hz));
        ctrl = with_gain(ctrl, k);
    }
    if (gain) ctrl = with_gain(ctrl, *gain);
    return ctrl;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    RunConfig cfg;
    cfg.source_text = j.dump();  // canonical form for hashing

    try {
        if (j.contains("plant")) {
            const auto& p = j.at("plant");
            if (p.is_string()) {
                const std::string s = p.get<std::string>();
                if (s != "benchmark" && s != "none")
                    fail(origin, "plant", "unknown named plant '" + s + "'");
                cfg.plant_kind = s;
            } else if (p.contains("rational")) {
                cfg.plant_kind = "rational";
                cfg.plant_num = p.at("rational").at("num").get<std::vector<double>>();
                cfg.plant_den = p.at("rational").at("den").get<std::vector<double>>();
            } else if (p.contains("frf_csv")) {
                cfg.plant_kind = "frf";
                cfg.frf_csv = p.at("frf_csv").get<std::string>();
            } else {
                fail(origin, "plant", "expected 'benchmark', 'none', {rational:...} or {frf_csv:...}");
            }
        }

        if (!j.contains("controller")) fail(origin, "controller", "missing");
        const auto& c = j.at("controller");
        if (c.is_string()) {
            cfg.preset = c.get<std::string>();
        } else {
            if (c.contains("preset")) cfg.preset = c.at("preset").get<std::string>();
            if (c.contains("gamma")) cfg.gamma_override = c.at("gamma").get<double>();
            if (c.contains("element")) {
                const auto& e = c.at("element");
                cfg.element_kind = e.value("kind", "");
                ElementParams p;
                p.gamma = e.value("gamma", 0.0);
                if (e.contains("omega_r_hz")) p.omega_r = hz_to_radps(e.at("omega_r_hz").get<double>());
                if (e.contains("omega_f_hz")) p.omega_f = hz_to_radps(e.at("omega_f_hz").get<double>());
                if (e.contains("omega_i_hz")) p.omega_i = hz_to_radps(e.at("omega_i_hz").get<double>());
                p.beta_r = e.value("beta_r", 1.0);
                p.kappa = e.value("kappa", 1.0);
                p.alpha = e.value("alpha", 0.0);
                cfg.element = p;
            }
            if (c.contains("linear"))
                for (const auto& f : c.at("linear")) cfg.linear_part.push_back(parse_factor(origin, f));
            if (c.contains("K")) cfg.gain = c.at("K").get<double>();
            if (c.contains("tune_crossover_hz"))
                cfg.tune_crossover_hz = c.at("tune_crossover_hz").get<double>();
        }

        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.start_hz = g.value("start_hz", cfg.grid.start_hz);
            cfg.grid.stop_hz = g.value("stop_hz", cfg.grid.stop_hz);
            cfg.grid.points_per_decade = g.value("points_per_decade", cfg.grid.points_per_decade);
        }
        cfg.n_max = j.value("nmax", cfg.n_max);
        if (cfg.n_max < 1) fail(origin, "nmax", "must be >= 1");
        if (j.contains("channels")) {
            cfg.channels.clear();
            for (const auto& ch : j.at("channels"))
                cfg.channels.push_back(parse_channel(origin, ch.get<std::string>()));
        }
        cfg.amplitude = j.value("amplitude", 1.0);
        if (j.contains("sim")) {
            const auto& s = j.at("sim");
            cfg.sim.dt = s.value("dt", cfg.sim.dt);
            cfg.sim.min_periods = s.value("min_periods", cfg.sim.min_periods);
            cfg.sim.max_periods = s.value("max_periods", cfg.sim.max_periods);
            cfg.sim.duration = s.value("duration", cfg.sim.duration);
        }
        if (j.contains("inputs")) {
            for (const auto& in : j.at("inputs")) {
                ExogenousInput e;
                e.channel = parse_channel(origin, in.value("channel", "r"));
                e.omega = hz_to_radps(
                    require_positive(origin, "inputs.freq_hz", in.at("freq_hz").get<double>()));
                e.amplitude = in.value("amplitude", 1.0);
                e.phase = in.value("phase", 0.0);
                cfg.inputs.push_back(e);
            }
        }
        cfg.dominance_threshold = j.value("dominance_threshold", 0.5);
        cfg.out_dir = j.value("out", cfg.out_dir);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

}  // namespace resetfreq
