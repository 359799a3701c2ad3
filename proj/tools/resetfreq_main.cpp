#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include "resetfreq/config.hpp"
#include "resetfreq/report.hpp"

namespace rf = resetfreq;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitNoConvergence = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    int nmax_override = 0;
    bool db = false;
    bool strict_frf = false;
};

struct RunContext {
    rf::RunConfig cfg;
    std::string hash;
    fs::path dir;
    rf::FrfMode mode;
    rf::FrfWarnings warnings;
};

RunContext make_context(const CommonOpts& opts, const std::string& cmd) {
    RunContext ctx{rf::load_config(opts.config_path), "", {}, rf::FrfMode::Permissive, {}};
    if (!opts.out_override.empty()) ctx.cfg.out_dir = opts.out_override;
    if (opts.nmax_override > 0) ctx.cfg.n_max = opts.nmax_override;
    ctx.mode = opts.strict_frf ? rf::FrfMode::Strict : rf::FrfMode::Permissive;
    ctx.hash = rf::config_hash(ctx.cfg.source_text);
    ctx.dir = fs::path(ctx.cfg.out_dir) / (cmd + "-" + ctx.hash.substr(0, 8));
    fs::create_directories(ctx.dir);
    return ctx;
}

void flush_warnings(const RunContext& ctx) {
    if (ctx.warnings.empty()) return;
    std::cerr << "note: " << ctx.warnings.size()
              << " FRF evaluation(s) extrapolated beyond the measured span (first at "
              << ctx.warnings.front().f_hz << " Hz)\n";
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_sweep(const CommonOpts& opts, bool df_only) {
    RunContext ctx = make_context(opts, df_only ? "df" : "hosidf");
    const rf::ResetController ctrl = ctx.cfg.make_controller();
    std::optional<rf::Plant> plant;
    if (ctx.cfg.has_plant()) plant.emplace(ctx.cfg.make_plant());
    const int nmax = df_only ? 1 : ctx.cfg.n_max;
    const auto grid = ctx.cfg.grid.omegas();
    const rf::HarmonicResponse resp =
        rf::sweep(ctrl, plant ? &*plant : nullptr, grid, nmax, ctx.mode, &ctx.warnings);
    rf::write_text_file(ctx.dir / "sweep.csv", rf::sweep_csv(resp, opts.db, ctx.hash));
    const std::string title = std::string(plant ? "open-loop" : "controller") +
                              (df_only ? " describing function" : " harmonic response");
    rf::write_text_file(ctx.dir / "sweep.svg", rf::bode_svg(resp, title));
    flush_warnings(ctx);
    std::cout << "wrote " << (ctx.dir / "sweep.csv").string() << "\n";
    return kExitOk;
}

int cmd_predict(const CommonOpts& opts) {
    RunContext ctx = make_context(opts, "predict");
    const rf::ResetController ctrl = ctx.cfg.make_controller();
    const rf::Plant plant = ctx.cfg.make_plant();
    const auto grid = ctx.cfg.grid.omegas();

    std::vector<rf::ClosedLoopPrediction> preds, preds_df;
    std::vector<rf::NormRow> norm_rows, norm_rows_df;
    for (rf::Channel ch : ctx.cfg.channels) {
        for (double w : grid) {
            const auto p = rf::predict(ctrl, plant, w, ctx.cfg.n_max, ch, ctx.mode, &ctx.warnings);
            const auto p1 = rf::predict(ctrl, plant, w, 1, ch, ctx.mode, &ctx.warnings);
            preds.push_back(p);
            preds_df.push_back(p1);
            for (rf::Signal s : {rf::Signal::Error, rf::Signal::Output, rf::Signal::Control}) {
                norm_rows.push_back({w, ch, s, rf::norms(p, s)});
                norm_rows_df.push_back({w, ch, s, rf::norms(p1, s)});
            }
        }
    }
    rf::write_text_file(ctx.dir / "prediction.csv", rf::prediction_csv(preds, ctx.hash));
    rf::write_text_file(ctx.dir / "prediction_df_only.csv", rf::prediction_csv(preds_df, ctx.hash));
    rf::write_text_file(ctx.dir / "norms.csv", rf::norm_csv(norm_rows, ctx.hash));
    rf::write_text_file(ctx.dir / "norms_df_only.csv", rf::norm_csv(norm_rows_df, ctx.hash));
    flush_warnings(ctx);
    std::cout << "wrote " << (ctx.dir / "prediction.csv").string() << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts) {
    RunContext ctx = make_context(opts, "simulate");
    const rf::ResetController ctrl = ctx.cfg.make_controller();
    const rf::Plant plant = ctx.cfg.make_plant();
    const rf::HybridSystem sys = rf::assemble(ctrl, plant);

    rf::SineInput input;
    if (!ctx.cfg.inputs.empty()) {
        input.channel = ctx.cfg.inputs.front().channel;
        input.omega = ctx.cfg.inputs.front().omega;
        input.amplitude = ctx.cfg.inputs.front().amplitude;
        input.phase = ctx.cfg.inputs.front().phase;
    } else {
        input.channel = ctx.cfg.channels.front();
        input.omega = rf::hz_to_radps(ctx.cfg.grid.start_hz);
        input.amplitude = ctx.cfg.amplitude;
    }

    const double period = rf::kTwoPi / input.omega;
    const auto n_pp = std::max<long long>(1000, std::llround(std::ceil(period / ctx.cfg.sim.dt)));
    const double dt = period / static_cast<double>(n_pp);
    const double duration =
        ctx.cfg.sim.duration > 0.0 ? ctx.cfg.sim.duration : 20.0 * period;

    const rf::HybridTrajectory traj = rf::simulate(sys, input, dt, duration);
    const rf::SteadyStateRecord rec = rf::steady_state(traj, input.omega);
    rf::write_text_file(ctx.dir / "trajectory.csv", rf::trajectory_csv(traj, ctx.hash));
    rf::write_text_file(ctx.dir / "events.csv", rf::events_csv(traj.reset_times, ctx.hash));
    rf::write_text_file(ctx.dir / "steady_state.csv", rf::steady_csv(rec, ctx.hash));
    std::cout << "resets/period=" << rec.resets_per_period << " converged=" << rec.converged
              << " residual=" << rec.residual << "\n"
              << "wrote " << (ctx.dir / "trajectory.csv").string() << "\n";
    if (traj.diverged) {
        std::cerr << "state diverged at t = " << traj.escape_time << " s\n";
        return kExitNumeric;
    }
    return rec.converged ? kExitOk : kExitNoConvergence;
}

int cmd_validate(const CommonOpts& opts) {
    RunContext ctx = make_context(opts, "validate");
    const rf::ResetController ctrl = ctx.cfg.make_controller();
    const rf::Plant plant = ctx.cfg.make_plant();
    const rf::HybridSystem sys = rf::assemble(ctrl, plant);
    const auto grid = ctx.cfg.grid.omegas();

    std::vector<rf::PerRow> rows;
    std::vector<rf::NormRow> sim_norms;
    std::vector<double> pers_df, pers_hosidf;
    for (rf::Channel ch : ctx.cfg.channels) {
        if (ch == rf::Channel::Noise) continue;  // campaign drives r and d
        for (double w : grid) {
            rf::SteadyStateOptions so;
            so.dt_target = ctx.cfg.sim.dt;
            so.min_periods = ctx.cfg.sim.min_periods;
            so.max_periods = ctx.cfg.sim.max_periods;
            const auto rec = rf::run_to_steady_state(sys, {ch, w, ctx.cfg.amplitude, 0.0}, so);

            const auto p = rf::predict(ctrl, plant, w, ctx.cfg.n_max, ch, ctx.mode, &ctx.warnings);
            const auto p1 = rf::predict(ctrl, plant, w, 1, ch, ctx.mode, &ctx.warnings);
            const double l1 = std::abs(rf::open_loop_hosidf(ctrl, plant, w, 1, ctx.mode));
            const double l3 = std::abs(rf::open_loop_hosidf(ctrl, plant, w, 3, ctx.mode));

            auto add = [&](const std::string& metric, double sim, double hosidf, double dfv) {
                rf::PerRow r{w,
                             ch,
                             metric,
                             rf::per(sim / ctx.cfg.amplitude, dfv),
                             rf::per(sim / ctx.cfg.amplitude, hosidf),
                             rec.converged,
                             rec.resets_per_period,
                             rec.resets_per_period > 2,
                             l3 > l1};
                rows.push_back(r);
                if (rec.converged) {
                    pers_df.push_back(r.per_df);
                    pers_hosidf.push_back(r.per_hosidf);
                }
            };
            const auto sim_e = rf::measure_norms(rec, rf::Signal::Error);
            const auto sim_u = rf::measure_norms(rec, rf::Signal::Control);
            sim_norms.push_back({w, ch, rf::Signal::Error, sim_e});
            sim_norms.push_back({w, ch, rf::Signal::Control, sim_u});
            add("e_linf", sim_e.linf, rf::norms(p, rf::Signal::Error).linf,
                rf::norms(p1, rf::Signal::Error).linf);
            add("e_l2", sim_e.l2, rf::norms(p, rf::Signal::Error).l2,
                rf::norms(p1, rf::Signal::Error).l2);
            add("u_linf", sim_u.linf, rf::norms(p, rf::Signal::Control).linf,
                rf::norms(p1, rf::Signal::Control).linf);
        }
    }
    rf::write_text_file(ctx.dir / "per.csv", rf::per_csv(rows, ctx.hash));
    rf::write_text_file(ctx.dir / "norms_simulated.csv", rf::norm_csv(sim_norms, ctx.hash));
    flush_warnings(ctx);
    std::cout << "median PER: df-only=" << rf::format_number(median(pers_df))
              << " hosidf=" << rf::format_number(median(pers_hosidf)) << "\n"
              << "wrote " << (ctx.dir / "per.csv").string() << "\n";
    return kExitOk;
}

int cmd_stability(const CommonOpts& opts) {
    RunContext ctx = make_context(opts, "stability");
    const rf::ResetController ctrl = ctx.cfg.make_controller();
    const rf::Plant plant = ctx.cfg.make_plant();
    const rf::StabilityCertificate cert = rf::certify(ctrl, plant);
    const std::string report = rf::certificate_report(cert);
    rf::write_text_file(ctx.dir / "certificate.txt", report);
    std::cout << report;
    return kExitOk;
}

int cmd_superpose(const CommonOpts& opts) {
    RunContext ctx = make_context(opts, "superpose");
    if (ctx.cfg.inputs.size() < 2)
        throw rf::ConfigError("superpose requires at least two entries in 'inputs'");
    const rf::ResetController ctrl = ctx.cfg.make_controller();
    const rf::Plant plant = ctx.cfg.make_plant();
    const auto rep = rf::superpose(ctrl, plant, ctx.cfg.inputs, ctx.cfg.n_max,
                                   ctx.cfg.dominance_threshold);
    const std::string report = rf::superpose_report(rep, ctx.cfg.inputs);
    rf::write_text_file(ctx.dir / "superpose.txt", report);
    std::cout << report;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequency-domain analysis of reset control systems"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string cmd;
    for (const auto& name :
         {"df", "hosidf", "predict", "simulate", "validate", "stability", "superpose"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", opts.out_override, "output directory");
        sub->add_option("--nmax", opts.nmax_override, "highest harmonic");
        sub->add_flag("--db", opts.db, "sweep magnitudes in dB");
        sub->add_flag("--strict-frf", opts.strict_frf, "error on out-of-span FRF queries");
        sub->callback([&cmd, name] { cmd = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cmd == "df") return cmd_sweep(opts, true);
        if (cmd == "hosidf") return cmd_sweep(opts, false);
        if (cmd == "predict") return cmd_predict(opts);
        if (cmd == "simulate") return cmd_simulate(opts);
        if (cmd == "validate") return cmd_validate(opts);
        if (cmd == "stability") return cmd_stability(opts);
        if (cmd == "superpose") return cmd_superpose(opts);
        return kExitConfig;
    } catch (const rf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rf::EvaluationError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
