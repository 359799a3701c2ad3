#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "resetfreq/config.hpp"
#include "resetfreq/report.hpp"

namespace py = pybind11;
using namespace resetfreq;

namespace {

std::optional<double> opt(double v) {
    return v > 0.0 ? std::optional<double>(v) : std::nullopt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "frequency-domain analysis of reset control systems";
    m.attr("__version__") = kToolVersion;

    py::register_exception<EvaluationError>(m, "EvaluationError");
    py::register_exception<SimulationError>(m, "SimulationError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<StateSpace>(m, "StateSpace")
        .def(py::init<Mat, Mat, Mat, Mat>(), py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"))
        .def_readonly("A", &StateSpace::A)
        .def_readonly("B", &StateSpace::B)
        .def_readonly("C", &StateSpace::C)
        .def_readonly("D", &StateSpace::D)
        .def("freq_response", &StateSpace::freq_response, py::arg("omega"));

    py::class_<RationalTf>(m, "RationalTf")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("num"), py::arg("den"))
        .def("freq_response", &RationalTf::freq_response, py::arg("omega"))
        .def("to_state_space", &RationalTf::to_state_space);

    py::class_<FrfTable>(m, "FrfTable")
        .def(py::init([](const std::vector<std::pair<double, Complex>>& rows) {
                 std::vector<FrfTable::Row> rr;
                 for (const auto& [f, v] : rows) rr.push_back({f, v});
                 return FrfTable(std::move(rr));
             }),
             py::arg("rows"))
        .def_static("load_csv", &FrfTable::load_csv, py::arg("path"))
        .def("eval",
             [](const FrfTable& t, double omega, bool strict) {
                 return t.eval(omega, strict ? FrfMode::Strict : FrfMode::Permissive);
             },
             py::arg("omega"), py::arg("strict") = true);

    py::class_<Plant>(m, "Plant")
        .def(py::init<RationalTf>())
        .def(py::init<StateSpace>())
        .def(py::init<FrfTable>())
        .def("eval",
             [](const Plant& p, double omega, bool strict) {
                 return p.eval(omega, strict ? FrfMode::Strict : FrfMode::Permissive);
             },
             py::arg("omega"), py::arg("strict") = true)
        .def("has_state_space", &Plant::has_state_space);

    py::class_<ResetController>(m, "ResetController")
        .def_readonly("n_r", &ResetController::n_r)
        .def_readonly("A_rho_r", &ResetController::A_rho_r)
        .def_property_readonly("base", [](const ResetController& c) { return c.base; })
        .def("base_linear", &ResetController::base_linear)
        .def("full_reset_matrix", &ResetController::full_reset_matrix);

    m.def("make_gci",
          [](double gamma, double alpha) { return make_gci(gamma, opt(alpha)); },
          py::arg("gamma"), py::arg("alpha") = 0.0);
    m.def("make_gfore",
          [](double omega_r, double gamma, double alpha) {
              return make_gfore(omega_r, gamma, opt(alpha));
          },
          py::arg("omega_r"), py::arg("gamma"), py::arg("alpha") = 0.0);
    m.def("make_gsore",
          [](double omega_r, double beta_r, double gamma, double kappa, double alpha) {
              return make_gsore(omega_r, beta_r, gamma, kappa, opt(alpha));
          },
          py::arg("omega_r"), py::arg("beta_r"), py::arg("gamma"), py::arg("kappa") = 1.0,
          py::arg("alpha") = 0.0);
    m.def("make_cglp",
          [](double omega_r, double omega_f, double gamma, double alpha) {
              return make_cglp(omega_r, omega_f, gamma, opt(alpha));
          },
          py::arg("omega_r"), py::arg("omega_f"), py::arg("gamma"), py::arg("alpha") = 0.0);
    m.def("make_pci_reset",
          [](double omega_i, double gamma, double alpha) {
              return make_pci_reset(omega_i, gamma, opt(alpha));
          },
          py::arg("omega_i"), py::arg("gamma"), py::arg("alpha") = 0.0);
    m.def("compute_alpha",
          [](const std::string& kind, double gamma, double omega_r, double beta_r, double kappa) {
              ElementKind k;
              if (kind == "gci") k = ElementKind::Gci;
              else if (kind == "gfore") k = ElementKind::Gfore;
              else if (kind == "gsore") k = ElementKind::Gsore;
              else if (kind == "pci") k = ElementKind::PciReset;
              else throw std::invalid_argument("unknown element kind '" + kind + "'");
              return compute_alpha(k, gamma, omega_r, beta_r, kappa);
          },
          py::arg("kind"), py::arg("gamma"), py::arg("omega_r") = 1.0, py::arg("beta_r") = 1.0,
          py::arg("kappa") = 1.0);
    m.def("with_gain", &with_gain, py::arg("ctrl"), py::arg("k"));
    m.def("tune_gain_for_crossover", &tune_gain_for_crossover, py::arg("ctrl"), py::arg("plant"),
          py::arg("omega_c"));
    m.def("make_preset",
          [](const std::string& name, py::object gamma) {
              std::optional<double> g;
              if (!gamma.is_none()) g = gamma.cast<double>();
              return make_preset(name, g);
          },
          py::arg("name"), py::arg("gamma") = py::none());
    m.def("preset_names", &preset_names);
    m.def("benchmark_plant", &benchmark_plant);

    m.def("describing_function", &describing_function, py::arg("ctrl"), py::arg("omega"));
    m.def("hosidf", &hosidf, py::arg("ctrl"), py::arg("omega"), py::arg("n"));
    m.def("harmonics", &harmonics, py::arg("ctrl"), py::arg("omega"), py::arg("n_max"));
    m.def("open_loop_hosidf",
          [](const ResetController& c, const Plant& p, double omega, int n, bool strict) {
              return open_loop_hosidf(c, p, omega, n,
                                      strict ? FrfMode::Strict : FrfMode::Permissive);
          },
          py::arg("ctrl"), py::arg("plant"), py::arg("omega"), py::arg("n"),
          py::arg("strict") = true);

    py::class_<HarmonicResponse>(m, "HarmonicResponse")
        .def_readonly("omega_grid", &HarmonicResponse::omega_grid)
        .def_readonly("n_max", &HarmonicResponse::n_max)
        .def("at", &HarmonicResponse::at, py::arg("grid_index"), py::arg("n"));
    m.def("sweep",
          [](const ResetController& c, py::object plant, const std::vector<double>& grid,
             int n_max, bool strict) {
              const Plant* p = plant.is_none() ? nullptr : plant.cast<Plant*>();
              return sweep(c, p, grid, n_max, strict ? FrfMode::Strict : FrfMode::Permissive);
          },
          py::arg("ctrl"), py::arg("plant"), py::arg("omega_grid"), py::arg("n_max"),
          py::arg("strict") = true);

    py::enum_<Channel>(m, "Channel")
        .value("reference", Channel::Reference)
        .value("disturbance", Channel::Disturbance)
        .value("noise", Channel::Noise);
    py::enum_<Signal>(m, "Signal")
        .value("error", Signal::Error)
        .value("output", Signal::Output)
        .value("control", Signal::Control);

    py::class_<ClosedLoopPrediction>(m, "ClosedLoopPrediction")
        .def_readonly("channel", &ClosedLoopPrediction::channel)
        .def_readonly("omega", &ClosedLoopPrediction::omega)
        .def_readonly("n_max", &ClosedLoopPrediction::n_max)
        .def("at", &ClosedLoopPrediction::at, py::arg("signal"), py::arg("n"));
    py::class_<NormReport>(m, "NormReport")
        .def_readonly("l2", &NormReport::l2)
        .def_readonly("linf", &NormReport::linf);
    m.def("predict",
          [](const ResetController& c, const Plant& p, double omega, int n_max, Channel ch,
             bool strict) {
              return predict(c, p, omega, n_max, ch,
                             strict ? FrfMode::Strict : FrfMode::Permissive);
          },
          py::arg("ctrl"), py::arg("plant"), py::arg("omega"), py::arg("n_max"),
          py::arg("channel"), py::arg("strict") = true);
    m.def("reconstruct_time", &reconstruct_time, py::arg("prediction"), py::arg("signal"),
          py::arg("samples_per_period"));
    m.def("norms", &norms, py::arg("prediction"), py::arg("signal"),
          py::arg("samples_per_period") = 10000);
    m.def("per", &per, py::arg("measured"), py::arg("predicted"));

    py::class_<ExogenousInput>(m, "ExogenousInput")
        .def(py::init([](Channel ch, double omega, double amplitude, double phase) {
                 return ExogenousInput{ch, omega, amplitude, phase};
             }),
             py::arg("channel"), py::arg("omega"), py::arg("amplitude") = 1.0,
             py::arg("phase") = 0.0);
    py::class_<SuperposeReport>(m, "SuperposeReport")
        .def_readonly("dominance_ok", &SuperposeReport::dominance_ok)
        .def_readonly("dominant_index", &SuperposeReport::dominant_index)
        .def_readonly("first_harmonic_error", &SuperposeReport::first_harmonic_error)
        .def_readonly("peak_error", &SuperposeReport::peak_error)
        .def_readonly("through_reset", &SuperposeReport::through_reset)
        .def_readonly("combined_linf_e", &SuperposeReport::combined_linf_e)
        .def_readonly("violations", &SuperposeReport::violations);
    m.def("superpose", &superpose, py::arg("ctrl"), py::arg("plant"), py::arg("inputs"),
          py::arg("n_max"), py::arg("dominance_threshold") = 0.5);

    py::class_<HybridSystem>(m, "HybridSystem").def_readonly("A", &HybridSystem::A);
    m.def("assemble", &assemble, py::arg("ctrl"), py::arg("plant"));
    m.def("assemble_open_loop", &assemble_open_loop, py::arg("ctrl"));
    py::class_<SineInput>(m, "SineInput")
        .def(py::init([](Channel ch, double omega, double amplitude, double phase) {
                 return SineInput{ch, omega, amplitude, phase};
             }),
             py::arg("channel"), py::arg("omega"), py::arg("amplitude") = 1.0,
             py::arg("phase") = 0.0);
    py::class_<HybridTrajectory>(m, "HybridTrajectory")
        .def_readonly("dt", &HybridTrajectory::dt)
        .def_readonly("t", &HybridTrajectory::t)
        .def_readonly("e", &HybridTrajectory::e)
        .def_readonly("y", &HybridTrajectory::y)
        .def_readonly("u", &HybridTrajectory::u)
        .def_readonly("reset_times", &HybridTrajectory::reset_times)
        .def_readonly("diverged", &HybridTrajectory::diverged);
    py::class_<SteadyStateRecord>(m, "SteadyStateRecord")
        .def_readonly("omega", &SteadyStateRecord::omega)
        .def_readonly("dt", &SteadyStateRecord::dt)
        .def_readonly("e", &SteadyStateRecord::e)
        .def_readonly("y", &SteadyStateRecord::y)
        .def_readonly("u", &SteadyStateRecord::u)
        .def_readonly("resets_per_period", &SteadyStateRecord::resets_per_period)
        .def_readonly("converged", &SteadyStateRecord::converged)
        .def_readonly("residual", &SteadyStateRecord::residual);
    m.def("simulate", &simulate, py::arg("system"), py::arg("input"), py::arg("dt"),
          py::arg("duration"));
    m.def("steady_state", &steady_state, py::arg("trajectory"), py::arg("omega"));
    m.def("run_to_steady_state",
          [](const HybridSystem& sys, const SineInput& in, double dt_target, int min_periods,
             int max_periods, double tol) {
              SteadyStateOptions o;
              o.dt_target = dt_target;
              o.min_periods = min_periods;
              o.max_periods = max_periods;
              o.tol = tol;
              return run_to_steady_state(sys, in, o);
          },
          py::arg("system"), py::arg("input"), py::arg("dt_target") = 1e-5,
          py::arg("min_periods") = 10, py::arg("max_periods") = 400, py::arg("tol") = 1e-6);
    py::class_<HarmonicMeasurement>(m, "HarmonicMeasurement")
        .def_readonly("e", &HarmonicMeasurement::e)
        .def_readonly("y", &HarmonicMeasurement::y)
        .def_readonly("u", &HarmonicMeasurement::u);
    m.def("fft_harmonics", &fft_harmonics, py::arg("record"), py::arg("omega"), py::arg("n_max"));
    m.def("measure_norms", &measure_norms, py::arg("record"), py::arg("signal"));

    py::class_<StabilityCertificate> cert(m, "StabilityCertificate");
    py::enum_<StabilityCertificate::Verdict>(cert, "Verdict")
        .value("feasible", StabilityCertificate::Verdict::Feasible)
        .value("unknown", StabilityCertificate::Verdict::Unknown)
        .value("prereq_failed", StabilityCertificate::Verdict::PrereqFailed);
    cert.def_readonly("verdict", &StabilityCertificate::verdict)
        .def_readonly("P_r", &StabilityCertificate::P_r)
        .def_readonly("beta", &StabilityCertificate::beta)
        .def_readonly("spr_margin", &StabilityCertificate::spr_margin)
        .def_readonly("reset_margin", &StabilityCertificate::reset_margin)
        .def_readonly("diagnostics", &StabilityCertificate::diagnostics);
    m.def("certify", &certify, py::arg("ctrl"), py::arg("plant"));

    m.def("hz_to_radps", &hz_to_radps, py::arg("f_hz"));
    m.def("radps_to_hz", &radps_to_hz, py::arg("omega"));
    m.def("matrix_exp", &matrix_exp, py::arg("m"));
    m.def("is_hurwitz", &is_hurwitz, py::arg("a"), py::arg("tol") = 1e-10);
    m.def("is_schur", &is_schur, py::arg("m"), py::arg("tol") = 1e-10);
    m.def("series", &series, py::arg("a"), py::arg("b"));
}
