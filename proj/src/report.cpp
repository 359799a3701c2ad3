#include "resetfreq/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace resetfreq {

std::string config_hash(const std::string& canonical_text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string csv_preamble(const std::string& hash) {
    return std::string("# resetfreq ") + kToolVersion + " config=" + hash + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string sweep_csv(const HarmonicResponse& r, bool db, const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash) << "omega_radps,n,mag,phase_rad\n";
    for (size_t i = 0; i < r.omega_grid.size(); ++i) {
        for (int n = 1; n <= r.n_max; n += 2) {
            const Complex v = r.at(static_cast<Eigen::Index>(i), n);
            const double mag = db ? 20.0 * std::log10(std::abs(v)) : std::abs(v);
            os << format_number(r.omega_grid[i]) << ',' << n << ',' << format_number(mag) << ','
               << format_number(std::arg(v)) << '\n';
        }
    }
    return os.str();
}

std::string prediction_csv(const std::vector<ClosedLoopPrediction>& preds,
                           const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash) << "omega_radps,channel,signal,n,mag,phase_rad\n";
    for (const auto& p : preds) {
        for (Signal s : {Signal::Error, Signal::Output, Signal::Control}) {
            for (int n = 1; n <= p.n_max; n += 2) {
                const Complex v = p.at(s, n);
                os << format_number(p.omega) << ',' << to_string(p.channel) << ',' << to_string(s)
                   << ',' << n << ',' << format_number(std::abs(v)) << ','
                   << format_number(std::arg(v)) << '\n';
            }
        }
    }
    return os.str();
}

std::string norm_csv(const std::vector<NormRow>& rows, const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash) << "omega_radps,channel,signal,l2,linf\n";
    for (const auto& r : rows) {
        os << format_number(r.omega) << ',' << to_string(r.channel) << ',' << to_string(r.signal)
           << ',' << format_number(r.report.l2) << ',' << format_number(r.report.linf) << '\n';
    }
    return os.str();
}

std::string per_csv(const std::vector<PerRow>& rows, const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash)
       << "omega_radps,channel,metric,per_df,per_hosidf,converged,resets_per_period,"
          "assumption2_violated,l3_dominates\n";
    for (const auto& r : rows) {
        os << format_number(r.omega) << ',' << to_string(r.channel) << ',' << r.metric << ','
           << format_number(r.per_df) << ',' << format_number(r.per_hosidf) << ','
           << (r.converged ? 1 : 0) << ',' << r.resets_per_period << ','
           << (r.assumption2_violated ? 1 : 0) << ',' << (r.l3_dominates ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string trajectory_csv(const HybridTrajectory& traj, const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash) << "t_s,e,y,u\n";
    for (size_t i = 0; i < traj.t.size(); ++i) {
        os << format_number(traj.t[i]) << ',' << format_number(traj.e[i]) << ','
           << format_number(traj.y[i]) << ',' << format_number(traj.u[i]) << '\n';
    }
    return os.str();
}

std::string events_csv(const std::vector<double>& reset_times, const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash) << "t_k_s\n";
    for (double t : reset_times) os << format_number(t) << '\n';
    return os.str();
}

std::string steady_csv(const SteadyStateRecord& rec, const std::string& hash) {
    std::ostringstream os;
    os << csv_preamble(hash) << "t_s,e,y,u\n";
    for (size_t i = 0; i < rec.e.size(); ++i) {
        os << format_number(rec.t_start + static_cast<double>(i) * rec.dt) << ','
           << format_number(rec.e[i]) << ',' << format_number(rec.y[i]) << ','
           << format_number(rec.u[i]) << '\n';
    }
    return os.str();
}

std::string certificate_report(const StabilityCertificate& cert) {
    std::ostringstream os;
    os << "verdict: " << to_string(cert.verdict) << '\n';
    if (cert.verdict == StabilityCertificate::Verdict::Feasible) {
        os << "P_r:";
        for (Eigen::Index i = 0; i < cert.P_r.rows(); ++i)
            for (Eigen::Index j = 0; j < cert.P_r.cols(); ++j)
                os << ' ' << format_number(cert.P_r(i, j));
        os << "\nbeta:";
        for (Eigen::Index i = 0; i < cert.beta.size(); ++i)
            os << ' ' << format_number(cert.beta(i));
        os << "\nspr_margin: " << format_number(cert.spr_margin)
           << "\nreset_margin: " << format_number(cert.reset_margin) << '\n';
    }
    os << "diagnostics: " << cert.diagnostics << '\n';
    return os.str();
}

std::string superpose_report(const SuperposeReport& rep,
                             const std::vector<ExogenousInput>& inputs) {
    std::ostringstream os;
    os << "inputs: " << inputs.size() << "\n";
    for (size_t i = 0; i < inputs.size(); ++i) {
        os << "  w" << i + 1 << ": channel=" << to_string(inputs[i].channel)
           << " freq_hz=" << format_number(radps_to_hz(inputs[i].omega))
           << " amplitude=" << format_number(inputs[i].amplitude)
           << " |E1|=" << format_number(rep.first_harmonic_error[i]);
        if (rep.dominance_ok)
            os << " path=" << (rep.through_reset[i] ? "reset-prediction" : "base-linear")
               << " peak_e=" << format_number(rep.peak_error[i]);
        os << '\n';
    }
    os << "dominance_threshold: " << format_number(rep.threshold) << '\n';
    if (rep.dominance_ok) {
        os << "dominant_input: w" << rep.dominant_index + 1 << '\n'
           << "combined_linf_e: " << format_number(rep.combined_linf_e)
           << "  (sum of per-input peaks; phase alignment not accounted for)\n";
    } else {
        os << "dominance violated; no combined prediction\n";
        for (const auto& [j, k] : rep.violations)
            os << "  |E1(w" << j + 1 << ")| > threshold * |E1(w" << k + 1 << ")|\n";
    }
    return os.str();
}

namespace {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> pts;  // (log10 x, y)
};

std::string panel(const std::vector<Series>& series, double x0, double y0, double w, double h,
                  const std::string& y_label) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.pts) {
            if (!std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) { xmin = 0; xmax = 1; }
    if (!(ymax > ymin)) { ymin -= 1; ymax += 1; }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto sx = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * w; };
    auto sy = [&](double y) { return y0 + h - (y - ymin) / (ymax - ymin) * h; };

    std::ostringstream os;
    os << "<rect x='" << x0 << "' y='" << y0 << "' width='" << w << "' height='" << h
       << "' fill='none' stroke='#888'/>\n";
    for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
        os << "<line x1='" << sx(d) << "' y1='" << y0 << "' x2='" << sx(d) << "' y2='" << y0 + h
           << "' stroke='#ddd'/>\n<text x='" << sx(d) << "' y='" << y0 + h + 14
           << "' font-size='10' text-anchor='middle'>1e" << d << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x='" << x0 - 6 << "' y='" << sy(y) + 3
           << "' font-size='10' text-anchor='end'>" << format_number(std::round(y * 100) / 100)
           << "</text>\n";
    }
    for (const auto& s : series) {
        os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.2' points='";
        for (auto [x, y] : s.pts)
            if (std::isfinite(y)) os << sx(x) << ',' << sy(y) << ' ';
        os << "'/>\n";
    }
    os << "<text x='" << x0 - 34 << "' y='" << y0 + h / 2 << "' font-size='11' text-anchor='middle'"
       << " transform='rotate(-90 " << x0 - 34 << ' ' << y0 + h / 2 << ")'>" << y_label
       << "</text>\n";
    return os.str();
}

}  // namespace

std::string bode_svg(const HarmonicResponse& r, const std::string& title) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::vector<Series> mag, phase;
    int ci = 0;
    for (int n = 1; n <= r.n_max; n += 2) {
        Series sm, sp;
        sm.label = sp.label = "n=" + std::to_string(n);
        sm.color = sp.color = colors[ci % 6];
        ++ci;
        bool any = false;
        for (size_t i = 0; i < r.omega_grid.size(); ++i) {
            const Complex v = r.at(static_cast<Eigen::Index>(i), n);
            const double m = std::abs(v);
            if (m > 0.0) any = true;
            sm.pts.emplace_back(std::log10(r.omega_grid[i]),
                                m > 0.0 ? 20.0 * std::log10(m) : NAN);
            sp.pts.emplace_back(std::log10(r.omega_grid[i]), std::arg(v) * 180.0 / kPi);
        }
        if (!any) continue;  // all-zero harmonics (gamma = 1) are suppressed
        mag.push_back(std::move(sm));
        phase.push_back(std::move(sp));
    }

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='640' height='560' "
          "font-family='sans-serif'>\n<text x='320' y='18' font-size='13' "
          "text-anchor='middle'>"
       << title << "</text>\n";
    os << panel(mag, 60, 30, 540, 220, "magnitude (dB)");
    os << panel(phase, 60, 300, 540, 220, "phase (deg)");
    double lx = 70;
    for (const auto& s : mag) {
        os << "<rect x='" << lx << "' y='540' width='10' height='3' fill='" << s.color
           << "'/><text x='" << lx + 14 << "' y='545' font-size='10'>" << s.label << "</text>\n";
        lx += 70;
    }
    os << "<text x='320' y='295' font-size='11' text-anchor='middle'>omega (rad/s)</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace resetfreq
