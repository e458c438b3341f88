#include "vblob/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vblob/errors.hpp"

namespace vblob::io {
namespace {

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ParameterError("cannot create output directory " + dir.string());
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) ensure_dir(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const Csv& csv) {
    auto out = open_out(path);
    out << "# schema: " << csv.schema << " v1\n";
    for (std::size_t c = 0; c < csv.columns.size(); ++c)
        out << csv.columns[c] << (c + 1 < csv.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : csv.rows) {
        if (row.size() != csv.columns.size())
            throw ParameterError("csv row width does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

Csv read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read " + path.string());
    Csv csv;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# schema: ", 0) != 0)
        throw ParameterError("missing schema line in " + path.string());
    const std::string tail = line.substr(10);
    csv.schema = tail.substr(0, tail.find(' '));
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    if (std::getline(in, line)) csv.columns = split(line);
    while (std::getline(in, line))
        if (!line.empty()) csv.rows.push_back(split(line));
    return csv;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    open_out(path) << text;
}

std::string svg_polyline(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& x_label, const std::string& y_label,
                         bool log_log) {
    if (x.size() != y.size() || x.size() < 2)
        throw ParameterError("svg polyline needs matched series of length >= 2");
    std::vector<double> px = x, py = y;
    if (log_log)
        for (std::size_t k = 0; k < px.size(); ++k) {
            if (!(px[k] > 0.0) || !(py[k] > 0.0))
                throw ParameterError("log-log plot needs positive data");
            px[k] = std::log10(px[k]);
            py[k] = std::log10(py[k]);
        }
    auto range = [](const std::vector<double>& v) {
        double lo = v[0], hi = v[0];
        for (const double a : v) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        if (hi == lo) hi = lo + 1.0;
        return std::pair{lo, hi};
    };
    const auto [x0, x1] = range(px);
    const auto [y0, y1] = range(py);
    const double w = 480, h = 360, m = 40;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (std::size_t k = 0; k < px.size(); ++k) {
        const double sx = m + (px[k] - x0) / (x1 - x0) * (w - 2 * m);
        const double sy = h - m - (py[k] - y0) / (y1 - y0) * (h - 2 * m);
        svg << format_double(sx) << "," << format_double(sy) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" font-size=\"12\">" << x_label
        << "</text>\n";
    svg << "<text x=\"8\" y=\"16\" font-size=\"12\">" << y_label << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_convergence_report(const std::filesystem::path& dir,
                              const ConvergenceReport& rep) {
    ensure_dir(dir);
    Csv levels{"existence_levels", {"eps", "total_circulation"}, {}};
    for (std::size_t k = 0; k < rep.eps_levels.size(); ++k)
        levels.rows.push_back(
            {format_double(rep.eps_levels[k]), format_double(rep.circulations[k])});
    write_csv(dir / "levels.csv", levels);

    Csv pairs{"existence_pairs",
              {"eps_coarse", "eps_fine", "flow_distance", "omega_l1", "velocity_l1",
               "pushforward_l1"},
              {}};
    for (const auto& p : rep.pairs)
        pairs.rows.push_back({format_double(p.eps_coarse), format_double(p.eps_fine),
                              format_double(p.distances.flow),
                              format_double(p.distances.omega_l1),
                              format_double(p.distances.velocity_l1),
                              format_double(p.pushforward_l1)});
    write_csv(dir / "pairs.csv", pairs);

    std::string summary = std::string("fine_levels_monotone,") +
                          (rep.fine_levels_monotone ? "1" : "0") + "\n";
    for (const auto& w : rep.warnings) summary += "warning," + w + "\n";
    write_text(dir / "summary.txt", summary);
}

void write_stability_report(const std::filesystem::path& dir, const StabilityReport& rep) {
    ensure_dir(dir);
    Csv levels{"stability_levels",
               {"level_param", "flow_to_finest", "omega_l1_to_finest",
                "velocity_l1_to_finest", "omega_l1_consecutive"},
               {}};
    for (const auto& l : rep.levels)
        levels.rows.push_back(
            {format_double(l.level_param), format_double(l.to_finest.flow),
             format_double(l.to_finest.omega_l1), format_double(l.to_finest.velocity_l1),
             format_double(l.omega_l1_consecutive)});
    write_csv(dir / "levels.csv", levels);

    Csv pair{"stability_pairings", {"level_param", "dictionary_index", "pairing"}, {}};
    for (const auto& l : rep.levels)
        for (std::size_t i = 0; i < l.pairings.size(); ++i)
            pair.rows.push_back({format_double(l.level_param), std::to_string(i),
                                 format_double(l.pairings[i])});
    write_csv(dir / "pairings.csv", pair);

    std::string summary;
    summary += std::string("mode,") +
               (rep.mode == Perturbation::strong_l1 ? "strong_l1" : "weak_oscillatory") +
               "\n";
    summary += "flow_decreasing," + std::string(rep.flow_decreasing ? "1" : "0") + "\n";
    summary +=
        "velocity_decreasing," + std::string(rep.velocity_decreasing ? "1" : "0") + "\n";
    summary += "omega_decreasing," + std::string(rep.omega_decreasing ? "1" : "0") + "\n";
    summary += "omega_l1_scale," + format_double(rep.omega_l1_scale) + "\n";
    summary +=
        "min_consecutive_omega_l1," + format_double(rep.min_consecutive_omega_l1) + "\n";
    summary += "equi_integrability_bound," + format_double(rep.equi_integrability_bound) +
               "\n";
    write_text(dir / "summary.txt", summary);
}

void write_slope_report(const std::filesystem::path& dir, const SlopeReport& rep,
                        bool with_svg) {
    ensure_dir(dir);
    Csv values{"kernel_scaling_values", {"p", "h", "value", "quadrature_error"}, {}};
    Csv slopes{"kernel_scaling_slopes", {"p", "alpha_target", "slope", "inconclusive"}, {}};
    for (const auto& e : rep.entries) {
        for (std::size_t k = 0; k < e.h.size(); ++k)
            values.rows.push_back({format_double(e.p), format_double(e.h[k]),
                                   format_double(e.values[k]),
                                   format_double(e.quadrature_errors[k])});
        slopes.rows.push_back({format_double(e.p), format_double(e.alpha_target),
                               format_double(e.slope), e.inconclusive ? "1" : "0"});
        if (with_svg)
            write_text(dir / ("slope_p" + format_double(e.p) + ".svg"),
                       svg_polyline(e.h, e.values, "h", "translation norm", true));
    }
    write_csv(dir / "values.csv", values);
    write_csv(dir / "slopes.csv", slopes);
}

void write_probe_report(const std::filesystem::path& dir, const ProbeReport& rep) {
    ensure_dir(dir);
    Csv dist{"probe_distances", {"gamma", "sup_flow_distance", "ratio"}, {}};
    for (std::size_t k = 0; k < rep.gammas.size(); ++k)
        dist.rows.push_back({format_double(rep.gammas[k]),
                             format_double(rep.sup_distances[k]),
                             rep.degenerate ? "degenerate" : format_double(rep.ratios[k])});
    write_csv(dir / "distances.csv", dist);

    Csv dv{"probe_velocity_gap", {"lambda", "dv_l1"}, {}};
    for (std::size_t k = 0; k < rep.lambdas.size(); ++k)
        dv.rows.push_back({format_double(rep.lambdas[k]), format_double(rep.dv_l1[k])});
    write_csv(dir / "velocity_gap.csv", dv);
}

void write_residual_reports(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, ResidualReport>>& reports) {
    Csv csv{"weak_residuals",
            {"formulation", "residual", "time_term", "interaction_term", "initial_term",
             "quadrature_error_estimate"},
            {}};
    for (const auto& [name, r] : reports)
        csv.rows.push_back({name, format_double(r.residual), format_double(r.time_term),
                            format_double(r.interaction_term),
                            format_double(r.initial_term),
                            format_double(r.quadrature_error_estimate)});
    write_csv(path, csv);
}

void write_run_snapshots(const std::filesystem::path& dir, const FlowMap& run,
                         std::size_t every) {
    ensure_dir(dir);
    if (every == 0) every = 1;
    for (std::size_t k = 0; k < run.times.size(); k += every) {
        Csv snap{"run_snapshot", {"x1", "x2"}, {}};
        for (const auto& p : run.states[k])
            snap.rows.push_back({format_double(p.x1), format_double(p.x2)});
        write_csv(dir / ("labels_t" + format_double(run.times[k]) + ".csv"), snap);
    }
}

}  // namespace vblob::io
