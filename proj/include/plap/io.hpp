#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "plap/report.hpp"

namespace plap {

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* mode_name(PoleMode mode) {
    return mode == PoleMode::Charge ? "charge" : "value";
}

}  // namespace detail

/// CSV field dump: '#'-prefixed header lines, then M rows of M values. Row j
/// corresponds to y = -l+(j-1)h ascending, column i to x ascending. 17
/// significant digits round-trip doubles exactly.
inline void write_field(const Solution& sol, const PoleSet& poles, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    const GridSpec& spec = sol.field.spec();
    const int m = spec.side_count();
    out << "# plap field v1\n";
    out << "# half_width=" << spec.half_width << " k=" << spec.refinement
        << " M=" << m << " p=" << detail::fmt17(poles.exponent())
        << " mode=" << detail::mode_name(poles.mode()) << "\n";
    out << "# poles:";
    for (const auto& pole : poles.poles())
        out << " (" << detail::fmt17(pole.position.first) << ","
            << detail::fmt17(pole.position.second) << ")=" << detail::fmt17(pole.weight);
    out << "\n";
    out << "# converged=" << (sol.converged ? 1 : 0)
        << " residual=" << detail::fmt17(sol.final_residual)
        << " iterations=" << sol.iterations << "\n";
    out << "# corner (M,M) filled with mean of (M-1,M) and (M,M-1)\n";
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= m; ++i) {
            if (i > 1) out << ",";
            out << detail::fmt17(sol.field.at(i, j));
        }
        out << "\n";
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

/// Reads back the data section of a field CSV written by write_field.
inline ScalarField read_field(const GridSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    ScalarField field(spec);
    const int m = spec.side_count();
    std::string line;
    int j = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++j;
        if (j > m) throw io_error("too many data rows in '" + path + "'");
        std::istringstream row(line);
        std::string cell;
        for (int i = 1; i <= m; ++i) {
            if (!std::getline(row, cell, ','))
                throw io_error("short row " + std::to_string(j) + " in '" + path + "'");
            field.at(i, j) = std::stod(cell);
        }
    }
    if (j != m) throw io_error("expected " + std::to_string(m) + " data rows, got " +
                               std::to_string(j));
    return field;
}

/// Gnuplot nonuniform-matrix file: first row holds the column count and the x
/// coordinates, each following row starts with its y coordinate.
inline void write_plot_matrix(const Solution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    const GridSpec& spec = sol.field.spec();
    const int m = spec.side_count();
    out << m;
    for (int i = 1; i <= m; ++i) out << " " << detail::fmt17(node_coords(spec, i, 1).first);
    out << "\n";
    for (int j = 1; j <= m; ++j) {
        out << detail::fmt17(node_coords(spec, 1, j).second);
        for (int i = 1; i <= m; ++i) out << " " << detail::fmt17(sol.field.at(i, j));
        out << "\n";
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

namespace detail {

inline nlohmann::json verdict_json(const Verdict& v) {
    return {{"status", v.status}, {"message", v.message}};
}

}  // namespace detail

/// Structured report, schema "plap-report-1": one top-level key per
/// diagnostic, raw samples plus verdict, and an echo of the resolved config.
inline nlohmann::json report_to_json(const DiagnosticsReport& report,
                                     const nlohmann::json& config_echo) {
    nlohmann::json j;
    j["schema"] = "plap-report-1";
    j["config"] = config_echo;

    {
        nlohmann::json d = detail::verdict_json(report.flatness_verdict);
        if (report.flatness) {
            d["boundary_mean"] = report.flatness->boundary_mean;
            if (report.flatness->has_predicted) {
                d["predicted_limit"] = report.flatness->predicted;
                d["deviation"] = report.flatness->deviation;
            }
        }
        j["flatness"] = d;
    }
    {
        nlohmann::json d = detail::verdict_json(report.oscillation_verdict);
        if (report.rings) {
            nlohmann::json rings = nlohmann::json::array();
            for (const auto& s : report.rings->stats)
                rings.push_back({{"r", s.radius},
                                 {"min", s.min},
                                 {"max", s.max},
                                 {"mean", s.mean},
                                 {"oscillation", s.oscillation()},
                                 {"samples", s.sample_count}});
            d["rings"] = rings;
            d["excluded_radii"] = report.rings->excluded_radii;
            d["comparison_trend_ok"] = report.rings->comparison_trend_ok;
            d["trend_slack"] = report.rings->trend_slack;
        }
        if (report.oscillation) {
            d["mu_hat"] = report.oscillation->mu_hat;
            d["alpha_hat"] = report.oscillation->alpha_hat;
            d["loglog_slope"] = report.oscillation->loglog_slope;
        }
        j["oscillation"] = d;
    }
    {
        nlohmann::json d = detail::verdict_json(report.tail_verdict);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& e : report.tail)
            rows.push_back({{"r", e.r},
                            {"F", e.tail},
                            {"RHS", e.rhs},
                            {"low_confidence", e.low_confidence}});
        d["samples"] = rows;
        d["note"] = "exterior sup/inf quantities proxied by ring bands; integrals truncated "
                    "at the inscribed circle";
        j["tail_energy"] = d;
    }
    {
        nlohmann::json d = detail::verdict_json(report.antisymmetry_verdict);
        if (report.antisymmetry_residual) d["residual"] = *report.antisymmetry_residual;
        j["antisymmetry"] = d;
    }
    {
        nlohmann::json d = detail::verdict_json(report.bounds_verdict);
        if (report.bounds) {
            d["field_min"] = report.bounds->field_min;
            d["field_max"] = report.bounds->field_max;
            d["a_min"] = report.bounds->a_min;
            d["a_max"] = report.bounds->a_max;
            d["strict_off_poles"] = report.bounds->strict_off_poles;
        }
        j["bounds"] = d;
    }
    {
        nlohmann::json d = detail::verdict_json(report.level_set_verdict);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& ls : report.level_sets)
            rows.push_back({{"t", ls.t},
                            {"score", ls.score},
                            {"set_size", ls.set_size},
                            {"hull_lattice_points", ls.hull_lattice_points},
                            {"compact", ls.compact},
                            {"pass", ls.pass}});
        d["levels"] = rows;
        j["level_sets"] = d;
    }
    {
        nlohmann::json d = detail::verdict_json(report.pole_exponent_verdict);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& fit : report.pole_exponents) {
            nlohmann::json samples = nlohmann::json::array();
            for (const auto& [rho, g] : fit.samples) samples.push_back({rho, g});
            rows.push_back(
                {{"fitted", fit.fitted}, {"predicted", fit.predicted}, {"samples", samples}});
        }
        d["poles"] = rows;
        j["pole_exponents"] = d;
    }
    return j;
}

inline void write_report(const DiagnosticsReport& report, const nlohmann::json& config_echo,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << report_to_json(report, config_echo).dump(2) << "\n";
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace plap
