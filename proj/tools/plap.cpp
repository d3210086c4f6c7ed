// Command-line driver: solve a multipole p-Laplace configuration on the
// truncated grid, run the requested diagnostics, and serialize the results.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plap/io.hpp"
#include "plap/presets.hpp"

namespace {

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational p-Laplace multipole solver on a truncated grid"};

    std::string preset, mode = "charge", radii_csv, levels_csv, diag_csv;
    std::string out_field, out_report, out_plot;
    double p = 0.0, tol = 1e-6;
    int half_width = 4, refinement = 4;
    long max_iters = 200000;
    long seed = 0;
    bool no_diag = false;
    std::vector<std::string> pole_args;

    auto* preset_opt = app.add_option("--preset", preset, "Figure preset: fig1, fig3 or fig4");
    auto* p_opt = app.add_option("--p", p, "Exponent p > 2");
    auto* hw_opt = app.add_option("--half-width", half_width, "Domain half-width l (integer >= 2)");
    auto* k_opt = app.add_option("--k", refinement, "Refinement k, spacing h = 1/k");
    auto* mode_opt = app.add_option("--mode", mode, "Pole mode: charge | value");
    auto* pole_opt = app.add_option("--pole", pole_args,
                                    "Pole as X,Y,C (C = charge or pinned value); repeatable");
    app.add_option("--tol", tol, "Stopping tolerance on the gradient max-norm");
    app.add_option("--max-iters", max_iters, "Iteration cap");
    app.add_option("--radii", radii_csv, "Diagnostic ring radii, comma-separated");
    app.add_option("--levels", levels_csv, "Level-set thresholds, comma-separated");
    app.add_option("--diag", diag_csv,
                   "Diagnostics to run (comma list of flatness,oscillation,tail,"
                   "antisymmetry,bounds,levelsets,poleexponents); default all");
    app.add_flag("--no-diag", no_diag, "Skip all diagnostics");
    app.add_option("--out-field", out_field, "Field CSV output path");
    app.add_option("--out-report", out_report, "Diagnostics report (JSON) output path");
    app.add_option("--out-plot", out_plot, "Gnuplot matrix output path");
    app.add_option("--seed", seed, "Seed for randomized diagnostic vectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        plap::SolverConfig config;
        nlohmann::json overrides = nlohmann::json::array();

        if (preset_opt->count() > 0) {
            config = plap::make_preset(preset,
                                       hw_opt->count() ? half_width : 4,
                                       k_opt->count() ? refinement : 4,
                                       p_opt->count() ? p : 0.0);
            for (const CLI::Option* opt : {p_opt, hw_opt, k_opt})
                if (opt->count()) overrides.push_back(opt->get_name());
            if (mode_opt->count() || pole_opt->count()) {
                std::cerr << "error: --mode/--pole cannot be combined with --preset\n";
                return 2;
            }
        } else {
            if (pole_args.empty()) {
                std::cerr << "error: either --preset or at least one --pole is required\n";
                return 2;
            }
            if (!p_opt->count()) {
                std::cerr << "error: --p is required without a preset\n";
                return 2;
            }
            plap::PoleMode pole_mode;
            if (mode == "charge")
                pole_mode = plap::PoleMode::Charge;
            else if (mode == "value")
                pole_mode = plap::PoleMode::PinnedValue;
            else {
                std::cerr << "error: --mode must be 'charge' or 'value', got '" << mode << "'\n";
                return 2;
            }
            config.grid = plap::GridSpec(half_width, refinement);
            std::vector<std::pair<std::pair<double, double>, double>> poles;
            for (const std::string& arg : pole_args) {
                const auto parts = parse_list(arg);
                if (parts.size() != 3) {
                    std::cerr << "error: --pole expects X,Y,C, got '" << arg << "'\n";
                    return 2;
                }
                poles.push_back({{parts[0], parts[1]}, parts[2]});
            }
            config.poles = plap::PoleSet(config.grid, pole_mode, poles, p);
        }
        config.tolerance = tol;
        config.max_iterations = max_iters;

        const plap::PoleSet& poles = *config.poles;

        plap::Solution sol;
        try {
            sol = plap::solve(config);
        } catch (const plap::divergence_error& e) {
            std::cerr << "solver diverged: " << e.what() << "\n";
            return 4;
        }
        std::fprintf(stderr, "%s after %ld iterations, residual %.3e, energy %.9g\n",
                     sol.converged ? "converged" : "NOT converged", sol.iterations,
                     sol.final_residual, sol.energy);
        if (!sol.converged) return 4;

        // diagnostics selection
        plap::DiagnosticsSelection sel;
        if (no_diag) {
            sel = plap::DiagnosticsSelection::none();
        } else if (!diag_csv.empty()) {
            sel = plap::DiagnosticsSelection::none();
            std::istringstream in(diag_csv);
            std::string name;
            while (std::getline(in, name, ',')) {
                if (name == "flatness") sel.flatness = true;
                else if (name == "oscillation") sel.oscillation = true;
                else if (name == "tail") sel.tail_energy = true;
                else if (name == "antisymmetry") sel.antisymmetry = true;
                else if (name == "bounds") sel.bounds = true;
                else if (name == "levelsets") sel.level_sets = true;
                else if (name == "poleexponents") sel.pole_exponents = true;
                else {
                    std::cerr << "error: unknown diagnostic '" << name << "'\n";
                    return 2;
                }
            }
        }

        std::vector<double> radii =
            radii_csv.empty() ? std::vector<double>{1.5, 2.0, 2.5, 3.0} : parse_list(radii_csv);
        std::vector<double> levels;
        if (!levels_csv.empty()) {
            levels = parse_list(levels_csv);
        } else if (poles.size() == 2) {
            // halfway between the mid-value and the larger pole value
            double u0, u1;
            if (poles.mode() == plap::PoleMode::PinnedValue) {
                u0 = poles.poles()[0].weight;
                u1 = poles.poles()[1].weight;
            } else {
                u0 = sol.field.at(poles.poles()[0].node.first, poles.poles()[0].node.second);
                u1 = sol.field.at(poles.poles()[1].node.first, poles.poles()[1].node.second);
            }
            const double mid = 0.5 * (u0 + u1);
            levels.push_back(mid + 0.5 * (std::max(u0, u1) - mid));
        }

        plap::DiagnosticsReport report;
        if (sel.any())
            report = plap::run_diagnostics(sol, poles, radii, sel, levels, config.tolerance);

        nlohmann::json echo;
        echo["preset"] = preset.empty() ? "none" : preset;
        echo["overrides"] = overrides;
        echo["half_width"] = config.grid.half_width;
        echo["k"] = config.grid.refinement;
        echo["p"] = poles.exponent();
        echo["mode"] = poles.mode() == plap::PoleMode::Charge ? "charge" : "value";
        nlohmann::json jp = nlohmann::json::array();
        for (const auto& pole : poles.poles())
            jp.push_back({pole.position.first, pole.position.second, pole.weight});
        echo["poles"] = jp;
        echo["tol"] = config.tolerance;
        echo["max_iters"] = config.max_iterations;
        echo["radii"] = radii;
        echo["levels"] = levels;
        echo["seed"] = seed;
        echo["converged"] = sol.converged;
        echo["iterations"] = sol.iterations;
        echo["final_residual"] = sol.final_residual;
        echo["energy"] = sol.energy;
        echo["anchor_node"] = {sol.anchor_node.first, sol.anchor_node.second};

        try {
            if (!out_field.empty()) plap::write_field(sol, poles, out_field);
            if (!out_plot.empty()) plap::write_plot_matrix(sol, out_plot);
            if (!out_report.empty()) plap::write_report(report, echo, out_report);
        } catch (const plap::io_error& e) {
            std::cerr << "I/O error: " << e.what() << "\n";
            return 3;
        }

        if (sel.any() && !report.all_selected_pass()) return 1;
        return 0;
    } catch (const plap::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const plap::off_lattice_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
