#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plap/diagnostics.hpp"

namespace plap {

struct DiagnosticsSelection {
    bool flatness = true;
    bool oscillation = true;
    bool tail_energy = true;
    bool antisymmetry = true;
    bool bounds = true;
    bool level_sets = true;
    bool pole_exponents = true;

    static DiagnosticsSelection none() {
        DiagnosticsSelection s;
        s.flatness = s.oscillation = s.tail_energy = s.antisymmetry = false;
        s.bounds = s.level_sets = s.pole_exponents = false;
        return s;
    }
    bool any() const {
        return flatness || oscillation || tail_energy || antisymmetry || bounds ||
               level_sets || pole_exponents;
    }
};

// verdict thresholds for the figure-scale runs
namespace thresholds {
inline constexpr double flatness_deviation = 0.05;
inline constexpr double tail_monotonicity_slack = 1e-2;   // relative
inline constexpr double antisymmetry_h_factor = 5.0;      // residual <= 5h
inline constexpr double level_set_score = 0.98;
inline constexpr double pole_exponent_window = 0.15;
}  // namespace thresholds

struct Verdict {
    std::string status = "SKIPPED";  // PASS | FAIL | SKIPPED
    std::string message;
};

struct DiagnosticsReport {
    Verdict flatness_verdict;
    std::optional<FlatnessResult> flatness;

    Verdict oscillation_verdict;
    std::optional<RingStatsResult> rings;
    std::optional<OscillationFit> oscillation;

    Verdict tail_verdict;
    std::vector<TailEnergyEntry> tail;

    Verdict antisymmetry_verdict;
    std::optional<double> antisymmetry_residual;

    Verdict bounds_verdict;
    std::optional<BoundsResult> bounds;

    Verdict level_set_verdict;
    std::vector<LevelSetResult> level_sets;

    Verdict pole_exponent_verdict;
    std::vector<PoleExponentFit> pole_exponents;

    bool all_selected_pass() const {
        for (const Verdict* v : {&flatness_verdict, &oscillation_verdict, &tail_verdict,
                                 &antisymmetry_verdict, &bounds_verdict, &level_set_verdict,
                                 &pole_exponent_verdict})
            if (v->status == "FAIL") return false;
        return true;
    }
};

/// Runs the selected diagnostics on a converged solution. Diagnostics whose
/// preconditions are not met come back SKIPPED with the refusal message;
/// quantitative checks come back PASS or FAIL against the pinned thresholds.
inline DiagnosticsReport run_diagnostics(const Solution& sol, const PoleSet& poles,
                                         const std::vector<double>& radii,
                                         const DiagnosticsSelection& sel = {},
                                         const std::vector<double>& levels = {},
                                         double tolerance = 1e-6) {
    DiagnosticsReport report;
    const double h = poles.spec().spacing();

    if (sel.flatness) {
        try {
            report.flatness = flatness_check(sol, poles);
            if (!report.flatness->has_predicted) {
                report.flatness_verdict = {"SKIPPED", "predicted limit defined only for dipoles"};
            } else if (report.flatness->deviation < thresholds::flatness_deviation) {
                report.flatness_verdict = {"PASS", "deviation " +
                                           std::to_string(report.flatness->deviation)};
            } else {
                report.flatness_verdict = {"FAIL", "deviation " +
                                           std::to_string(report.flatness->deviation)};
            }
        } catch (const diagnostic_error& e) {
            report.flatness_verdict = {"SKIPPED", e.what()};
        }
    }

    if (sel.oscillation) {
        try {
            report.rings = ring_stats(sol, radii);
            report.oscillation = oscillation_decay_fit(report.rings->stats);
            report.oscillation_verdict =
                report.oscillation->pass
                    ? Verdict{"PASS", "mu_hat " + std::to_string(report.oscillation->mu_hat)}
                    : Verdict{"FAIL", "mu_hat " + std::to_string(report.oscillation->mu_hat)};
        } catch (const diagnostic_error& e) {
            report.oscillation_verdict = {"SKIPPED", e.what()};
        }
    }

    if (sel.tail_energy) {
        try {
            report.tail = tail_energy(sol, poles, radii);
            bool monotone = true;
            for (size_t n = 1; n < report.tail.size(); ++n)
                if (report.tail[n].tail > report.tail[n - 1].tail *
                                             (1.0 + thresholds::tail_monotonicity_slack))
                    monotone = false;
            report.tail_verdict = monotone ? Verdict{"PASS", "F(r) nonincreasing"}
                                           : Verdict{"FAIL", "F(r) not nonincreasing"};
        } catch (const diagnostic_error& e) {
            report.tail_verdict = {"SKIPPED", e.what()};
        }
    }

    if (sel.antisymmetry) {
        try {
            report.antisymmetry_residual = antisymmetry_residual(sol, poles);
            const double bound = thresholds::antisymmetry_h_factor * h;
            report.antisymmetry_verdict =
                *report.antisymmetry_residual <= bound
                    ? Verdict{"PASS", "residual " + std::to_string(*report.antisymmetry_residual)}
                    : Verdict{"FAIL", "residual " + std::to_string(*report.antisymmetry_residual) +
                                          " > " + std::to_string(bound)};
        } catch (const diagnostic_error& e) {
            report.antisymmetry_verdict = {"SKIPPED", e.what()};
        }
    }

    if (sel.bounds) {
        report.bounds = bounds_check(sol, poles, tolerance);
        report.bounds_verdict = report.bounds->pass
                                    ? Verdict{"PASS", "field within pole values"}
                                    : Verdict{"FAIL", "field escapes pole value range"};
    }

    if (sel.level_sets) {
        bool any_fail = false, any_pass = false;
        std::string message;
        for (double t : levels) {
            try {
                report.level_sets.push_back(level_set_convexity(sol, poles, t));
                (report.level_sets.back().pass ? any_pass : any_fail) = true;
            } catch (const diagnostic_error& e) {
                message = e.what();
            }
        }
        if (any_fail)
            report.level_set_verdict = {"FAIL", "convexity score below threshold"};
        else if (any_pass)
            report.level_set_verdict = {"PASS", "all levels convex and compact"};
        else
            report.level_set_verdict = {"SKIPPED", message.empty() ? "no levels requested"
                                                                   : message};
    }

    if (sel.pole_exponents) {
        bool any_fail = false, any_pass = false;
        std::string message;
        for (size_t n = 0; n < poles.size(); ++n) {
            try {
                report.pole_exponents.push_back(pole_exponent_fit(sol, poles, n));
                const auto& fit = report.pole_exponents.back();
                (std::abs(fit.fitted - fit.predicted) <= thresholds::pole_exponent_window
                     ? any_pass
                     : any_fail) = true;
            } catch (const diagnostic_error& e) {
                message = e.what();
            }
        }
        if (any_fail)
            report.pole_exponent_verdict = {"FAIL", "fitted exponent outside window"};
        else if (any_pass)
            report.pole_exponent_verdict = {"PASS", "all fitted exponents in window"};
        else
            report.pole_exponent_verdict = {"SKIPPED", message};
    }

    return report;
}

}  // namespace plap
