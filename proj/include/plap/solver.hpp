#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "plap/energy.hpp"

namespace plap {

struct SolverConfig {
    GridSpec grid;
    std::optional<PoleSet> poles;
    double tolerance = 1e-6;
    long max_iterations = 200000;
    // fallback step when the secant denominator degenerates; <0 means 1e-3 h^2
    double fallback_step = -1.0;
    bool record_history = false;

    double effective_fallback() const {
        const double h = grid.spacing();
        return fallback_step > 0.0 ? fallback_step : 1e-3 * h * h;
    }

    void validate() const {
        if (!poles) throw config_error("solver config has no pole set");
        if (poles->spec() != grid) throw config_error("pole set grid differs from solver grid");
        if (tolerance <= 0.0) throw config_error("tolerance must be positive");
        if (max_iterations < 1) throw config_error("max_iterations must be >= 1");
    }
};

struct Solution {
    ScalarField field;          // normalized (Charge mode) / constrained (PinnedValue)
    long iterations = 0;        // BB updates performed
    double final_residual = 0;  // max-norm of the gradient at the last iterate
    double energy = 0;
    std::vector<double> residual_history;  // per-iteration max-norm, if recorded
    std::vector<double> energy_history;    // per-iteration energy, if recorded
    bool converged = false;
    std::pair<int, int> anchor_node{0, 0};  // normalization anchor (Charge mode)
};

/// Log-superposition initial guess v^1. For the dipole with unit charges at
/// (0,+-1) this reduces to the regularized closed form
///   g(x,y) = -(1/4pi) log[(x^2+(y-1)^2+1e-2)/(x^2+(y+1)^2+1e-2)].
/// PinnedValue mode fits alpha*shape+beta to the pinned values by least
/// squares and then sets the pole nodes exactly. The zeroth iterate is v = 0.
inline ScalarField initial_guess(const GridSpec& grid, const PoleSet& poles) {
    constexpr double reg = 1e-2;
    const int m = grid.side_count();

    // shape charges: actual charges, or the mean-centered pinned values
    std::vector<double> shape(poles.size());
    if (poles.mode() == PoleMode::Charge) {
        for (size_t n = 0; n < poles.size(); ++n) shape[n] = poles.poles()[n].weight;
    } else {
        double mean = 0.0;
        for (const auto& pole : poles.poles()) mean += pole.weight;
        mean /= static_cast<double>(poles.size());
        for (size_t n = 0; n < poles.size(); ++n) shape[n] = poles.poles()[n].weight - mean;
    }

    ScalarField guess(grid, 0.0);
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= m; ++i) {
            const auto [x, y] = node_coords(grid, i, j);
            double v = 0.0;
            for (size_t n = 0; n < poles.size(); ++n) {
                const auto [px, py] = poles.poles()[n].position;
                const double d2 = (x - px) * (x - px) + (y - py) * (y - py);
                v += shape[n] / (2.0 * M_PI) * (-0.5) * std::log(d2 + reg);
            }
            guess.at(i, j) = v;
        }
    }

    if (poles.mode() == PoleMode::PinnedValue) {
        // least-squares alpha, beta for alpha*s(x_n)+beta ~ a_n
        const double count = static_cast<double>(poles.size());
        double s_mean = 0.0, a_mean = 0.0;
        for (const auto& pole : poles.poles()) {
            s_mean += guess.at(pole.node.first, pole.node.second);
            a_mean += pole.weight;
        }
        s_mean /= count;
        a_mean /= count;
        double num = 0.0, den = 0.0;
        for (const auto& pole : poles.poles()) {
            const double s = guess.at(pole.node.first, pole.node.second) - s_mean;
            num += s * (pole.weight - a_mean);
            den += s * s;
        }
        const double alpha = den > 1e-30 ? num / den : 0.0;
        const double beta = a_mean - alpha * s_mean;
        for (double& v : guess.values()) v = alpha * v + beta;
        for (const auto& pole : poles.poles())
            guess.at(pole.node.first, pole.node.second) = pole.weight;
    }
    return guess;
}

/// Two-point secant (Barzilai-Borwein) step length
///   tau = sum dv*dg / sum dg^2,
/// with a fallback when the denominator degenerates. Pinned nodes and (M,M)
/// contribute zero to both sums by construction of the projected gradient.
inline double bb_step(const ScalarField& current, const ScalarField& previous,
                      const ScalarField& grad_current, const ScalarField& grad_previous,
                      double fallback) {
    KahanSum num, den;
    const size_t count = current.values().size();
    for (size_t n = 0; n < count; ++n) {
        const double dg = grad_current.values()[n] - grad_previous.values()[n];
        const double dv = current.values()[n] - previous.values()[n];
        num.add(dv * dg);
        den.add(dg * dg);
    }
    const double scale = 1.0 + std::max(grad_current.max_abs(), grad_previous.max_abs());
    if (den.value() < 1e-30 * scale * scale) return fallback;
    return num.value() / den.value();
}

namespace detail {

inline void apply_constraints(ScalarField& field, const PoleSet& poles) {
    if (poles.mode() != PoleMode::PinnedValue) return;
    for (const auto& pole : poles.poles())
        field.at(pole.node.first, pole.node.second) = pole.weight;
}

inline std::pair<int, int> pick_anchor(const PoleSet& poles) {
    const GridSpec& grid = poles.spec();
    const int center = grid.half_width * grid.refinement + 1;  // node nearest the origin
    if (!poles.is_pole_node(center, center)) return {center, center};
    const int m = grid.side_count();
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= m; ++i)
            if (!poles.is_pole_node(i, j)) return {i, j};
    throw config_error("every node is a pole");  // unreachable for l >= 2
}

}  // namespace detail

/// Runs the BB iteration from (v^0 = 0, v^1 = initial_guess) until the
/// max-norm of the gradient drops below the tolerance. Charge-mode solutions
/// are normalized to vanish at the node nearest the origin.
inline Solution solve(const SolverConfig& config) {
    config.validate();
    const PoleSet& poles = *config.poles;
    const double fallback = config.effective_fallback();

    ScalarField previous(config.grid, 0.0);
    ScalarField current = initial_guess(config.grid, poles);
    ScalarField grad_previous = energy_gradient(previous, poles);
    ScalarField grad_current = energy_gradient(current, poles);

    Solution sol;
    sol.field = current;
    double energy_prev = total_energy(current, poles);
    int rise_streak = 0;

    long m = 0;
    bool converged = false;
    double residual = grad_current.max_abs();
    if (config.record_history) {
        sol.residual_history.push_back(residual);
        sol.energy_history.push_back(energy_prev);
    }

    while (true) {
        if (!std::isfinite(residual))
            throw divergence_error("solver diverged: non-finite gradient", m);
        if (residual < config.tolerance) {
            converged = true;
            break;
        }
        if (m >= config.max_iterations) break;

        const double tau = bb_step(current, previous, grad_current, grad_previous, fallback);
        ScalarField next = current;
        const size_t count = next.values().size();
        for (size_t n = 0; n < count; ++n)
            next.values()[n] -= tau * grad_current.values()[n];
        detail::apply_constraints(next, poles);
        if (!next.all_finite())
            throw divergence_error("solver diverged: non-finite iterate", m + 1);

        previous = std::move(current);
        current = std::move(next);
        grad_previous = std::move(grad_current);
        grad_current = energy_gradient(current, poles);
        ++m;

        const double energy_now = total_energy(current, poles);
        rise_streak = energy_now > energy_prev ? rise_streak + 1 : 0;
        if (rise_streak >= 500)
            throw divergence_error("solver diverged: energy increased for 500 iterations", m);
        energy_prev = energy_now;

        residual = grad_current.max_abs();
        if (config.record_history) {
            sol.residual_history.push_back(residual);
            sol.energy_history.push_back(energy_now);
        }
    }

    sol.iterations = m;
    sol.final_residual = residual;
    sol.converged = converged;
    sol.field = current;
    if (poles.mode() == PoleMode::Charge) {
        sol.anchor_node = detail::pick_anchor(poles);
        const double shift = sol.field.at(sol.anchor_node.first, sol.anchor_node.second);
        for (double& v : sol.field.values()) v -= shift;
    }
    // the unused corner is filled for output only
    const int side = sol.field.side_count();
    sol.field.at(side, side) =
        0.5 * (sol.field.at(side - 1, side) + sol.field.at(side, side - 1));
    sol.energy = total_energy(sol.field, poles);
    return sol;
}

}  // namespace plap
