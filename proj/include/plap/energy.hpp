#pragma once

#include <cmath>

#include "plap/field.hpp"
#include "plap/poles.hpp"

namespace plap {

/// Compensated accumulator; sums are taken in a fixed row-major cell order so
/// residual histories are bit-reproducible across runs.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

namespace detail {

/// q^e for q >= 0, with exact fast paths when 2e is a small integer (the hot
/// case: p in {3, 4, 5} makes every exponent here a multiple of 1/2). Falls
/// back to std::pow for general p.
inline double pow_half_integer(double q, double e) {
    const double twice = 2.0 * e;
    const int n = static_cast<int>(twice);
    if (twice == n && n >= 0 && n <= 8) {
        double r = (n & 1) ? std::sqrt(q) : 1.0;
        double base = q;
        for (int b = n >> 1; b > 0; b >>= 1) {
            if (b & 1) r *= base;
            base *= base;
        }
        return r;
    }
    return std::pow(q, e);
}

}  // namespace detail

/// Discrete p-Dirichlet energy
///   (1/p) k^{p-2} sum_{i,j<=M-1} ((v_{i+1,j}-v_{i,j})^2 + (v_{i,j+1}-v_{i,j})^2)^{p/2}.
inline double discrete_dirichlet(const ScalarField& field, double p) {
    if (p <= 2.0)
        throw config_error("discrete_dirichlet requires p > 2, got " + std::to_string(p));
    if (!field.all_finite())
        throw evaluation_error("discrete_dirichlet: non-finite field values");
    const int m = field.side_count();
    const double k = field.spec().refinement;
    KahanSum sum;
    for (int j = 1; j <= m - 1; ++j) {
        for (int i = 1; i <= m - 1; ++i) {
            const double dx = field.at(i + 1, j) - field.at(i, j);
            const double dy = field.at(i, j + 1) - field.at(i, j);
            sum.add(detail::pow_half_integer(dx * dx + dy * dy, p / 2.0));
        }
    }
    return std::pow(k, p - 2.0) / p * sum.value();
}

/// Full energy: Dirichlet part minus the charge linear term in Charge mode.
/// PinnedValue mode carries no linear term; the constraint is enforced by the
/// solver, not by the energy.
inline double total_energy(const ScalarField& field, const PoleSet& poles) {
    if (field.spec() != poles.spec())
        throw config_error("total_energy: field and poles use different grids");
    double e = discrete_dirichlet(field, poles.exponent());
    if (poles.mode() == PoleMode::Charge) {
        KahanSum linear;
        for (const auto& pole : poles.poles())
            linear.add(pole.weight * field.at(pole.node.first, pole.node.second));
        e -= linear.value();
    }
    return e;
}

/// Analytic gradient of the Dirichlet part only. The (M,M) entry is always 0.
inline ScalarField dirichlet_gradient(const ScalarField& field, double p) {
    if (p <= 2.0)
        throw config_error("dirichlet_gradient requires p > 2, got " + std::to_string(p));
    if (!field.all_finite())
        throw evaluation_error("dirichlet_gradient: non-finite field values");
    const int m = field.side_count();
    const double kfac = std::pow(static_cast<double>(field.spec().refinement), p - 2.0);
    ScalarField grad(field.spec(), 0.0);
    for (int j = 1; j <= m - 1; ++j) {
        for (int i = 1; i <= m - 1; ++i) {
            const double dx = field.at(i + 1, j) - field.at(i, j);
            const double dy = field.at(i, j + 1) - field.at(i, j);
            const double q = kfac * detail::pow_half_integer(dx * dx + dy * dy, (p - 2.0) / 2.0);
            grad.at(i + 1, j) += q * dx;
            grad.at(i, j) -= q * dx;
            grad.at(i, j + 1) += q * dy;
            grad.at(i, j) -= q * dy;
        }
    }
    grad.at(m, m) = 0.0;  // excluded from the optimization
    return grad;
}

/// Gradient of total_energy. Charge mode subtracts c_i at each pole node;
/// PinnedValue mode zeroes the entries at pole nodes (projected gradient).
inline ScalarField energy_gradient(const ScalarField& field, const PoleSet& poles) {
    if (field.spec() != poles.spec())
        throw config_error("energy_gradient: field and poles use different grids");
    ScalarField grad = dirichlet_gradient(field, poles.exponent());
    if (poles.mode() == PoleMode::Charge) {
        for (const auto& pole : poles.poles())
            grad.at(pole.node.first, pole.node.second) -= pole.weight;
    } else {
        for (const auto& pole : poles.poles())
            grad.at(pole.node.first, pole.node.second) = 0.0;
    }
    const int m = field.side_count();
    grad.at(m, m) = 0.0;
    return grad;
}

}  // namespace plap
