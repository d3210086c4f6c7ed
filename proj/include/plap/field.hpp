#pragma once

#include <cmath>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

/// Nodal values v_{i,j} on a GridSpec, the optimization variable.
///
/// Storage is 0-based row-major in j (y) then i (x); the public accessors use
/// the 1-based (i, j) convention of GridSpec. The corner entry v_{M,M} never
/// enters the energy; it is carried for output only.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& spec, double fill = 0.0)
        : spec_(spec), values_(static_cast<size_t>(spec.side_count()) * spec.side_count(), fill) {}

    const GridSpec& spec() const { return spec_; }
    int side_count() const { return spec_.side_count(); }

    double& at(int i, int j) { return values_[index(i, j)]; }
    double at(int i, int j) const { return values_[index(i, j)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    size_t index(int i, int j) const {
        const int m = spec_.side_count();
        if (i < 1 || i > m || j < 1 || j > m)
            throw bounds_error("field index (" + std::to_string(i) + "," + std::to_string(j) +
                               ") outside 1.." + std::to_string(m));
        return static_cast<size_t>(j - 1) * m + (i - 1);
    }

    GridSpec spec_;
    std::vector<double> values_;
};

}  // namespace plap
