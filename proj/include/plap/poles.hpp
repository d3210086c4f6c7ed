#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

enum class PoleMode { Charge, PinnedValue };

/// One pole: an exact lattice position plus either a charge or a pinned value.
struct Pole {
    std::pair<double, double> position;
    std::pair<int, int> node;  // 1-based lattice indices
    double weight = 0.0;       // charge c_i or pinned value a_i, per mode
};

/// Pole configuration for the multipole energy.
///
/// Charge mode attaches a linear term -sum c_i v(node_i) to the energy and
/// requires sum c_i = 0. PinnedValue mode holds the pole nodes fixed at a_i
/// and carries no linear term.
class PoleSet {
public:
    PoleSet(const GridSpec& spec, PoleMode mode,
            const std::vector<std::pair<std::pair<double, double>, double>>& poles,
            double exponent)
        : spec_(spec), mode_(mode), exponent_(exponent) {
        if (exponent <= 2.0)
            throw config_error("exponent p must satisfy p > 2, got " + std::to_string(exponent));
        std::set<std::pair<int, int>> seen;
        for (const auto& [pos, w] : poles) {
            Pole pole;
            pole.position = pos;
            pole.node = locate_node(spec, pos);
            pole.weight = w;
            if (!seen.insert(pole.node).second)
                throw config_error("duplicate pole at node (" + std::to_string(pole.node.first) +
                                   "," + std::to_string(pole.node.second) + ")");
            poles_.push_back(pole);
        }
        if (mode_ == PoleMode::Charge) {
            double sum = 0.0, scale = 0.0;
            for (const auto& pole : poles_) {
                sum += pole.weight;
                scale += std::abs(pole.weight);
            }
            if (std::abs(sum) > 1e-12 * std::max(scale, 1.0))
                throw config_error("charges must sum to zero, got sum " + std::to_string(sum));
        }
    }

    const GridSpec& spec() const { return spec_; }
    PoleMode mode() const { return mode_; }
    double exponent() const { return exponent_; }
    const std::vector<Pole>& poles() const { return poles_; }
    size_t size() const { return poles_.size(); }

    bool is_pole_node(int i, int j) const {
        for (const auto& pole : poles_)
            if (pole.node.first == i && pole.node.second == j) return true;
        return false;
    }

private:
    GridSpec spec_;
    PoleMode mode_;
    double exponent_;
    std::vector<Pole> poles_;
};

}  // namespace plap
