#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "plap/errors.hpp"

namespace plap {

/// Uniform square lattice over [-l, l]^2 with spacing h = 1/k.
///
/// Nodes are addressed with 1-based indices (i, j), i along x and j along y,
/// so that node (1,1) sits at (-l,-l) and node (M,M) at (l,l) with
/// M = 2*l*k + 1.
struct GridSpec {
    int half_width = 0;   // l, domain is [-l, l]^2
    int refinement = 0;   // k, nodes per unit length

    GridSpec() = default;
    GridSpec(int half_width_, int refinement_)
        : half_width(half_width_), refinement(refinement_) {
        if (half_width < 2)
            throw config_error("grid half-width must be an integer >= 2, got " +
                               std::to_string(half_width));
        if (refinement < 1)
            throw config_error("grid refinement must be a positive integer, got " +
                               std::to_string(refinement));
    }

    double spacing() const { return 1.0 / refinement; }
    int side_count() const { return 2 * half_width * refinement + 1; }

    bool operator==(const GridSpec&) const = default;
};

/// Coordinates of node (i, j), 1-based.
inline std::pair<double, double> node_coords(const GridSpec& spec, int i, int j) {
    const int m = spec.side_count();
    if (i < 1 || i > m || j < 1 || j > m)
        throw bounds_error("node index (" + std::to_string(i) + "," + std::to_string(j) +
                           ") outside 1.." + std::to_string(m));
    const double h = spec.spacing();
    return {-spec.half_width + (i - 1) * h, -spec.half_width + (j - 1) * h};
}

/// Inverse of node_coords for points that lie (within tolerance) on a node.
///
/// Poles must coincide with lattice nodes; a point that misses every node by
/// more than the tolerance is rejected rather than snapped.
inline std::pair<int, int> locate_node(const GridSpec& spec, std::pair<double, double> point,
                                       double tolerance = -1.0) {
    const double h = spec.spacing();
    if (tolerance < 0.0) tolerance = h * 1e-9;
    const auto [x, y] = point;
    const int m = spec.side_count();
    const double fi = (x + spec.half_width) / h + 1.0;
    const double fj = (y + spec.half_width) / h + 1.0;
    const int i = static_cast<int>(std::lround(fi));
    const int j = static_cast<int>(std::lround(fj));
    if (i < 1 || i > m || j < 1 || j > m)
        throw off_lattice_error("point (" + std::to_string(x) + "," + std::to_string(y) +
                                ") outside the lattice");
    const auto [nx, ny] = node_coords(spec, i, j);
    if (std::abs(nx - x) > tolerance || std::abs(ny - y) > tolerance)
        throw off_lattice_error("pole off-lattice: (" + std::to_string(x) + "," +
                                std::to_string(y) + ") is not a node of the h=1/" +
                                std::to_string(spec.refinement) + " lattice");
    return {i, j};
}

}  // namespace plap
