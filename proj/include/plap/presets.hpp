#pragma once

#include <string>

#include "plap/solver.hpp"

namespace plap {

/// Figure presets. Grid parameters default to l=4, k=4; the captions fix the
/// poles and exponents.
///   fig1: p=4, pinned +1 at (0,1) and -1 at (0,-1)
///   fig3: p=3, charges 1, -3/2, 1/2 at (0,1), (0,-1), (2,0)
///   fig4: p=5, charges 2, -2, 1, -1 at (0,1), (0,-1), (2,0), (-2,0)
inline SolverConfig make_preset(const std::string& name, int half_width = 4,
                                int refinement = 4, double p_override = 0.0) {
    SolverConfig config;
    config.grid = GridSpec(half_width, refinement);
    if (name == "fig1") {
        const double p = p_override > 0.0 ? p_override : 4.0;
        config.poles = PoleSet(config.grid, PoleMode::PinnedValue,
                               {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, p);
    } else if (name == "fig3") {
        const double p = p_override > 0.0 ? p_override : 3.0;
        config.poles = PoleSet(config.grid, PoleMode::Charge,
                               {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.5}, {{2.0, 0.0}, 0.5}}, p);
    } else if (name == "fig4") {
        const double p = p_override > 0.0 ? p_override : 5.0;
        config.poles = PoleSet(config.grid, PoleMode::Charge,
                               {{{0.0, 1.0}, 2.0},
                                {{0.0, -1.0}, -2.0},
                                {{2.0, 0.0}, 1.0},
                                {{-2.0, 0.0}, -1.0}},
                               p);
    } else {
        throw config_error("unknown preset '" + name + "' (expected fig1, fig3 or fig4)");
    }
    return config;
}

}  // namespace plap
