#pragma once

#include <stdexcept>
#include <string>

namespace plap {

/// Invalid grid, pole, or solver configuration.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Index outside the lattice.
struct bounds_error : std::out_of_range {
    explicit bounds_error(const std::string& what) : std::out_of_range(what) {}
};

/// A requested pole position does not coincide with a lattice node.
struct off_lattice_error : std::runtime_error {
    explicit off_lattice_error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values encountered during evaluation.
struct evaluation_error : std::runtime_error {
    explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

/// The iteration produced non-finite iterates or sustained energy growth.
struct divergence_error : std::runtime_error {
    divergence_error(const std::string& what, long iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration(iteration) {}
    long iteration;
};

/// A diagnostic was asked for outside its domain of validity.
struct diagnostic_error : std::runtime_error {
    explicit diagnostic_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plap
