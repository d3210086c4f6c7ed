#include <catch2/catch_amalgamated.hpp>

#include "plap/grid.hpp"

using namespace plap;

TEST_CASE("grid spec derived quantities") {
    GridSpec spec(2, 2);
    CHECK(spec.spacing() == 0.5);
    CHECK(spec.side_count() == 9);
    // h*(M-1) = 2l exactly in the rational sense
    CHECK(spec.refinement * 2 * spec.half_width == spec.side_count() - 1);
}

TEST_CASE("grid spec rejects invalid parameters") {
    CHECK_THROWS_AS(GridSpec(1, 4), config_error);
    CHECK_THROWS_AS(GridSpec(2, 0), config_error);
    CHECK_THROWS_AS(GridSpec(-3, 2), config_error);
}

TEST_CASE("node coordinates match the lattice definition") {
    {
        GridSpec spec(2, 1);
        CHECK(node_coords(spec, 1, 1) == std::pair{-2.0, -2.0});
        const int m = spec.side_count();
        CHECK(node_coords(spec, m, m) == std::pair{2.0, 2.0});
    }
    {
        // the dipole pole nodes (0, +-1) for l=2, k=2
        GridSpec spec(2, 2);
        const int lk1 = spec.half_width * spec.refinement + 1;
        CHECK(node_coords(spec, lk1, (spec.half_width + 1) * spec.refinement + 1) ==
              std::pair{0.0, 1.0});
        CHECK(node_coords(spec, lk1, (spec.half_width - 1) * spec.refinement + 1) ==
              std::pair{0.0, -1.0});
    }
    CHECK_THROWS_AS(node_coords(GridSpec(2, 2), 0, 1), bounds_error);
    CHECK_THROWS_AS(node_coords(GridSpec(2, 2), 1, 10), bounds_error);
}

TEST_CASE("locate_node inverts node_coords") {
    GridSpec spec(2, 2);
    CHECK(locate_node(spec, {0.0, 1.0}) == std::pair{5, 7});
    CHECK(locate_node(GridSpec(4, 4), {2.0, 0.0}) == std::pair{25, 17});
    CHECK_THROWS_AS(locate_node(spec, {0.1, 1.0}), off_lattice_error);
    CHECK_THROWS_AS(locate_node(spec, {5.0, 0.0}), off_lattice_error);
}

TEST_CASE("round trip and monotonicity over all nodes") {
    GridSpec spec(3, 2);
    const int m = spec.side_count();
    double prev_x = -1e300;
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            const auto pt = node_coords(spec, i, j);
            CHECK(locate_node(spec, pt) == std::pair{i, j});
        }
        const double x = node_coords(spec, i, 1).first;
        CHECK(x > prev_x);
        prev_x = x;
    }
}
