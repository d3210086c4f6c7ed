#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "plap/energy.hpp"

using namespace plap;

namespace {

ScalarField random_field(const GridSpec& spec, std::mt19937& rng, double amplitude = 1.0) {
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    ScalarField f(spec);
    for (double& v : f.values()) v = dist(rng);
    return f;
}

// brute-force scalar re-evaluation of the energy formula, kept independent of
// the library path
double dirichlet_oracle(const ScalarField& f, double p) {
    const int m = f.side_count();
    const double k = f.spec().refinement;
    double sum = 0.0;
    for (int i = 1; i <= m - 1; ++i)
        for (int j = 1; j <= m - 1; ++j) {
            const double dx = f.at(i + 1, j) - f.at(i, j);
            const double dy = f.at(i, j + 1) - f.at(i, j);
            sum += std::pow(dx * dx + dy * dy, p / 2.0);
        }
    return std::pow(k, p - 2.0) / p * sum;
}

// central finite differences of total_energy, step 1e-6
ScalarField fd_gradient(const ScalarField& f, const PoleSet& poles, double step = 1e-6) {
    ScalarField g(f.spec(), 0.0);
    ScalarField work = f;
    const int m = f.side_count();
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= m; ++i) {
            if (i == m && j == m) continue;
            const double v0 = work.at(i, j);
            work.at(i, j) = v0 + step;
            const double ep = total_energy(work, poles);
            work.at(i, j) = v0 - step;
            const double em = total_energy(work, poles);
            work.at(i, j) = v0;
            g.at(i, j) = (ep - em) / (2.0 * step);
        }
    return g;
}

}  // namespace

TEST_CASE("discrete dirichlet hand-evaluated examples") {
    GridSpec tiny(2, 1);  // smallest legal grid; the M=2 case below uses a sub-block
    (void)tiny;

    // spec the M=2 single-cell example directly on a synthetic 2x2 block via
    // the oracle formula: cell (1,1) only
    // library grids require l >= 2, so exercise the formula shape through a
    // constant-plus-bump field where only one cell contributes
    GridSpec spec(2, 1);
    ScalarField f(spec, 0.0);
    f.at(2, 1) = 1.0;  // forward differences touch cells (1,1) and (2,1)
    const double e = discrete_dirichlet(f, 4.0);
    // cells: (1,1): dx=1, dy=0 -> 1; (2,1): dx=-1, dy=0 -> 1; (2,.) dy from (2,1):
    // cell (2,1) has dx = v(3,1)-v(2,1) = -1 and dy = v(2,2)-v(2,1) = -1 -> (1+1)^2 = 4
    // cell (1,1): (1+0)^2 = 1
    CHECK(e == Catch::Approx(dirichlet_oracle(f, 4.0)).epsilon(1e-14));

    ScalarField constant(spec, 3.5);
    CHECK(discrete_dirichlet(constant, 4.0) == 0.0);
    CHECK(discrete_dirichlet(constant, 3.0) == 0.0);
}

TEST_CASE("single-cell value matches the hand computation") {
    // isolate one cell: field zero except v(2,1)=1 on a k=1 grid; the cell
    // (1,1) contributes (1/4)*((1-0)^2+(0-0)^2)^2 = 0.25 and cell (2,1)
    // contributes (1/4)*((0-1)^2+(0-1)^2)^2 = 1
    GridSpec spec(2, 1);
    ScalarField f(spec, 0.0);
    f.at(2, 1) = 1.0;
    CHECK(discrete_dirichlet(f, 4.0) == Catch::Approx(0.25 + 1.0).epsilon(1e-14));
}

TEST_CASE("p-homogeneity of the dirichlet part") {
    std::mt19937 rng(7);
    GridSpec spec(2, 2);
    ScalarField f = random_field(spec, rng);
    for (double p : {3.0, 4.0, 5.0}) {
        const double base = discrete_dirichlet(f, p);
        ScalarField scaled = f;
        for (double& v : scaled.values()) v *= 2.0;
        CHECK(discrete_dirichlet(scaled, p) ==
              Catch::Approx(std::pow(2.0, p) * base).epsilon(1e-12));
    }
}

TEST_CASE("invalid inputs are rejected") {
    GridSpec spec(2, 2);
    ScalarField f(spec, 0.0);
    CHECK_THROWS_AS(discrete_dirichlet(f, 2.0), config_error);
    CHECK_THROWS_AS(discrete_dirichlet(f, 1.5), config_error);
    f.at(3, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(discrete_dirichlet(f, 4.0), evaluation_error);
    CHECK_THROWS_AS(PoleSet(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, 2.0),
                    config_error);
}

TEST_CASE("pole set validation") {
    GridSpec spec(2, 2);
    // zero-sum violation
    CHECK_THROWS_AS(PoleSet(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -0.5}}, 4.0),
                    config_error);
    // off-lattice pole
    CHECK_THROWS_AS(
        PoleSet(spec, PoleMode::Charge, {{{0.1, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, 4.0),
        off_lattice_error);
    // duplicate node
    CHECK_THROWS_AS(PoleSet(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, 1.0}, -1.0}}, 4.0),
                    config_error);
    // pinned mode has no zero-sum constraint
    CHECK_NOTHROW(PoleSet(spec, PoleMode::PinnedValue, {{{0.0, 1.0}, 3.0}}, 4.0));
}

TEST_CASE("total energy with charges") {
    GridSpec spec(2, 2);
    PoleSet poles(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, 4.0);

    ScalarField constant(spec, 2.0);
    CHECK(total_energy(constant, poles) == 0.0);  // zero-sum charges cancel

    ScalarField zero(spec, 0.0);
    CHECK(total_energy(zero, poles) == 0.0);

    std::mt19937 rng(11);
    ScalarField f = random_field(spec, rng);
    const double linear = f.at(5, 7) - f.at(5, 3);  // (0,1) and (0,-1) nodes
    CHECK(total_energy(f, poles) ==
          Catch::Approx(dirichlet_oracle(f, 4.0) - linear).epsilon(1e-12));
}

TEST_CASE("translation invariance in charge mode") {
    GridSpec spec(2, 2);
    PoleSet poles(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, 4.0);
    std::mt19937 rng(3);
    ScalarField f = random_field(spec, rng);
    ScalarField shifted = f;
    for (double& v : shifted.values()) v += 0.7;
    CHECK(total_energy(shifted, poles) ==
          Catch::Approx(total_energy(f, poles)).margin(1e-12));

    // consequently the gradient entries sum to ~0
    ScalarField g = energy_gradient(f, poles);
    double sum = 0.0;
    for (double v : g.values()) sum += v;
    CHECK(std::abs(sum) < 1e-12 * (1.0 + g.max_abs()));
}

TEST_CASE("analytic gradient matches central finite differences") {
    GridSpec spec(2, 2);
    std::mt19937 rng(19);
    for (double p : {3.0, 4.0, 5.0}) {
        PoleSet poles(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, p);
        for (int trial = 0; trial < 3; ++trial) {
            ScalarField f = random_field(spec, rng);
            ScalarField g = energy_gradient(f, poles);
            ScalarField fd = fd_gradient(f, poles);
            const double scale = 1.0 + g.max_abs();
            const int m = spec.side_count();
            for (int j = 1; j <= m; ++j)
                for (int i = 1; i <= m; ++i)
                    CHECK(std::abs(g.at(i, j) - fd.at(i, j)) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("gradient honors pinned projection and the excluded corner") {
    GridSpec spec(2, 2);
    PoleSet pinned(spec, PoleMode::PinnedValue, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, 4.0);
    std::mt19937 rng(23);
    ScalarField f = random_field(spec, rng);
    ScalarField g = energy_gradient(f, pinned);
    CHECK(g.at(5, 7) == 0.0);
    CHECK(g.at(5, 3) == 0.0);
    const int m = spec.side_count();
    CHECK(g.at(m, m) == 0.0);

    // constant field with no linear term is a stationary point
    PoleSet charges(spec, PoleMode::Charge, {{{0.0, 1.0}, 0.0}, {{0.0, -1.0}, 0.0}}, 4.0);
    ScalarField constant(spec, 1.0);
    CHECK(energy_gradient(constant, charges).max_abs() == 0.0);
}

TEST_CASE("convexity along random segments") {
    GridSpec spec(2, 2);
    PoleSet poles(spec, PoleMode::Charge, {{{0.0, 1.0}, 1.0}, {{0.0, -1.0}, -1.0}}, 4.0);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> lambda(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField a = random_field(spec, rng);
        ScalarField b = random_field(spec, rng);
        const double t = lambda(rng);
        ScalarField mix(spec);
        for (size_t n = 0; n < mix.values().size(); ++n)
            mix.values()[n] = t * a.values()[n] + (1.0 - t) * b.values()[n];
        const double ea = total_energy(a, poles);
        const double eb = total_energy(b, poles);
        const double emix = total_energy(mix, poles);
        const double scale = std::abs(ea) + std::abs(eb) + 1.0;
        CHECK(emix <= t * ea + (1.0 - t) * eb + 1e-12 * scale);
    }
}
