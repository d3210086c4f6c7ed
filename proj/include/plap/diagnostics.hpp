#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "plap/solver.hpp"

namespace plap {

// ---------------------------------------------------------------------------
// small numeric helpers shared by the diagnostics

namespace detail {

/// Centered-difference gradient at an interior node (2..M-1). Second-order,
/// distinct from the forward-difference stencil used by the energy.
inline std::pair<double, double> node_gradient(const ScalarField& f, int i, int j) {
    const double h = f.spec().spacing();
    return {(f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h),
            (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h)};
}

/// Gradient at the center of cell (i,j), i,j in 1..M-1.
inline std::pair<double, double> cell_gradient(const ScalarField& f, int i, int j) {
    const double h = f.spec().spacing();
    return {(f.at(i + 1, j) + f.at(i + 1, j + 1) - f.at(i, j) - f.at(i, j + 1)) / (2.0 * h),
            (f.at(i, j + 1) + f.at(i + 1, j + 1) - f.at(i, j) - f.at(i + 1, j)) / (2.0 * h)};
}

/// Least-squares slope of ln(y) against ln(x).
inline double loglog_slope(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2)
        throw diagnostic_error("log-log fit needs at least two samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : samples) {
        if (x <= 0.0 || y <= 0.0)
            throw diagnostic_error("log-log fit requires positive samples");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(samples.size());
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) throw diagnostic_error("log-log fit: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

inline double node_radius(const GridSpec& spec, int i, int j) {
    const auto [x, y] = node_coords(spec, i, j);
    return std::hypot(x, y);
}

inline double max_pole_radius(const PoleSet& poles) {
    double r = 0.0;
    for (const auto& pole : poles.poles())
        r = std::max(r, std::hypot(pole.position.first, pole.position.second));
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// flatness

struct FlatnessResult {
    double boundary_mean = 0.0;
    double predicted = 0.0;   // defined only for dipoles
    double deviation = 0.0;
    bool has_predicted = false;
};

/// Mean of the field over the outermost node ring, compared for dipoles with
/// the average of the two pole values.
inline FlatnessResult flatness_check(const Solution& sol, const PoleSet& poles) {
    if (!sol.converged) throw diagnostic_error("flatness_check: solution not converged");
    const ScalarField& f = sol.field;
    const int m = f.side_count();
    KahanSum sum;
    long count = 0;
    for (int i = 1; i <= m; ++i) {
        sum.add(f.at(i, 1));
        sum.add(f.at(i, m));
        ++count;
        ++count;
    }
    for (int j = 2; j <= m - 1; ++j) {
        sum.add(f.at(1, j));
        sum.add(f.at(m, j));
        count += 2;
    }
    FlatnessResult res;
    res.boundary_mean = sum.value() / static_cast<double>(count);
    if (poles.size() == 2) {
        double u0, u1;
        if (poles.mode() == PoleMode::PinnedValue) {
            u0 = poles.poles()[0].weight;
            u1 = poles.poles()[1].weight;
        } else {
            u0 = f.at(poles.poles()[0].node.first, poles.poles()[0].node.second);
            u1 = f.at(poles.poles()[1].node.first, poles.poles()[1].node.second);
        }
        res.predicted = 0.5 * (u0 + u1);
        res.deviation = std::abs(res.boundary_mean - res.predicted);
        res.has_predicted = true;
    }
    return res;
}

// ---------------------------------------------------------------------------
// ring statistics and oscillation decay

struct RingStat {
    double radius = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    int sample_count = 0;
    double oscillation() const { return max - min; }
};

struct RingStatsResult {
    std::vector<RingStat> stats;
    std::vector<double> excluded_radii;  // rings with too few samples
    bool comparison_trend_ok = true;     // max nonincreasing / min nondecreasing
    double trend_slack = 0.0;
};

/// Band statistics over {r - h/2 <= |x| <= r + h/2} per requested radius,
/// with the weak-comparison trend checked across the retained rings.
inline RingStatsResult ring_stats(const Solution& sol, const std::vector<double>& radii) {
    const ScalarField& f = sol.field;
    const GridSpec& spec = f.spec();
    const int m = f.side_count();
    const double h = spec.spacing();

    RingStatsResult res;
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    for (double r : sorted) {
        if (r <= 0.0 || r > spec.half_width - h) {
            res.excluded_radii.push_back(r);
            continue;
        }
        RingStat stat;
        stat.radius = r;
        stat.min = std::numeric_limits<double>::infinity();
        stat.max = -std::numeric_limits<double>::infinity();
        KahanSum sum;
        for (int j = 1; j <= m; ++j) {
            for (int i = 1; i <= m; ++i) {
                const double rho = detail::node_radius(spec, i, j);
                if (std::abs(rho - r) > h / 2.0) continue;
                const double v = f.at(i, j);
                stat.min = std::min(stat.min, v);
                stat.max = std::max(stat.max, v);
                sum.add(v);
                ++stat.sample_count;
            }
        }
        if (stat.sample_count < 8) {
            res.excluded_radii.push_back(r);
            continue;
        }
        stat.mean = sum.value() / stat.sample_count;
        res.stats.push_back(stat);
    }

    // slack 2h * observed Lipschitz bound
    double lip = 0.0;
    for (int j = 2; j <= m - 1; ++j)
        for (int i = 2; i <= m - 1; ++i) {
            const auto [gx, gy] = detail::node_gradient(f, i, j);
            lip = std::max(lip, std::hypot(gx, gy));
        }
    res.trend_slack = 2.0 * h * lip;
    for (size_t n = 1; n < res.stats.size(); ++n) {
        if (res.stats[n].max > res.stats[n - 1].max + res.trend_slack ||
            res.stats[n].min < res.stats[n - 1].min - res.trend_slack)
            res.comparison_trend_ok = false;
    }
    return res;
}

struct OscillationFit {
    double mu_hat = 0.0;      // max over dyadic pairs of w(2r)/w(r)
    double alpha_hat = 0.0;   // -ln(mu)/ln 2
    double loglog_slope = 0.0;  // cross-check fit of ln w vs ln r
    int dyadic_pairs = 0;
    bool pass = false;  // mu_hat < 1
};

/// Dyadic contraction estimate from ring oscillations.
inline OscillationFit oscillation_decay_fit(const std::vector<RingStat>& stats) {
    OscillationFit fit;
    fit.mu_hat = 0.0;
    for (const RingStat& a : stats) {
        if (a.oscillation() == 0.0) continue;  // constant field ring
        for (const RingStat& b : stats) {
            if (std::abs(b.radius - 2.0 * a.radius) > 1e-12 * (1.0 + b.radius)) continue;
            fit.mu_hat = std::max(fit.mu_hat, b.oscillation() / a.oscillation());
            ++fit.dyadic_pairs;
        }
    }
    if (fit.dyadic_pairs == 0)
        throw diagnostic_error("oscillation_decay_fit: no dyadic radius pair (r, 2r)");
    fit.alpha_hat = -std::log(fit.mu_hat) / std::log(2.0);
    std::vector<std::pair<double, double>> pts;
    for (const RingStat& s : stats)
        if (s.oscillation() > 0.0) pts.emplace_back(s.radius, s.oscillation());
    fit.loglog_slope = detail::loglog_slope(pts);
    fit.pass = fit.mu_hat < 1.0;
    return fit;
}

// ---------------------------------------------------------------------------
// tail energy

struct TailEnergyEntry {
    double r = 0.0;
    double tail = 0.0;  // F(r) = r^{p-n} int_{|x|>r} |Du|^p
    double rhs = 0.0;   // p int_{|x|>r} |x|^{p-n} |Du|^{p-2} (du/dr)^2
    bool low_confidence = false;  // close to the inscribed-circle cutoff
};

/// Both sides of the radial tail-energy identity, integrated by midpoint rule
/// over cells whose centers lie in the annulus r < |x| < l (the box integrals
/// are truncated at the inscribed circle).
inline std::vector<TailEnergyEntry> tail_energy(const Solution& sol, const PoleSet& poles,
                                                const std::vector<double>& radii) {
    const ScalarField& f = sol.field;
    const GridSpec& spec = f.spec();
    const int m = f.side_count();
    const double h = spec.spacing();
    const double p = poles.exponent();
    const double r_lo = detail::max_pole_radius(poles) + 2.0 * h;
    const double r_hi = spec.half_width - 2.0 * h;

    std::vector<double> valid;
    for (double r : radii)
        if (r >= r_lo - 1e-12 && r <= r_hi + 1e-12) valid.push_back(r);
    if (valid.empty())
        throw diagnostic_error("tail_energy: no radius in the admissible range (" +
                               std::to_string(r_lo) + ", " + std::to_string(r_hi) + ")");
    std::sort(valid.begin(), valid.end());

    std::vector<TailEnergyEntry> out;
    for (double r : valid) {
        TailEnergyEntry entry;
        entry.r = r;
        entry.low_confidence = r > spec.half_width - 4.0 * h;
        KahanSum lhs, rhs;
        for (int j = 1; j <= m - 1; ++j) {
            for (int i = 1; i <= m - 1; ++i) {
                const auto [x0, y0] = node_coords(spec, i, j);
                const double cx = x0 + h / 2.0, cy = y0 + h / 2.0;
                const double rho = std::hypot(cx, cy);
                if (rho <= r || rho >= spec.half_width) continue;
                const auto [gx, gy] = detail::cell_gradient(f, i, j);
                const double g2 = gx * gx + gy * gy;
                const double radial = (gx * cx + gy * cy) / rho;
                lhs.add(std::pow(g2, p / 2.0) * h * h);
                rhs.add(std::pow(rho, p - 2.0) * std::pow(g2, (p - 2.0) / 2.0) *
                        radial * radial * h * h);
            }
        }
        entry.tail = std::pow(r, p - 2.0) * lhs.value();
        entry.rhs = p * rhs.value();
        out.push_back(entry);
    }
    return out;
}

// ---------------------------------------------------------------------------
// antisymmetry

/// Max-norm of (u - m) + (u∘reflect - m) for an axis-symmetric dipole, where m
/// is the average of the pole values and the reflection maps nodes to nodes.
inline double antisymmetry_residual(const Solution& sol, const PoleSet& poles) {
    if (poles.size() != 2)
        throw diagnostic_error("antisymmetry_residual: requires a dipole");
    const ScalarField& f = sol.field;
    const int m = f.side_count();
    const auto [i1, j1] = poles.poles()[0].node;
    const auto [i2, j2] = poles.poles()[1].node;

    const bool mirror_y = (i1 == i2) && (j2 == m + 1 - j1);  // poles (x,y),(x,-y)
    const bool mirror_x = (j1 == j2) && (i2 == m + 1 - i1);  // poles (x,y),(-x,y)
    if (!mirror_y && !mirror_x)
        throw diagnostic_error("antisymmetry_residual: poles not mirror-symmetric "
                               "across a grid axis");

    const double mid = 0.5 * (f.at(i1, j1) + f.at(i2, j2));
    double res = 0.0;
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= m; ++i) {
            const double u = f.at(i, j) - mid;
            const double ur = mirror_y ? f.at(i, m + 1 - j) - mid : f.at(m + 1 - i, j) - mid;
            res = std::max(res, std::abs(u + ur));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// bounds (maximum principle)

struct BoundsResult {
    double field_min = 0.0, field_max = 0.0;
    double a_min = 0.0, a_max = 0.0;
    bool pass = false;
    bool strict_off_poles = false;
};

/// Checks min a_i <= u <= max a_i with slack 10*tolerance, and whether the
/// inequalities are strict away from the pole nodes.
inline BoundsResult bounds_check(const Solution& sol, const PoleSet& poles,
                                 double tolerance = 1e-6) {
    const ScalarField& f = sol.field;
    const int m = f.side_count();
    BoundsResult res;
    res.a_min = std::numeric_limits<double>::infinity();
    res.a_max = -std::numeric_limits<double>::infinity();
    for (const auto& pole : poles.poles()) {
        const double a = poles.mode() == PoleMode::PinnedValue
                             ? pole.weight
                             : f.at(pole.node.first, pole.node.second);
        res.a_min = std::min(res.a_min, a);
        res.a_max = std::max(res.a_max, a);
    }
    res.field_min = std::numeric_limits<double>::infinity();
    res.field_max = -std::numeric_limits<double>::infinity();
    res.strict_off_poles = res.a_min < res.a_max;
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= m; ++i) {
            const double v = f.at(i, j);
            res.field_min = std::min(res.field_min, v);
            res.field_max = std::max(res.field_max, v);
            if (!poles.is_pole_node(i, j) && (v <= res.a_min || v >= res.a_max))
                res.strict_off_poles = false;
        }
    }
    const double eps = 10.0 * tolerance;
    res.pass = res.field_min >= res.a_min - eps && res.field_max <= res.a_max + eps;
    return res;
}

// ---------------------------------------------------------------------------
// level-set convexity

struct LevelSetResult {
    double t = 0.0;
    double score = 0.0;  // |S| / lattice points in conv(S)
    long set_size = 0;
    long hull_lattice_points = 0;
    bool compact = false;  // S avoids the outer boundary ring
    bool pass = false;
};

namespace detail {

struct LatticePoint {
    long x, y;
    bool operator<(const LatticePoint& o) const {
        return x < o.x || (x == o.x && y < o.y);
    }
    bool operator==(const LatticePoint&) const = default;
};

inline long cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Andrew monotone chain; returns the hull CCW without the repeated endpoint.
inline std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<LatticePoint> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline bool inside_hull(const std::vector<LatticePoint>& hull, const LatticePoint& q) {
    if (hull.size() == 1) return q == hull[0];
    if (hull.size() == 2) {
        if (cross(hull[0], hull[1], q) != 0) return false;
        return q.x >= std::min(hull[0].x, hull[1].x) && q.x <= std::max(hull[0].x, hull[1].x) &&
               q.y >= std::min(hull[0].y, hull[1].y) && q.y <= std::max(hull[0].y, hull[1].y);
    }
    const size_t n = hull.size();
    for (size_t i = 0; i < n; ++i)
        if (cross(hull[i], hull[(i + 1) % n], q) < 0) return false;
    return true;
}

}  // namespace detail

/// Ratio of superlevel-set nodes to lattice points inside their convex hull,
/// for a level t strictly between the dipole mid-value and the maximum.
inline LevelSetResult level_set_convexity(const Solution& sol, const PoleSet& poles, double t) {
    if (poles.size() != 2)
        throw diagnostic_error("level_set_convexity: requires a dipole");
    const ScalarField& f = sol.field;
    const int m = f.side_count();
    double u0, u1;
    if (poles.mode() == PoleMode::PinnedValue) {
        u0 = poles.poles()[0].weight;
        u1 = poles.poles()[1].weight;
    } else {
        u0 = f.at(poles.poles()[0].node.first, poles.poles()[0].node.second);
        u1 = f.at(poles.poles()[1].node.first, poles.poles()[1].node.second);
    }
    const double mid = 0.5 * (u0 + u1);
    const double top = std::max(u0, u1);
    if (!(t > mid) || t > top)
        throw diagnostic_error("level_set_convexity: t must lie strictly between the "
                               "mid-value " + std::to_string(mid) + " and the maximum " +
                               std::to_string(top));

    LevelSetResult res;
    res.t = t;
    std::vector<detail::LatticePoint> set;
    res.compact = true;
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= m; ++i)
            if (f.at(i, j) >= t) {
                set.push_back({i, j});
                if (i == 1 || i == m || j == 1 || j == m) res.compact = false;
            }
    if (set.empty()) throw diagnostic_error("level_set_convexity: empty superlevel set");
    res.set_size = static_cast<long>(set.size());

    const auto hull = detail::convex_hull(set);
    long minx = m, maxx = 1, miny = m, maxy = 1;
    for (const auto& pt : hull) {
        minx = std::min(minx, pt.x);
        maxx = std::max(maxx, pt.x);
        miny = std::min(miny, pt.y);
        maxy = std::max(maxy, pt.y);
    }
    for (long x = minx; x <= maxx; ++x)
        for (long y = miny; y <= maxy; ++y)
            if (detail::inside_hull(hull, {x, y})) ++res.hull_lattice_points;
    res.score = static_cast<double>(res.set_size) / static_cast<double>(res.hull_lattice_points);
    res.pass = res.score >= 0.98 && res.compact;
    return res;
}

// ---------------------------------------------------------------------------
// pole gradient exponent

struct PoleExponentFit {
    double fitted = 0.0;
    double predicted = 0.0;  // (p-n)/(p-1) - 1, negative for p > n
    std::vector<std::pair<double, double>> samples;  // (rho, mean |Du| on ring)
};

/// Mean |Du| (centered differences) on rings rho = 2h..10h about a pole,
/// collapsed to a log-log slope. The prediction is the gradient blow-up rate.
inline PoleExponentFit pole_exponent_fit(const Solution& sol, const PoleSet& poles,
                                         size_t pole_index) {
    if (pole_index >= poles.size())
        throw diagnostic_error("pole_exponent_fit: pole index out of range");
    const Pole& pole = poles.poles()[pole_index];
    if (poles.mode() == PoleMode::Charge && pole.weight == 0.0)
        throw diagnostic_error("pole_exponent_fit: pole has zero charge");
    const ScalarField& f = sol.field;
    const GridSpec& spec = f.spec();
    const int m = f.side_count();
    const double h = spec.spacing();
    const double p = poles.exponent();

    double nearest = std::numeric_limits<double>::infinity();
    for (size_t n = 0; n < poles.size(); ++n) {
        if (n == pole_index) continue;
        const auto& other = poles.poles()[n].position;
        nearest = std::min(nearest, std::hypot(other.first - pole.position.first,
                                               other.second - pole.position.second));
    }

    PoleExponentFit fit;
    fit.predicted = (p - 2.0) / (p - 1.0) - 1.0;
    for (int ring = 2; ring <= 10; ++ring) {
        const double rho = ring * h;
        if (rho > nearest / 2.0 + 1e-12) break;  // stay on this pole's side
        KahanSum sum;
        int count = 0;
        for (int j = 2; j <= m - 1; ++j) {
            for (int i = 2; i <= m - 1; ++i) {
                if (poles.is_pole_node(i, j)) continue;
                const auto [x, y] = node_coords(spec, i, j);
                const double d = std::hypot(x - pole.position.first, y - pole.position.second);
                if (std::abs(d - rho) > h / 2.0) continue;
                const auto [gx, gy] = detail::node_gradient(f, i, j);
                sum.add(std::hypot(gx, gy));
                ++count;
            }
        }
        if (count >= 4) fit.samples.emplace_back(rho, sum.value() / count);
    }
    if (fit.samples.size() < 2)
        throw diagnostic_error("pole_exponent_fit: overlapping pole neighborhoods leave "
                               "too few rings");
    fit.fitted = detail::loglog_slope(fit.samples);
    return fit;
}

// ---------------------------------------------------------------------------
// barrier oracle

/// Radial p-harmonic annulus barrier
///   w_R(s) = (R^kappa - s^kappa) / (R^kappa - r0^kappa),  kappa = (p-n)/(p-1),
/// with w_R(r0) = 1 and w_R(R) = 0.
inline std::vector<double> barrier_profile(double r0, double R, double p, int n,
                                           const std::vector<double>& samples) {
    if (!(r0 >= 1.0) || !(r0 < R))
        throw diagnostic_error("barrier_profile: need 1 <= r0 < R");
    if (!(p > n))
        throw diagnostic_error("barrier_profile: need p > n");
    const double kappa = (p - n) / (p - 1.0);
    const double den = std::pow(R, kappa) - std::pow(r0, kappa);
    std::vector<double> out;
    out.reserve(samples.size());
    for (double s : samples)
        out.push_back((std::pow(R, kappa) - std::pow(s, kappa)) / den);
    return out;
}

}  // namespace plap
