#include "poncelet/grid.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "poncelet/errors.hpp"
#include "poncelet/families.hpp"
#include "poncelet/invariants.hpp"

namespace poncelet {

namespace {

//! Reduce an angle-formula value into (0, pi) by reflecting mod 2 pi.
double reduce_angle(double v) {
    double r = wrap_two_pi(v);
    if (r > kPi) r = kTwoPi - r;
    return r;
}

} // namespace

std::vector<Line> side_lines(const Orbit& o) {
    const int n = o.period;
    std::vector<Line> lines(n);
    for (int i = 0; i < n; ++i) lines[i] = Line::through(o.points[i], o.points[(i + 1) % n]);
    return lines;
}

GridLayer grid_layer(const Orbit& o, int k) {
    const int n = o.period;
    if (k < 2 || k > n - 2) throw DomainError("grid_layer: step must satisfy 2 <= k <= n-2");

    const auto lines = side_lines(o);
    GridLayer layer;
    layer.step = k;
    layer.points.resize(n);
    layer.mu_values.resize(n);
    for (int i = 0; i < n; ++i) {
        try {
            layer.points[i] = intersect(lines[i], lines[(i + k) % n]);
        } catch (const DegeneracyError&) {
            throw DegeneracyError("grid_layer: side lines " + std::to_string(i) + " and " +
                                  std::to_string((i + k) % n) + " are parallel");
        }
        layer.mu_values[i] = confocal_param_of_point(o.table, layer.points[i]).mu_e;
        layer.mu_mean += layer.mu_values[i];
    }
    layer.mu_mean /= n;
    for (double m : layer.mu_values) {
        layer.mu_max_dev = std::max(layer.mu_max_dev, std::abs(m - layer.mu_mean));
    }

    const int g = std::gcd(n, k);
    for (int r = 0; r < g; ++r) {
        std::vector<int> chain;
        for (int i = r; chain.empty() || i != r; i = (i + k) % n) chain.push_back(i);
        layer.polygons.push_back(std::move(chain));
    }
    return layer;
}

double grid_polygon_angles_check(const Orbit& o, const GridLayer& layer) {
    const int n = o.period;
    const int k = layer.step;
    const auto alpha = vertex_angles(o);
    double max_dev = 0.0;
    for (const auto& chain : layer.polygons) {
        const int m = static_cast<int>(chain.size());
        for (int j = 0; j < m; ++j) {
            const Vec2& cur = layer.points[chain[j]];
            const Vec2& prev = layer.points[chain[(j - 1 + m) % m]];
            const Vec2& next = layer.points[chain[(j + 1) % m]];
            const double measured = angle_between(prev - cur, next - cur);

            // The angle at line_i x line_{i+k} accumulates the reflections at
            // vertices i+1 .. i+k.
            double window = 0.0;
            for (int s = 1; s <= k; ++s) window += alpha[(chain[j] + s) % n];
            const double formula = reduce_angle(window - (k - 1) * kPi);
            max_dev = std::max(max_dev, std::abs(measured - formula));
        }
    }
    return max_dev;
}

double area_ratio(const Orbit& o) {
    if (o.period % 2 == 0) throw DomainError("area_ratio: defined for odd n only");
    return polygon_area(o.points) / polygon_area(tangent_polygon(o));
}

namespace {

//! Tangent polygon of a general-pair Poncelet polygon: intersections of the
//! consecutive tangent lines to the outer conic at the polygon's vertices.
std::vector<Vec2> outer_tangent_polygon(const ConcentricConic& outer,
                                        const std::vector<Vec2>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<Line> tangents(n);
    for (int i = 0; i < n; ++i) tangents[i] = Line::from_normal(outer.form_apply(pts[i]), 1.0);
    std::vector<Vec2> q(n);
    for (int i = 0; i < n; ++i) q[i] = intersect(tangents[i], tangents[(i + 1) % n]);
    return q;
}

struct SweepStats {
    double mean, abs_spread, rel_spread;
};

SweepStats stats_of(const std::vector<double>& v) {
    double lo = v.front(), hi = v.front(), sum = 0.0;
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
    }
    const double mean = sum / v.size();
    return {mean, hi - lo, (hi - lo) / (std::abs(mean) + 1e-300)};
}

} // namespace

AreaRatioSweep area_ratio_general(const ConcentricConic& outer, const ConcentricConic& inner,
                                  int n, int k, int starts) {
    if (n % 2 == 0) throw DomainError("area_ratio_general: defined for odd n only");
    if (starts < 2) throw DomainError("area_ratio_general: need at least 2 starts");

    AreaRatioSweep sweep;
    for (int j = 0; j < starts; ++j) {
        const GeneralPolygon poly = general_polygon(outer, inner, kTwoPi * j / starts, n);
        if (poly.closure_defect > 1e-9 || poly.winding != k) {
            throw MemberError(j, "general polygon does not close");
        }
        sweep.direct.push_back(polygon_area(poly.points) /
                               polygon_area(outer_tangent_polygon(outer, poly.points)));
    }

    // Transport to a confocal pair and rerun the sweep with the billiard construction.
    const ConfocalizeResult cf = confocalize(outer, inner);
    const double mu1 = cf.inner.a1() * cf.inner.a1() - cf.outer.a1() * cf.outer.a1();
    const double mu2 = cf.inner.a2() * cf.inner.a2() - cf.outer.a2() * cf.outer.a2();
    if (std::abs(mu1 - mu2) > 1e-9 * (1.0 + std::abs(mu1))) {
        throw ConvergenceError("area_ratio_general: confocalized pair failed the focal check");
    }
    for (int j = 0; j < starts; ++j) {
        const Orbit o =
            orbit(cf.outer, launch_tangent(cf.outer, mu1, kTwoPi * j / starts), n);
        if (o.closure_defect > 1e-9 || o.winding != k) {
            throw MemberError(j, "confocalized orbit does not close");
        }
        sweep.confocal.push_back(area_ratio(o));
    }

    const SweepStats d = stats_of(sweep.direct);
    const SweepStats c = stats_of(sweep.confocal);
    sweep.direct_mean = d.mean;
    sweep.direct_abs_spread = d.abs_spread;
    sweep.direct_rel_spread = d.rel_spread;
    sweep.confocal_mean = c.mean;
    sweep.confocal_abs_spread = c.abs_spread;
    sweep.confocal_rel_spread = c.rel_spread;
    sweep.agreement = std::abs(d.mean - c.mean);
    return sweep;
}

double grid_affine_map_check(const Orbit& o) {
    const int n = o.period;
    if (n % 2 == 0) throw DomainError("grid_affine_map_check: defined for odd n only");
    const Ellipse caustic = confocal_ellipse(o.table, o.mu);
    const AffineMap lambda =
        AffineMap::scale(-o.table.a1() / caustic.a1(), -o.table.a2() / caustic.a2());

    const std::vector<Vec2> q = tangent_polygon(o);
    std::vector<Vec2> mapped(n);
    for (int i = 0; i < n; ++i) mapped[i] = lambda(o.points[i]);

    double best_total = std::numeric_limits<double>::infinity();
    double best_max = 0.0;
    for (int shift = 0; shift < n; ++shift) {
        double total = 0.0;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = distance(mapped[i], q[(i + shift) % n]);
            total += d;
            worst = std::max(worst, d);
        }
        if (total < best_total) {
            best_total = total;
            best_max = worst;
        }
    }
    const double scale = o.table.a1() * o.table.a1() / caustic.a1();
    if (best_max > 1e-3 * scale) {
        throw DegeneracyError("grid_affine_map_check: no consistent cyclic shift found");
    }
    return best_max;
}

} // namespace poncelet
