#include "poncelet/billiard.hpp"

#include <cmath>

#include "poncelet/errors.hpp"

namespace poncelet {

PhasePoint phase_point(const Ellipse& e, double t, Vec2 u) {
    if (std::abs(norm(u) - 1.0) > 1e-14) {
        throw DomainError("phase point direction must be a unit vector");
    }
    if (!(dot(u, e.form_apply(e.point_on(t))) < 0.0)) {
        throw DomainError("phase point direction must point strictly inward");
    }
    return {wrap_two_pi(t), u};
}

Vec2 chord_next(const Ellipse& e, Vec2 x, Vec2 u) {
    // The s = 0 root of the chord quadratic is factored out analytically.
    const double s = -2.0 * dot(e.form_apply(x), u) / dot(e.form_apply(u), u);
    if (std::abs(s) < 1e-12 * e.a1()) {
        throw TangencyError("chord degenerates to a grazing segment");
    }
    return x + s * u;
}

Vec2 reflect(const Ellipse& e, Vec2 y, Vec2 u) {
    const Vec2 n = normalized(e.form_apply(y));
    return normalized(u - 2.0 * dot(u, n) * n);
}

PhasePoint billiard_step(const Ellipse& e, const PhasePoint& pp) {
    const Vec2 x = e.point_on(pp.t);
    const Vec2 y = chord_next(e, x, pp.u);
    return {e.param_of(y), reflect(e, y, pp.u)};
}

double joachimsthal(const Ellipse& e, const PhasePoint& pp) {
    return -dot(pp.u, e.form_apply(e.point_on(pp.t)));
}

double caustic_of_ray(const Ellipse& e, const PhasePoint& pp) {
    const Vec2 x = e.point_on(pp.t);
    return line_tangency_param(e, Line::from_normal(perp(pp.u), dot(perp(pp.u), x)));
}

Orbit orbit(const Ellipse& e, const PhasePoint& pp0, int n) {
    if (n < 2) throw DomainError("orbit period must be at least 2");

    Orbit o{.table = e};
    o.period = n;
    o.vertex_params.reserve(n);
    o.points.reserve(n);
    o.dirs.reserve(n);

    PhasePoint pp = pp0;
    pp.t = wrap_two_pi(pp.t);
    double total = 0.0;
    double j0 = 0.0;
    double mu_sum = 0.0;
    std::vector<double> mu_sides(n);
    for (int i = 0; i < n; ++i) {
        o.vertex_params.push_back(pp.t);
        o.points.push_back(e.point_on(pp.t));
        o.dirs.push_back(pp.u);
        const double j = joachimsthal(e, pp);
        if (i == 0) {
            j0 = j;
        } else {
            o.j_max_dev = std::max(o.j_max_dev, std::abs(j - j0));
        }
        mu_sides[i] = caustic_of_ray(e, pp);
        mu_sum += mu_sides[i];

        const PhasePoint next = billiard_step(e, pp);
        total += param_advance(pp.t, next.t);
        pp = next;
    }
    o.joachimsthal = j0;
    o.mu = mu_sum / n;
    for (double m : mu_sides) o.mu_max_dev = std::max(o.mu_max_dev, std::abs(m - o.mu));
    o.winding = static_cast<int>(std::llround(total / kTwoPi));
    o.closure_defect = std::abs(total - kTwoPi * o.winding);
    return o;
}

Orbit orbit_from_points(const Ellipse& e, std::span<const Vec2> pts, double on_conic_tol) {
    const int n = static_cast<int>(pts.size());
    if (n < 2) throw DomainError("orbit_from_points: need at least 2 points");

    Orbit o{.table = e};
    o.period = n;
    double total = 0.0;
    double j0 = 0.0;
    double mu_sum = 0.0;
    std::vector<double> mu_sides(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 p = pts[i];
        if (std::abs(e.form_value(p) - 1.0) > on_conic_tol) {
            throw DomainError("orbit_from_points: vertex does not lie on the conic");
        }
        const Vec2 q = pts[(i + 1) % n];
        if (distance(p, q) == 0.0) {
            throw DomainError("orbit_from_points: repeated consecutive vertices");
        }
        o.vertex_params.push_back(e.param_of(p));
        o.points.push_back(p);
        o.dirs.push_back(normalized(q - p));

        const double j = -dot(o.dirs[i], e.form_apply(p));
        if (i == 0) {
            j0 = j;
        } else {
            o.j_max_dev = std::max(o.j_max_dev, std::abs(j - j0));
        }
        mu_sides[i] = line_tangency_param(e, Line::through(p, q));
        mu_sum += mu_sides[i];
    }
    for (int i = 0; i < n; ++i) {
        total += param_advance(o.vertex_params[i], o.vertex_params[(i + 1) % n]);
    }
    o.joachimsthal = j0;
    o.mu = mu_sum / n;
    for (double m : mu_sides) o.mu_max_dev = std::max(o.mu_max_dev, std::abs(m - o.mu));
    o.winding = static_cast<int>(std::llround(total / kTwoPi));
    o.closure_defect = std::abs(total - kTwoPi * o.winding);
    return o;
}

} // namespace poncelet
