#include "poncelet/invariants.hpp"

#include <cmath>

#include "poncelet/errors.hpp"

namespace poncelet {

namespace {

int wrap_index(int i, int n) { return ((i % n) + n) % n; }

} // namespace

std::vector<double> vertex_angles(const Orbit& o) {
    const int n = o.period;
    std::vector<double> alpha(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& in = o.dirs[wrap_index(i - 1, n)];
        const Vec2& out = o.dirs[i];
        alpha[i] = kPi - std::acos(clamp_unit(dot(in, out)));
    }
    return alpha;
}

double perimeter(const Orbit& o) {
    double len = 0.0;
    const int n = o.period;
    for (int i = 0; i < n; ++i) len += distance(o.points[i], o.points[(i + 1) % n]);
    return len;
}

std::pair<double, double> sum_cos_and_identity(const Orbit& o) {
    double sum = 0.0;
    for (double a : vertex_angles(o)) sum += std::cos(a);
    return {sum, o.joachimsthal * perimeter(o) - o.period};
}

std::vector<Vec2> tangent_polygon(const Orbit& o) {
    const int n = o.period;
    if (n < 3) throw DomainError("tangent_polygon: need at least 3 vertices");
    std::vector<Line> tangents(n);
    for (int i = 0; i < n; ++i) {
        tangents[i] = Line::from_normal(o.table.form_apply(o.points[i]), 1.0);
    }
    std::vector<Vec2> q(n);
    for (int i = 0; i < n; ++i) {
        try {
            q[i] = intersect(tangents[i], tangents[(i + 1) % n]);
        } catch (const DegeneracyError&) {
            throw DegeneracyError("tangent_polygon: parallel tangents at vertices " +
                                  std::to_string(i) + " and " + std::to_string((i + 1) % n));
        }
    }
    return q;
}

std::vector<double> beta_angles(const Orbit& o) {
    const auto alpha = vertex_angles(o);
    const int n = o.period;
    std::vector<double> beta(n);
    for (int i = 0; i < n; ++i) beta[i] = 0.5 * (alpha[i] + alpha[(i + 1) % n]);
    return beta;
}

double prod_cos_beta(const Orbit& o) {
    double prod = 1.0;
    for (double b : beta_angles(o)) prod *= std::cos(b);
    return prod;
}

double c_k(const Orbit& o, int k) {
    const int n = o.period;
    if (k < 1 || k > n) throw DomainError("c_k: window length out of range");
    const auto alpha = vertex_angles(o);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double window = 0.0;
        for (int j = 0; j < k; ++j) window += alpha[(i + j) % n];
        sum += std::cos(window);
    }
    return sum;
}

UPolygon u_polygon(const Orbit& o) {
    const int n = o.period;
    if (n < 3) throw DomainError("u_polygon: need at least 3 distinct directions");
    UPolygon up;
    up.points = o.dirs;
    std::vector<Line> sides(n);
    for (int i = 0; i < n; ++i) sides[i] = Line::through(up.points[i], up.points[(i + 1) % n]);
    up.fit = conic_from_tangent_lines(sides);
    return up;
}

double sum_cos_central(const UPolygon& up, int k) {
    const int n = static_cast<int>(up.points.size());
    if (k < 1 || k > n - 1) throw DomainError("sum_cos_central: step out of range");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += dot(up.points[i], up.points[(i + k) % n]);
    return sum;
}

double sum_sq_diagonals(const UPolygon& up, int k) {
    const int n = static_cast<int>(up.points.size());
    if (k < 1 || k > n - 1) throw DomainError("sum_sq_diagonals: step out of range");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += norm_sq(up.points[(i + k) % n] - up.points[i]);
    return sum;
}

double prod_sin_half(const Orbit& o) {
    if (o.period % 2 == 0) throw DomainError("prod_sin_half: defined for odd n only");
    double prod = 1.0;
    for (double a : vertex_angles(o)) prod *= std::sin(0.5 * a);
    return prod;
}

std::vector<int> beta_sign_profile(const Orbit& o) {
    std::vector<int> signs;
    for (double b : beta_angles(o)) {
        const double d = b - 0.5 * kPi;
        signs.push_back(std::abs(d) < 1e-9 ? 0 : (d > 0.0 ? 1 : -1));
    }
    return signs;
}

DualPolygon dual_polygon(const UPolygon& up) {
    const int n = static_cast<int>(up.points.size());
    if (n < 3) throw DomainError("dual_polygon: need at least 3 vertices");
    DualPolygon v;
    v.points.resize(n);
    for (int i = 0; i < n; ++i) {
        // Pole of the chord u_i u_{i+1} with respect to the unit circle.
        const Vec2 m = up.points[i] + up.points[(i + 1) % n];
        if (norm(m) < 1e-9) {
            throw DegeneracyError("dual_polygon: consecutive directions are antipodal");
        }
        v.points[i] = (2.0 / norm_sq(m)) * m;
    }
    v.prod_cos_central = 1.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = v.points[wrap_index(i - 1, n)];
        const Vec2& cur = v.points[i];
        const Vec2& next = v.points[(i + 1) % n];
        v.sum_cos_interior += std::cos(angle_between(prev - cur, next - cur));
        v.prod_cos_central *= dot(cur, next) / (norm(cur) * norm(next));
    }
    return v;
}

double polygon_area(std::span<const Vec2> pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 3) throw DomainError("polygon_area: need at least 3 points");
    double twice = 0.0;
    for (int i = 0; i < n; ++i) twice += cross(pts[i], pts[(i + 1) % n]);
    return 0.5 * twice;
}

InvariantReport evaluate(const Orbit& o) {
    const int n = o.period;
    if (n < 3) throw DomainError("evaluate: invariants need at least 3 vertices");

    InvariantReport r;
    r.perimeter = perimeter(o);
    r.joachimsthal = o.joachimsthal;
    const auto [scos, ident] = sum_cos_and_identity(o);
    r.sum_cos_alpha = scos;
    r.jl_minus_n = ident;
    r.prod_cos_beta = prod_cos_beta(o);
    for (int k = 1; k <= n - 1; ++k) r.c_k.push_back(c_k(o, k));

    const UPolygon up = u_polygon(o);
    for (int k = 1; k <= n - 1; ++k) {
        r.sum_cos_central.push_back(sum_cos_central(up, k));
        r.sum_sq_diag.push_back(sum_sq_diagonals(up, k));
    }
    r.u_fit_residual = up.fit.residual;

    // Geometric vertex angles from the raw point differences, checked against the
    // central angles of the direction polygon.
    const auto alpha = vertex_angles(o);
    for (int i = 0; i < n; ++i) {
        const Vec2 to_prev = o.points[wrap_index(i - 1, n)] - o.points[i];
        const Vec2 to_next = o.points[(i + 1) % n] - o.points[i];
        const double geometric = angle_between(to_prev, to_next);
        const double central = angle_between(o.dirs[wrap_index(i - 1, n)], o.dirs[i]);
        r.u_angle_max_dev =
            std::max(r.u_angle_max_dev, std::abs(central - (kPi - geometric)));
    }

    if (n % 2 == 1) {
        r.prod_sin_half = prod_sin_half(o);
        r.area_ratio = polygon_area(o.points) / polygon_area(tangent_polygon(o));
    }
    r.beta_signs = beta_sign_profile(o);

    const DualPolygon dp = dual_polygon(up);
    r.dual_sum_cos = dp.sum_cos_interior;
    r.dual_prod_cos = dp.prod_cos_central;
    return r;
}

std::vector<std::pair<std::string, double>> flatten_report(const InvariantReport& r) {
    std::vector<std::pair<std::string, double>> out;
    out.emplace_back("L", r.perimeter);
    out.emplace_back("J", r.joachimsthal);
    out.emplace_back("sum_cos_alpha", r.sum_cos_alpha);
    out.emplace_back("jl_minus_n", r.jl_minus_n);
    out.emplace_back("prod_cos_beta", r.prod_cos_beta);
    for (size_t k = 0; k < r.c_k.size(); ++k) {
        out.emplace_back("c_" + std::to_string(k + 1), r.c_k[k]);
    }
    for (size_t k = 0; k < r.sum_cos_central.size(); ++k) {
        out.emplace_back("sum_cos_central_" + std::to_string(k + 1), r.sum_cos_central[k]);
    }
    for (size_t k = 0; k < r.sum_sq_diag.size(); ++k) {
        out.emplace_back("sum_sq_diag_" + std::to_string(k + 1), r.sum_sq_diag[k]);
    }
    if (r.prod_sin_half) out.emplace_back("prod_sin_half", *r.prod_sin_half);
    if (r.area_ratio) out.emplace_back("area_ratio", *r.area_ratio);
    out.emplace_back("dual_sum_cos", r.dual_sum_cos);
    out.emplace_back("dual_prod_cos", r.dual_prod_cos);
    return out;
}

} // namespace poncelet
