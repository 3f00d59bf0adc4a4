#include "poncelet/conics.hpp"

#include <array>
#include <cmath>

#include "poncelet/errors.hpp"

namespace poncelet {

namespace {

constexpr double kOnConicTol = 1e-10;   // relative form-value tolerance for "lies on"
constexpr double kParallelTol = 1e-9;   // |cross(n1,n2)| below this counts as parallel

void canonicalize(Vec2& n, double& d) {
    bool flip = d < 0.0;
    if (d == 0.0) {
        flip = n.x != 0.0 ? n.x < 0.0 : n.y < 0.0;
    }
    if (flip) {
        n = -n;
        d = -d;
    }
}

} // namespace

Ellipse::Ellipse(double a1, double a2) : a1_(a1), a2_(a2) {
    if (!(a1 >= a2 && a2 > 0.0)) {
        throw DomainError("ellipse semi-axes must satisfy a1 >= a2 > 0");
    }
}

Vec2 Ellipse::point_on(double t) const { return {a1_ * std::cos(t), a2_ * std::sin(t)}; }

double Ellipse::form_value(Vec2 p) const {
    const double u = p.x / a1_;
    const double v = p.y / a2_;
    return u * u + v * v;
}

Vec2 Ellipse::form_apply(Vec2 p) const { return {p.x / (a1_ * a1_), p.y / (a2_ * a2_)}; }

double Ellipse::param_of(Vec2 p) const { return wrap_two_pi(std::atan2(p.y / a2_, p.x / a1_)); }

Vec2 Ellipse::tangent_dir(double t) const { return {-a1_ * std::sin(t), a2_ * std::cos(t)}; }

Line Line::through(Vec2 p, Vec2 q) {
    const Vec2 dir = q - p;
    if (norm(dir) == 0.0) {
        throw DegeneracyError("line through two coincident points");
    }
    return from_normal(perp(dir), dot(perp(dir), p));
}

Line Line::from_normal(Vec2 normal, double offset) {
    const double len = norm(normal);
    if (len == 0.0) {
        throw DegeneracyError("line with zero normal");
    }
    Vec2 n = {normal.x / len, normal.y / len};
    double d = offset / len;
    canonicalize(n, d);
    return {n, d};
}

Vec2 intersect(const Line& a, const Line& b) {
    const double det = cross(a.n, b.n);
    if (std::abs(det) < kParallelTol) {
        throw DegeneracyError("line intersection: lines are (nearly) parallel");
    }
    return {(a.d * b.n.y - b.d * a.n.y) / det, (a.n.x * b.d - b.n.x * a.d) / det};
}

ConcentricConic::ConcentricConic(double m11, double m12, double m22)
    : m11_(m11), m12_(m12), m22_(m22) {
    if (!(m11 > 0.0 && m11 * m22 - m12 * m12 > 0.0)) {
        throw DomainError("conic form must be symmetric positive definite");
    }
}

ConcentricConic ConcentricConic::from_ellipse(const Ellipse& e) {
    return {1.0 / (e.a1() * e.a1()), 0.0, 1.0 / (e.a2() * e.a2())};
}

ConcentricConic ConcentricConic::scaled(const Ellipse& shape, double s) {
    if (s <= 0.0) throw DomainError("conic scale must be positive");
    const double s1 = s * shape.a1();
    const double s2 = s * shape.a2();
    return {1.0 / (s1 * s1), 0.0, 1.0 / (s2 * s2)};
}

double ConcentricConic::form_value(Vec2 p) const {
    return m11_ * p.x * p.x + 2.0 * m12_ * p.x * p.y + m22_ * p.y * p.y;
}

Vec2 ConcentricConic::form_apply(Vec2 p) const {
    return {m11_ * p.x + m12_ * p.y, m12_ * p.x + m22_ * p.y};
}

ConcentricConic::Axes ConcentricConic::principal_axes() const {
    const double half_tr = 0.5 * (m11_ + m22_);
    const double half_diff = 0.5 * (m11_ - m22_);
    const double disc = std::sqrt(half_diff * half_diff + m12_ * m12_);
    const double lo = half_tr - disc; // eigenvalue of the major axis
    const double hi = half_tr + disc;

    Vec2 u1;
    if (m12_ == 0.0) {
        u1 = m11_ <= m22_ ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    } else {
        // (M - lo I) v = 0; pick the better-conditioned null-vector branch.
        const Vec2 v1 = {m12_, lo - m11_};
        const Vec2 v2 = {lo - m22_, m12_};
        u1 = normalized(norm_sq(v1) >= norm_sq(v2) ? v1 : v2);
    }
    if (u1.x < 0.0 || (u1.x == 0.0 && u1.y < 0.0)) u1 = -u1;
    return {1.0 / std::sqrt(lo), 1.0 / std::sqrt(hi), u1, perp(u1)};
}

Vec2 ConcentricConic::point_at(double t) const {
    const Axes ax = principal_axes();
    return ax.b1 * std::cos(t) * ax.u1 + ax.b2 * std::sin(t) * ax.u2;
}

double ConcentricConic::param_of(Vec2 p) const {
    const Axes ax = principal_axes();
    return wrap_two_pi(std::atan2(dot(ax.u2, p) / ax.b2, dot(ax.u1, p) / ax.b1));
}

AffineMap AffineMap::inverse() const {
    const double dt = det();
    if (std::abs(dt) < 1e-300) {
        throw DomainError("affine map is singular");
    }
    return {l22 / dt, -l12 / dt, -l21 / dt, l11 / dt};
}

AffineMap AffineMap::rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
}

AffineMap operator*(const AffineMap& a, const AffineMap& b) {
    return {a.l11 * b.l11 + a.l12 * b.l21, a.l11 * b.l12 + a.l12 * b.l22,
            a.l21 * b.l11 + a.l22 * b.l21, a.l21 * b.l12 + a.l22 * b.l22};
}

ConcentricConic transformed(const ConcentricConic& c, const AffineMap& t) {
    const AffineMap s = t.inverse();
    // S^T M S with S = t^-1.
    const double a = c.m11() * s.l11 + c.m12() * s.l21;
    const double b = c.m11() * s.l12 + c.m12() * s.l22;
    const double d = c.m12() * s.l11 + c.m22() * s.l21;
    const double e = c.m12() * s.l12 + c.m22() * s.l22;
    return {s.l11 * a + s.l21 * d, s.l11 * b + s.l21 * e, s.l12 * b + s.l22 * e};
}

AffineMap unit_circle_map(const ConcentricConic& c) {
    const auto ax = c.principal_axes();
    const double r1 = 1.0 / ax.b1; // sqrt of the minor-axis eigenvalue
    const double r2 = 1.0 / ax.b2;
    // R diag(r) R^T with R = [u1 u2].
    return {r1 * ax.u1.x * ax.u1.x + r2 * ax.u2.x * ax.u2.x,
            r1 * ax.u1.x * ax.u1.y + r2 * ax.u2.x * ax.u2.y,
            r1 * ax.u1.x * ax.u1.y + r2 * ax.u2.x * ax.u2.y,
            r1 * ax.u1.y * ax.u1.y + r2 * ax.u2.y * ax.u2.y};
}

Vec2 polar_dual_point(const Ellipse& e, Vec2 x) {
    if (std::abs(e.form_value(x) - 1.0) > kOnConicTol) {
        throw DomainError("polar_dual_point: point does not lie on the conic");
    }
    return e.form_apply(x);
}

Ellipse confocal_ellipse(const Ellipse& e, double mu) {
    const double b2 = e.a2() * e.a2() + mu;
    if (b2 <= 0.0) {
        throw DomainError("confocal parameter on the hyperbola branch (mu <= -a2^2)");
    }
    return {std::sqrt(e.a1() * e.a1() + mu), std::sqrt(b2)};
}

ConfocalParams confocal_param_of_point(const Ellipse& e, Vec2 x) {
    const double a1s = e.a1() * e.a1();
    const double a2s = e.a2() * e.a2();
    // mu^2 + b mu + c = 0
    const double b = a1s + a2s - x.x * x.x - x.y * x.y;
    const double c = a1s * a2s - x.x * x.x * a2s - x.y * x.y * a1s;
    double disc = b * b - 4.0 * c;
    if (disc < 0.0) {
        const double scale = std::max({b * b, std::abs(c), 1.0});
        if (disc < -1e-12 * scale) {
            throw DomainError("confocal_param_of_point: degenerate point (complex roots)");
        }
        disc = 0.0;
    }
    // Larger-magnitude root first, the other from the product, to avoid cancellation.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q;
    const double r2 = q != 0.0 ? c / q : 0.0;
    return {std::max(r1, r2), std::min(r1, r2)};
}

double line_tangency_param(const Ellipse& e, const Line& l) {
    if (std::abs(norm(l.n) - 1.0) > 1e-12) {
        throw DomainError("line_tangency_param: normal must be unit");
    }
    const double a1s = e.a1() * e.a1();
    const double a2s = e.a2() * e.a2();
    return l.d * l.d - (a1s * l.n.x * l.n.x + a2s * l.n.y * l.n.y);
}

ConicFit conic_from_tangent_lines(std::span<const Line> lines) {
    if (lines.size() < 3) {
        throw DomainError("conic_from_tangent_lines: need at least 3 lines");
    }
    // Normal equations for rows (n1^2, 2 n1 n2, n2^2) . (w11, w12, w22) = d^2.
    std::array<std::array<double, 3>, 3> ata{};
    std::array<double, 3> atb{};
    for (const Line& l : lines) {
        const std::array<double, 3> row = {l.n.x * l.n.x, 2.0 * l.n.x * l.n.y, l.n.y * l.n.y};
        const double rhs = l.d * l.d;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
            atb[i] += row[i] * rhs;
        }
    }

    // Minimum-norm least squares via a Jacobi eigendecomposition of the normal
    // matrix. Symmetric line sets (e.g. the tangent square of a circle, or the
    // side lines of a rectangle) give consistent rank-2 systems: the tangency
    // constraint cannot see one of the three dual-form directions, and the
    // minimum-norm completion picks the central member of the solution family.
    std::array<std::array<double, 3>, 3> q = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    std::array<std::array<double, 3>, 3> a = ata;
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15 * (std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + 1e-300)) {
            break;
        }
        for (int p = 0; p < 3; ++p) {
            for (int r = p + 1; r < 3; ++r) {
                if (a[p][r] == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][r], a[p][p] - a[r][r]);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                for (int j = 0; j < 3; ++j) {
                    const double apj = a[p][j], arj = a[r][j];
                    a[p][j] = c * apj + s * arj;
                    a[r][j] = -s * apj + c * arj;
                }
                for (int j = 0; j < 3; ++j) {
                    const double ajp = a[j][p], ajr = a[j][r];
                    a[j][p] = c * ajp + s * ajr;
                    a[j][r] = -s * ajp + c * ajr;
                    const double qjp = q[j][p], qjr = q[j][r];
                    q[j][p] = c * qjp + s * qjr;
                    q[j][r] = -s * qjp + c * qjr;
                }
            }
        }
    }
    const double lambda_max = std::max({a[0][0], a[1][1], a[2][2]});
    std::array<double, 3> w{};
    int rank = 0;
    for (int i = 0; i < 3; ++i) {
        if (a[i][i] <= 1e-12 * lambda_max) continue;
        ++rank;
        double proj = 0.0;
        for (int j = 0; j < 3; ++j) proj += q[j][i] * atb[j];
        for (int j = 0; j < 3; ++j) w[j] += proj / a[i][i] * q[j][i];
    }
    if (rank <= 1) {
        throw FitError("conic_from_tangent_lines: rank-deficient constraint system");
    }

    ConicFit fit;
    fit.w11 = w[0];
    fit.w12 = w[1];
    fit.w22 = w[2];
    for (const Line& l : lines) {
        const double v = fit.w11 * l.n.x * l.n.x + 2.0 * fit.w12 * l.n.x * l.n.y +
                         fit.w22 * l.n.y * l.n.y - l.d * l.d;
        fit.residual = std::max(fit.residual, std::abs(v));
    }
    const double det_w = fit.w11 * fit.w22 - fit.w12 * fit.w12;
    fit.definite = fit.w11 > 0.0 && det_w > 0.0;
    if (fit.definite) {
        fit.conic = ConcentricConic{fit.w22 / det_w, -fit.w12 / det_w, fit.w11 / det_w};
    }
    return fit;
}

ConfocalizeResult confocalize(const ConcentricConic& outer, const ConcentricConic& inner) {
    // Already axis-aligned and confocal: nothing to do.
    if (outer.m12() == 0.0 && inner.m12() == 0.0 && outer.m11() <= outer.m22() &&
        inner.m11() <= inner.m22()) {
        const double o1 = 1.0 / std::sqrt(outer.m11());
        const double o2 = 1.0 / std::sqrt(outer.m22());
        const double i1 = 1.0 / std::sqrt(inner.m11());
        const double i2 = 1.0 / std::sqrt(inner.m22());
        const double focal_gap = (o1 * o1 - o2 * o2) - (i1 * i1 - i2 * i2);
        if (i1 < o1 && i2 < o2 && std::abs(focal_gap) <= 1e-12 * (1.0 + o1 * o1)) {
            return {AffineMap::identity(), Ellipse{o1, o2}, Ellipse{i1, i2}};
        }
    }

    const AffineMap b = unit_circle_map(inner);
    const ConcentricConic g = transformed(outer, b);
    const auto ax = g.principal_axes();

    // In the circle frame the outer image has semi-axes b1 >= b2; nested means b2 > 1.
    if (std::abs(ax.b2 - 1.0) <= 1e-12) {
        throw DegeneracyError("confocalize: outer image has an axis equal to 1");
    }
    if (ax.b2 < 1.0) {
        throw DomainError("confocalize: pair is not strictly nested");
    }
    const double big = ax.b1;   // A2 in the stretch equation
    const double small = ax.b2; // A1

    // Rotation sending the minor axis of the image to the first coordinate, proper.
    const Vec2 w = ax.u2;
    const AffineMap rot = {w.x, w.y, -w.y, w.x};
    // Stretch gauge: first factor 1, second solves A1^2 - s^2 A2^2 = 1 - s^2.
    const double s2 = std::sqrt((small * small - 1.0) / (big * big - 1.0));
    const AffineMap t = AffineMap::scale(1.0, s2) * rot * b;

    double out1 = small;
    double out2 = s2 * big;
    double in1 = 1.0;
    double in2 = s2;
    if (out1 < out2) std::swap(out1, out2); // guards eps-level ordering jitter near circles
    if (in1 < in2) std::swap(in1, in2);
    return {t, Ellipse{out1, out2}, Ellipse{in1, in2}};
}

} // namespace poncelet
