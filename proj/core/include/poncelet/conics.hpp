#pragma once

#include <optional>
#include <span>
#include <vector>

#include "poncelet/geometry.hpp"

namespace poncelet {

//! Centered axis-aligned ellipse x^2/a1^2 + y^2/a2^2 = 1 with a1 >= a2 > 0.
//! The associated form matrix is A = diag(1/a1^2, 1/a2^2).
class Ellipse {
  public:
    Ellipse(double a1, double a2);

    double a1() const { return a1_; }
    double a2() const { return a2_; }
    bool is_circle() const { return a1_ == a2_; }

    //! Boundary point (a1 cos t, a2 sin t).
    Vec2 point_on(double t) const;

    //! <x, Ax>; equals 1 on the boundary.
    double form_value(Vec2 p) const;

    //! A x, the outward conormal direction at a boundary point.
    Vec2 form_apply(Vec2 p) const;

    //! Boundary parameter of a point, recovered as atan2(y/a2, x/a1) in [0, 2pi).
    double param_of(Vec2 p) const;

    //! Tangent direction d/dt of point_on.
    Vec2 tangent_dir(double t) const;

  private:
    double a1_, a2_;
};

//! Oriented line {x : <n, x> = d} with |n| = 1, stored canonically:
//! d >= 0, and for d = 0 the first nonzero normal component is positive.
struct Line {
    Vec2 n;
    double d = 0.0;

    static Line through(Vec2 p, Vec2 q);
    static Line from_normal(Vec2 normal, double offset);

    //! Signed distance <n, p> - d.
    double eval(Vec2 p) const { return dot(n, p) - d; }
};

//! Intersection point of two lines; DegeneracyError when (nearly) parallel.
Vec2 intersect(const Line& a, const Line& b);

//! Central conic {x : <x, Mx> = 1} with M symmetric positive definite.
class ConcentricConic {
  public:
    ConcentricConic(double m11, double m12, double m22);

    static ConcentricConic from_ellipse(const Ellipse& e);
    //! The conic of the ellipse `shape` scaled by a factor s about the origin.
    static ConcentricConic scaled(const Ellipse& shape, double s);

    double m11() const { return m11_; }
    double m12() const { return m12_; }
    double m22() const { return m22_; }

    double form_value(Vec2 p) const;
    Vec2 form_apply(Vec2 p) const;

    //! Principal semi-axes b1 >= b2 and the unit major-axis direction u1 (u2 = perp(u1)).
    struct Axes {
        double b1, b2;
        Vec2 u1, u2;
    };
    Axes principal_axes() const;

    //! Point at parameter t in the principal-axes parametrization.
    Vec2 point_at(double t) const;
    double param_of(Vec2 p) const;

  private:
    double m11_, m12_, m22_;
};

//! Invertible linear map of the plane (the origin stays fixed).
struct AffineMap {
    double l11 = 1.0, l12 = 0.0;
    double l21 = 0.0, l22 = 1.0;

    Vec2 operator()(Vec2 v) const { return {l11 * v.x + l12 * v.y, l21 * v.x + l22 * v.y}; }
    double det() const { return l11 * l22 - l12 * l21; }
    AffineMap inverse() const;

    static AffineMap identity() { return {}; }
    static AffineMap scale(double sx, double sy) { return {sx, 0.0, 0.0, sy}; }
    static AffineMap rotation(double theta);
};

//! Composition a after b.
AffineMap operator*(const AffineMap& a, const AffineMap& b);

//! Form of the image conic t(c): M' = t^-T M t^-1.
ConcentricConic transformed(const ConcentricConic& c, const AffineMap& t);

//! The symmetric positive square root of the form, as a map taking the conic to the unit circle.
AffineMap unit_circle_map(const ConcentricConic& c);

//! Polar dual x* = Ax of a boundary point; rejects points off the conic.
Vec2 polar_dual_point(const Ellipse& e, Vec2 x);

//! Member of the confocal family x^2/(a1^2+mu) + y^2/(a2^2+mu) = 1, ellipse branch mu > -a2^2.
Ellipse confocal_ellipse(const Ellipse& e, double mu);

//! The two confocal parameters through a point: mu_e labels the ellipse branch,
//! mu_h the hyperbola branch (mu_e >= mu_h).
struct ConfocalParams {
    double mu_e;
    double mu_h;
};
ConfocalParams confocal_param_of_point(const Ellipse& e, Vec2 x);

//! Confocal parameter of the family member the line is tangent to:
//! mu = d^2 - (a1^2 n1^2 + a2^2 n2^2).
double line_tangency_param(const Ellipse& e, const Line& l);

//! Least-squares inscribed conic from tangent lines. The tangency constraint
//! <n, W n> = d^2 is linear in the dual form W = M^-1; the conic is W^-1.
struct ConicFit {
    std::optional<ConcentricConic> conic; // present iff the fitted W is positive definite
    double w11 = 0.0, w12 = 0.0, w22 = 0.0;
    double residual = 0.0; // max |<n, Wn> - d^2| over the input lines
    bool definite = false;
};
ConicFit conic_from_tangent_lines(std::span<const Line> lines);

//! Linear map taking a nested concentric pair to a confocal axis-aligned pair.
//! Construction: send the inner conic to the unit circle, rotate the image of the
//! outer conic to principal axes, then stretch the second axis (first stretch
//! factor fixed to 1) so that the pair becomes confocal.
struct ConfocalizeResult {
    AffineMap map;
    Ellipse outer;
    Ellipse inner;
};
ConfocalizeResult confocalize(const ConcentricConic& outer, const ConcentricConic& inner);

} // namespace poncelet
