#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "poncelet/billiard.hpp"
#include "poncelet/conics.hpp"

namespace poncelet {

//! Interior angle alpha_i at vertex i, between incoming side i-1 and outgoing side i.
std::vector<double> vertex_angles(const Orbit& o);

double perimeter(const Orbit& o);

//! (sum of cos alpha_i, J L - n); the two agree per orbit.
std::pair<double, double> sum_cos_and_identity(const Orbit& o);

//! Vertices of the polygon cut out by the tangent lines at the orbit's vertices.
//! Vertex i is the intersection of the tangents at points i and i+1.
std::vector<Vec2> tangent_polygon(const Orbit& o);

//! beta_i = (alpha_i + alpha_{i+1}) / 2, the tangent-polygon angle between
//! tangency points i and i+1 (definition valid for star orbits as well).
std::vector<double> beta_angles(const Orbit& o);

double prod_cos_beta(const Orbit& o);

//! C_k = sum_i cos(alpha_i + ... + alpha_{i+k-1}), cyclic windows, 1 <= k <= n.
double c_k(const Orbit& o, int k);

//! The unit side-direction vectors viewed as a polygon inscribed in the unit
//! circle, together with its fitted inscribed conic.
struct UPolygon {
    std::vector<Vec2> points;
    ConicFit fit;
};
UPolygon u_polygon(const Orbit& o);

//! sum_i <u_i, u_{i+k}> = sum of cos of the k-step central angles.
double sum_cos_central(const UPolygon& up, int k);

//! sum_i |u_{i+k} - u_i|^2; equals 2n - 2 sum_cos_central algebraically.
double sum_sq_diagonals(const UPolygon& up, int k);

//! prod_i sin(alpha_i / 2); odd n only.
double prod_sin_half(const Orbit& o);

//! sign(beta_i - pi/2) with a 1e-9 dead band reported as 0.
std::vector<int> beta_sign_profile(const Orbit& o);

//! Poles of the u-polygon's side lines with respect to the unit circle, plus the
//! two invariants of the resulting circumscribed polygon.
struct DualPolygon {
    std::vector<Vec2> points;
    double sum_cos_interior = 0.0;
    double prod_cos_central = 0.0;
};
DualPolygon dual_polygon(const UPolygon& up);

//! Shoelace signed area; sign follows vertex order.
double polygon_area(std::span<const Vec2> pts);

//! Every family invariant evaluated on one orbit. List entries are indexed by
//! k = 1..n-1 (index 0 holds k = 1). Odd-n-only quantities are optional.
struct InvariantReport {
    double perimeter = 0.0;
    double joachimsthal = 0.0;
    double sum_cos_alpha = 0.0;
    double jl_minus_n = 0.0;
    double prod_cos_beta = 0.0;
    std::vector<double> c_k;
    std::vector<double> sum_cos_central;
    std::vector<double> sum_sq_diag;
    std::optional<double> prod_sin_half;
    std::vector<int> beta_signs;
    std::optional<double> area_ratio;
    double dual_sum_cos = 0.0;
    double dual_prod_cos = 0.0;
    // diagnostics
    double u_fit_residual = 0.0;
    double u_angle_max_dev = 0.0; // max | (pi - alpha_i) - angle(u_{i-1}, u_i) |
};
InvariantReport evaluate(const Orbit& o);

//! Flatten a report into named scalar channels, in a fixed order shared by the
//! CSV writer and the sweep spread statistics.
std::vector<std::pair<std::string, double>> flatten_report(const InvariantReport& r);

} // namespace poncelet
