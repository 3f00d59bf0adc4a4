#pragma once

#include <span>
#include <vector>

#include "poncelet/conics.hpp"
#include "poncelet/geometry.hpp"

namespace poncelet {

//! Phase-space element of the billiard: boundary parameter plus inward unit direction.
struct PhasePoint {
    double t = 0.0;
    Vec2 u;
};

//! Validating constructor: |u| = 1 within 1e-14 and u strictly inward at point_on(t).
PhasePoint phase_point(const Ellipse& e, double t, Vec2 u);

//! Far endpoint of the chord from x in direction u: y = x + s u with
//! s = -2 <Ax,u> / <Au,u>. Grazing chords (|s| below tolerance) raise TangencyError.
Vec2 chord_next(const Ellipse& e, Vec2 x, Vec2 u);

//! Mirror the arriving direction u in the tangent line at boundary point y.
Vec2 reflect(const Ellipse& e, Vec2 y, Vec2 u);

//! One application of the billiard map (x,u) -> (y,v). The landing parameter is
//! recovered by atan2 so iterated orbits cannot drift off the conic.
PhasePoint billiard_step(const Ellipse& e, const PhasePoint& pp);

//! Joachimsthal integral J = -<u, Ax>; positive for inward u and invariant under the map.
double joachimsthal(const Ellipse& e, const PhasePoint& pp);

//! Confocal parameter of the ray's supporting line. Values <= -a2^2 indicate a
//! hyperbola-branch caustic and are returned unflagged.
double caustic_of_ray(const Ellipse& e, const PhasePoint& pp);

//! Closed (or nearly closed) billiard polygon. Side i runs points[i] -> points[i+1],
//! with direction dirs[i]; closure_defect = |total parameter advance - 2 pi winding|.
struct Orbit {
    Ellipse table;
    std::vector<double> vertex_params; // boundary parameters, reduced to [0, 2pi)
    std::vector<Vec2> points;
    std::vector<Vec2> dirs;
    double mu = 0.0;          // mean per-side caustic parameter
    double mu_max_dev = 0.0;  // max |mu_i - mu|
    double joachimsthal = 0.0;
    double j_max_dev = 0.0;
    int period = 0;
    int winding = 0;
    double closure_defect = 0.0;
};

//! Iterate the billiard map n times from pp0 and record the resulting polygon.
//! Non-closure is reported in closure_defect, not raised.
Orbit orbit(const Ellipse& e, const PhasePoint& pp0, int n);

//! Assemble an orbit record from an already-closed polygon inscribed in e
//! (used for polygons produced by constructions other than map iteration).
Orbit orbit_from_points(const Ellipse& e, std::span<const Vec2> pts, double on_conic_tol = 1e-8);

} // namespace poncelet
