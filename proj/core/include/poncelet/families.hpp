#pragma once

#include <string>
#include <utility>
#include <vector>

#include "poncelet/billiard.hpp"
#include "poncelet/conics.hpp"
#include "poncelet/invariants.hpp"

namespace poncelet {

//! Caustic parameter of an (n, k)-periodic orbit family, found numerically.
struct PeriodicCaustic {
    Ellipse table;
    int n = 0;
    int k = 0;
    double mu_star = 0.0;
    double residual = 0.0; // closure defect at convergence, launched from t0 = 0
};

//! Phase point of the counterclockwise ray from boundary parameter t0 tangent to
//! the confocal caustic with parameter mu in (-a2^2, 0).
PhasePoint launch_tangent(const Ellipse& e, double mu, double t0);

//! Average winding per reflection of the tangent ray launched from t0 = 0,
//! estimated over `steps` iterations; truncation error is O(1/steps).
double rotation_number(const Ellipse& e, double mu, int steps);

//! Two-stage search for the (n, k) caustic: bisection of the rotation number,
//! then secant refinement of the closure defect t_n(mu) - 2 pi k. The porism is
//! re-verified from 16 additional launch points before the result is accepted.
PeriodicCaustic find_periodic_caustic(const Ellipse& e, int n, int k, double tol = 1e-11);

//! Spread of one invariant channel over a family sweep.
struct SpreadStat {
    double vmin = 0.0;
    double vmax = 0.0;
    double mean = 0.0;
    double abs_spread = 0.0; // max - min
    double rel_spread = 0.0; // |max - min| / (|mean| + 1e-300)
};

struct FamilySweep {
    PeriodicCaustic caustic;
    std::vector<double> starts;
    std::vector<InvariantReport> reports;
    std::vector<std::pair<std::string, SpreadStat>> spreads;
    bool beta_signs_consistent = true; // multiset of sign(beta_i - pi/2) identical across starts
    double tol_closure = 1e-9;
    double tol_spread = 1e-8;
};

//! Sweep the family at m uniform starts t0 = 2 pi j / m.
FamilySweep family_sweep(const PeriodicCaustic& pc, int m, double member_tol = 1e-9);
//! Sweep at caller-provided starts (e.g. jittered grids).
FamilySweep family_sweep(const PeriodicCaustic& pc, std::vector<double> starts,
                         double member_tol = 1e-9);

//! One step of the tangent-line Poncelet map on a nested concentric pair:
//! from the outer point at parameter t, take the counterclockwise tangent line
//! to the inner conic and return the parameter of its second outer intersection.
double poncelet_map_general(const ConcentricConic& outer, const ConcentricConic& inner, double t);

double rotation_number_general(const ConcentricConic& outer, const ConcentricConic& inner,
                               int steps);

//! Tangent-line Poncelet polygon with n vertices starting at parameter t0.
struct GeneralPolygon {
    std::vector<double> params;
    std::vector<Vec2> points;
    int winding = 0;
    double closure_defect = 0.0;
};
GeneralPolygon general_polygon(const ConcentricConic& outer, const ConcentricConic& inner,
                               double t0, int n);

//! Scale s* such that the Poncelet map around s* . inner_shape closes after n
//! steps with winding k. Same two-stage search as find_periodic_caustic.
double find_closing_scale(const ConcentricConic& outer, const Ellipse& inner_shape, int n, int k,
                          double tol = 1e-11);

} // namespace poncelet
