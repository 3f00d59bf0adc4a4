#pragma once

#include <vector>

#include "poncelet/billiard.hpp"
#include "poncelet/conics.hpp"

namespace poncelet {

//! Supporting lines of the orbit's sides, canonically oriented; line i passes
//! through points i and i+1.
std::vector<Line> side_lines(const Orbit& o);

//! Intersections of the i-th and (i+k)-th side lines, their confocal parameters,
//! and the gcd(n, k) polygons they form under the index chains i -> i+k.
struct GridLayer {
    int step = 0;
    std::vector<Vec2> points;      // point i is line_i x line_{i+k}
    std::vector<double> mu_values; // ellipse-branch confocal parameter per point
    double mu_mean = 0.0;
    double mu_max_dev = 0.0;
    std::vector<std::vector<int>> polygons; // index chains into points
};
GridLayer grid_layer(const Orbit& o, int k);

//! Max deviation between the measured grid-polygon vertex angles and the
//! windowed angle-sum formula, reduced into (0, pi).
double grid_polygon_angles_check(const Orbit& o, const GridLayer& layer);

//! Signed-area ratio of the orbit polygon over its tangent polygon; odd n only.
double area_ratio(const Orbit& o);

//! Area-ratio experiment on a general nested concentric pair: the direct
//! tangent-line construction, and the same family transported to a confocal
//! pair by conics::confocalize. Both sweeps should be constant and agree.
struct AreaRatioSweep {
    std::vector<double> direct;
    std::vector<double> confocal;
    double direct_mean = 0.0;
    double confocal_mean = 0.0;
    double direct_abs_spread = 0.0;
    double confocal_abs_spread = 0.0;
    double direct_rel_spread = 0.0;
    double confocal_rel_spread = 0.0;
    double agreement = 0.0; // |direct_mean - confocal_mean|
};
AreaRatioSweep area_ratio_general(const ConcentricConic& outer, const ConcentricConic& inner,
                                  int n, int k, int starts);

//! Check of the axis-scaling-plus-point-reflection map Lambda = diag(-a1/c1, -a2/c2)
//! taking the caustic to the table: applied to the orbit's vertices it must
//! reproduce the tangent-polygon vertices up to a cyclic shift. Returns the max
//! vertex mismatch at the best shift.
double grid_affine_map_check(const Orbit& o);

} // namespace poncelet
