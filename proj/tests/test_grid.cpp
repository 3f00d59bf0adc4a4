#include <cmath>
#include <numeric>

#include "doctest.h"

#include "poncelet/errors.hpp"
#include "poncelet/families.hpp"
#include "poncelet/grid.hpp"
#include "poncelet/invariants.hpp"
#include "support.hpp"

using namespace poncelet;
using testsupport::make_rng;
using testsupport::uniform;

namespace {

Orbit family_orbit(const Ellipse& e, int n, int k, double t0, double tol = 1e-11) {
    const PeriodicCaustic pc = find_periodic_caustic(e, n, k, tol);
    return orbit(e, launch_tangent(e, pc.mu_star, t0), n);
}

} // namespace

TEST_CASE("side lines") {
    const Ellipse circle(1.0, 1.0);
    const Orbit tri = family_orbit(circle, 3, 1, 0.0);
    const auto lines = side_lines(tri);
    REQUIRE(lines.size() == 3);
    for (int i = 0; i < 3; ++i) {
        const double ang = angle_between(lines[i].n, lines[(i + 1) % 3].n);
        CHECK(std::min(ang, kPi - ang) == doctest::Approx(kPi / 3.0));
    }

    const Orbit pent = family_orbit(Ellipse(2.0, 1.0), 5, 1, 0.8);
    for (const Line& l : side_lines(pent)) {
        CHECK(std::abs(line_tangency_param(pent.table, l) - pent.mu) < 1e-9);
    }
}

TEST_CASE("grid layers are confocal and split into gcd(n,k) polygons") {
    {
        const Orbit o = family_orbit(Ellipse(1.0, 1.0), 5, 1, 0.0, 1e-13);
        const GridLayer layer = grid_layer(o, 2);
        CHECK(layer.polygons.size() == 1);
        CHECK(layer.mu_max_dev < 1e-12);
        const double r = norm(layer.points[0]);
        for (const Vec2& p : layer.points) CHECK(norm(p) == doctest::Approx(r));
    }
    {
        const Orbit o = family_orbit(Ellipse(2.0, 1.0), 5, 1, 0.4);
        const GridLayer layer = grid_layer(o, 2);
        CHECK(layer.polygons.size() == 1);
        CHECK(layer.mu_max_dev < 1e-8 * (1.0 + std::abs(layer.mu_mean)));
    }
    {
        const Orbit o = family_orbit(Ellipse(2.0, 1.0), 6, 1, 0.4);
        const GridLayer layer = grid_layer(o, 2);
        CHECK(layer.polygons.size() == 2);
        CHECK(layer.polygons[0].size() == 3);
        CHECK(layer.mu_max_dev < 1e-8 * (1.0 + std::abs(layer.mu_mean)));
    }
    const Orbit o = family_orbit(Ellipse(2.0, 1.0), 5, 1, 0.4);
    CHECK_THROWS_AS(grid_layer(o, 1), DomainError);
    CHECK_THROWS_AS(grid_layer(o, 4), DomainError);
}

TEST_CASE("opposite side lines of a centrally symmetric orbit are parallel") {
    const Orbit o = family_orbit(Ellipse(2.0, 1.0), 6, 1, 0.3);
    CHECK_THROWS_AS(grid_layer(o, 3), DegeneracyError);
}

TEST_CASE("grid polygon angles follow the windowed angle sums") {
    {
        const Orbit o = family_orbit(Ellipse(1.0, 1.0), 5, 1, 0.0, 1e-13);
        const GridLayer layer = grid_layer(o, 2);
        // regular pentagram: every grid angle is pi/5
        for (const auto& chain : layer.polygons) {
            for (size_t j = 0; j < chain.size(); ++j) {
                const Vec2& cur = layer.points[chain[j]];
                const Vec2& prev = layer.points[chain[(j + chain.size() - 1) % chain.size()]];
                const Vec2& next = layer.points[chain[(j + 1) % chain.size()]];
                CHECK(angle_between(prev - cur, next - cur) == doctest::Approx(kPi / 5.0));
            }
        }
        CHECK(grid_polygon_angles_check(o, layer) < 1e-12);
    }
    {
        const Orbit o = family_orbit(Ellipse(1.0, 1.0), 6, 1, 0.0, 1e-13);
        const GridLayer layer = grid_layer(o, 2); // two equilateral triangles
        CHECK(grid_polygon_angles_check(o, layer) < 1e-12);
    }
    {
        const Orbit o = family_orbit(Ellipse(2.0, 1.0), 7, 1, 0.6);
        CHECK(grid_polygon_angles_check(o, grid_layer(o, 3)) < 1e-9);
    }
}

TEST_CASE("grid polygons are billiard orbits on their confocal ellipse") {
    const Orbit o = family_orbit(Ellipse(2.0, 1.0), 6, 1, 0.7);
    const GridLayer layer = grid_layer(o, 2);
    const Ellipse member = confocal_ellipse(o.table, layer.mu_mean);
    for (const auto& chain : layer.polygons) {
        std::vector<Vec2> pts;
        for (int idx : chain) pts.push_back(layer.points[idx]);
        const Orbit sub = orbit_from_points(member, pts);
        const auto [sum, ident] = sum_cos_and_identity(sub);
        CHECK(std::abs(sum - ident) < 1e-9);
    }
}

TEST_CASE("area ratio on circles") {
    const Orbit tri = family_orbit(Ellipse(1.0, 1.0), 3, 1, 0.0);
    CHECK(area_ratio(tri) == doctest::Approx(0.25));
    const Orbit pent = family_orbit(Ellipse(1.0, 1.0), 5, 1, 0.0);
    CHECK(area_ratio(pent) == doctest::Approx(std::pow(std::cos(kPi / 5.0), 2.0)));
    const Orbit sq = family_orbit(Ellipse(1.0, 1.0), 4, 1, 0.0);
    CHECK_THROWS_AS(area_ratio(sq), DomainError);
}

TEST_CASE("area ratio is constant across the family and equals c1 c2 / (a1 a2)") {
    const Ellipse e(2.0, 1.0);
    const PeriodicCaustic pc = find_periodic_caustic(e, 5, 1);
    const Ellipse caustic = confocal_ellipse(e, pc.mu_star);
    const double expected = caustic.a1() * caustic.a2() / (e.a1() * e.a2());

    double lo = 1.0, hi = 0.0;
    for (int j = 0; j < 32; ++j) {
        const double r = area_ratio(orbit(e, launch_tangent(e, pc.mu_star, kTwoPi * j / 32), 5));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        CHECK(std::abs(r - expected) < 1e-9);
    }
    CHECK((hi - lo) / expected < 1e-8);
}

TEST_CASE("general-pair area ratios match the confocalized computation") {
    {
        // concentric circles: every start gives 1/4
        const ConcentricConic outer = ConcentricConic::from_ellipse(Ellipse(1.0, 1.0));
        const ConcentricConic inner = ConcentricConic::from_ellipse(Ellipse(0.5, 0.5));
        const AreaRatioSweep s = area_ratio_general(outer, inner, 3, 1, 8);
        CHECK(s.direct_mean == doctest::Approx(0.25));
        CHECK(s.direct_abs_spread < 1e-12);
    }
    {
        const ConcentricConic outer = ConcentricConic::from_ellipse(Ellipse(2.0, 1.0));
        const Ellipse shape(1.5, 0.8);
        const double scale = find_closing_scale(outer, shape, 5, 1);
        const AreaRatioSweep s =
            area_ratio_general(outer, ConcentricConic::scaled(shape, scale), 5, 1, 16);
        CHECK(s.direct_rel_spread < 1e-8);
        CHECK(s.confocal_rel_spread < 1e-8);
        CHECK(s.agreement < 1e-8 * (1.0 + std::abs(s.direct_mean)));
    }
    CHECK_THROWS_AS(area_ratio_general(ConcentricConic::from_ellipse(Ellipse(1.0, 1.0)),
                                       ConcentricConic::from_ellipse(Ellipse(0.5, 0.5)), 4, 1,
                                       8),
                    DomainError);
}

TEST_CASE("the caustic-to-table scaling maps orbit vertices to tangent-polygon vertices") {
    {
        // circle n=3: Lambda = -2 I takes the inscribed triangle to the circumscribed one
        const Ellipse circle(1.0, 1.0);
        const PeriodicCaustic pc = find_periodic_caustic(circle, 3, 1, 1e-13);
        const Orbit tri = orbit(circle, launch_tangent(circle, pc.mu_star, 0.5), 3);
        CHECK(grid_affine_map_check(tri) < 1e-11);
    }
    {
        // circle n=5: Lambda = -(1/cos(pi/5)) I
        const Ellipse circle(1.0, 1.0);
        const PeriodicCaustic pc = find_periodic_caustic(circle, 5, 1, 1e-13);
        const Orbit pent = orbit(circle, launch_tangent(circle, pc.mu_star, 0.2), 5);
        CHECK(grid_affine_map_check(pent) < 1e-11);
    }
    {
        const Ellipse e(2.0, 1.0);
        const PeriodicCaustic pc = find_periodic_caustic(e, 5, 1);
        auto rng = make_rng();
        for (int i = 0; i < 8; ++i) {
            const Orbit o = orbit(e, launch_tangent(e, pc.mu_star, uniform(rng, 0.0, kTwoPi)), 5);
            CHECK(grid_affine_map_check(o) < 1e-9);
        }
    }
    const Orbit sq = family_orbit(Ellipse(1.0, 1.0), 4, 1, 0.0);
    CHECK_THROWS_AS(grid_affine_map_check(sq), DomainError);
}
