#include <cmath>

#include "doctest.h"

#include "poncelet/errors.hpp"
#include "poncelet/families.hpp"
#include "poncelet/invariants.hpp"
#include "support.hpp"

using namespace poncelet;
using testsupport::make_rng;
using testsupport::uniform;

namespace {

Orbit circle_orbit(int n, int k, double t0 = 0.0) {
    const Ellipse circle(1.0, 1.0);
    const double c = std::cos(kPi * k / n);
    return orbit(circle, launch_tangent(circle, c * c - 1.0, t0), n);
}

Orbit ellipse_orbit(int n, int k, double t0) {
    const Ellipse e(2.0, 1.0);
    const PeriodicCaustic pc = find_periodic_caustic(e, n, k);
    return orbit(e, launch_tangent(e, pc.mu_star, t0), n);
}

} // namespace

TEST_CASE("vertex angles") {
    for (double a : vertex_angles(circle_orbit(3, 1))) CHECK(a == doctest::Approx(kPi / 3.0));
    for (double a : vertex_angles(circle_orbit(5, 2))) CHECK(a == doctest::Approx(kPi / 5.0));

    const Orbit o = ellipse_orbit(5, 1, 0.4);
    for (double a : vertex_angles(o)) {
        CHECK(a > 0.0);
        CHECK(a < kPi);
    }
}

TEST_CASE("perimeter") {
    CHECK(perimeter(circle_orbit(3, 1)) == doctest::Approx(3.0 * std::sqrt(3.0)));
    CHECK(perimeter(circle_orbit(4, 1)) == doctest::Approx(4.0 * std::sqrt(2.0)));
    const Orbit bigon = orbit(Ellipse(2.0, 1.0), {0.5 * kPi, {0.0, -1.0}}, 2);
    CHECK(perimeter(bigon) == doctest::Approx(4.0));
}

TEST_CASE("sum of cosines and the J L - n identity") {
    {
        const auto [sum, ident] = sum_cos_and_identity(circle_orbit(3, 1));
        CHECK(sum == doctest::Approx(1.5));
        CHECK(ident == doctest::Approx(1.5));
    }
    {
        const auto [sum, ident] = sum_cos_and_identity(circle_orbit(4, 1));
        CHECK(std::abs(sum) < 1e-14);
        CHECK(std::abs(ident) < 1e-13);
    }
    {
        const auto [sum, ident] = sum_cos_and_identity(circle_orbit(5, 2));
        CHECK(sum == doctest::Approx(5.0 * std::cos(kPi / 5.0)));
        CHECK(std::abs(sum - ident) < 1e-10);
    }
    // pointwise identity on ellipse orbits, independent of family membership
    for (double t0 : {0.0, 0.3, 1.7, 4.0}) {
        const auto [sum, ident] = sum_cos_and_identity(ellipse_orbit(7, 2, t0));
        CHECK(std::abs(sum - ident) < 1e-10);
    }
}

TEST_CASE("tangent polygon") {
    {
        const std::vector<Vec2> q = tangent_polygon(circle_orbit(3, 1));
        REQUIRE(q.size() == 3);
        for (const Vec2& v : q) CHECK(norm(v) == doctest::Approx(2.0));
    }
    {
        const std::vector<Vec2> q = tangent_polygon(circle_orbit(4, 1));
        for (const Vec2& v : q) CHECK(norm(v) == doctest::Approx(std::sqrt(2.0)));
    }
    {
        // vertices lie on the polar dual of the caustic with respect to the table
        const Orbit o = ellipse_orbit(5, 1, 0.9);
        const Ellipse caustic = confocal_ellipse(o.table, o.mu);
        const Ellipse dual(o.table.a1() * o.table.a1() / caustic.a1(),
                           o.table.a2() * o.table.a2() / caustic.a2());
        for (const Vec2& v : tangent_polygon(o)) {
            CHECK(std::abs(dual.form_value(v) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("beta angles and their product") {
    for (double b : beta_angles(circle_orbit(3, 1))) CHECK(b == doctest::Approx(kPi / 3.0));
    CHECK(prod_cos_beta(circle_orbit(3, 1)) == doctest::Approx(0.125));

    for (double b : beta_angles(circle_orbit(4, 1))) CHECK(b == doctest::Approx(0.5 * kPi));
    CHECK(std::abs(prod_cos_beta(circle_orbit(4, 1))) < 1e-15);

    CHECK(prod_cos_beta(circle_orbit(5, 2)) ==
          doctest::Approx(std::pow(std::cos(kPi / 5.0), 5.0)));

    // convex case: the half-sum definition matches the measured tangent-polygon angle
    const Orbit o = ellipse_orbit(5, 1, 1.3);
    const auto beta = beta_angles(o);
    const std::vector<Vec2> q = tangent_polygon(o);
    for (int i = 0; i < 5; ++i) {
        const Vec2& cur = q[i];
        const Vec2& prev = q[(i + 4) % 5];
        const Vec2& next = q[(i + 1) % 5];
        CHECK(std::abs(angle_between(prev - cur, next - cur) - beta[i]) < 1e-10);
    }
}

TEST_CASE("windowed cosine sums") {
    const Orbit o = ellipse_orbit(5, 1, 0.8);
    CHECK(c_k(o, 1) == sum_cos_and_identity(o).first); // identical by definition

    CHECK(c_k(circle_orbit(5, 1), 2) == doctest::Approx(5.0 * std::cos(6.0 * kPi / 5.0)));

    CHECK_THROWS_AS(c_k(o, 0), DomainError);
    CHECK_THROWS_AS(c_k(o, 6), DomainError);
}

TEST_CASE("u-polygon and its inscribed conic") {
    {
        const UPolygon up = u_polygon(circle_orbit(5, 1));
        REQUIRE(up.fit.definite);
        const double r = std::cos(kPi / 5.0); // inscribed circle of the regular u-polygon
        CHECK(up.fit.conic->m11() == doctest::Approx(1.0 / (r * r)));
        CHECK(up.fit.conic->m22() == doctest::Approx(1.0 / (r * r)));
        CHECK(up.fit.residual < 1e-12);
    }
    {
        const UPolygon up = u_polygon(ellipse_orbit(5, 1, 0.6));
        for (const Vec2& u : up.points) CHECK(std::abs(norm(u) - 1.0) < 1e-12);
        REQUIRE(up.fit.definite);
        CHECK(up.fit.residual < 1e-9);
    }
    const Orbit bigon = orbit(Ellipse(2.0, 1.0), {0.5 * kPi, {0.0, -1.0}}, 2);
    CHECK_THROWS_AS(u_polygon(bigon), DomainError);
}

TEST_CASE("central-angle sums and squared diagonals") {
    {
        const UPolygon up = u_polygon(circle_orbit(4, 1));
        CHECK(std::abs(sum_cos_central(up, 1)) < 1e-13);
        CHECK(sum_sq_diagonals(up, 1) == doctest::Approx(8.0));
    }
    {
        const UPolygon up = u_polygon(circle_orbit(3, 1));
        CHECK(sum_cos_central(up, 1) == doctest::Approx(-1.5));
        CHECK(sum_sq_diagonals(up, 1) == doctest::Approx(9.0));
    }
    // algebraic identity sum|u_{i+k}-u_i|^2 = 2n - 2 sum<u_i,u_{i+k}>
    const UPolygon up = u_polygon(ellipse_orbit(7, 2, 1.1));
    for (int k = 1; k <= 6; ++k) {
        CHECK(std::abs(sum_sq_diagonals(up, k) - (14.0 - 2.0 * sum_cos_central(up, k))) <
              1e-12);
    }
}

TEST_CASE("product of half-angle sines") {
    CHECK(prod_sin_half(circle_orbit(3, 1)) == doctest::Approx(0.125));
    CHECK(prod_sin_half(circle_orbit(5, 2)) ==
          doctest::Approx(std::pow(std::sin(kPi / 10.0), 5.0)));
    CHECK_THROWS_AS(prod_sin_half(circle_orbit(4, 1)), DomainError);
}

TEST_CASE("half-angle sines against the complementary tangent-polygon angles") {
    // For odd n the (n-1)/2-step tangent angles satisfy |cos beta'_i| = sin(alpha_i / 2).
    for (auto [n, k, t0] : {std::tuple{5, 1, 0.7}, {7, 2, 0.2}, {9, 2, 1.9}}) {
        const Orbit o = ellipse_orbit(n, k, t0);
        const auto alpha = vertex_angles(o);
        double alpha_total = 0.0;
        for (double a : alpha) alpha_total += a;
        int flips = 0;
        for (int i = 0; i < n; ++i) {
            const double beta_prime = 0.5 * (alpha_total - alpha[i]);
            const double lhs = std::abs(std::cos(beta_prime));
            const double rhs = std::sin(0.5 * alpha[i]);
            CHECK(std::abs(lhs - rhs) < 1e-10);
            flips += std::cos(beta_prime) * rhs < 0.0 ? 1 : 0;
        }
        // the global sign is shared by all vertices
        CHECK((flips == 0 || flips == n));
    }
}

TEST_CASE("beta sign profiles") {
    for (int s : beta_sign_profile(circle_orbit(3, 1))) CHECK(s == -1);
    for (int s : beta_sign_profile(circle_orbit(4, 1))) CHECK(s == 0);
}

TEST_CASE("dual polygon") {
    {
        const DualPolygon dp = dual_polygon(u_polygon(circle_orbit(3, 1)));
        CHECK(dp.sum_cos_interior == doctest::Approx(1.5));
        for (const Vec2& v : dp.points) CHECK(norm(v) == doctest::Approx(2.0));
    }
    {
        const DualPolygon dp = dual_polygon(u_polygon(circle_orbit(4, 1)));
        CHECK(std::abs(dp.prod_cos_central) < 1e-14);
    }
}

TEST_CASE("polygon area") {
    const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_area(square) == doctest::Approx(1.0));
    const std::vector<Vec2> reversed = {{0, 1}, {1, 1}, {1, 0}, {0, 0}};
    CHECK(polygon_area(reversed) == doctest::Approx(-1.0));
    CHECK(polygon_area(circle_orbit(3, 1).points) ==
          doctest::Approx(0.75 * std::sqrt(3.0)));
}

TEST_CASE("full report") {
    const Orbit o = ellipse_orbit(5, 1, 0.25);
    const InvariantReport r = evaluate(o);
    CHECK(std::abs(r.sum_cos_alpha - r.jl_minus_n) < 1e-10);
    CHECK(r.c_k[0] == r.sum_cos_alpha);
    CHECK(r.c_k.size() == 4);
    CHECK(r.sum_cos_central.size() == 4);
    CHECK(r.sum_sq_diag.size() == 4);
    REQUIRE(r.prod_sin_half.has_value());
    REQUIRE(r.area_ratio.has_value());
    CHECK(r.u_fit_residual < 1e-9);
    CHECK(r.u_angle_max_dev < 1e-10); // angle(u_{i-1}, u_i) = pi - alpha_i per vertex

    const auto channels = flatten_report(r);
    CHECK(channels.size() == 5 + 3 * 4 + 2 + 2);
}
