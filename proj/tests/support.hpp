#pragma once

// Shared helpers for the test suites: deterministic RNG draws and the
// independent oracles the module checks are measured against.

#include <random>
#include <utility>
#include <vector>

#include "poncelet/billiard.hpp"
#include "poncelet/conics.hpp"
#include "poncelet/geometry.hpp"

namespace testsupport {

using poncelet::Ellipse;
using poncelet::Line;
using poncelet::PhasePoint;
using poncelet::Vec2;

inline std::mt19937_64 make_rng(unsigned long long seed = 20240915ull) {
    return std::mt19937_64{seed};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Ellipse random_ellipse(std::mt19937_64& rng, double min_ratio = 0.4,
                              double max_ratio = 1.0) {
    const double a1 = uniform(rng, 1.0, 3.0);
    return {a1, a1 * uniform(rng, min_ratio, max_ratio)};
}

//! Random chord of e through two distinct boundary points.
inline Line random_chord(std::mt19937_64& rng, const Ellipse& e) {
    const double t1 = uniform(rng, 0.0, poncelet::kTwoPi);
    double t2 = uniform(rng, 0.0, poncelet::kTwoPi);
    while (std::abs(std::remainder(t2 - t1, poncelet::kTwoPi)) < 0.1) {
        t2 = uniform(rng, 0.0, poncelet::kTwoPi);
    }
    return Line::through(e.point_on(t1), e.point_on(t2));
}

//! Random inward phase point, kept a margin away from grazing directions.
inline PhasePoint random_phase_point(std::mt19937_64& rng, const Ellipse& e,
                                     double margin = 0.05) {
    const double t = uniform(rng, 0.0, poncelet::kTwoPi);
    const Vec2 inward = -poncelet::normalized(e.form_apply(e.point_on(t)));
    const Vec2 tangent = poncelet::normalized(e.tangent_dir(t));
    const double phi = uniform(rng, -0.5 * poncelet::kPi + margin, 0.5 * poncelet::kPi - margin);
    return {t, std::cos(phi) * inward + std::sin(phi) * tangent};
}

//! Discriminant oracle for line-conic tangency: substitute the parametrized line
//! into x^2/b1^2 + y^2/b2^2 = 1 and return (discriminant, coefficient scale).
//! Tangency holds iff the discriminant vanishes.
inline std::pair<double, double> tangency_discriminant(const Line& l, double b1, double b2) {
    const Vec2 p0 = l.d * l.n;      // foot point of the line
    const Vec2 dir = perp(l.n);     // unit direction along the line
    const double qa = dir.x * dir.x / (b1 * b1) + dir.y * dir.y / (b2 * b2);
    const double qb = 2.0 * (p0.x * dir.x / (b1 * b1) + p0.y * dir.y / (b2 * b2));
    const double qc = p0.x * p0.x / (b1 * b1) + p0.y * p0.y / (b2 * b2) - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    const double scale = std::max({qb * qb, std::abs(4.0 * qa * qc), 1.0});
    return {disc, scale};
}

//! Primitive (n, k) pairs with 2k < n, n <= n_max.
inline std::vector<std::pair<int, int>> primitive_pairs(int n_max) {
    std::vector<std::pair<int, int>> pairs;
    for (int n = 3; n <= n_max; ++n) {
        for (int k = 1; 2 * k < n; ++k) {
            if (std::gcd(n, k) == 1) pairs.emplace_back(n, k);
        }
    }
    return pairs;
}

} // namespace testsupport
