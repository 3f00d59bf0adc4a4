#include "poncelet/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "poncelet/errors.hpp"

namespace poncelet {

namespace {

constexpr int kRotationSteps = 2048; // stage-1 winding estimate length
constexpr int kMaxSecantIters = 200;
constexpr int kPorismProbes = 16;
constexpr double kPorismTol = 1e-9;

//! Counterclockwise tangent direction from an external point, computed in the
//! frame where the conic is the unit circle. The branch with positive angular
//! momentum about the center, cross(x, u) > 0, circulates counterclockwise;
//! this discriminator stays sharp even for near-degenerate caustics, where both
//! tangent rays fall on the same side of the outward normal.
Vec2 tangent_direction(const AffineMap& to_circle, Vec2 x) {
    const Vec2 w = to_circle(x);
    const double r2 = norm_sq(w);
    if (r2 <= 1.0) {
        throw DegeneracyError("tangent construction: point not outside the inner conic");
    }
    const double root = std::sqrt(r2 - 1.0);
    const AffineMap back = to_circle.inverse();
    for (double sign : {1.0, -1.0}) {
        const Vec2 touch = (1.0 / r2) * w + (sign * root / r2) * perp(w);
        const Vec2 u = normalized(back(touch - w));
        if (cross(x, u) > 0.0) return u;
    }
    throw DegeneracyError("tangent construction: no counterclockwise branch");
}

//! Secant iteration on f, clamped to (lo, hi). Stops at |f| < tol or when the
//! iteration budget runs out, and reports the best point seen either way; the
//! caller decides whether the achieved residual is acceptable.
struct SecantResult {
    double x;
    double f_abs;
};

SecantResult secant_refine(const std::function<double(double)>& f, double x0, double x1,
                           double lo, double hi, double tol) {
    double f0 = f(x0);
    double f1 = f(x1);
    SecantResult best{std::abs(f0) < std::abs(f1) ? x0 : x1, std::min(std::abs(f0), std::abs(f1))};
    for (int iter = 0; iter < kMaxSecantIters; ++iter) {
        if (std::abs(f1) < best.f_abs) best = {x1, std::abs(f1)};
        if (best.f_abs < tol) return best;
        const double denom = f1 - f0;
        double x2;
        if (denom == 0.0) {
            x2 = 0.5 * (x0 + x1);
        } else {
            x2 = x1 - f1 * (x1 - x0) / denom;
        }
        if (!(x2 > lo && x2 < hi)) x2 = 0.5 * (x0 + x1);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
    }
    return best;
}

//! Closure defects of near-separatrix orbits are amplified by the passes near
//! the foci; this is the double-precision floor for a caustic at distance `gap`
//! from the focal segment.
double closure_noise_floor(int n, double a2s, double gap) {
    return 20.0 * n * 1e-16 * a2s / gap;
}

//! Bisection of a decreasing function g on [lo, hi] with g(lo) > 0 > g(hi).
std::pair<double, double> bisect_decreasing(const std::function<double(double)>& g, double lo,
                                            double hi, int iters) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

void check_period_inputs(int n, int k) {
    if (n < 2 || k < 1) throw DomainError("period and rotation number must be positive");
    if (std::gcd(n, k) != 1) throw DomainError("period and rotation number must be coprime");
    if (n == 2) {
        throw NoOrbitError(
            "period-2 orbits are the degenerate axis pair; no ellipse-caustic family exists");
    }
    if (2 * k >= n) throw DomainError("rotation number must satisfy 2k < n");
}

} // namespace

PhasePoint launch_tangent(const Ellipse& e, double mu, double t0) {
    const double a2s = e.a2() * e.a2();
    if (!(mu > -a2s && mu < 0.0)) {
        throw DomainError("launch_tangent: caustic parameter must lie in (-a2^2, 0)");
    }
    const Ellipse caustic = confocal_ellipse(e, mu);
    const AffineMap to_circle = AffineMap::scale(1.0 / caustic.a1(), 1.0 / caustic.a2());
    const Vec2 x = e.point_on(t0);
    return {wrap_two_pi(t0), tangent_direction(to_circle, x)};
}

double rotation_number(const Ellipse& e, double mu, int steps) {
    if (steps < 1) throw DomainError("rotation_number: need at least one step");
    PhasePoint pp = launch_tangent(e, mu, 0.0);
    double total = 0.0;
    for (int i = 0; i < steps; ++i) {
        const PhasePoint next = billiard_step(e, pp);
        total += param_advance(pp.t, next.t);
        pp = next;
    }
    return total / (kTwoPi * steps);
}

namespace {

//! Total boundary-parameter advance of n steps of the tangent ray from t0 = 0.
double closure_advance(const Ellipse& e, double mu, int n) {
    PhasePoint pp = launch_tangent(e, mu, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const PhasePoint next = billiard_step(e, pp);
        total += param_advance(pp.t, next.t);
        pp = next;
    }
    return total;
}

} // namespace

PeriodicCaustic find_periodic_caustic(const Ellipse& e, int n, int k, double tol) {
    check_period_inputs(n, k);
    const double a2s = e.a2() * e.a2();
    const double target = static_cast<double>(k) / n;

    const auto rho_gap = [&](double mu) { return rotation_number(e, mu, kRotationSteps) - target; };

    // Stage 1: bracket mu by the rotation number, which decreases from ~1/2 near
    // the focal segment to 0 at the boundary. Retry with smaller insets if the
    // requested winding is not straddled.
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (double eps : {1e-9, 1e-12, 1e-14}) {
        lo = -a2s + eps * a2s;
        hi = -eps * a2s;
        if (rho_gap(lo) > 0.0 && rho_gap(hi) < 0.0) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        throw NoOrbitError("find_periodic_caustic: rotation number range does not straddle " +
                           std::to_string(k) + "/" + std::to_string(n));
    }
    std::tie(lo, hi) = bisect_decreasing(rho_gap, lo, hi, 40);

    // Stage 2: secant on the closure defect, which is smooth in mu.
    const auto defect = [&](double mu) { return closure_advance(e, mu, n) - kTwoPi * k; };
    const SecantResult root = secant_refine(defect, lo, hi, -a2s, 0.0, tol);
    const double mu_star = root.x;
    const double gap = mu_star + a2s;
    if (root.f_abs >= std::max(tol, closure_noise_floor(n, a2s, gap))) {
        throw ConvergenceError("find_periodic_caustic: secant refinement stalled at defect " +
                               std::to_string(root.f_abs));
    }

    // Near-separatrix caustics cannot hold the nominal tolerance from arbitrary
    // launch points in double precision; the gate widens with the conditioning.
    const double porism_tol = std::max(kPorismTol, closure_noise_floor(n, a2s, gap));
    for (int j = 1; j <= kPorismProbes; ++j) {
        const double t0 = kTwoPi * j / (kPorismProbes + 1);
        const Orbit probe = orbit(e, launch_tangent(e, mu_star, t0), n);
        if (probe.closure_defect > porism_tol || probe.winding != k) {
            throw ConvergenceError("find_periodic_caustic: porism check failed at launch " +
                                   std::to_string(j));
        }
    }
    return {e, n, k, mu_star, root.f_abs};
}

FamilySweep family_sweep(const PeriodicCaustic& pc, int m, double member_tol) {
    if (m < 2) throw DomainError("family_sweep: need at least 2 samples");
    std::vector<double> starts(m);
    for (int j = 0; j < m; ++j) starts[j] = kTwoPi * j / m;
    return family_sweep(pc, std::move(starts), member_tol);
}

FamilySweep family_sweep(const PeriodicCaustic& pc, std::vector<double> starts,
                         double member_tol) {
    if (starts.size() < 2) throw DomainError("family_sweep: need at least 2 samples");

    FamilySweep sweep{.caustic = pc};
    sweep.tol_closure = member_tol;
    sweep.starts = std::move(starts);
    sweep.reports.reserve(sweep.starts.size());
    const double a2s = pc.table.a2() * pc.table.a2();
    const double gate =
        std::max(member_tol, closure_noise_floor(pc.n, a2s, pc.mu_star + a2s));
    for (size_t j = 0; j < sweep.starts.size(); ++j) {
        const Orbit o = orbit(pc.table, launch_tangent(pc.table, pc.mu_star, sweep.starts[j]),
                              pc.n);
        if (o.closure_defect > gate) {
            throw MemberError(static_cast<int>(j), "closure defect " +
                                                       std::to_string(o.closure_defect) +
                                                       " above tolerance");
        }
        sweep.reports.push_back(evaluate(o));
    }

    const auto channels0 = flatten_report(sweep.reports.front());
    for (size_t c = 0; c < channels0.size(); ++c) {
        SpreadStat s;
        s.vmin = s.vmax = channels0[c].second;
        double sum = 0.0;
        for (const InvariantReport& r : sweep.reports) {
            const double v = flatten_report(r)[c].second;
            s.vmin = std::min(s.vmin, v);
            s.vmax = std::max(s.vmax, v);
            sum += v;
        }
        s.mean = sum / sweep.reports.size();
        s.abs_spread = s.vmax - s.vmin;
        s.rel_spread = s.abs_spread / (std::abs(s.mean) + 1e-300);
        sweep.spreads.emplace_back(channels0[c].first, s);
    }

    auto sorted_signs = [](const InvariantReport& r) {
        std::vector<int> s = r.beta_signs;
        std::sort(s.begin(), s.end());
        return s;
    };
    const auto ref = sorted_signs(sweep.reports.front());
    for (const InvariantReport& r : sweep.reports) {
        if (sorted_signs(r) != ref) {
            sweep.beta_signs_consistent = false;
            break;
        }
    }
    return sweep;
}

double poncelet_map_general(const ConcentricConic& outer, const ConcentricConic& inner,
                            double t) {
    const Vec2 x = outer.point_at(t);
    const Vec2 u = tangent_direction(unit_circle_map(inner), x);
    const double s = -2.0 * dot(outer.form_apply(x), u) / dot(outer.form_apply(u), u);
    if (std::abs(s) == 0.0) {
        throw DegeneracyError("poncelet_map_general: tangent chord degenerates");
    }
    return outer.param_of(x + s * u);
}

double rotation_number_general(const ConcentricConic& outer, const ConcentricConic& inner,
                               int steps) {
    if (steps < 1) throw DomainError("rotation_number_general: need at least one step");
    double t = 0.0;
    double total = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double next = poncelet_map_general(outer, inner, t);
        total += param_advance(t, next);
        t = next;
    }
    return total / (kTwoPi * steps);
}

GeneralPolygon general_polygon(const ConcentricConic& outer, const ConcentricConic& inner,
                               double t0, int n) {
    if (n < 3) throw DomainError("general_polygon: need at least 3 vertices");
    GeneralPolygon poly;
    poly.params.reserve(n);
    poly.points.reserve(n);
    double t = wrap_two_pi(t0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        poly.params.push_back(t);
        poly.points.push_back(outer.point_at(t));
        const double next = poncelet_map_general(outer, inner, t);
        total += param_advance(t, next);
        t = next;
    }
    poly.winding = static_cast<int>(std::llround(total / kTwoPi));
    poly.closure_defect = std::abs(total - kTwoPi * poly.winding);
    return poly;
}

double find_closing_scale(const ConcentricConic& outer, const Ellipse& inner_shape, int n, int k,
                          double tol) {
    check_period_inputs(n, k);
    const double target = static_cast<double>(k) / n;

    // Largest admissible scale: the shape's image under the outer form touches the
    // outer conic when s^2 max-eigenvalue of the circle-frame outer image hits 1.
    const ConcentricConic shape = ConcentricConic::from_ellipse(inner_shape);
    const ConcentricConic g = transformed(outer, unit_circle_map(shape));
    const double s_max = g.principal_axes().b2; // 1/sqrt(lambda_max)

    const auto inner_at = [&](double s) { return ConcentricConic::scaled(inner_shape, s); };
    const auto rho_gap = [&](double s) {
        return rotation_number_general(outer, inner_at(s), kRotationSteps) - target;
    };

    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (double eps : {1e-6, 1e-9, 1e-12}) {
        lo = eps * s_max;
        hi = (1.0 - eps) * s_max;
        if (rho_gap(lo) > 0.0 && rho_gap(hi) < 0.0) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        throw NoOrbitError("find_closing_scale: rotation number range does not straddle " +
                           std::to_string(k) + "/" + std::to_string(n));
    }
    std::tie(lo, hi) = bisect_decreasing(rho_gap, lo, hi, 40);

    const auto defect = [&](double s) {
        double t = 0.0;
        double total = 0.0;
        const ConcentricConic inner = inner_at(s);
        for (int i = 0; i < n; ++i) {
            const double next = poncelet_map_general(outer, inner, t);
            total += param_advance(t, next);
            t = next;
        }
        return total - kTwoPi * k;
    };
    const double s_star = secant_refine(defect, lo, hi, 0.0, s_max, tol, "find_closing_scale");

    for (int j = 1; j <= kPorismProbes; ++j) {
        const GeneralPolygon probe =
            general_polygon(outer, inner_at(s_star), kTwoPi * j / (kPorismProbes + 1), n);
        if (probe.closure_defect > kPorismTol || probe.winding != k) {
            throw ConvergenceError("find_closing_scale: porism check failed at launch " +
                                   std::to_string(j));
        }
    }
    return s_star;
}

} // namespace poncelet
