// poncelet-lab: construct periodic billiard orbits in ellipses and verify the
// invariants of their one-parameter families.
//
// Subcommands: orbit, family, grid, areas. One JSON document per run on stdout,
// diagnostics on stderr. Exit codes: 0 success, 2 no orbit, 3 convergence
// failure, 4 spread violation, 5 degeneracy, 6 domain error.

#include <cstdlib>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "poncelet/errors.hpp"
#include "poncelet/families.hpp"
#include "poncelet/grid.hpp"
#include "poncelet/report.hpp"

namespace {

using nlohmann::json;
using namespace poncelet;

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("PONCELET_LOG");
        if (!env) return LogLevel::kWarn;
        const std::string v(env);
        if (v == "error") return LogLevel::kError;
        if (v == "warn") return LogLevel::kWarn;
        if (v == "info") return LogLevel::kInfo;
        if (v == "debug") return LogLevel::kDebug;
        return LogLevel::kWarn;
    }();
    return level;
}

void log(LogLevel level, const std::string& msg) {
    if (level <= log_level()) std::cerr << "poncelet-lab: " << msg << "\n";
}

struct RunConfig {
    double a1 = 0.0;
    double a2 = 0.0;
    int n = 0;
    int k = 1;
    int samples = 64;
    double tol_closure = 1e-11;
    double tol_spread = 1e-8;
    unsigned long long seed = 0;
    int step = 0;
    double inner_a1 = 0.0;
    double inner_a2 = 0.0;
    std::string csv_path;
    std::string json_path;
    std::string svg_path;
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--a1", cfg.a1, "first semi-axis of the table")->required();
    cmd->add_option("--a2", cfg.a2, "second semi-axis of the table")->required();
    cmd->add_option("--n", cfg.n, "orbit period")->required();
    cmd->add_option("--k", cfg.k, "rotation number numerator");
    cmd->add_option("--samples", cfg.samples, "family sweep size");
    cmd->add_option("--tol-closure", cfg.tol_closure, "closure defect tolerance (radians)");
    cmd->add_option("--tol-spread", cfg.tol_spread, "relative invariant spread tolerance");
    cmd->add_option("--seed", cfg.seed, "seed for start jitter; 0 keeps the uniform grid");
    cmd->add_option("--csv", cfg.csv_path, "write the sweep as CSV");
    cmd->add_option("--json", cfg.json_path, "write the result document as JSON");
    cmd->add_option("--svg", cfg.svg_path, "render the scene as SVG");
}

//! Shared validation; throws the error type matching the documented exit code.
Ellipse validated_table(const RunConfig& cfg) {
    if (!(cfg.a1 >= cfg.a2 && cfg.a2 > 0.0)) {
        throw DomainError("semi-axes must satisfy a1 >= a2 > 0");
    }
    if (cfg.n < 2 || cfg.k < 1) throw DomainError("need n >= 2 and k >= 1");
    if (std::gcd(cfg.n, cfg.k) != 1) {
        throw NoOrbitError("gcd(n, k) = " + std::to_string(std::gcd(cfg.n, cfg.k)) +
                           "; the pair must be coprime for a primitive orbit");
    }
    if (cfg.samples < 2) throw DomainError("need at least 2 samples");
    return {cfg.a1, cfg.a2};
}

std::vector<double> start_grid(const RunConfig& cfg) {
    std::vector<double> starts(cfg.samples);
    for (int j = 0; j < cfg.samples; ++j) starts[j] = kTwoPi * j / cfg.samples;
    if (cfg.seed != 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> jitter(-kPi / cfg.samples, kPi / cfg.samples);
        for (double& t : starts) t = wrap_two_pi(t + jitter(rng));
    }
    return starts;
}

//! A channel passes when its relative spread beats the tolerance or its absolute
//! spread is already below tol/10 (identically-zero invariants have no usable
//! relative scale).
bool spread_ok(const SpreadStat& s, double tol) {
    return s.rel_spread < tol || s.abs_spread < 0.1 * tol;
}

int cmd_orbit(const RunConfig& cfg) {
    const Ellipse table = validated_table(cfg);
    const PeriodicCaustic pc = find_periodic_caustic(table, cfg.n, cfg.k, cfg.tol_closure);
    log(LogLevel::kInfo, "caustic parameter " + format_double(pc.mu_star) + " residual " +
                             format_double(pc.residual));
    const Orbit o = orbit(table, launch_tangent(table, pc.mu_star, 0.0), cfg.n);

    json doc;
    doc["schema"] = "poncelet-lab/1";
    doc["type"] = "orbit_result";
    doc["a1"] = cfg.a1;
    doc["a2"] = cfg.a2;
    doc["n"] = cfg.n;
    doc["k"] = cfg.k;
    doc["mu_star"] = pc.mu_star;
    doc["residual"] = pc.residual;
    doc["joachimsthal"] = o.joachimsthal;
    doc["perimeter"] = perimeter(o);
    doc["closure_defect"] = o.closure_defect;
    std::cout << doc.dump(2) << "\n";

    if (!cfg.json_path.empty()) write_json(o, cfg.json_path);
    if (!cfg.svg_path.empty()) render_svg(orbit_scene(o), cfg.svg_path);
    return 0;
}

int cmd_family(const RunConfig& cfg) {
    const Ellipse table = validated_table(cfg);
    const PeriodicCaustic pc = find_periodic_caustic(table, cfg.n, cfg.k, cfg.tol_closure);
    FamilySweep sweep = family_sweep(pc, start_grid(cfg));
    sweep.tol_spread = cfg.tol_spread;

    bool pass = sweep.beta_signs_consistent;
    double max_rel = 0.0;
    json spreads;
    for (const auto& [name, s] : sweep.spreads) {
        spreads[name] = {{"min", s.vmin},
                         {"max", s.vmax},
                         {"mean", s.mean},
                         {"abs", s.abs_spread},
                         {"rel", s.rel_spread}};
        max_rel = std::max(max_rel, s.rel_spread);
        if (!spread_ok(s, cfg.tol_spread)) {
            pass = false;
            log(LogLevel::kWarn, "channel " + name + " spread " + format_double(s.rel_spread) +
                                     " above tolerance");
        }
    }

    json doc;
    doc["schema"] = "poncelet-lab/1";
    doc["type"] = "family_result";
    doc["a1"] = cfg.a1;
    doc["a2"] = cfg.a2;
    doc["n"] = cfg.n;
    doc["k"] = cfg.k;
    doc["mu_star"] = pc.mu_star;
    doc["samples"] = cfg.samples;
    doc["spreads"] = spreads;
    doc["max_rel_spread"] = max_rel;
    doc["beta_signs_consistent"] = sweep.beta_signs_consistent;
    doc["pass"] = pass;
    std::cout << doc.dump(2) << "\n";

    if (!cfg.csv_path.empty()) write_csv(sweep, cfg.csv_path);
    if (!cfg.json_path.empty()) write_json(sweep, cfg.json_path);
    if (!cfg.svg_path.empty()) {
        const Orbit o = orbit(table, launch_tangent(table, pc.mu_star, sweep.starts[0]), cfg.n);
        render_svg(orbit_scene(o, /*with_tangent_polygon=*/true), cfg.svg_path);
    }
    return pass ? 0 : 4;
}

int cmd_grid(const RunConfig& cfg) {
    const Ellipse table = validated_table(cfg);
    if (cfg.step < 2 || cfg.step > cfg.n - 2) {
        throw DomainError("grid step must satisfy 2 <= step <= n-2");
    }
    const PeriodicCaustic pc = find_periodic_caustic(table, cfg.n, cfg.k, cfg.tol_closure);
    const Orbit o = orbit(table, launch_tangent(table, pc.mu_star, 0.0), cfg.n);
    const GridLayer layer = grid_layer(o, cfg.step);
    const double angle_dev = grid_polygon_angles_check(o, layer);

    json doc;
    doc["schema"] = "poncelet-lab/1";
    doc["type"] = "grid_result";
    doc["a1"] = cfg.a1;
    doc["a2"] = cfg.a2;
    doc["n"] = cfg.n;
    doc["k"] = cfg.k;
    doc["step"] = cfg.step;
    doc["mu_mean"] = layer.mu_mean;
    doc["mu_max_dev"] = layer.mu_max_dev;
    doc["polygon_count"] = layer.polygons.size();
    doc["angle_max_dev"] = angle_dev;
    std::cout << doc.dump(2) << "\n";

    if (!cfg.json_path.empty()) write_json(layer, cfg.json_path);
    if (!cfg.svg_path.empty()) render_svg(grid_scene(o, layer), cfg.svg_path);
    return 0;
}

int cmd_areas(const RunConfig& cfg) {
    const Ellipse table = validated_table(cfg);
    if (cfg.n % 2 == 0) throw DomainError("area ratios are defined for odd n only");

    const PeriodicCaustic pc = find_periodic_caustic(table, cfg.n, cfg.k, cfg.tol_closure);
    std::vector<double> ratios;
    for (double t0 : start_grid(cfg)) {
        ratios.push_back(area_ratio(orbit(table, launch_tangent(table, pc.mu_star, t0), cfg.n)));
    }
    double lo = ratios.front(), hi = ratios.front(), sum = 0.0;
    for (double r : ratios) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        sum += r;
    }
    const double mean = sum / ratios.size();
    const double rel = (hi - lo) / (std::abs(mean) + 1e-300);

    json doc;
    doc["schema"] = "poncelet-lab/1";
    doc["type"] = "areas_result";
    doc["a1"] = cfg.a1;
    doc["a2"] = cfg.a2;
    doc["n"] = cfg.n;
    doc["k"] = cfg.k;
    doc["samples"] = cfg.samples;
    doc["confocal"] = {{"ratio", mean}, {"abs_spread", hi - lo}, {"rel_spread", rel}};

    bool pass = rel < cfg.tol_spread || (hi - lo) < 0.1 * cfg.tol_spread;
    if (cfg.inner_a1 > 0.0 || cfg.inner_a2 > 0.0) {
        if (!(cfg.inner_a1 >= cfg.inner_a2 && cfg.inner_a2 > 0.0)) {
            throw DomainError("inner shape semi-axes must satisfy a1 >= a2 > 0");
        }
        const ConcentricConic outer = ConcentricConic::from_ellipse(table);
        const Ellipse shape(cfg.inner_a1, cfg.inner_a2);
        const double s_star = find_closing_scale(outer, shape, cfg.n, cfg.k, cfg.tol_closure);
        const AreaRatioSweep ars = area_ratio_general(
            outer, ConcentricConic::scaled(shape, s_star), cfg.n, cfg.k, cfg.samples);
        doc["general"] = {{"closing_scale", s_star},
                          {"ratio", ars.direct_mean},
                          {"abs_spread", ars.direct_abs_spread},
                          {"rel_spread", ars.direct_rel_spread},
                          {"confocalized_ratio", ars.confocal_mean},
                          {"confocalized_rel_spread", ars.confocal_rel_spread},
                          {"agreement", ars.agreement}};
        pass = pass &&
               (ars.direct_rel_spread < cfg.tol_spread ||
                ars.direct_abs_spread < 0.1 * cfg.tol_spread) &&
               ars.agreement < cfg.tol_spread * (1.0 + std::abs(ars.direct_mean));
    }
    doc["pass"] = pass;
    std::cout << doc.dump(2) << "\n";
    return pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic billiard orbits in ellipses and their family invariants"};
    app.require_subcommand(1);

    RunConfig cfg;
    CLI::App* orbit_cmd = app.add_subcommand("orbit", "locate one periodic caustic");
    CLI::App* family_cmd = app.add_subcommand("family", "sweep a family and check invariants");
    CLI::App* grid_cmd = app.add_subcommand("grid", "intersect side lines into a grid layer");
    CLI::App* areas_cmd = app.add_subcommand("areas", "area-ratio experiments (odd n)");
    for (CLI::App* cmd : {orbit_cmd, family_cmd, grid_cmd, areas_cmd}) {
        add_common_flags(cmd, cfg);
    }
    grid_cmd->add_option("--step", cfg.step, "grid step k (2 <= k <= n-2)")->required();
    areas_cmd->add_option("--inner-a1", cfg.inner_a1, "general-pair inner shape semi-axis");
    areas_cmd->add_option("--inner-a2", cfg.inner_a2, "general-pair inner shape semi-axis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (orbit_cmd->parsed()) return cmd_orbit(cfg);
        if (family_cmd->parsed()) return cmd_family(cfg);
        if (grid_cmd->parsed()) return cmd_grid(cfg);
        if (areas_cmd->parsed()) return cmd_areas(cfg);
    } catch (const NoOrbitError& e) {
        log(LogLevel::kError, e.what());
        return 2;
    } catch (const ConvergenceError& e) {
        log(LogLevel::kError, e.what());
        return 3;
    } catch (const DegeneracyError& e) {
        log(LogLevel::kError, e.what());
        return 5;
    } catch (const TangencyError& e) {
        log(LogLevel::kError, e.what());
        return 5;
    } catch (const MemberError& e) {
        log(LogLevel::kError, e.what());
        return 5;
    } catch (const FitError& e) {
        log(LogLevel::kError, e.what());
        return 5;
    } catch (const DomainError& e) {
        log(LogLevel::kError, e.what());
        return 6;
    } catch (const Error& e) {
        log(LogLevel::kError, e.what());
        return 1;
    }
    return 1;
}
