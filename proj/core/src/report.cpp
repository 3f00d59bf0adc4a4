#include "poncelet/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "poncelet/errors.hpp"
#include "poncelet/invariants.hpp"

namespace poncelet {

namespace {

constexpr const char* kSchema = "poncelet-lab/1";

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

nlohmann::json load_json(const std::filesystem::path& path, const char* expected_type) {
    auto in = open_in(path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.value("schema", "") != kSchema || doc.value("type", "") != expected_type) {
        throw IoError(path.string() + ": not a " + std::string(kSchema) + " " + expected_type +
                      " document");
    }
    return doc;
}

nlohmann::json points_json(const std::vector<Vec2>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Vec2& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

std::vector<Vec2> points_from_json(const nlohmann::json& arr) {
    std::vector<Vec2> pts;
    for (const auto& p : arr) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return pts;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error("parse_double: invalid number '" + std::string(s) + "'");
    }
    return v;
}

void write_csv(const FamilySweep& sweep, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# schema: " << kSchema << "\n";
    out << "# a1: " << format_double(sweep.caustic.table.a1()) << "\n";
    out << "# a2: " << format_double(sweep.caustic.table.a2()) << "\n";
    out << "# n: " << sweep.caustic.n << "\n";
    out << "# k: " << sweep.caustic.k << "\n";
    out << "# mu_star: " << format_double(sweep.caustic.mu_star) << "\n";
    out << "# residual: " << format_double(sweep.caustic.residual) << "\n";
    out << "# samples: " << sweep.starts.size() << "\n";
    out << "# tol_closure: " << format_double(sweep.tol_closure) << "\n";
    out << "# tol_spread: " << format_double(sweep.tol_spread) << "\n";
    out << "t0,invariant,value\n";
    for (size_t j = 0; j < sweep.reports.size(); ++j) {
        for (const auto& [name, value] : flatten_report(sweep.reports[j])) {
            out << format_double(sweep.starts[j]) << ',' << name << ','
                << format_double(value) << "\n";
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

CsvSweep read_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    CsvSweep parsed;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string key = line.substr(1, colon - 1);
                std::string value = line.substr(colon + 1);
                const auto trim = [](std::string& s) {
                    s.erase(0, s.find_first_not_of(' '));
                    s.erase(s.find_last_not_of(' ') + 1);
                };
                trim(key);
                trim(value);
                parsed.metadata[key] = value;
            }
            continue;
        }
        if (!header_seen) {
            if (line != "t0,invariant,value") {
                throw IoError(path.string() + ": unexpected CSV header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw IoError(path.string() + ": malformed CSV row '" + line + "'");
        }
        parsed.rows.emplace_back(parse_double(std::string_view(line).substr(0, c1)),
                                 line.substr(c1 + 1, c2 - c1 - 1),
                                 parse_double(std::string_view(line).substr(c2 + 1)));
    }
    return parsed;
}

void write_json(const Orbit& o, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["schema"] = kSchema;
    doc["type"] = "orbit";
    doc["a1"] = o.table.a1();
    doc["a2"] = o.table.a2();
    doc["n"] = o.period;
    doc["k"] = o.winding;
    doc["mu"] = o.mu;
    doc["mu_max_dev"] = o.mu_max_dev;
    doc["joachimsthal"] = o.joachimsthal;
    doc["j_max_dev"] = o.j_max_dev;
    doc["closure_defect"] = o.closure_defect;
    doc["vertex_params"] = o.vertex_params;
    doc["points"] = points_json(o.points);
    doc["dirs"] = points_json(o.dirs);
    open_out(path) << doc.dump(2) << "\n";
}

Orbit read_orbit_json(const std::filesystem::path& path) {
    const nlohmann::json doc = load_json(path, "orbit");
    Orbit o{.table = Ellipse(doc.at("a1").get<double>(), doc.at("a2").get<double>())};
    o.period = doc.at("n").get<int>();
    o.winding = doc.at("k").get<int>();
    o.mu = doc.at("mu").get<double>();
    o.mu_max_dev = doc.at("mu_max_dev").get<double>();
    o.joachimsthal = doc.at("joachimsthal").get<double>();
    o.j_max_dev = doc.at("j_max_dev").get<double>();
    o.closure_defect = doc.at("closure_defect").get<double>();
    o.vertex_params = doc.at("vertex_params").get<std::vector<double>>();
    o.points = points_from_json(doc.at("points"));
    o.dirs = points_from_json(doc.at("dirs"));
    return o;
}

namespace {

nlohmann::json report_json(const InvariantReport& r) {
    nlohmann::json values;
    for (const auto& [name, value] : flatten_report(r)) values[name] = value;
    nlohmann::json entry;
    entry["values"] = values;
    entry["beta_signs"] = r.beta_signs;
    entry["u_fit_residual"] = r.u_fit_residual;
    entry["u_angle_max_dev"] = r.u_angle_max_dev;
    return entry;
}

} // namespace

void write_json(const FamilySweep& sweep, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["schema"] = kSchema;
    doc["type"] = "family_sweep";
    doc["a1"] = sweep.caustic.table.a1();
    doc["a2"] = sweep.caustic.table.a2();
    doc["n"] = sweep.caustic.n;
    doc["k"] = sweep.caustic.k;
    doc["mu_star"] = sweep.caustic.mu_star;
    doc["residual"] = sweep.caustic.residual;
    doc["samples"] = sweep.starts.size();
    doc["tol_closure"] = sweep.tol_closure;
    doc["tol_spread"] = sweep.tol_spread;
    doc["starts"] = sweep.starts;
    doc["beta_signs_consistent"] = sweep.beta_signs_consistent;
    nlohmann::json reports = nlohmann::json::array();
    for (const InvariantReport& r : sweep.reports) reports.push_back(report_json(r));
    doc["reports"] = reports;
    nlohmann::json spreads;
    for (const auto& [name, s] : sweep.spreads) {
        spreads[name] = {{"min", s.vmin},
                         {"max", s.vmax},
                         {"mean", s.mean},
                         {"abs", s.abs_spread},
                         {"rel", s.rel_spread}};
    }
    doc["spreads"] = spreads;
    open_out(path) << doc.dump(2) << "\n";
}

FamilySweep read_sweep_json(const std::filesystem::path& path) {
    const nlohmann::json doc = load_json(path, "family_sweep");
    FamilySweep sweep{
        .caustic = {Ellipse(doc.at("a1").get<double>(), doc.at("a2").get<double>()),
                    doc.at("n").get<int>(), doc.at("k").get<int>(),
                    doc.at("mu_star").get<double>(), doc.at("residual").get<double>()}};
    sweep.tol_closure = doc.at("tol_closure").get<double>();
    sweep.tol_spread = doc.at("tol_spread").get<double>();
    sweep.starts = doc.at("starts").get<std::vector<double>>();
    sweep.beta_signs_consistent = doc.at("beta_signs_consistent").get<bool>();
    const int n = sweep.caustic.n;
    for (const auto& entry : doc.at("reports")) {
        InvariantReport r;
        const auto& values = entry.at("values");
        r.perimeter = values.at("L").get<double>();
        r.joachimsthal = values.at("J").get<double>();
        r.sum_cos_alpha = values.at("sum_cos_alpha").get<double>();
        r.jl_minus_n = values.at("jl_minus_n").get<double>();
        r.prod_cos_beta = values.at("prod_cos_beta").get<double>();
        for (int k = 1; k <= n - 1; ++k) {
            r.c_k.push_back(values.at("c_" + std::to_string(k)).get<double>());
            r.sum_cos_central.push_back(
                values.at("sum_cos_central_" + std::to_string(k)).get<double>());
            r.sum_sq_diag.push_back(values.at("sum_sq_diag_" + std::to_string(k)).get<double>());
        }
        if (values.contains("prod_sin_half")) {
            r.prod_sin_half = values.at("prod_sin_half").get<double>();
        }
        if (values.contains("area_ratio")) r.area_ratio = values.at("area_ratio").get<double>();
        r.dual_sum_cos = values.at("dual_sum_cos").get<double>();
        r.dual_prod_cos = values.at("dual_prod_cos").get<double>();
        r.beta_signs = entry.at("beta_signs").get<std::vector<int>>();
        r.u_fit_residual = entry.at("u_fit_residual").get<double>();
        r.u_angle_max_dev = entry.at("u_angle_max_dev").get<double>();
        sweep.reports.push_back(std::move(r));
    }
    for (const auto& [name, s] : doc.at("spreads").items()) {
        sweep.spreads.emplace_back(
            name, SpreadStat{s.at("min").get<double>(), s.at("max").get<double>(),
                             s.at("mean").get<double>(), s.at("abs").get<double>(),
                             s.at("rel").get<double>()});
    }
    return sweep;
}

void write_json(const GridLayer& layer, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["schema"] = kSchema;
    doc["type"] = "grid_layer";
    doc["step"] = layer.step;
    doc["points"] = points_json(layer.points);
    doc["mu_values"] = layer.mu_values;
    doc["mu_mean"] = layer.mu_mean;
    doc["mu_max_dev"] = layer.mu_max_dev;
    doc["polygons"] = layer.polygons;
    open_out(path) << doc.dump(2) << "\n";
}

GridLayer read_layer_json(const std::filesystem::path& path) {
    const nlohmann::json doc = load_json(path, "grid_layer");
    GridLayer layer;
    layer.step = doc.at("step").get<int>();
    layer.points = points_from_json(doc.at("points"));
    layer.mu_values = doc.at("mu_values").get<std::vector<double>>();
    layer.mu_mean = doc.at("mu_mean").get<double>();
    layer.mu_max_dev = doc.at("mu_max_dev").get<double>();
    layer.polygons = doc.at("polygons").get<std::vector<std::vector<int>>>();
    return layer;
}

SvgScene orbit_scene(const Orbit& o, bool with_tangent_polygon, bool with_angle_labels) {
    SvgScene scene{.table = o.table};
    if (o.mu > -o.table.a2() * o.table.a2()) {
        scene.caustic = confocal_ellipse(o.table, o.mu);
    }
    scene.paths.push_back(o.points);
    if (with_tangent_polygon) {
        scene.paths.push_back(tangent_polygon(o));
        if (scene.caustic) {
            // Conic through the tangent-polygon vertices: polar dual of the
            // caustic with respect to the table, semi-axes a_i^2 / c_i.
            scene.conics.emplace_back(
                o.table.a1() * o.table.a1() / scene.caustic->a1(),
                o.table.a2() * o.table.a2() / scene.caustic->a2());
        }
    }
    if (with_angle_labels) {
        const auto alpha = vertex_angles(o);
        for (int i = 0; i < o.period; ++i) {
            scene.labels.emplace_back(o.points[i], format_double(alpha[i]));
        }
    }
    return scene;
}

SvgScene grid_scene(const Orbit& o, const GridLayer& layer) {
    SvgScene scene{.table = o.table};
    if (o.mu > -o.table.a2() * o.table.a2()) {
        scene.caustic = confocal_ellipse(o.table, o.mu);
    }
    scene.paths.push_back(o.points);
    scene.markers = layer.points;
    return scene;
}

void render_svg(const SvgScene& scene, const std::filesystem::path& path) {
    const double w = 2.2 * scene.table.a1();
    const double h = 2.2 * scene.table.a2();
    const double stroke = 0.004 * w;

    auto out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"600\" viewBox=\"" << format_double(-0.5 * w) << ' '
        << format_double(-0.5 * h) << ' ' << format_double(w) << ' ' << format_double(h)
        << "\">\n";

    const auto ellipse_tag = [&](const Ellipse& e, const char* color) {
        out << "  <ellipse cx=\"0\" cy=\"0\" rx=\"" << format_double(e.a1()) << "\" ry=\""
            << format_double(e.a2()) << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"" << format_double(stroke) << "\"/>\n";
    };
    ellipse_tag(scene.table, "black");
    if (scene.caustic) ellipse_tag(*scene.caustic, "gray");
    for (const Ellipse& c : scene.conics) ellipse_tag(c, "steelblue");

    for (const auto& pts : scene.paths) {
        out << "  <polyline fill=\"none\" stroke=\"crimson\" stroke-width=\""
            << format_double(stroke) << "\" points=\"";
        for (size_t i = 0; i <= pts.size(); ++i) {
            const Vec2& p = pts[i % pts.size()];
            if (i) out << ' ';
            out << format_double(p.x) << ',' << format_double(-p.y);
        }
        out << "\"/>\n";
    }
    for (const Vec2& m : scene.markers) {
        out << "  <circle cx=\"" << format_double(m.x) << "\" cy=\"" << format_double(-m.y)
            << "\" r=\"" << format_double(1.5 * stroke) << "\" fill=\"black\"/>\n";
    }
    for (const auto& [pos, text] : scene.labels) {
        out << "  <text x=\"" << format_double(pos.x) << "\" y=\"" << format_double(-pos.y)
            << "\" font-size=\"" << format_double(5.0 * stroke) << "\">" << text << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace poncelet
