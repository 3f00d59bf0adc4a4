#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "poncelet/families.hpp"
#include "poncelet/grid.hpp"

namespace poncelet {

//! Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);
//! Exact inverse of format_double.
double parse_double(std::string_view s);

//! CSV sweep record: '#'-prefixed metadata lines, a `t0,invariant,value` header,
//! then one row per (start, invariant channel).
void write_csv(const FamilySweep& sweep, const std::filesystem::path& path);

//! Parsed form of the CSV record, for round-trip checks and downstream tooling.
struct CsvSweep {
    std::map<std::string, std::string> metadata;
    std::vector<std::tuple<double, std::string, double>> rows;
};
CsvSweep read_csv(const std::filesystem::path& path);

//! JSON documents, schema "poncelet-lab/1".
void write_json(const Orbit& o, const std::filesystem::path& path);
void write_json(const FamilySweep& sweep, const std::filesystem::path& path);
void write_json(const GridLayer& layer, const std::filesystem::path& path);

Orbit read_orbit_json(const std::filesystem::path& path);
FamilySweep read_sweep_json(const std::filesystem::path& path);
GridLayer read_layer_json(const std::filesystem::path& path);

//! Static figure description: the table, optional confocal caustic, extra conics,
//! closed polylines, point markers, and optional text labels.
struct SvgScene {
    Ellipse table;
    std::optional<Ellipse> caustic;
    std::vector<Ellipse> conics;
    std::vector<std::vector<Vec2>> paths;
    std::vector<Vec2> markers;
    std::vector<std::pair<Vec2, std::string>> labels;
};

//! Trajectory figure: table, caustic (when on the ellipse branch), the orbit
//! polygon, and optionally the tangent polygon with its circumscribing conic.
SvgScene orbit_scene(const Orbit& o, bool with_tangent_polygon = false,
                     bool with_angle_labels = false);
//! Grid figure: orbit star polyline plus the layer's intersection markers.
SvgScene grid_scene(const Orbit& o, const GridLayer& layer);

//! Deterministic standalone SVG, 800x600 canvas, viewBox = table bounding box
//! with a 10% margin. Identical scenes produce byte-identical files.
void render_svg(const SvgScene& scene, const std::filesystem::path& path);

} // namespace poncelet
