#pragma once

// Minimal SVG emission for floor-plan overlays.

#include <filesystem>
#include <string>
#include <vector>

#include "mvlayout/geometry.hpp"

namespace mvlayout {

struct SvgPath {
  std::vector<Vec2> points;
  std::string color = "#000000";
  double stroke_width = 0.03;
  bool closed = true;
};

std::string render_floor_plan_svg(const std::vector<SvgPath>& paths, double pixels = 640.0);

void write_floor_plan_svg(const std::filesystem::path& path, const std::vector<SvgPath>& paths,
                          double pixels = 640.0);

}  // namespace mvlayout
