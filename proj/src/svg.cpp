#include "mvlayout/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mvlayout/serialization.hpp"

namespace mvlayout {

std::string render_floor_plan_svg(const std::vector<SvgPath>& paths, double pixels) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_z = min_x, max_z = -min_x;
  for (const SvgPath& path : paths) {
    for (const Vec2& p : path.points) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_z = std::min(min_z, p.z);
      max_z = std::max(max_z, p.z);
    }
  }
  if (!(max_x > min_x) || !(max_z > min_z)) {
    min_x = min_z = -1.0;
    max_x = max_z = 1.0;
  }
  const double margin = 0.05 * std::max(max_x - min_x, max_z - min_z);
  min_x -= margin;
  min_z -= margin;
  max_x += margin;
  max_z += margin;
  const double scale = pixels / std::max(max_x - min_x, max_z - min_z);

  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.3f %.3f\">\n",
                (max_x - min_x) * scale, (max_z - min_z) * scale, (max_x - min_x) * scale,
                (max_z - min_z) * scale);
  os << buf;
  for (const SvgPath& path : paths) {
    if (path.points.size() < 2) continue;
    os << (path.closed ? "<polygon" : "<polyline") << " points=\"";
    for (const Vec2& p : path.points) {
      // z up in the plan view, SVG y down.
      std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", (p.x - min_x) * scale,
                    (max_z - p.z) * scale);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.3f\"/>\n",
                  path.color.c_str(), path.stroke_width * scale);
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

void write_floor_plan_svg(const std::filesystem::path& path, const std::vector<SvgPath>& paths,
                          double pixels) {
  write_text_atomic(path, render_floor_plan_svg(paths, pixels));
}

}  // namespace mvlayout
