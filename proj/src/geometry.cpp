#include "mvlayout/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvlayout/robust.hpp"

namespace mvlayout {

double norm(Vec2 a) { return std::hypot(a.x, a.z); }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
double cross(Vec2 a, Vec2 b) { return a.x * b.z - a.z * b.x; }

double normalize_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r = kPi;
  return r;
}

LongitudeGrid longitude_grid(int width) {
  if (width < 4) throw std::invalid_argument("longitude_grid: width must be >= 4");
  LongitudeGrid g;
  g.width = width;
  g.angles.resize(width);
  for (int i = 0; i < width; ++i) {
    g.angles[i] = ((i + 0.5) / width - 0.5) * kTwoPi;
  }
  return g;
}

int HorizonDepth::valid_count() const {
  int n = 0;
  for (auto v : valid) n += (v != 0);
  return n;
}

HorizonDepth make_horizon_depth(std::vector<double> depths) {
  HorizonDepth d;
  d.valid.assign(depths.size(), 1);
  d.depths = std::move(depths);
  return d;
}

Vec2 rotate_xz(Vec2 p, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * p.x + s * p.z, -s * p.x + c * p.z};
}

Vec2 pose_to_world(const CameraPose& pose, Vec2 view_point) {
  Vec2 r = rotate_xz(view_point, pose.yaw);
  return {r.x + pose.tx, r.z + pose.tz};
}

Vec2 pose_to_view(const CameraPose& pose, Vec2 world_point) {
  return rotate_xz({world_point.x - pose.tx, world_point.z - pose.tz}, -pose.yaw);
}

Points3D depth_to_points(const HorizonDepth& d, const LongitudeGrid& grid) {
  if (d.width() != grid.width) {
    throw std::invalid_argument("depth_to_points: width mismatch");
  }
  Points3D out;
  out.points.resize(d.width());
  out.valid = d.valid;
  for (int i = 0; i < d.width(); ++i) {
    if (!d.valid[i]) continue;
    const double theta = grid.angles[i];
    out.points[i] = {d.depths[i] * std::sin(theta), 1.0, d.depths[i] * std::cos(theta)};
  }
  return out;
}

Points3D ceiling_points(const Points3D& floor_points, RatioValue ratio) {
  if (!(ratio.r > 0.0)) throw std::invalid_argument("ceiling_points: ratio must be > 0");
  Points3D out = floor_points;
  for (int i = 0; i < out.width(); ++i) {
    if (!out.valid[i]) continue;
    if (out.points[i].y != 1.0) {
      throw std::invalid_argument("ceiling_points: input is not a floor point set");
    }
    out.points[i].y = -ratio.r;
  }
  return out;
}

BoundarySamples d2l(const HorizonDepth& d, const CameraPose& pose,
                    const LongitudeGrid& grid) {
  if (!(pose.height > 0.0)) throw std::invalid_argument("d2l: camera height must be > 0");
  if (d.width() != grid.width) throw std::invalid_argument("d2l: width mismatch");
  BoundarySamples s;
  s.frame = Frame::View;
  s.points.resize(d.width());
  s.valid = d.valid;
  for (int i = 0; i < d.width(); ++i) {
    if (!d.valid[i]) continue;
    const double theta = grid.angles[i];
    const double r = pose.height * d.depths[i];
    s.points[i] = {r * std::sin(theta), r * std::cos(theta)};
  }
  return s;
}

BoundarySamples transform_samples(const BoundarySamples& s, const CameraPose& pose,
                                  TransformDirection direction) {
  const bool to_world = direction == TransformDirection::ToWorld;
  if (to_world && s.frame != Frame::View) {
    throw std::invalid_argument("transform_samples: to_world expects view-frame input");
  }
  if (!to_world && s.frame != Frame::World) {
    throw std::invalid_argument("transform_samples: to_view expects world-frame input");
  }
  BoundarySamples out = s;
  out.frame = to_world ? Frame::World : Frame::View;
  for (int i = 0; i < s.width(); ++i) {
    if (!s.valid[i]) continue;
    out.points[i] = to_world ? pose_to_world(pose, s.points[i])
                             : pose_to_view(pose, s.points[i]);
  }
  return out;
}

int column_of_direction(double x, double z, int width) {
  const double u = (std::atan2(x, z) / kTwoPi + 0.5) * width;
  int j = static_cast<int>(std::floor(u));
  if (j >= width) j -= width;  // atan2 == pi lands on the seam, column 0
  if (j < 0) j = 0;
  return j;
}

HorizonDepth l2d(const BoundarySamples& s, const CameraPose& pose,
                 const LongitudeGrid& grid, BinReduce reduce) {
  if (!(pose.height > 0.0)) throw std::invalid_argument("l2d: camera height must be > 0");
  const int w = grid.width;
  std::vector<std::vector<double>> bins(w);
  for (int i = 0; i < s.width(); ++i) {
    if (!s.valid[i]) continue;
    const Vec2 p = s.points[i];
    const double r = norm(p);
    if (r < 1e-12) continue;  // direction undefined at the origin
    bins[column_of_direction(p.x, p.z, w)].push_back(r / pose.height);
  }
  HorizonDepth out;
  out.depths.assign(w, 0.0);
  out.valid.assign(w, 0);
  for (int j = 0; j < w; ++j) {
    if (bins[j].empty()) continue;
    std::sort(bins[j].begin(), bins[j].end());
    out.depths[j] = reduce == BinReduce::Median ? median_sorted(bins[j]) : bins[j].front();
    out.valid[j] = 1;
  }
  return out;
}

ImageRows project_to_image(const HorizonDepth& d, RatioValue ratio, int image_height) {
  if (image_height <= 0) throw std::invalid_argument("project_to_image: image height must be > 0");
  if (!(ratio.r > 0.0)) throw std::invalid_argument("project_to_image: ratio must be > 0");
  ImageRows out;
  out.floor_row.assign(d.width(), 0.0);
  out.ceil_row.assign(d.width(), 0.0);
  out.valid = d.valid;
  for (int i = 0; i < d.width(); ++i) {
    if (!d.valid[i]) continue;
    const double depth = d.depths[i];
    if (depth == 0.0) throw std::domain_error("project_to_image: zero depth");
    // Latitude positive toward the ceiling; row = (0.5 - phi/pi) * H.
    const double phi_floor = -std::atan(1.0 / depth);
    const double phi_ceil = std::atan(ratio.r / depth);
    out.floor_row[i] = (0.5 - phi_floor / kPi) * image_height;
    out.ceil_row[i] = (0.5 - phi_ceil / kPi) * image_height;
  }
  return out;
}

}  // namespace mvlayout
