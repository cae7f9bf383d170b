#include "mvlayout/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mvlayout/rng.hpp"

namespace mvlayout {

namespace {
constexpr double kParallelTol = 1e-12;
}

double polygon_area(const FloorPolygon& poly) {
  double s = 0.0;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly.vertices[i];
    const Vec2& b = poly.vertices[(i + 1) % n];
    s += a.x * b.z - b.x * a.z;
  }
  return 0.5 * s;
}

Vec2 polygon_centroid(const FloorPolygon& poly) {
  double cx = 0.0, cz = 0.0, area = 0.0;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly.vertices[i];
    const Vec2& b = poly.vertices[(i + 1) % n];
    const double w = a.x * b.z - b.x * a.z;
    cx += (a.x + b.x) * w;
    cz += (a.z + b.z) * w;
    area += w;
  }
  area *= 0.5;
  if (std::abs(area) < 1e-12) return poly.vertices.empty() ? Vec2{} : poly.vertices[0];
  return {cx / (6.0 * area), cz / (6.0 * area)};
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.z, b.z) <= p.z && p.z <= std::max(a.z, b.z);
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool polygon_is_simple(const FloorPolygon& poly) {
  const int n = poly.size();
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly.vertices[i];
    const Vec2 b = poly.vertices[(i + 1) % n];
    if (norm(b - a) < 1e-12) return false;
    for (int j = i + 1; j < n; ++j) {
      // Adjacent edges share an endpoint by construction; skip them.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const Vec2 c = poly.vertices[j];
      const Vec2 d = poly.vertices[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const FloorPolygon& poly, Vec2 p) {
  // Even-odd crossing test with half-open edge spans.
  bool inside = false;
  const int n = poly.size();
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly.vertices[i];
    const Vec2& b = poly.vertices[j];
    if ((a.z > p.z) != (b.z > p.z)) {
      const double x_cross = a.x + (p.z - a.z) / (b.z - a.z) * (b.x - a.x);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double distance_to_boundary(const FloorPolygon& poly, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly.vertices[i];
    const Vec2 b = poly.vertices[(i + 1) % n];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, norm(p - (a + t * ab)));
  }
  return best;
}

double polygon_extent(const FloorPolygon& poly) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_z = min_x, max_z = -min_x;
  for (const Vec2& v : poly.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_z = std::min(min_z, v.z);
    max_z = std::max(max_z, v.z);
  }
  return std::max(max_x - min_x, max_z - min_z);
}

namespace {

FloorPolygon make_rectangle(double w, double d) {
  return FloorPolygon{{{-w / 2, -d / 2}, {w / 2, -d / 2}, {w / 2, d / 2}, {-w / 2, d / 2}}};
}

// Cuts a rectangular notch at a convex corner of a rectilinear polygon,
// adding two vertices. Returns false when the cut would break simplicity.
bool notch_corner(FloorPolygon& poly, int corner, double frac_a, double frac_b) {
  const int n = poly.size();
  const Vec2 prev = poly.vertices[(corner + n - 1) % n];
  const Vec2 cur = poly.vertices[corner];
  const Vec2 next = poly.vertices[(corner + 1) % n];
  const Vec2 in_dir = cur - prev;
  const Vec2 out_dir = next - cur;
  if (cross(in_dir, out_dir) <= 0) return false;  // convex corners only (CCW)
  const double a = frac_a * norm(in_dir);
  const double b = frac_b * norm(out_dir);
  if (a < 0.3 || b < 0.3) return false;  // keep walls from degenerating
  const Vec2 u = (1.0 / norm(in_dir)) * in_dir;
  const Vec2 v = (1.0 / norm(out_dir)) * out_dir;
  const Vec2 q1 = cur - a * u;
  const Vec2 q2 = q1 + b * v;
  const Vec2 q3 = cur + b * v;
  FloorPolygon candidate = poly;
  candidate.vertices[corner] = q1;
  candidate.vertices.insert(candidate.vertices.begin() + corner + 1, {q2, q3});
  if (!polygon_is_simple(candidate)) return false;
  if (polygon_area(candidate) < 4.0) return false;
  poly = std::move(candidate);
  return true;
}

FloorPolygon generate_manhattan(int corners, double extent_min, double extent_max,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> extent(extent_min, extent_max);
  FloorPolygon poly = make_rectangle(extent(rng), extent(rng));
  std::uniform_real_distribution<double> frac(0.25, 0.45);
  while (poly.size() < corners) {
    bool cut = false;
    for (int attempt = 0; attempt < 64 && !cut; ++attempt) {
      std::uniform_int_distribution<int> pick(0, poly.size() - 1);
      cut = notch_corner(poly, pick(rng), frac(rng), frac(rng));
    }
    if (!cut) throw GenerationError("generate_room: could not reach corner count");
  }
  return poly;
}

FloorPolygon generate_star_shaped(int corners, double extent_min, double extent_max,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> extent(extent_min, extent_max);
  const double scale = 0.5 * extent(rng);
  std::uniform_real_distribution<double> jitter(0.15, 0.85);
  std::uniform_real_distribution<double> radius(0.55, 1.0);
  std::vector<double> angles(corners);
  for (int i = 0; i < corners; ++i) {
    angles[i] = kTwoPi * (i + jitter(rng)) / corners;
  }
  FloorPolygon poly;
  poly.vertices.resize(corners);
  for (int i = 0; i < corners; ++i) {
    const double r = scale * radius(rng);
    poly.vertices[i] = {r * std::cos(angles[i]), r * std::sin(angles[i])};
  }
  return poly;
}

}  // namespace

RoomScene generate_room(const RoomSpec& spec, std::uint64_t seed) {
  if (spec.min_corners < 4 || spec.max_corners < spec.min_corners) {
    throw std::invalid_argument("generate_room: corner count range must start at >= 4");
  }
  if (spec.min_extent <= 0 || spec.max_extent < spec.min_extent) {
    throw std::invalid_argument("generate_room: bad extent range");
  }
  auto rng = make_rng(seed, 0x726f6f6dULL);  // room geometry stream
  std::uniform_int_distribution<int> corner_dist(spec.min_corners, spec.max_corners);
  int corners = corner_dist(rng);
  if (spec.manhattan && corners % 2 != 0) ++corners;  // rectilinear polygons have even corner counts

  RoomScene scene;
  scene.seed = seed;
  std::uniform_real_distribution<double> height(spec.min_height, spec.max_height);
  scene.room_height = height(rng);

  for (int attempt = 0; attempt < 32; ++attempt) {
    try {
      scene.polygon = spec.manhattan
                          ? generate_manhattan(corners, spec.min_extent, spec.max_extent, rng)
                          : generate_star_shaped(corners, spec.min_extent, spec.max_extent, rng);
    } catch (const GenerationError&) {
      continue;
    }
    if (polygon_is_simple(scene.polygon) && polygon_area(scene.polygon) > 1.0) {
      return scene;
    }
  }
  throw GenerationError("generate_room: no valid polygon after bounded retries");
}

std::vector<CameraPose> place_cameras(const RoomScene& scene, int n, std::uint64_t seed,
                                      double min_clearance, double min_height,
                                      double max_height) {
  if (n < 1) throw std::invalid_argument("place_cameras: n must be >= 1");
  if (min_height > max_height || min_height <= 0) {
    throw std::invalid_argument("place_cameras: bad height range");
  }
  auto rng = make_rng(seed, 0x63616d73ULL);  // camera stream
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> height(min_height, max_height);

  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_z = min_x, max_z = -min_x;
  for (const Vec2& v : scene.polygon.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_z = std::min(min_z, v.z);
    max_z = std::max(max_z, v.z);
  }

  const double min_separation = 0.05;  // "pairwise distinct"
  std::vector<CameraPose> poses;
  auto admissible = [&](Vec2 p) {
    if (!point_in_polygon(scene.polygon, p)) return false;
    if (distance_to_boundary(scene.polygon, p) < min_clearance) return false;
    for (const CameraPose& q : poses) {
      if (norm(p - Vec2{q.tx, q.tz}) < min_separation) return false;
    }
    return true;
  };

  auto push_pose = [&](Vec2 p) {
    CameraPose pose;
    pose.tx = p.x;
    pose.tz = p.z;
    pose.yaw = normalize_angle((unit(rng) - 0.5) * kTwoPi);
    pose.height = height(rng);
    if (!(pose.height < scene.room_height)) {
      throw GenerationError("place_cameras: camera height exceeds room height");
    }
    poses.push_back(pose);
  };

  const Vec2 centroid = polygon_centroid(scene.polygon);
  if (admissible(centroid)) push_pose(centroid);

  int attempts = 0;
  const int max_attempts = 20000;
  while (static_cast<int>(poses.size()) < n) {
    if (++attempts > max_attempts) {
      throw GenerationError("place_cameras: could not satisfy clearance");
    }
    const Vec2 p{min_x + unit(rng) * (max_x - min_x), min_z + unit(rng) * (max_z - min_z)};
    if (admissible(p)) push_pose(p);
  }
  return poses;
}

double raycast_distance(const FloorPolygon& poly, Vec2 origin, Vec2 dir) {
  double best = -1.0;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly.vertices[i];
    const Vec2 b = poly.vertices[(i + 1) % n];
    const Vec2 e = b - a;
    const double denom = cross(dir, e);
    if (std::abs(denom) < kParallelTol) continue;  // parallel; vertex hits come from the neighbors
    const Vec2 ao = a - origin;
    const double t = cross(ao, e) / denom;
    const double u = cross(ao, dir) / denom;
    if (t > kParallelTol && u >= 0.0 && u <= 1.0) {
      if (best < 0.0 || t < best) best = t;
    }
  }
  return best;
}

HorizonDepth render_depth(const RoomScene& scene, const CameraPose& pose,
                          const LongitudeGrid& grid) {
  const Vec2 cam{pose.tx, pose.tz};
  if (!point_in_polygon(scene.polygon, cam) ||
      distance_to_boundary(scene.polygon, cam) <= 0.0) {
    throw std::invalid_argument("render_depth: camera outside the room");
  }
  HorizonDepth d;
  d.depths.resize(grid.width);
  d.valid.assign(grid.width, 1);
  for (int i = 0; i < grid.width; ++i) {
    const double theta = grid.angles[i];
    const Vec2 dir = rotate_xz({std::sin(theta), std::cos(theta)}, pose.yaw);
    const double dist = raycast_distance(scene.polygon, cam, dir);
    if (dist <= 0.0) {
      throw std::invalid_argument("render_depth: ray escaped the polygon");
    }
    d.depths[i] = dist / pose.height;
  }
  return d;
}

double rect_depth_analytic(double a, double b, Vec2 cam_offset, double theta) {
  if (std::abs(cam_offset.x) >= a / 2 || std::abs(cam_offset.z) >= b / 2) {
    throw std::invalid_argument("rect_depth_analytic: camera not strictly inside");
  }
  const double dx = std::sin(theta);
  const double dz = std::cos(theta);
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double wall, double offset, double component) {
    if (std::abs(component) < kParallelTol) return;
    const double t = (wall - offset) / component;
    if (t > 0.0) best = std::min(best, t);
  };
  consider(a / 2, cam_offset.x, dx);
  consider(-a / 2, cam_offset.x, dx);
  consider(b / 2, cam_offset.z, dz);
  consider(-b / 2, cam_offset.z, dz);
  return best;
}

HorizonDepth corrupt(const HorizonDepth& d, const NoiseSpec& spec, std::uint64_t seed) {
  const int w = d.width();
  if (w == 0) return d;
  auto rng = make_rng(seed, 0x6e6f6973ULL);  // noise stream

  double scale = 1.0;
  if (spec.global_scale_sigma > 0.0) {
    std::lognormal_distribution<double> logn(0.0, spec.global_scale_sigma);
    scale = logn(rng);
  }

  std::vector<double> eps(w, 0.0);
  if (spec.multiplicative_sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, spec.multiplicative_sigma);
    for (int i = 0; i < w; ++i) eps[i] = gauss(rng);
  }
  if (spec.smoothing_half_width > 0) {
    const int hw = spec.smoothing_half_width;
    std::vector<double> smoothed(w, 0.0);
    for (int i = 0; i < w; ++i) {
      double s = 0.0;
      for (int k = -hw; k <= hw; ++k) s += eps[((i + k) % w + w) % w];
      smoothed[i] = s / (2 * hw + 1);
    }
    eps = std::move(smoothed);
  }

  HorizonDepth out = d;
  for (int i = 0; i < w; ++i) {
    if (!out.valid[i]) continue;
    out.depths[i] = std::max(out.depths[i] * scale * (1.0 + eps[i]), 1e-6);
  }

  for (const OcclusionArc& arc : spec.occlusion_arcs) {
    const int start = static_cast<int>(std::floor(arc.start_fraction * w));
    const int count = static_cast<int>(std::llround(arc.length_fraction * w));
    for (int k = 0; k < count; ++k) {
      const int i = (start + k) % w;
      if (arc.mode == OcclusionArc::Mode::Drop) {
        out.valid[i] = 0;
      } else if (out.valid[i]) {
        out.depths[i] *= 1.5;
      }
    }
  }
  return out;
}

FloorPolygon polygon_from_samples(const BoundarySamples& s) {
  FloorPolygon poly;
  poly.vertices.reserve(s.points.size());
  for (int i = 0; i < s.width(); ++i) {
    if (s.valid[i]) poly.vertices.push_back(s.points[i]);
  }
  return poly;
}

}  // namespace mvlayout
