#pragma once

// Ground-truth room simulation: polygonal floor plans, camera placement,
// exact per-view horizon depth via 2D ray casting, and seeded corruption
// standing in for imperfect per-view predictions.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mvlayout/geometry.hpp"

namespace mvlayout {

// Counter-clockwise simple polygon on the floor plane, meters.
struct FloorPolygon {
  std::vector<Vec2> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
};

double polygon_area(const FloorPolygon& poly);  // signed shoelace, CCW positive
Vec2 polygon_centroid(const FloorPolygon& poly);
bool polygon_is_simple(const FloorPolygon& poly);
bool point_in_polygon(const FloorPolygon& poly, Vec2 p);
double distance_to_boundary(const FloorPolygon& poly, Vec2 p);
// Max bounding-box dimension.
double polygon_extent(const FloorPolygon& poly);

// True when segments ab and cd properly intersect or touch.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

struct RoomScene {
  FloorPolygon polygon;
  double room_height = 2.8;  // meters
  std::vector<CameraPose> poses;
  std::uint64_t seed = 0;

  RatioValue view_ratio(std::size_t view) const {
    const double h = poses.at(view).height;
    return RatioValue{(room_height - h) / h};
  }
};

struct RoomSpec {
  int min_corners = 4;
  int max_corners = 4;
  double min_extent = 4.0;
  double max_extent = 8.0;
  bool manhattan = true;
  double min_height = 2.4;
  double max_height = 3.2;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Room geometry only; cameras are placed separately.
RoomScene generate_room(const RoomSpec& spec, std::uint64_t seed);

// First placement is the polygon centroid when it satisfies the clearance;
// the rest are rejection-sampled. Heights drawn uniformly from the range.
std::vector<CameraPose> place_cameras(const RoomScene& scene, int n, std::uint64_t seed,
                                      double min_clearance, double min_height = 1.6,
                                      double max_height = 1.6);

// Distance to the nearest boundary hit along dir, or -1 when nothing is hit.
double raycast_distance(const FloorPolygon& poly, Vec2 origin, Vec2 dir);

// Exact per-column depth for a pose strictly inside the room, normalized by
// the camera height. All columns come back valid.
HorizonDepth render_depth(const RoomScene& scene, const CameraPose& pose,
                          const LongitudeGrid& grid);

// Closed-form wall distance for an axis-aligned a x b rectangle centered at
// the origin; independent oracle for the ray caster.
double rect_depth_analytic(double a, double b, Vec2 cam_offset, double theta);

struct OcclusionArc {
  double start_fraction = 0.0;   // [0, 1)
  double length_fraction = 0.0;  // [0, 0.5)
  enum class Mode { Drop, Inflate } mode = Mode::Drop;
};

struct NoiseSpec {
  double multiplicative_sigma = 0.0;
  int smoothing_half_width = 0;  // columns, circular moving average
  std::vector<OcclusionArc> occlusion_arcs;
  double global_scale_sigma = 0.0;  // log-normal scale on the whole view
};

// d'_i = d_i * s * (1 + smoothed noise), then occlusion arcs. Deterministic
// per seed.
HorizonDepth corrupt(const HorizonDepth& d, const NoiseSpec& spec, std::uint64_t seed);

// Polygon through the valid boundary samples, in sample order.
FloorPolygon polygon_from_samples(const BoundarySamples& s);

}  // namespace mvlayout
