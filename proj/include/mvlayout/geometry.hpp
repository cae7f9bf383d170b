#pragma once

// Core coordinate conventions for the horizon-depth layout representation.
//
// Conventions used throughout:
//   - Camera at the origin, y axis positive toward the floor. In
//     camera-height-normalized units the floor plane is y = +1 and the
//     ceiling plane is y = -r (r = ceiling height over camera height).
//   - Column i of a width-W panorama looks along longitude
//     theta_i = ((i + 0.5)/W - 0.5) * 2*pi, measured so that the planar
//     view direction is (sin theta, cos theta) in (x, z).
//   - Poses are 4-DoF: yaw about the vertical axis, planar translation,
//     and metric camera height. Rot(yaw) = [[cos, sin], [-sin, cos]]
//     acting on (x, z).

#include <cstdint>
#include <vector>

namespace mvlayout {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double z = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.z}; }
double norm(Vec2 a);
double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Wraps an angle to (-pi, pi].
double normalize_angle(double a);

struct LongitudeGrid {
  int width = 0;
  std::vector<double> angles;
};

// W >= 4 required.
LongitudeGrid longitude_grid(int width);

// Per-column wall distance normalized by camera height. Invalid columns
// hold no meaningful depth and must not feed downstream math unfilled.
struct HorizonDepth {
  std::vector<double> depths;
  std::vector<std::uint8_t> valid;

  int width() const { return static_cast<int>(depths.size()); }
  int valid_count() const;
};

HorizonDepth make_horizon_depth(std::vector<double> depths);

// Ceiling-to-camera over camera-to-floor height ratio.
struct RatioValue {
  double r = 1.0;
};

enum class Frame { View, World };

// Per-column boundary points on the floor plane, metric meters.
struct BoundarySamples {
  std::vector<Vec2> points;
  std::vector<std::uint8_t> valid;
  Frame frame = Frame::View;

  int width() const { return static_cast<int>(points.size()); }
};

// Camera-height-normalized 3D points, camera at origin.
struct Points3D {
  std::vector<Vec3> points;
  std::vector<std::uint8_t> valid;

  int width() const { return static_cast<int>(points.size()); }
};

struct CameraPose {
  double yaw = 0.0;     // radians, normalized to (-pi, pi]
  double tx = 0.0;      // meters, world floor plane
  double tz = 0.0;
  double height = 1.6;  // meters, > 0
};

Vec2 rotate_xz(Vec2 p, double yaw);
Vec2 pose_to_world(const CameraPose& pose, Vec2 view_point);
Vec2 pose_to_view(const CameraPose& pose, Vec2 world_point);

// Polar warp of a depth sequence: point_i = (d_i sin theta_i, 1, d_i cos theta_i).
Points3D depth_to_points(const HorizonDepth& d, const LongitudeGrid& grid);

// Reflects floor points through the horizon plane: y -> -r, (x, z) unchanged.
Points3D ceiling_points(const Points3D& floor_points, RatioValue ratio);

// Depth-to-layout: metric boundary points in the view frame.
BoundarySamples d2l(const HorizonDepth& d, const CameraPose& pose,
                    const LongitudeGrid& grid);

enum class TransformDirection { ToWorld, ToView };

BoundarySamples transform_samples(const BoundarySamples& s, const CameraPose& pose,
                                  TransformDirection direction);

// Column index for a planar direction; half-open bins centered per the
// longitude grid, theta = pi wraps to column 0.
int column_of_direction(double x, double z, int width);

// Reduction applied when several candidates land in one column.
// Nearest keeps the minimum depth (visibility-correct).
enum class BinReduce { Median, Nearest };

// Layout-to-depth: bins view-frame points by longitude, normalizes by the
// camera height. Columns that receive no candidate come back invalid.
HorizonDepth l2d(const BoundarySamples& s, const CameraPose& pose,
                 const LongitudeGrid& grid, BinReduce reduce = BinReduce::Median);

// Image rows of the floor and ceiling boundary per column, rows increasing
// downward, horizon at image_height / 2.
struct ImageRows {
  std::vector<double> floor_row;
  std::vector<double> ceil_row;
  std::vector<std::uint8_t> valid;
};

ImageRows project_to_image(const HorizonDepth& d, RatioValue ratio, int image_height);

}  // namespace mvlayout
