#include "mvlayout/cost_volume.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "mvlayout/rng.hpp"

namespace mvlayout {

std::vector<Points3D> align_points(const std::vector<HorizonDepth>& depths,
                                   const std::vector<CameraPose>& poses,
                                   std::size_t ref, const LongitudeGrid& grid) {
  if (ref >= depths.size()) throw std::invalid_argument("align_points: unknown reference view");
  if (poses.size() != depths.size()) {
    throw std::invalid_argument("align_points: views and poses disagree");
  }
  const CameraPose& ref_pose = poses[ref];
  std::vector<Points3D> out(depths.size());
  for (std::size_t v = 0; v < depths.size(); ++v) {
    if (depths[v].width() != grid.width) {
      throw std::invalid_argument("align_points: width mismatch");
    }
    Points3D pts = depth_to_points(depths[v], grid);
    if (v != ref) {  // the reference view is already in its own frame
      const double y_scale = poses[v].height / ref_pose.height;
      for (int i = 0; i < pts.width(); ++i) {
        if (!pts.valid[i]) continue;
        Vec2 metric{pts.points[i].x * poses[v].height, pts.points[i].z * poses[v].height};
        const Vec2 in_ref = pose_to_view(ref_pose, pose_to_world(poses[v], metric));
        pts.points[i] = {in_ref.x / ref_pose.height, pts.points[i].y * y_scale,
                         in_ref.z / ref_pose.height};
      }
    }
    out[v] = std::move(pts);
  }
  return out;
}

namespace {

// Normalized plane coordinate of an aligned (height-normalized) point.
double plane_coordinate(const Vec3& p, double ref_height, double d_max, PlaneMode mode) {
  if (mode == PlaneMode::StrictZ) return std::max(p.z, 0.0) * ref_height / d_max;
  return std::hypot(p.x, p.z) * ref_height / d_max;
}

}  // namespace

CostVolume build_cost_volume(const std::vector<FeatureSequence>& features,
                             const std::vector<Points3D>& aligned,
                             const DepthPlanes& planes, double ref_height,
                             PlaneMode mode) {
  if (aligned.size() < 2) throw std::invalid_argument("build_cost_volume: need >= 2 views");
  if (features.size() != aligned.size()) {
    throw std::invalid_argument("build_cost_volume: features and points disagree");
  }
  if (planes.count < 2) throw std::invalid_argument("build_cost_volume: need >= 2 planes");
  if (!(planes.d_max > 0.0)) throw std::invalid_argument("build_cost_volume: d_max must be > 0");

  const int n_views = static_cast<int>(aligned.size());
  const int w = aligned[0].width();
  const int c_count = features[0].channels;
  const int d_count = planes.count;
  for (int v = 0; v < n_views; ++v) {
    if (aligned[v].width() != w || features[v].width != w || features[v].channels != c_count) {
      throw std::invalid_argument("build_cost_volume: inconsistent view shapes");
    }
  }

  // Per-view masked volumes are sparse: each view touches at most W cells.
  // value_sum/value_count accumulate per (view, column, plane); touched lists
  // the occupied cells so the variance pass only visits those.
  struct CellKey {
    int column;
    int plane;
  };
  std::vector<std::vector<double>> value_sum(n_views);
  std::vector<std::vector<int>> value_count(n_views);
  std::vector<CellKey> touched;
  for (int v = 0; v < n_views; ++v) {
    value_sum[v].assign(static_cast<std::size_t>(w) * d_count * c_count, 0.0);
    value_count[v].assign(static_cast<std::size_t>(w) * d_count, 0);
  }

  for (int v = 0; v < n_views; ++v) {
    const Points3D& pts = aligned[v];
    for (int src = 0; src < w; ++src) {
      if (!pts.valid[src]) continue;
      const Vec3& p = pts.points[src];
      const double coord = plane_coordinate(p, ref_height, planes.d_max, mode);
      if (coord < 0.0 || coord >= 1.0) continue;  // outside the normalized range
      const int k = std::min(static_cast<int>(coord * d_count), d_count - 1);
      const int col = column_of_direction(p.x, p.z, w);
      const std::size_t cell = static_cast<std::size_t>(col) * d_count + k;
      if (value_count[v][cell] == 0) {
        bool seen = false;
        for (int u = 0; u < v && !seen; ++u) seen = value_count[u][cell] > 0;
        if (!seen) touched.push_back({col, k});
      }
      ++value_count[v][cell];
      for (int c = 0; c < c_count; ++c) {
        value_sum[v][cell * c_count + c] += features[v].at(c, src);
      }
    }
  }

  CostVolume volume;
  volume.channels = c_count;
  volume.width = w;
  volume.planes = d_count;
  volume.ref_height = ref_height;
  volume.cost.assign(static_cast<std::size_t>(c_count) * w * d_count,
                     std::numeric_limits<double>::infinity());
  volume.support.assign(static_cast<std::size_t>(w) * d_count, 0);
  volume.support_count.assign(static_cast<std::size_t>(w) * d_count, 0);

  std::vector<double> per_view(n_views);
  for (const CellKey& key : touched) {
    const std::size_t cell = static_cast<std::size_t>(key.column) * d_count + key.plane;
    int contributors = 0;
    for (int v = 0; v < n_views; ++v) contributors += value_count[v][cell] > 0;
    volume.support[cell] = 1;
    volume.support_count[cell] = contributors;
    for (int c = 0; c < c_count; ++c) {
      int n = 0;
      double sum = 0.0;
      for (int v = 0; v < n_views; ++v) {
        if (value_count[v][cell] == 0) continue;
        per_view[n] = value_sum[v][cell * c_count + c] / value_count[v][cell];
        sum += per_view[n];
        ++n;
      }
      // Equal contributions must cost exactly zero; the mean would otherwise
      // round and leave ~1e-32 residue.
      bool all_equal = true;
      for (int j = 1; j < n; ++j) all_equal &= per_view[j] == per_view[0];
      double var = 0.0;
      if (!all_equal) {
        const double avg = sum / n;
        for (int j = 0; j < n; ++j) var += (per_view[j] - avg) * (per_view[j] - avg);
        var /= n;
      }
      volume.cost[(static_cast<std::size_t>(c) * w + key.column) * d_count + key.plane] = var;
    }
  }
  return volume;
}

HorizonDepth extract_depth(const CostVolume& volume, const DepthPlanes& planes) {
  HorizonDepth out;
  out.depths.assign(volume.width, 0.0);
  out.valid.assign(volume.width, 0);
  for (int i = 0; i < volume.width; ++i) {
    int best_k = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 0; k < volume.planes; ++k) {
      if (!volume.supported(i, k)) continue;
      double c = 0.0;
      for (int ch = 0; ch < volume.channels; ++ch) c += volume.cost_at(ch, i, k);
      c /= volume.channels;
      if (c < best_cost) {  // strict: ties keep the lower plane index
        best_cost = c;
        best_k = k;
      }
    }
    if (best_k < 0) continue;
    out.depths[i] = (best_k + 0.5) / planes.count * planes.d_max / volume.ref_height;
    out.valid[i] = 1;
  }
  return out;
}

HorizonDepth fuse_depth(const HorizonDepth& d_cost, const HorizonDepth& d, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("fuse_depth: alpha must be in [0, 1]");
  }
  if (d_cost.width() != d.width()) throw std::invalid_argument("fuse_depth: width mismatch");
  HorizonDepth out;
  out.depths.assign(d.width(), 0.0);
  out.valid.assign(d.width(), 0);
  for (int i = 0; i < d.width(); ++i) {
    const bool a = d_cost.valid[i] != 0;
    const bool b = d.valid[i] != 0;
    if (a && b) {
      out.depths[i] = alpha * d_cost.depths[i] + (1.0 - alpha) * d.depths[i];
    } else if (a) {
      out.depths[i] = d_cost.depths[i];
    } else if (b) {
      out.depths[i] = d.depths[i];
    } else {
      continue;
    }
    out.valid[i] = 1;
  }
  return out;
}

std::vector<FeatureSequence> synth_features(const RoomScene& scene, const LongitudeGrid& grid,
                                            int channels, FeatureMode mode, std::uint64_t seed,
                                            double noise_sigma) {
  if (channels < 1) throw std::invalid_argument("synth_features: channels must be >= 1");
  // Channel basis derived from the channel index only, so geometric features
  // are identical across runs and views.
  std::vector<double> ax(channels), az(channels), phase(channels);
  for (int c = 0; c < channels; ++c) {
    const std::uint64_t h = splitmix64(0x66656174ULL + static_cast<std::uint64_t>(c));
    ax[c] = 0.3 + 1.2 * (static_cast<double>(h & 0xffff) / 65535.0);
    az[c] = 0.3 + 1.2 * (static_cast<double>((h >> 16) & 0xffff) / 65535.0);
    phase[c] = kTwoPi * (static_cast<double>((h >> 32) & 0xffff) / 65535.0);
  }

  std::vector<FeatureSequence> out(scene.poses.size());
  for (std::size_t v = 0; v < scene.poses.size(); ++v) {
    const CameraPose& pose = scene.poses[v];
    FeatureSequence f;
    f.channels = channels;
    f.width = grid.width;
    f.view_id = static_cast<int>(v);
    f.values.resize(static_cast<std::size_t>(channels) * grid.width);
    auto rng = make_rng(seed, 0x73796e66ULL + v);
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    for (int i = 0; i < grid.width; ++i) {
      const double theta = grid.angles[i];
      const Vec2 dir = rotate_xz({std::sin(theta), std::cos(theta)}, pose.yaw);
      const double dist = raycast_distance(scene.polygon, {pose.tx, pose.tz}, dir);
      const Vec2 wall{pose.tx + dist * dir.x, pose.tz + dist * dir.z};
      for (int c = 0; c < channels; ++c) {
        double value = std::sin(ax[c] * wall.x + az[c] * wall.z + phase[c]);
        if (mode == FeatureMode::Random && noise_sigma > 0.0) value += gauss(rng);
        f.at(c, i) = value;
      }
    }
    out[v] = std::move(f);
  }
  return out;
}

void write_cost_volume_summary(const CostVolume& volume, std::ostream& os) {
  os << "column,argmin_plane,min_cost,support\n";
  char line[128];
  for (int i = 0; i < volume.width; ++i) {
    int best_k = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 0; k < volume.planes; ++k) {
      if (!volume.supported(i, k)) continue;
      double c = 0.0;
      for (int ch = 0; ch < volume.channels; ++ch) c += volume.cost_at(ch, i, k);
      c /= volume.channels;
      if (c < best_cost) {
        best_cost = c;
        best_k = k;
      }
    }
    if (best_k < 0) {
      std::snprintf(line, sizeof(line), "%d,-1,inf,0\n", i);
    } else {
      std::snprintf(line, sizeof(line), "%d,%d,%.9g,%d\n", i, best_k, best_cost,
                    volume.support_at(i, best_k));
    }
    os << line;
  }
}

double default_d_max(const RoomScene& scene) { return 2.0 * polygon_extent(scene.polygon); }

}  // namespace mvlayout
