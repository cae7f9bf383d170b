#pragma once

// Feature-level multi-view perception: per-view boundary points are pose-
// aligned into a reference view, binned into depth planes, and aggregated
// by the across-view variance of the features each view carries. The
// argmin over planes yields a per-column depth that can be fused with the
// decision-level estimate.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mvlayout/geometry.hpp"
#include "mvlayout/simulator.hpp"

namespace mvlayout {

// C x W feature grid for one view, row-major by channel.
struct FeatureSequence {
  int channels = 0;
  int width = 0;
  int view_id = 0;
  std::vector<double> values;

  double at(int c, int i) const { return values[static_cast<std::size_t>(c) * width + i]; }
  double& at(int c, int i) { return values[static_cast<std::size_t>(c) * width + i]; }
};

// D half-open intervals of width 1/D over the normalized depth range [0, 1];
// d_max is the metric distance mapping to 1.
struct DepthPlanes {
  int count = 64;
  double d_max = 0.0;
};

// Whether the plane coordinate is the radial floor-plane distance (what
// horizon depth measures) or the clamped view-frame z (literal reading).
enum class PlaneMode { Radial, StrictZ };

struct CostVolume {
  int channels = 0;
  int width = 0;
  int planes = 0;
  double ref_height = 1.6;
  std::vector<double> cost;               // C x W x D, +inf where unsupported
  std::vector<std::uint8_t> support;      // W x D, any view contributed
  std::vector<int> support_count;         // W x D, distinct contributing views

  double cost_at(int c, int i, int k) const {
    return cost[(static_cast<std::size_t>(c) * width + i) * planes + k];
  }
  bool supported(int i, int k) const {
    return support[static_cast<std::size_t>(i) * planes + k] != 0;
  }
  int support_at(int i, int k) const {
    return support_count[static_cast<std::size_t>(i) * planes + k];
  }
};

// Every view's polar-warped points expressed in the reference view's frame,
// re-normalized by the reference camera height. The reference view's own
// points come back unchanged.
std::vector<Points3D> align_points(const std::vector<HorizonDepth>& depths,
                                   const std::vector<CameraPose>& poses,
                                   std::size_t ref, const LongitudeGrid& grid);

// Masked per-view volumes aggregated by across-view variance. Cells no view
// touches carry +inf. Multiple samples of one view in a cell are averaged.
CostVolume build_cost_volume(const std::vector<FeatureSequence>& features,
                             const std::vector<Points3D>& aligned,
                             const DepthPlanes& planes, double ref_height,
                             PlaneMode mode = PlaneMode::Radial);

// Channel-mean cost, argmin over supported planes (ties to the lower index),
// depth at the winning plane center normalized by the reference height.
HorizonDepth extract_depth(const CostVolume& volume, const DepthPlanes& planes);

// Convex blend where both inputs are valid, falling back to whichever is.
HorizonDepth fuse_depth(const HorizonDepth& d_cost, const HorizonDepth& d, double alpha);

enum class FeatureMode { Geometric, Random };

// Stand-in backbone features. Geometric mode evaluates smooth functions of
// the world-frame boundary point each column sees, so co-visible columns
// agree exactly across views; random mode adds per-view Gaussian noise.
std::vector<FeatureSequence> synth_features(const RoomScene& scene, const LongitudeGrid& grid,
                                            int channels, FeatureMode mode, std::uint64_t seed,
                                            double noise_sigma = 0.05);

// CSV rows: column, argmin plane, min cost, support count.
void write_cost_volume_summary(const CostVolume& volume, std::ostream& os);

// Default metric normalization scale: twice the room's max extent.
double default_d_max(const RoomScene& scene);

}  // namespace mvlayout
