#pragma once

// End-to-end scenario runner: scene generation, rendering, corruption,
// consensus, cost-volume refinement, evaluation, and persistence. Rooms are
// independent, so the runner parallelizes across them; outputs are byte
// stable for a fixed seed regardless of thread count.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvlayout/consensus.hpp"
#include "mvlayout/cost_volume.hpp"
#include "mvlayout/metrics.hpp"
#include "mvlayout/serialization.hpp"
#include "mvlayout/simulator.hpp"

namespace mvlayout {

// Rejected configuration; message names the offending key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Directories produced no usable input (CLI exit code 2).
struct EmptyInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CostVolumeConfig {
  int planes = 64;
  double d_max = 0.0;  // 0 = derive from the scene (2x max extent)
  double alpha = 0.5;
  PlaneMode plane_mode = PlaneMode::Radial;
  int channels = 8;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int room_count = 1;
  RoomSpec room;
  int view_count = 2;
  int width = 512;
  double min_clearance = 0.5;
  double min_camera_height = 1.6;
  double max_camera_height = 1.6;
  NoiseSpec noise;
  ConsensusConfig consensus;
  CostVolumeConfig cost_volume;
  std::filesystem::path output_dir = "out";
  int threads = 1;
};

// Strict parse: unknown keys anywhere are a ConfigError.
ScenarioConfig config_from_json(const Json& j);
Json config_to_json(const ScenarioConfig& cfg);

struct MetricRow {
  std::string scenario;
  int view = 0;
  MetricReport report;
};

struct LossRow {
  std::string scenario;
  double normal = 0.0;
  double gradient = 0.0;
  double depth = 0.0;
  double ratio = 0.0;
  double total = 0.0;
};

struct PipelineSummary {
  std::vector<MetricRow> metrics;
  std::vector<LossRow> losses;
};

// Runs every room of the scenario and persists scene.json, per-view depth
// files (gt/noisy/pseudo/fused), cost-volume summaries, floor-plan SVGs,
// metrics.csv, losses.csv, and the effective config echo.
PipelineSummary run_pipeline(const ScenarioConfig& cfg);

// Full per-view evaluation used by both the pipeline and the eval verb.
MetricReport evaluate_depths(const HorizonDepth& pred, RatioValue pred_ratio,
                             const HorizonDepth& gt, RatioValue gt_ratio,
                             const FloorPolygon& pred_polygon, const FloorPolygon& gt_polygon,
                             double pred_height, double gt_height);

// Pairs equally named JSON depth files from the two directories, writes one
// metrics row per pair plus a mean row, and returns the pair count.
// Unmatched files are reported on stderr and skipped.
int eval_directories(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                     const std::filesystem::path& out_csv);

std::string metrics_csv(const std::vector<MetricRow>& rows, bool with_mean = false);
std::string losses_csv(const std::vector<LossRow>& rows);

}  // namespace mvlayout
