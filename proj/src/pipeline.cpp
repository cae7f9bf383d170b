#include "mvlayout/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "mvlayout/objectives.hpp"
#include "mvlayout/rng.hpp"
#include "mvlayout/svg.hpp"

namespace mvlayout {

namespace {

void require_keys(const Json& j, const std::string& prefix,
                  std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end()) {
      throw ConfigError("config error at " + (prefix.empty() ? key : prefix + "." + key) +
                        ": unknown key");
    }
  }
}

std::pair<double, double> range_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError("config error at " + path + ": expected [min, max]");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

NoiseSpec noise_from_json(const Json& j, const std::string& prefix) {
  require_keys(j, prefix,
               {"multiplicativeSigma", "smoothingHalfWidth", "occlusionArcs", "globalScaleSigma"});
  NoiseSpec spec;
  if (j.contains("multiplicativeSigma")) {
    spec.multiplicative_sigma = j.at("multiplicativeSigma").get<double>();
  }
  if (j.contains("smoothingHalfWidth")) {
    spec.smoothing_half_width = j.at("smoothingHalfWidth").get<int>();
  }
  if (j.contains("globalScaleSigma")) {
    spec.global_scale_sigma = j.at("globalScaleSigma").get<double>();
  }
  if (j.contains("occlusionArcs")) {
    for (std::size_t i = 0; i < j.at("occlusionArcs").size(); ++i) {
      const Json& arc = j.at("occlusionArcs").at(i);
      const std::string path = prefix + ".occlusionArcs[" + std::to_string(i) + "]";
      if (!arc.is_array() || arc.size() != 3) {
        throw ConfigError("config error at " + path + ": expected [start, length, mode]");
      }
      OcclusionArc a;
      a.start_fraction = arc.at(0).get<double>();
      a.length_fraction = arc.at(1).get<double>();
      const std::string mode = arc.at(2).get<std::string>();
      if (mode == "drop") {
        a.mode = OcclusionArc::Mode::Drop;
      } else if (mode == "inflate") {
        a.mode = OcclusionArc::Mode::Inflate;
      } else {
        throw ConfigError("config error at " + path + ": unknown mode '" + mode + "'");
      }
      if (a.start_fraction < 0.0 || a.start_fraction >= 1.0 || a.length_fraction < 0.0 ||
          a.length_fraction >= 0.5) {
        throw ConfigError("config error at " + path + ": fractions out of range");
      }
      spec.occlusion_arcs.push_back(a);
    }
  }
  if (spec.multiplicative_sigma < 0.0 || spec.global_scale_sigma < 0.0 ||
      spec.smoothing_half_width < 0) {
    throw ConfigError("config error at " + prefix + ": negative noise parameter");
  }
  return spec;
}

}  // namespace

ScenarioConfig config_from_json(const Json& j) {
  require_keys(j, "",
               {"seed", "roomCount", "room", "views", "width", "minClearance", "cameraHeight",
                "noise", "consensus", "costVolume", "output", "threads"});
  ScenarioConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("roomCount")) cfg.room_count = j.at("roomCount").get<int>();
  if (j.contains("views")) cfg.view_count = j.at("views").get<int>();
  if (j.contains("width")) cfg.width = j.at("width").get<int>();
  if (j.contains("minClearance")) cfg.min_clearance = j.at("minClearance").get<double>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("output")) cfg.output_dir = j.at("output").get<std::string>();
  if (j.contains("cameraHeight")) {
    std::tie(cfg.min_camera_height, cfg.max_camera_height) =
        range_from(j.at("cameraHeight"), "cameraHeight");
  }
  if (j.contains("room")) {
    const Json& room = j.at("room");
    require_keys(room, "room", {"cornerCount", "extent", "manhattan", "heightRange"});
    if (room.contains("cornerCount")) {
      const auto [lo, hi] = range_from(room.at("cornerCount"), "room.cornerCount");
      cfg.room.min_corners = static_cast<int>(lo);
      cfg.room.max_corners = static_cast<int>(hi);
    }
    if (room.contains("extent")) {
      std::tie(cfg.room.min_extent, cfg.room.max_extent) =
          range_from(room.at("extent"), "room.extent");
    }
    if (room.contains("manhattan")) cfg.room.manhattan = room.at("manhattan").get<bool>();
    if (room.contains("heightRange")) {
      std::tie(cfg.room.min_height, cfg.room.max_height) =
          range_from(room.at("heightRange"), "room.heightRange");
    }
  }
  if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"), "noise");
  if (j.contains("consensus")) {
    const Json& c = j.at("consensus");
    require_keys(c, "consensus", {"strategy", "madK", "minSupport", "iterations", "includeSelf"});
    if (c.contains("strategy")) {
      const std::string s = c.at("strategy").get<std::string>();
      if (s == "median") {
        cfg.consensus.aggregation.strategy = ColumnAggregation::Strategy::Median;
      } else if (s == "mean_after_mad") {
        cfg.consensus.aggregation.strategy = ColumnAggregation::Strategy::MeanAfterMad;
      } else {
        throw ConfigError("config error at consensus.strategy: unknown strategy '" + s + "'");
      }
    }
    if (c.contains("madK")) cfg.consensus.aggregation.mad_k = c.at("madK").get<double>();
    if (c.contains("minSupport")) {
      cfg.consensus.aggregation.min_support = c.at("minSupport").get<int>();
    }
    if (c.contains("iterations")) cfg.consensus.iterations = c.at("iterations").get<int>();
    if (c.contains("includeSelf")) cfg.consensus.include_self = c.at("includeSelf").get<bool>();
  }
  if (j.contains("costVolume")) {
    const Json& c = j.at("costVolume");
    require_keys(c, "costVolume", {"planes", "dMax", "alpha", "planeMode", "channels"});
    if (c.contains("planes")) cfg.cost_volume.planes = c.at("planes").get<int>();
    if (c.contains("alpha")) cfg.cost_volume.alpha = c.at("alpha").get<double>();
    if (c.contains("channels")) cfg.cost_volume.channels = c.at("channels").get<int>();
    if (c.contains("dMax")) {
      const Json& dmax = c.at("dMax");
      if (dmax.is_string()) {
        if (dmax.get<std::string>() != "auto") {
          throw ConfigError("config error at costVolume.dMax: expected \"auto\" or a number");
        }
        cfg.cost_volume.d_max = 0.0;
      } else {
        cfg.cost_volume.d_max = dmax.get<double>();
      }
    }
    if (c.contains("planeMode")) {
      const std::string m = c.at("planeMode").get<std::string>();
      if (m == "radial") {
        cfg.cost_volume.plane_mode = PlaneMode::Radial;
      } else if (m == "strict-z") {
        cfg.cost_volume.plane_mode = PlaneMode::StrictZ;
      } else {
        throw ConfigError("config error at costVolume.planeMode: unknown mode '" + m + "'");
      }
    }
  }

  if (cfg.room_count < 1) throw ConfigError("config error at roomCount: must be >= 1");
  if (cfg.view_count < 2) throw ConfigError("config error at views: must be >= 2");
  if (cfg.width < 4) throw ConfigError("config error at width: must be >= 4");
  if (cfg.threads < 1) throw ConfigError("config error at threads: must be >= 1");
  if (cfg.min_clearance < 0.0) throw ConfigError("config error at minClearance: must be >= 0");
  if (cfg.room.min_corners < 4 || cfg.room.max_corners < cfg.room.min_corners) {
    throw ConfigError("config error at room.cornerCount: need 4 <= min <= max");
  }
  if (!(cfg.room.min_extent > 0.0) || cfg.room.max_extent < cfg.room.min_extent) {
    throw ConfigError("config error at room.extent: need 0 < min <= max");
  }
  if (!(cfg.room.min_height > 0.0) || cfg.room.max_height < cfg.room.min_height) {
    throw ConfigError("config error at room.heightRange: need 0 < min <= max");
  }
  if (!(cfg.min_camera_height > 0.0) || cfg.max_camera_height < cfg.min_camera_height) {
    throw ConfigError("config error at cameraHeight: need 0 < min <= max");
  }
  if (cfg.cost_volume.alpha < 0.0 || cfg.cost_volume.alpha > 1.0) {
    throw ConfigError("config error at costVolume.alpha: must be in [0, 1]");
  }
  if (cfg.cost_volume.planes < 2) {
    throw ConfigError("config error at costVolume.planes: must be >= 2");
  }
  if (cfg.cost_volume.channels < 1) {
    throw ConfigError("config error at costVolume.channels: must be >= 1");
  }
  if (cfg.consensus.iterations < 1) {
    throw ConfigError("config error at consensus.iterations: must be >= 1");
  }
  if (!(cfg.consensus.aggregation.mad_k > 0.0)) {
    throw ConfigError("config error at consensus.madK: must be > 0");
  }
  if (cfg.consensus.aggregation.min_support < 1) {
    throw ConfigError("config error at consensus.minSupport: must be >= 1");
  }
  return cfg;
}

Json config_to_json(const ScenarioConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["roomCount"] = cfg.room_count;
  j["room"] = Json{{"cornerCount", Json::array({cfg.room.min_corners, cfg.room.max_corners})},
                   {"extent", Json::array({cfg.room.min_extent, cfg.room.max_extent})},
                   {"manhattan", cfg.room.manhattan},
                   {"heightRange", Json::array({cfg.room.min_height, cfg.room.max_height})}};
  j["views"] = cfg.view_count;
  j["width"] = cfg.width;
  j["minClearance"] = cfg.min_clearance;
  j["cameraHeight"] = Json::array({cfg.min_camera_height, cfg.max_camera_height});
  Json arcs = Json::array();
  for (const OcclusionArc& a : cfg.noise.occlusion_arcs) {
    arcs.push_back(Json::array({a.start_fraction, a.length_fraction,
                                a.mode == OcclusionArc::Mode::Drop ? "drop" : "inflate"}));
  }
  j["noise"] = Json{{"multiplicativeSigma", cfg.noise.multiplicative_sigma},
                    {"smoothingHalfWidth", cfg.noise.smoothing_half_width},
                    {"occlusionArcs", std::move(arcs)},
                    {"globalScaleSigma", cfg.noise.global_scale_sigma}};
  j["consensus"] =
      Json{{"strategy", cfg.consensus.aggregation.strategy == ColumnAggregation::Strategy::Median
                            ? "median"
                            : "mean_after_mad"},
           {"madK", cfg.consensus.aggregation.mad_k},
           {"minSupport", cfg.consensus.aggregation.min_support},
           {"iterations", cfg.consensus.iterations},
           {"includeSelf", cfg.consensus.include_self}};
  j["costVolume"] = Json{
      {"planes", cfg.cost_volume.planes},
      {"dMax", cfg.cost_volume.d_max > 0.0 ? Json(cfg.cost_volume.d_max) : Json("auto")},
      {"alpha", cfg.cost_volume.alpha},
      {"planeMode", cfg.cost_volume.plane_mode == PlaneMode::Radial ? "radial" : "strict-z"},
      {"channels", cfg.cost_volume.channels}};
  j["output"] = cfg.output_dir.string();
  j["threads"] = cfg.threads;
  return j;
}

namespace {

// Circular box filter over valid columns, used only ahead of corner
// extraction so column-level noise does not masquerade as structure.
HorizonDepth smooth_circular(const HorizonDepth& d, int half_width) {
  if (half_width < 1) return d;
  const int w = d.width();
  HorizonDepth out = d;
  for (int i = 0; i < w; ++i) {
    if (!d.valid[i]) continue;
    double sum = 0.0;
    int n = 0;
    for (int k = -half_width; k <= half_width; ++k) {
      const int j = ((i + k) % w + w) % w;
      if (!d.valid[j]) continue;
      sum += d.depths[j];
      ++n;
    }
    out.depths[i] = sum / n;
  }
  return out;
}

}  // namespace

MetricReport evaluate_depths(const HorizonDepth& pred, RatioValue pred_ratio,
                             const HorizonDepth& gt, RatioValue gt_ratio,
                             const FloorPolygon& pred_polygon, const FloorPolygon& gt_polygon,
                             double pred_height, double gt_height) {
  MetricReport report;
  report.iou2d = iou2d(pred_polygon, gt_polygon);
  report.iou3d = iou3d(pred_polygon, pred_height, gt_polygon, gt_height);
  report.rmse = rmse(gt, pred);
  report.delta1 = delta_acc(gt, pred);
  const CameraPose unit_pose{0.0, 0.0, 0.0, 1.0};
  const LongitudeGrid grid = longitude_grid(pred.width());
  // Corner extraction wants structural corners, not noise: smooth lightly and
  // simplify at 5% of the room scale. A fixed metric tolerance drowns in
  // column noise and reports every wiggle as an unmatched corner.
  const int half_width = std::max(1, pred.width() / 256);
  const BoundarySamples pred_boundary = d2l(smooth_circular(pred, half_width), unit_pose, grid);
  const BoundarySamples gt_boundary = d2l(smooth_circular(gt, half_width), unit_pose, grid);
  const double tolerance = 0.05 * polygon_extent(polygon_from_samples(gt_boundary));
  const auto pred_corners = extract_corners(pred_boundary, tolerance);
  const auto gt_corners = extract_corners(gt_boundary, tolerance);
  report.corner_error = corner_error(pred_corners, gt_corners, 1024, 512, gt_ratio);
  report.pixel_error = pixel_error(pred, pred_ratio, gt, gt_ratio);
  return report;
}

namespace {

constexpr const char* kMetricsHeader = "scenario,view,iou2d,iou3d,rmse,delta1,ce,pe\n";

std::string format_metric_row(const std::string& scenario, const std::string& view,
                              const MetricReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", scenario.c_str(),
                view.c_str(), r.iou2d, r.iou3d, r.rmse, r.delta1, r.corner_error, r.pixel_error);
  return buf;
}

struct RoomArtifacts {
  std::vector<MetricRow> metrics;
  std::vector<LossRow> losses;
};

std::string room_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "room%03d", index);
  return buf;
}

std::string view_file(const char* variant, int view) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d.json", variant, view);
  return buf;
}

RoomArtifacts process_room(const ScenarioConfig& cfg, int room_index) {
  const std::uint64_t room_seed = mix_seed(cfg.seed, 0x726d00ULL + room_index);
  RoomScene scene = generate_room(cfg.room, room_seed);
  scene.poses = place_cameras(scene, cfg.view_count, room_seed, cfg.min_clearance,
                              cfg.min_camera_height, cfg.max_camera_height);
  const LongitudeGrid grid = longitude_grid(cfg.width);
  const int n_views = cfg.view_count;

  std::vector<HorizonDepth> gt(n_views), noisy(n_views);
  for (int v = 0; v < n_views; ++v) {
    gt[v] = render_depth(scene, scene.poses[v], grid);
    noisy[v] = corrupt(gt[v], cfg.noise, mix_seed(room_seed, 0x760000ULL + v));
  }

  const PseudoLabelSet pseudo = generate_pseudo_labels(noisy, scene.poses, grid, cfg.consensus);

  DepthPlanes planes{cfg.cost_volume.planes,
                     cfg.cost_volume.d_max > 0.0 ? cfg.cost_volume.d_max : default_d_max(scene)};
  const auto features =
      synth_features(scene, grid, cfg.cost_volume.channels, FeatureMode::Geometric, room_seed);

  const std::filesystem::path room_dir = cfg.output_dir / room_name(room_index);
  std::filesystem::create_directories(room_dir);
  write_json_atomic(room_dir / "scene.json", scene_to_json(scene));

  RoomArtifacts artifacts;
  std::vector<HorizonDepth> fused(n_views);
  for (int v = 0; v < n_views; ++v) {
    const auto aligned = align_points(noisy, scene.poses, v, grid);
    const CostVolume volume = build_cost_volume(features, aligned, planes,
                                                scene.poses[v].height, cfg.cost_volume.plane_mode);
    const HorizonDepth d_cost = extract_depth(volume, planes);
    fused[v] = fuse_depth(d_cost, noisy[v], cfg.cost_volume.alpha);
    std::ostringstream csv;
    write_cost_volume_summary(volume, csv);
    char csv_name[64];
    std::snprintf(csv_name, sizeof(csv_name), "costvolume_%03d.csv", v);
    write_text_atomic(room_dir / csv_name, csv.str());
  }

  const std::string room_id = room_name(room_index);
  std::vector<SvgPath> svg_paths;
  {
    SvgPath gt_path;
    gt_path.points = scene.polygon.vertices;
    gt_path.color = "#2060c0";  // ground truth in blue
    gt_path.stroke_width = 0.05;
    svg_paths.push_back(std::move(gt_path));
  }

  for (int v = 0; v < n_views; ++v) {
    const CameraPose& pose = scene.poses[v];
    const RatioValue ratio = scene.view_ratio(v);
    const double gt_wall_height = scene.room_height;

    write_json_atomic(room_dir / view_file("gt", v), depth_to_json(gt[v], ratio.r));
    write_json_atomic(room_dir / view_file("noisy", v), depth_to_json(noisy[v], ratio.r));
    write_json_atomic(room_dir / view_file("pseudo", v),
                      pseudo_view_to_json(pseudo.views[v], pseudo.config, ratio.r));
    write_json_atomic(room_dir / view_file("fused", v), depth_to_json(fused[v], ratio.r));

    struct Variant {
      const char* name;
      const HorizonDepth* depth;
      const char* color;
    };
    const HorizonDepth noisy_filled = fill_invalid(noisy[v]);
    const HorizonDepth fused_filled = fill_invalid(fused[v]);
    const Variant variants[] = {{"noisy", &noisy_filled, "#909090"},
                                {"pseudo", &pseudo.views[v].depth, "#20a040"},
                                {"fused", &fused_filled, "#c03030"}};
    for (const Variant& variant : variants) {
      const BoundarySamples world = transform_samples(d2l(*variant.depth, pose, grid), pose,
                                                      TransformDirection::ToWorld);
      MetricRow row;
      row.scenario = room_id + "/" + variant.name;
      row.view = v;
      row.report = evaluate_depths(*variant.depth, ratio, gt[v], ratio,
                                   polygon_from_samples(world), scene.polygon,
                                   pose.height * (1.0 + ratio.r), gt_wall_height);
      artifacts.metrics.push_back(std::move(row));

      SvgPath path;
      path.points = polygon_from_samples(world).vertices;
      path.color = variant.color;
      path.stroke_width = 0.02;
      svg_paths.push_back(std::move(path));
    }

    LossRow loss;
    loss.scenario = room_id + "/view" + std::to_string(v);
    const std::vector<double>& sigma = pseudo.views[v].sigma;
    loss.normal = normal_loss(noisy_filled, pseudo.views[v].depth, sigma);
    loss.gradient = normal_gradient_loss(noisy_filled, pseudo.views[v].depth, sigma);
    loss.depth = weighted_depth_loss(noisy_filled, pseudo.views[v].depth, sigma);
    loss.ratio = ceiling3d_loss(noisy_filled, ratio, pseudo.views[v].depth, ratio, sigma);
    loss.total = finetune_loss({loss.normal, loss.gradient, loss.depth, loss.ratio});
    artifacts.losses.push_back(std::move(loss));
  }

  write_floor_plan_svg(room_dir / "plan.svg", svg_paths);
  return artifacts;
}

void parallel_rooms(int room_count, int threads, std::vector<RoomArtifacts>& results,
                    const ScenarioConfig& cfg) {
  results.resize(room_count);
  const int n_threads = std::max(1, std::min(threads, room_count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int q = t; q < room_count; q += n_threads) {
          results[q] = process_room(cfg, q);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string metrics_csv(const std::vector<MetricRow>& rows, bool with_mean) {
  std::string out = kMetricsHeader;
  MetricReport sum;
  for (const MetricRow& row : rows) {
    out += format_metric_row(row.scenario, std::to_string(row.view), row.report);
    sum.iou2d += row.report.iou2d;
    sum.iou3d += row.report.iou3d;
    sum.rmse += row.report.rmse;
    sum.delta1 += row.report.delta1;
    sum.corner_error += row.report.corner_error;
    sum.pixel_error += row.report.pixel_error;
  }
  if (with_mean && !rows.empty()) {
    const double n = static_cast<double>(rows.size());
    MetricReport mean{sum.iou2d / n,  sum.iou3d / n,        sum.rmse / n,
                      sum.delta1 / n, sum.corner_error / n, sum.pixel_error / n};
    out += format_metric_row("mean", "-", mean);
  }
  return out;
}

std::string losses_csv(const std::vector<LossRow>& rows) {
  std::string out = "scenario,ln,lg,ld,lr,total\n";
  char buf[256];
  for (const LossRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f\n", row.scenario.c_str(),
                  row.normal, row.gradient, row.depth, row.ratio, row.total);
    out += buf;
  }
  return out;
}

PipelineSummary run_pipeline(const ScenarioConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  write_json_atomic(cfg.output_dir / "config.json", config_to_json(cfg));

  std::vector<RoomArtifacts> rooms;
  parallel_rooms(cfg.room_count, cfg.threads, rooms, cfg);

  PipelineSummary summary;
  for (const RoomArtifacts& room : rooms) {
    summary.metrics.insert(summary.metrics.end(), room.metrics.begin(), room.metrics.end());
    summary.losses.insert(summary.losses.end(), room.losses.begin(), room.losses.end());
  }
  write_text_atomic(cfg.output_dir / "metrics.csv", metrics_csv(summary.metrics));
  write_text_atomic(cfg.output_dir / "losses.csv", losses_csv(summary.losses));
  return summary;
}

int eval_directories(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                     const std::filesystem::path& out_csv) {
  auto list_json = [](const std::filesystem::path& dir) {
    std::set<std::string> names;
    if (!std::filesystem::is_directory(dir)) {
      throw std::runtime_error("not a directory: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        names.insert(entry.path().filename().string());
      }
    }
    return names;
  };

  const std::set<std::string> pred_names = list_json(pred_dir);
  const std::set<std::string> gt_names = list_json(gt_dir);
  std::vector<std::string> matched;
  for (const std::string& name : pred_names) {
    if (gt_names.count(name)) {
      matched.push_back(name);
    } else {
      std::cerr << "warning: " << name << " has no ground-truth counterpart, skipped\n";
    }
  }
  for (const std::string& name : gt_names) {
    if (!pred_names.count(name)) {
      std::cerr << "warning: " << name << " has no prediction counterpart, skipped\n";
    }
  }
  if (matched.empty()) throw EmptyInputError("no matching JSON files to evaluate");

  const CameraPose unit_pose{0.0, 0.0, 0.0, 1.0};
  std::vector<MetricRow> rows;
  for (const std::string& name : matched) {
    try {
      const Json pj = read_json(pred_dir / name);
      const Json gj = read_json(gt_dir / name);
      const HorizonDepth pred = fill_invalid(depth_from_json(pj));
      const HorizonDepth gt = fill_invalid(depth_from_json(gj));
      const RatioValue pred_ratio{ratio_from_json(pj).value_or(1.0)};
      const RatioValue gt_ratio{ratio_from_json(gj).value_or(1.0)};
      const LongitudeGrid grid = longitude_grid(pred.width());
      const FloorPolygon pred_poly = polygon_from_samples(d2l(pred, unit_pose, grid));
      const FloorPolygon gt_poly = polygon_from_samples(d2l(gt, unit_pose, grid));
      MetricRow row;
      row.scenario = name;
      row.view = 0;
      row.report = evaluate_depths(pred, pred_ratio, gt, gt_ratio, pred_poly, gt_poly,
                                   1.0 + pred_ratio.r, 1.0 + gt_ratio.r);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      std::cerr << "warning: " << name << " skipped: " << e.what() << "\n";
    }
  }
  if (rows.empty()) throw EmptyInputError("no evaluable JSON file pairs");
  write_text_atomic(out_csv, metrics_csv(rows, /*with_mean=*/true));
  return static_cast<int>(rows.size());
}

}  // namespace mvlayout
