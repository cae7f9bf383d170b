// Command-line front end for the multi-view layout engine.
//
// Verbs: gen-scene, render, corrupt, consensus, costvolume, eval, pipeline.
// Exit codes: 0 success, 1 I/O error, 2 empty input, 3 config error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvlayout/pipeline.hpp"
#include "mvlayout/rng.hpp"

namespace {

using namespace mvlayout;

ScenarioConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override,
                           std::optional<std::string> out_override,
                           std::optional<int> threads_override) {
  Json j;
  try {
    j = read_json(path);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  ScenarioConfig cfg = config_from_json(j);
  if (seed_override) cfg.seed = *seed_override;
  if (out_override) cfg.output_dir = *out_override;
  if (threads_override) cfg.threads = *threads_override;
  return cfg;
}

std::vector<std::filesystem::path> sorted_json_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

RoomScene build_scene(const ScenarioConfig& cfg) {
  RoomScene scene = generate_room(cfg.room, cfg.seed);
  scene.poses = place_cameras(scene, cfg.view_count, cfg.seed, cfg.min_clearance,
                              cfg.min_camera_height, cfg.max_camera_height);
  return scene;
}

int cmd_gen_scene(const ScenarioConfig& cfg, const std::string& out) {
  write_json_atomic(out, scene_to_json(build_scene(cfg)));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_render(const std::string& scene_path, int width, const std::string& out_dir) {
  const RoomScene scene = scene_from_json(read_json(scene_path));
  const LongitudeGrid grid = longitude_grid(width);
  std::filesystem::create_directories(out_dir);
  for (std::size_t v = 0; v < scene.poses.size(); ++v) {
    char name[64];
    std::snprintf(name, sizeof(name), "view_%03zu.json", v);
    write_json_atomic(std::filesystem::path(out_dir) / name,
                      depth_to_json(render_depth(scene, scene.poses[v], grid),
                                    scene.view_ratio(v).r));
  }
  std::cout << "rendered " << scene.poses.size() << " views\n";
  return 0;
}

int cmd_corrupt(const ScenarioConfig& cfg, const std::string& in_dir,
                const std::string& out_dir) {
  const auto files = sorted_json_files(in_dir);
  if (files.empty()) throw EmptyInputError("no JSON depth files in " + in_dir);
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Json j = read_json(files[i]);
    const HorizonDepth noisy =
        corrupt(depth_from_json(j), cfg.noise, mix_seed(cfg.seed, 0x760000ULL + i));
    write_json_atomic(std::filesystem::path(out_dir) / files[i].filename(),
                      depth_to_json(noisy, ratio_from_json(j)));
  }
  std::cout << "corrupted " << files.size() << " views\n";
  return 0;
}

int cmd_consensus(const ScenarioConfig& cfg, const std::string& scene_path,
                  const std::string& in_dir, const std::string& out_dir) {
  const RoomScene scene = scene_from_json(read_json(scene_path));
  const auto files = sorted_json_files(in_dir);
  if (files.empty()) throw EmptyInputError("no JSON depth files in " + in_dir);
  if (files.size() != scene.poses.size()) {
    throw ConfigError("config error: " + std::to_string(files.size()) + " depth files for " +
                      std::to_string(scene.poses.size()) + " poses");
  }
  std::vector<HorizonDepth> depths;
  std::vector<std::optional<double>> ratios;
  for (const auto& f : files) {
    const Json j = read_json(f);
    depths.push_back(depth_from_json(j));
    ratios.push_back(ratio_from_json(j));
  }
  const LongitudeGrid grid = longitude_grid(depths.front().width());
  const PseudoLabelSet set = generate_pseudo_labels(depths, scene.poses, grid, cfg.consensus);
  std::filesystem::create_directories(out_dir);
  for (std::size_t v = 0; v < set.views.size(); ++v) {
    write_json_atomic(std::filesystem::path(out_dir) / files[v].filename(),
                      pseudo_view_to_json(set.views[v], set.config, ratios[v]));
  }
  std::cout << "wrote pseudo-labels for " << set.views.size() << " views\n";
  return 0;
}

int cmd_costvolume(const ScenarioConfig& cfg, const std::string& scene_path,
                   const std::string& in_dir, const std::string& out_dir) {
  const RoomScene scene = scene_from_json(read_json(scene_path));
  const auto files = sorted_json_files(in_dir);
  if (files.empty()) throw EmptyInputError("no JSON depth files in " + in_dir);
  if (files.size() != scene.poses.size()) {
    throw ConfigError("config error: depth file count does not match scene poses");
  }
  std::vector<HorizonDepth> depths;
  std::vector<std::optional<double>> ratios;
  for (const auto& f : files) {
    const Json j = read_json(f);
    depths.push_back(depth_from_json(j));
    ratios.push_back(ratio_from_json(j));
  }
  const LongitudeGrid grid = longitude_grid(depths.front().width());
  const DepthPlanes planes{cfg.cost_volume.planes, cfg.cost_volume.d_max > 0.0
                                                       ? cfg.cost_volume.d_max
                                                       : default_d_max(scene)};
  const auto features =
      synth_features(scene, grid, cfg.cost_volume.channels, FeatureMode::Geometric, cfg.seed);
  std::filesystem::create_directories(out_dir);
  for (std::size_t v = 0; v < depths.size(); ++v) {
    const auto aligned = align_points(depths, scene.poses, v, grid);
    const CostVolume volume = build_cost_volume(features, aligned, planes,
                                                scene.poses[v].height, cfg.cost_volume.plane_mode);
    const HorizonDepth fused =
        fuse_depth(extract_depth(volume, planes), depths[v], cfg.cost_volume.alpha);
    char csv_name[64];
    std::snprintf(csv_name, sizeof(csv_name), "costvolume_%03zu.csv", v);
    std::ostringstream csv;
    write_cost_volume_summary(volume, csv);
    write_text_atomic(std::filesystem::path(out_dir) / csv_name, csv.str());
    write_json_atomic(std::filesystem::path(out_dir) / files[v].filename(),
                      depth_to_json(fused, ratios[v]));
  }
  std::cout << "wrote fused depths for " << depths.size() << " views\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view panoramic room-layout geometry engine"};
  app.require_subcommand(1);

  std::string config_path, scene_path, in_dir, out_path, pred_dir, gt_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::optional<int> threads_override;
  int width = 512;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "scenario config JSON");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--threads", threads_override, "worker thread count");
  };

  CLI::App* gen = app.add_subcommand("gen-scene", "generate a room scene JSON");
  add_common(gen, true);
  gen->add_option("--out", out_path, "output scene.json path")->required();

  CLI::App* render = app.add_subcommand("render", "render exact per-view depths for a scene");
  render->add_option("--scene", scene_path, "scene JSON")->required();
  render->add_option("--width", width, "columns per panorama");
  render->add_option("--out", out_path, "output directory")->required();

  CLI::App* corrupt_cmd = app.add_subcommand("corrupt", "apply the noise model to depth files");
  add_common(corrupt_cmd, true);
  corrupt_cmd->add_option("--in", in_dir, "directory of depth JSON files")->required();
  corrupt_cmd->add_option("--out", out_path, "output directory")->required();

  CLI::App* consensus_cmd =
      app.add_subcommand("consensus", "multi-view consensus pseudo-labels");
  add_common(consensus_cmd, true);
  consensus_cmd->add_option("--scene", scene_path, "scene JSON")->required();
  consensus_cmd->add_option("--in", in_dir, "directory of per-view depth JSON files")->required();
  consensus_cmd->add_option("--out", out_path, "output directory")->required();

  CLI::App* volume_cmd =
      app.add_subcommand("costvolume", "cost-volume refinement and fusion");
  add_common(volume_cmd, true);
  volume_cmd->add_option("--scene", scene_path, "scene JSON")->required();
  volume_cmd->add_option("--in", in_dir, "directory of per-view depth JSON files")->required();
  volume_cmd->add_option("--out", out_path, "output directory")->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate predictions against ground truth");
  eval_cmd->add_option("--pred", pred_dir, "prediction directory")->required();
  eval_cmd->add_option("--gt", gt_dir, "ground-truth directory")->required();
  eval_cmd->add_option("--out", out_path, "output metrics.csv path")->required();

  CLI::App* pipeline_cmd = app.add_subcommand("pipeline", "run the full scenario pipeline");
  add_common(pipeline_cmd, true);
  pipeline_cmd->add_option("--out", out_override, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(gen)) {
      return cmd_gen_scene(load_config(config_path, seed_override, {}, {}), out_path);
    }
    if (app.got_subcommand(render)) return cmd_render(scene_path, width, out_path);
    if (app.got_subcommand(corrupt_cmd)) {
      return cmd_corrupt(load_config(config_path, seed_override, {}, {}), in_dir, out_path);
    }
    if (app.got_subcommand(consensus_cmd)) {
      return cmd_consensus(load_config(config_path, seed_override, {}, {}), scene_path, in_dir,
                           out_path);
    }
    if (app.got_subcommand(volume_cmd)) {
      return cmd_costvolume(load_config(config_path, seed_override, {}, {}), scene_path, in_dir,
                            out_path);
    }
    if (app.got_subcommand(eval_cmd)) {
      const int n = eval_directories(pred_dir, gt_dir, out_path);
      std::cout << "evaluated " << n << " file pairs -> " << out_path << "\n";
      return 0;
    }
    if (app.got_subcommand(pipeline_cmd)) {
      const ScenarioConfig cfg =
          load_config(config_path, seed_override, out_override, threads_override);
      const PipelineSummary summary = run_pipeline(cfg);
      std::cout << "pipeline complete: " << summary.metrics.size() << " metric rows in "
                << (cfg.output_dir / "metrics.csv").string() << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const EmptyInputError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
