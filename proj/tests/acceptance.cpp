// Acceptance suite: one self-contained check per shipping criterion, one
// [PASS]/[FAIL] line each, nonzero exit when anything fails.
//
// All thresholds are fixed here, not tuned at runtime. Scenes are seeded
// rectangles unless a criterion needs otherwise; every expected value comes
// from a closed-form or simulator oracle.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mvlayout/consensus.hpp"
#include "mvlayout/cost_volume.hpp"
#include "mvlayout/metrics.hpp"
#include "mvlayout/objectives.hpp"
#include "mvlayout/pipeline.hpp"
#include "mvlayout/rng.hpp"
#include "mvlayout/simulator.hpp"

using namespace mvlayout;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

RoomScene seeded_rectangle(std::uint64_t seed, int views, double clearance) {
  RoomSpec spec;
  spec.min_corners = spec.max_corners = 4;
  spec.min_extent = 4.0;
  spec.max_extent = 8.0;
  spec.manhattan = true;
  RoomScene scene = generate_room(spec, seed);
  scene.poses = place_cameras(scene, views, seed, clearance);
  return scene;
}

double mean_view_rmse(const std::vector<HorizonDepth>& gt,
                      const std::vector<HorizonDepth>& pred) {
  double sum = 0.0;
  for (std::size_t v = 0; v < gt.size(); ++v) sum += rmse(gt[v], pred[v]);
  return sum / gt.size();
}

double world_iou(const RoomScene& scene, std::size_t view, const HorizonDepth& depth,
                 const LongitudeGrid& grid) {
  const BoundarySamples world =
      transform_samples(d2l(depth, scene.poses[view], grid), scene.poses[view],
                        TransformDirection::ToWorld);
  return iou2d(polygon_from_samples(world), scene.polygon);
}

Outcome criterion_round_trip() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> depth(0.2, 6.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> height(1.0, 2.0);
  const int widths[] = {256, 512, 1024};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = widths[trial % 3];
    const LongitudeGrid grid = longitude_grid(w);
    HorizonDepth d;
    d.depths.resize(w);
    d.valid.assign(w, 1);
    for (double& v : d.depths) v = depth(rng);
    CameraPose pose;
    pose.yaw = normalize_angle(angle(rng));
    pose.tx = depth(rng);
    pose.tz = -depth(rng);
    pose.height = height(rng);
    const HorizonDepth back = l2d(d2l(d, pose, grid), pose, grid);
    for (int i = 0; i < w; ++i) {
      if (!back.valid[i]) return {false, "column lost its candidate"};
      worst = std::max(worst, std::abs(back.depths[i] - d.depths[i]));
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "1000 cases, max |l2d(d2l(d)) - d| = %.3g", worst);
  return {worst < 1e-9, detail};
}

Outcome criterion_raycast_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> side(2.0, 10.0);
  std::uniform_real_distribution<double> unit(-0.45, 0.45);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const LongitudeGrid grid = longitude_grid(128);
  double worst = 0.0;
  long long compared = 0;
  for (int scene_trial = 0; scene_trial < 100; ++scene_trial) {
    const double a = side(rng), b = side(rng);
    RoomScene scene;
    scene.polygon.vertices = {{-a / 2, -b / 2}, {a / 2, -b / 2}, {a / 2, b / 2}, {-a / 2, b / 2}};
    CameraPose pose;
    pose.tx = unit(rng) * a;
    pose.tz = unit(rng) * b;
    pose.yaw = normalize_angle(angle(rng));
    pose.height = 1.6;
    const HorizonDepth rendered = render_depth(scene, pose, grid);
    for (int i = 0; i < grid.width; ++i) {
      const double expected =
          rect_depth_analytic(a, b, {pose.tx, pose.tz}, grid.angles[i] + pose.yaw) / pose.height;
      worst = std::max(worst, std::abs(rendered.depths[i] - expected));
      ++compared;
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "%lld ray casts, max |render - analytic| = %.3g",
                compared, worst);
  return {worst < 1e-9 && compared >= 10000, detail};
}

Outcome criterion_consensus_denoising() {
  const LongitudeGrid grid = longitude_grid(1024);
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RoomScene scene = seeded_rectangle(3000 + seed, 8, 0.5);
    std::vector<HorizonDepth> gt, noisy;
    for (std::size_t v = 0; v < scene.poses.size(); ++v) {
      gt.push_back(render_depth(scene, scene.poses[v], grid));
      noisy.push_back(corrupt(gt.back(), NoiseSpec{0.05, 0, {}, 0.0},
                              mix_seed(3000 + seed, v)));
    }
    const PseudoLabelSet set = generate_pseudo_labels(noisy, scene.poses, grid);
    std::vector<HorizonDepth> pseudo;
    for (const PseudoLabelView& view : set.views) pseudo.push_back(view.depth);
    const double ratio = mean_view_rmse(gt, pseudo) / mean_view_rmse(gt, noisy);
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 0.6) {
      char detail[96];
      std::snprintf(detail, sizeof(detail), "room seed %llu: RMSE ratio %.3f > 0.6",
                    static_cast<unsigned long long>(seed), ratio);
      return {false, detail};
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "20 rooms, worst pseudo/noisy RMSE ratio %.3f <= 0.6",
                worst_ratio);
  return {true, detail};
}

Outcome criterion_occlusion_robustness() {
  const LongitudeGrid grid = longitude_grid(512);
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RoomScene scene = seeded_rectangle(4000 + seed, 8, 0.5);
    std::vector<HorizonDepth> gt, noisy;
    for (std::size_t v = 0; v < scene.poses.size(); ++v) {
      gt.push_back(render_depth(scene, scene.poses[v], grid));
      NoiseSpec spec;
      if (v < scene.poses.size() / 2) {
        const double start = std::fmod(0.05 + 0.19 * v, 0.8);
        spec.occlusion_arcs.push_back({start, 0.2, OcclusionArc::Mode::Drop});
      }
      noisy.push_back(corrupt(gt.back(), spec, mix_seed(4000 + seed, v)));
    }
    const PseudoLabelSet set = generate_pseudo_labels(noisy, scene.poses, grid);
    double pseudo_iou = 0.0, noisy_iou = 0.0;
    for (std::size_t v = 0; v < scene.poses.size(); ++v) {
      pseudo_iou += world_iou(scene, v, set.views[v].depth, grid) / scene.poses.size();
      noisy_iou += world_iou(scene, v, fill_invalid(noisy[v]), grid) / scene.poses.size();
    }
    wins += pseudo_iou > noisy_iou;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "pseudo 2DIoU beats occluded views in %d/20 seeds", wins);
  return {wins >= 18, detail};
}

Outcome criterion_iteration_behavior() {
  const LongitudeGrid grid = longitude_grid(512);
  int second_no_worse = 0;
  bool all_finite = true;
  double mean_rmse[3] = {0.0, 0.0, 0.0};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RoomScene scene = seeded_rectangle(5000 + seed, 8, 0.5);
    std::vector<HorizonDepth> gt, noisy;
    for (std::size_t v = 0; v < scene.poses.size(); ++v) {
      gt.push_back(render_depth(scene, scene.poses[v], grid));
      noisy.push_back(corrupt(gt.back(), NoiseSpec{0.05, 0, {}, 0.0},
                              mix_seed(5000 + seed, v)));
    }
    double per_iter[3];
    for (int iterations = 1; iterations <= 3; ++iterations) {
      ConsensusConfig cfg;
      cfg.iterations = iterations;
      const PseudoLabelSet set = generate_pseudo_labels(noisy, scene.poses, grid, cfg);
      std::vector<HorizonDepth> pseudo;
      for (const PseudoLabelView& view : set.views) {
        for (double value : view.depth.depths) all_finite &= std::isfinite(value);
        pseudo.push_back(view.depth);
      }
      per_iter[iterations - 1] = mean_view_rmse(gt, pseudo);
      mean_rmse[iterations - 1] += per_iter[iterations - 1] / 20.0;
    }
    second_no_worse += per_iter[1] <= per_iter[0];
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "mean RMSE it1 %.4f, it2 %.4f, it3 %.4f; it2 <= it1 in %d/20 seeds; finite %s",
                mean_rmse[0], mean_rmse[1], mean_rmse[2], second_no_worse,
                all_finite ? "yes" : "no");
  return {all_finite && second_no_worse >= 15, detail};
}

Outcome criterion_cost_volume_recovery() {
  const LongitudeGrid grid = longitude_grid(512);
  long long evaluated = 0, within = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RoomScene scene = seeded_rectangle(6000 + seed, 4, 0.6);
    std::vector<HorizonDepth> depths;
    for (const CameraPose& pose : scene.poses) depths.push_back(render_depth(scene, pose, grid));
    const DepthPlanes planes{64, default_d_max(scene)};
    const auto features = synth_features(scene, grid, 6, FeatureMode::Geometric, seed);
    const double plane_metric = planes.d_max / planes.count;
    for (std::size_t ref = 0; ref < scene.poses.size(); ++ref) {
      const auto aligned = align_points(depths, scene.poses, ref, grid);
      const CostVolume volume =
          build_cost_volume(features, aligned, planes, scene.poses[ref].height);
      const HorizonDepth extracted = extract_depth(volume, planes);
      for (int i = 0; i < grid.width; ++i) {
        if (!extracted.valid[i]) continue;
        int best_k = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int k = 0; k < planes.count; ++k) {
          if (!volume.supported(i, k)) continue;
          double c = 0.0;
          for (int ch = 0; ch < volume.channels; ++ch) c += volume.cost_at(ch, i, k);
          if (c < best_cost) {
            best_cost = c;
            best_k = k;
          }
        }
        if (volume.support_at(i, best_k) < 2) continue;
        ++evaluated;
        const double err = std::abs(extracted.depths[i] - depths[ref].depths[i]) *
                           scene.poses[ref].height;
        within += err <= plane_metric;
      }
    }
  }

  // Coincident views: the occupied plane must carry exactly zero variance.
  RoomScene twin = seeded_rectangle(6100, 1, 0.6);
  twin.poses = {twin.poses[0], twin.poses[0], twin.poses[0]};
  std::vector<HorizonDepth> depths;
  for (const CameraPose& pose : twin.poses) depths.push_back(render_depth(twin, pose, grid));
  const DepthPlanes planes{64, default_d_max(twin)};
  const auto features = synth_features(twin, grid, 6, FeatureMode::Geometric, 1);
  const CostVolume volume = build_cost_volume(features, align_points(depths, twin.poses, 0, grid),
                                              planes, twin.poses[0].height);
  bool zero_variance = true;
  for (int i = 0; i < grid.width; ++i) {
    for (int k = 0; k < planes.count; ++k) {
      if (!volume.supported(i, k)) continue;
      for (int ch = 0; ch < volume.channels; ++ch) {
        zero_variance &= volume.cost_at(ch, i, k) == 0.0;
      }
    }
  }

  const double fraction = evaluated > 0 ? static_cast<double>(within) / evaluated : 0.0;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%.2f%% of %lld supported columns within one plane width; coincident variance %s",
                100.0 * fraction, evaluated, zero_variance ? "exactly 0" : "nonzero");
  return {fraction >= 0.99 && zero_variance && evaluated > 10000, detail};
}

Outcome criterion_loss_fidelity() {
  const bool finetune_exact = finetune_loss({1.0, 1.0, 1.0, 1.0}) == 1.18;
  const bool pretrain_exact = pretrain_loss(1.0, 0.0) == 0.75;

  const int w = 64;
  const HorizonDepth d = make_horizon_depth(std::vector<double>(w, 1.5));
  const std::vector<double> ones(w, 1.0);
  const double hand = ceiling3d_loss(d, RatioValue{1.0}, d, RatioValue{0.5}, ones);
  const bool ceiling_exact = std::abs(hand - 0.5 / 3.0) < 1e-12;

  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "finetune(1,1,1,1) = %.17g, pretrain(1,0) = %.2f, ceiling hand case = %.17g",
                finetune_loss({1.0, 1.0, 1.0, 1.0}), pretrain_loss(1.0, 0.0), hand);
  return {finetune_exact && pretrain_exact && ceiling_exact, detail};
}

Outcome criterion_metric_oracles() {
  const FloorPolygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const FloorPolygon shifted{{{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}}};
  const bool case_3d = std::abs(iou3d(square, 2.0, square, 3.0) - 2.0 / 3.0) < 1e-3;
  const bool case_2d = std::abs(iou2d(square, shifted) - 1.0 / 3.0) < 1e-3;

  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> corners(4, 9);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> jitter(0.1, 0.9);
  int mc_pass = 0;
  for (int trial = 0; trial < 20; ++trial) {
    FloorPolygon a, b;
    for (FloorPolygon* poly : {&a, &b}) {
      const int n = corners(rng);
      for (int i = 0; i < n; ++i) {
        const double angle = kTwoPi * (i + jitter(rng)) / n;
        const double r = radius(rng);
        poly->vertices.push_back({r * std::cos(angle), r * std::sin(angle)});
      }
    }
    double min_x = 1e300, max_x = -1e300, min_z = 1e300, max_z = -1e300;
    for (const FloorPolygon* poly : {&a, &b}) {
      for (const Vec2& v : poly->vertices) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_z = std::min(min_z, v.z);
        max_z = std::max(max_z, v.z);
      }
    }
    std::uniform_real_distribution<double> ux(min_x, max_x), uz(min_z, max_z);
    long long in_union = 0, in_both = 0;
    for (int s = 0; s < 1000000; ++s) {
      const Vec2 p{ux(rng), uz(rng)};
      const bool ia = point_in_polygon(a, p);
      const bool ib = point_in_polygon(b, p);
      in_union += ia || ib;
      in_both += ia && ib;
    }
    const double mc = static_cast<double>(in_both) / in_union;
    const double se = std::sqrt(mc * (1 - mc) / in_union);
    mc_pass += std::abs(iou2d(a, b) - mc) <= 3.0 * se + 1e-4;
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "iou3d 2/3 %s, iou2d 1/3 %s, Monte-Carlo 3-sigma agreement %d/20",
                case_3d ? "ok" : "off", case_2d ? "ok" : "off", mc_pass);
  return {case_3d && case_2d && mc_pass == 20, detail};
}

Outcome criterion_determinism() {
  const auto base = std::filesystem::temp_directory_path() / "mvlayout_acceptance";
  std::filesystem::remove_all(base);
  ScenarioConfig cfg;
  cfg.seed = 42;
  cfg.room_count = 3;
  cfg.view_count = 4;
  cfg.width = 256;
  cfg.room.min_corners = cfg.room.max_corners = 4;
  cfg.room.min_extent = 4.0;
  cfg.room.max_extent = 7.0;
  cfg.noise.multiplicative_sigma = 0.05;

  auto run_with = [&](const std::string& tag, int threads) {
    cfg.output_dir = base / tag;
    cfg.threads = threads;
    run_pipeline(cfg);
    std::ifstream is(cfg.output_dir / "metrics.csv", std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  };

  const std::string first = run_with("t1_a", 1);
  const std::string second = run_with("t1_b", 1);
  const std::string threaded = run_with("t8", 8);
  std::filesystem::remove_all(base);

  const bool identical = !first.empty() && first == second && first == threaded;
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "metrics.csv (%zu bytes): rerun %s, 8-thread run %s", first.size(),
                first == second ? "identical" : "differs",
                first == threaded ? "identical" : "differs");
  return {identical, detail};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "round-trip identity l2d(d2l(d)) = d", 5.0, criterion_round_trip},
      {2, "ray-cast oracle equivalence", 5.0, criterion_raycast_oracle},
      {3, "consensus denoising", 30.0, criterion_consensus_denoising},
      {4, "occlusion robustness", 30.0, criterion_occlusion_robustness},
      {5, "iteration behavior", 30.0, criterion_iteration_behavior},
      {6, "cost-volume recovery", 20.0, criterion_cost_volume_recovery},
      {7, "loss formula fidelity", 5.0, criterion_loss_fidelity},
      {8, "metric oracles", 60.0, criterion_metric_oracles},
      {9, "pipeline determinism", 60.0, criterion_determinism},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= entry.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    failures += !pass;
    std::printf("[%s] criterion %d: %s — %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", entry.id,
                entry.name, outcome.detail.c_str(), seconds,
                in_budget ? "" : ", over budget");
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", entries.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
