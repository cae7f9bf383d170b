#include "mvlayout/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvlayout/robust.hpp"

namespace mvlayout {

ColumnStats aggregate_column(std::vector<double> candidates, const ColumnAggregation& cfg) {
  if (candidates.empty()) return {};
  std::sort(candidates.begin(), candidates.end());
  const double med = median_sorted(candidates);

  if (cfg.strategy == ColumnAggregation::Strategy::Median) {
    return {med, population_std(candidates), static_cast<int>(candidates.size())};
  }

  const double gate = cfg.mad_k * mad(candidates, med);
  std::vector<double> kept;
  kept.reserve(candidates.size());
  for (double c : candidates) {
    if (std::abs(c - med) <= gate) kept.push_back(c);
  }
  // The median itself always passes the gate, so kept is never empty.
  return {mean(kept), population_std(kept), static_cast<int>(kept.size())};
}

HorizonDepth fill_invalid(const HorizonDepth& d) {
  const int w = d.width();
  int valid_count = d.valid_count();
  if (valid_count == 0) throw std::invalid_argument("fill_invalid: no valid columns");
  HorizonDepth out = d;
  if (valid_count == w) return out;

  for (int i = 0; i < w; ++i) {
    if (d.valid[i]) continue;
    // Nearest valid endpoints, circular in longitude.
    int before = i, steps_back = 0;
    do {
      before = (before + w - 1) % w;
      ++steps_back;
    } while (!d.valid[before]);
    int after = i, steps_fwd = 0;
    do {
      after = (after + 1) % w;
      ++steps_fwd;
    } while (!d.valid[after]);
    const double t = static_cast<double>(steps_back) / (steps_back + steps_fwd);
    out.depths[i] = d.depths[before] + t * (d.depths[after] - d.depths[before]);
    out.valid[i] = 1;
  }
  return out;
}

namespace {

// One consensus pass: every view's samples in world coordinates, then each
// reference view aggregates the re-projected candidate depths per column.
std::vector<PseudoLabelView> consensus_pass(const std::vector<HorizonDepth>& depths,
                                            const std::vector<CameraPose>& poses,
                                            const LongitudeGrid& grid,
                                            const ConsensusConfig& cfg) {
  const std::size_t n_views = depths.size();
  std::vector<BoundarySamples> world(n_views);
  for (std::size_t v = 0; v < n_views; ++v) {
    world[v] = transform_samples(d2l(depths[v], poses[v], grid), poses[v],
                                 TransformDirection::ToWorld);
  }

  std::vector<PseudoLabelView> out(n_views);
  for (std::size_t ref = 0; ref < n_views; ++ref) {
    const CameraPose& pose = poses[ref];
    std::vector<std::vector<double>> bins(grid.width);
    for (std::size_t v = 0; v < n_views; ++v) {
      if (!cfg.include_self && v == ref) continue;
      const BoundarySamples local = transform_samples(world[v], pose,
                                                      TransformDirection::ToView);
      for (int i = 0; i < local.width(); ++i) {
        if (!local.valid[i]) continue;
        const Vec2 p = local.points[i];
        const double r = norm(p);
        if (r < 1e-12) continue;
        bins[column_of_direction(p.x, p.z, grid.width)].push_back(r / pose.height);
      }
    }

    PseudoLabelView view;
    view.depth.depths.assign(grid.width, 0.0);
    view.depth.valid.assign(grid.width, 0);
    view.sigma.assign(grid.width, 0.0);
    view.support.assign(grid.width, 0);
    for (int j = 0; j < grid.width; ++j) {
      const ColumnStats stats = aggregate_column(std::move(bins[j]), cfg.aggregation);
      view.support[j] = stats.support;
      view.sigma[j] = stats.sigma;
      if (stats.support >= cfg.aggregation.min_support) {
        view.depth.depths[j] = stats.value;
        view.depth.valid[j] = 1;
      }
    }
    if (view.depth.valid_count() == 0) {
      throw std::invalid_argument(
          "generate_pseudo_labels: no column reached min_support; "
          "lower min_support or add views");
    }
    view.depth = fill_invalid(view.depth);
    out[ref] = std::move(view);
  }
  return out;
}

}  // namespace

PseudoLabelSet generate_pseudo_labels(const std::vector<HorizonDepth>& depths,
                                      const std::vector<CameraPose>& poses,
                                      const LongitudeGrid& grid,
                                      const ConsensusConfig& cfg) {
  if (depths.size() < 2) {
    throw std::invalid_argument("generate_pseudo_labels: need at least 2 views");
  }
  if (poses.size() != depths.size()) {
    throw std::invalid_argument("generate_pseudo_labels: views and poses disagree");
  }
  for (const HorizonDepth& d : depths) {
    if (d.width() != grid.width) {
      throw std::invalid_argument("generate_pseudo_labels: width mismatch");
    }
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("generate_pseudo_labels: iterations must be >= 1");
  }

  std::vector<HorizonDepth> current = depths;
  std::vector<PseudoLabelView> views;
  for (int it = 0; it < cfg.iterations; ++it) {
    views = consensus_pass(current, poses, grid, cfg);
    current.clear();
    current.reserve(views.size());
    for (const PseudoLabelView& v : views) current.push_back(v.depth);
  }

  PseudoLabelSet set;
  set.views = std::move(views);
  set.config = cfg;
  return set;
}

}  // namespace mvlayout
