#pragma once

// Cross-view registration of per-view horizon-depth predictions and robust
// per-column consensus. Each view's boundary samples are lifted to world
// coordinates, re-projected into every reference view, binned by longitude,
// and aggregated column by column; the per-column scatter becomes the
// confidence weight sigma used by the fine-tuning losses.

#include <cstdint>
#include <vector>

#include "mvlayout/geometry.hpp"

namespace mvlayout {

struct ColumnAggregation {
  enum class Strategy { Median, MeanAfterMad } strategy = Strategy::Median;
  double mad_k = 2.5;   // MAD gate width for MeanAfterMad
  int min_support = 2;  // columns below this are distrusted and refilled
};

struct ColumnStats {
  double value = 0.0;
  double sigma = 0.0;
  int support = 0;
};

// Robust center of a candidate list. Median keeps every candidate and
// reports the population std; MeanAfterMad first discards candidates
// farther than mad_k * MAD from the median. Candidates are sorted
// internally, so the result is independent of input order.
ColumnStats aggregate_column(std::vector<double> candidates, const ColumnAggregation& cfg);

struct ConsensusConfig {
  ColumnAggregation aggregation;
  int iterations = 1;        // feed pseudo-labels back as inputs when > 1
  bool include_self = true;  // reference view's own prediction participates
};

struct PseudoLabelView {
  HorizonDepth depth;           // all columns valid after circular fill
  std::vector<double> sigma;    // per-column candidate std, 0 for support <= 1
  std::vector<int> support;     // candidates used per column
};

struct PseudoLabelSet {
  std::vector<PseudoLabelView> views;
  ConsensusConfig config;
};

// Algorithm: D2L every view, lift to world, re-project into each reference
// view, aggregate per column, L2D back. Needs >= 2 views of equal width.
PseudoLabelSet generate_pseudo_labels(const std::vector<HorizonDepth>& depths,
                                      const std::vector<CameraPose>& poses,
                                      const LongitudeGrid& grid,
                                      const ConsensusConfig& cfg = {});

// Fills invalid runs by circular interpolation of the boundary polyline in
// polar form (radius linear in longitude between the nearest valid
// endpoints). Requires at least one valid column.
HorizonDepth fill_invalid(const HorizonDepth& d);

}  // namespace mvlayout
