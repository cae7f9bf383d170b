#include "mvlayout/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvlayout {

namespace {

struct Bounds {
  double min_x, max_x, min_z, max_z;
};

Bounds union_bounds(const FloorPolygon& a, const FloorPolygon& b) {
  Bounds bb{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const FloorPolygon* poly : {&a, &b}) {
    for (const Vec2& v : poly->vertices) {
      bb.min_x = std::min(bb.min_x, v.x);
      bb.max_x = std::max(bb.max_x, v.x);
      bb.min_z = std::min(bb.min_z, v.z);
      bb.max_z = std::max(bb.max_z, v.z);
    }
  }
  return bb;
}

void check_polygon(const FloorPolygon& poly, const char* who) {
  if (poly.size() < 3 || std::abs(polygon_area(poly)) < 1e-12) {
    throw std::invalid_argument(std::string(who) + ": degenerate polygon");
  }
}

// Sorted x-intervals where the horizontal line z = row crosses the polygon
// interior (even-odd rule, half-open edge spans).
std::vector<std::pair<double, double>> row_intervals(const FloorPolygon& poly, double row) {
  std::vector<double> xs;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly.vertices[i];
    const Vec2& b = poly.vertices[(i + 1) % n];
    if ((a.z > row) == (b.z > row)) continue;
    xs.push_back(a.x + (row - a.z) / (b.z - a.z) * (b.x - a.x));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) intervals.emplace_back(xs[i], xs[i + 1]);
  return intervals;
}

double intervals_measure(const std::vector<std::pair<double, double>>& v) {
  double s = 0.0;
  for (const auto& [a, b] : v) s += b - a;
  return s;
}

std::vector<std::pair<double, double>> intervals_intersect(
    const std::vector<std::pair<double, double>>& a,
    const std::vector<std::pair<double, double>>& b) {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

struct OverlapAreas {
  double inter = 0.0;
  double uni = 0.0;
  double area_a = 0.0;
  double area_b = 0.0;
};

// All four areas come from the same scanline so that identical polygons
// produce bit-equal numerator and denominator.
OverlapAreas rasterized_overlap(const FloorPolygon& pred, const FloorPolygon& gt,
                                int resolution) {
  const Bounds bb = union_bounds(pred, gt);
  const double dz = (bb.max_z - bb.min_z) / resolution;
  if (!(dz > 0.0)) return {};
  OverlapAreas areas;
  for (int r = 0; r < resolution; ++r) {
    const double row = bb.min_z + (r + 0.5) * dz;
    const auto ia = row_intervals(pred, row);
    const auto ib = row_intervals(gt, row);
    const double la = intervals_measure(ia);
    const double lb = intervals_measure(ib);
    const double li = intervals_measure(intervals_intersect(ia, ib));
    areas.inter += li * dz;
    areas.uni += (la + lb - li) * dz;
    areas.area_a += la * dz;
    areas.area_b += lb * dz;
  }
  return areas;
}

}  // namespace

double iou2d(const FloorPolygon& pred, const FloorPolygon& gt, int resolution) {
  check_polygon(pred, "iou2d");
  check_polygon(gt, "iou2d");
  if (resolution < 2) throw std::invalid_argument("iou2d: resolution too small");
  const OverlapAreas areas = rasterized_overlap(pred, gt, resolution);
  if (areas.uni <= 0.0) return 0.0;
  return areas.inter / areas.uni;
}

double iou3d(const FloorPolygon& pred, double pred_height, const FloorPolygon& gt,
             double gt_height, int resolution) {
  check_polygon(pred, "iou3d");
  check_polygon(gt, "iou3d");
  if (!(pred_height > 0.0) || !(gt_height > 0.0)) {
    throw std::invalid_argument("iou3d: heights must be > 0");
  }
  const OverlapAreas areas = rasterized_overlap(pred, gt, resolution);
  const double inter = areas.inter * std::min(pred_height, gt_height);
  const double uni = areas.area_a * pred_height + areas.area_b * gt_height - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double rmse(const HorizonDepth& d, const HorizonDepth& d_hat) {
  if (d.width() != d_hat.width()) throw std::invalid_argument("rmse: width mismatch");
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < d.width(); ++i) {
    if (!d.valid[i] || !d_hat.valid[i]) continue;
    const double e = d.depths[i] - d_hat.depths[i];
    sum += e * e;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("rmse: empty shared valid mask");
  return std::sqrt(sum / n);
}

double delta_acc(const HorizonDepth& d, const HorizonDepth& d_hat, double threshold) {
  if (d.width() != d_hat.width()) throw std::invalid_argument("delta_acc: width mismatch");
  int hits = 0, n = 0;
  for (int i = 0; i < d.width(); ++i) {
    if (!d.valid[i] || !d_hat.valid[i]) continue;
    const double ratio = std::max(d.depths[i] / d_hat.depths[i], d_hat.depths[i] / d.depths[i]);
    hits += ratio < threshold;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("delta_acc: empty shared valid mask");
  return static_cast<double>(hits) / n;
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// Keeps a split point while the farthest deviation from the chord is at
// least `tolerance`; tolerance 0 therefore retains every sample.
void douglas_peucker(const std::vector<Vec2>& pts, int lo, int hi, double tolerance,
                     std::vector<char>& keep) {
  if (hi - lo < 2) return;
  double max_dist = -1.0;
  int split = -1;
  for (int i = lo + 1; i < hi; ++i) {
    const double dist = point_segment_distance(pts[i], pts[lo], pts[hi]);
    if (dist > max_dist) {
      max_dist = dist;
      split = i;
    }
  }
  if (split < 0 || max_dist < tolerance) return;
  keep[split] = 1;
  douglas_peucker(pts, lo, split, tolerance, keep);
  douglas_peucker(pts, split, hi, tolerance, keep);
}

}  // namespace

std::vector<Vec2> extract_corners(const BoundarySamples& s, double tolerance) {
  std::vector<Vec2> pts;
  std::vector<int> columns;
  for (int i = 0; i < s.width(); ++i) {
    if (!s.valid[i]) continue;
    pts.push_back(s.points[i]);
    columns.push_back(i);
  }
  const int n = static_cast<int>(pts.size());
  if (n < 8) throw std::invalid_argument("extract_corners: need at least 8 valid samples");

  // Anchor the closed polyline at the two mutually farthest samples; both
  // arcs are then simplified independently.
  Vec2 centroid{};
  for (const Vec2& p : pts) centroid = centroid + (1.0 / n) * p;
  int a0 = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double dist = norm(pts[i] - centroid);
    if (dist > best) {
      best = dist;
      a0 = i;
    }
  }
  int a1 = a0;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double dist = norm(pts[i] - pts[a0]);
    if (dist > best) {
      best = dist;
      a1 = i;
    }
  }
  if (a1 == a0) a1 = (a0 + n / 2) % n;

  // Unroll circularly from a0 so both anchors are interior chord endpoints.
  std::vector<Vec2> unrolled(n + 1);
  for (int i = 0; i <= n; ++i) unrolled[i] = pts[(a0 + i) % n];
  const int mid = (a1 - a0 + n) % n;
  std::vector<char> keep(n + 1, 0);
  keep[0] = keep[mid] = keep[n] = 1;
  douglas_peucker(unrolled, 0, mid, tolerance, keep);
  douglas_peucker(unrolled, mid, n, tolerance, keep);

  std::vector<std::pair<int, Vec2>> by_column;
  for (int i = 0; i < n; ++i) {
    if (keep[i]) by_column.emplace_back(columns[(a0 + i) % n], unrolled[i]);
  }
  std::sort(by_column.begin(), by_column.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec2> corners;
  corners.reserve(by_column.size());
  for (const auto& [col, p] : by_column) corners.push_back(p);
  return corners;
}

namespace {

// O(n^3) Hungarian algorithm (potentials + augmenting paths) on a square
// cost matrix, n small here (a few dozen corners at most).
double hungarian_total(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return 0.0;
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost[match[j] - 1][j - 1];
  return total;
}

struct ImagePoint {
  double u, v;
};

// Floor and ceiling image pixels of a normalized boundary corner.
void project_corner(Vec2 corner, int image_w, int image_h, RatioValue ratio,
                    std::vector<ImagePoint>& out) {
  const double depth = norm(corner);
  if (depth < 1e-12) return;
  const double u = (std::atan2(corner.x, corner.z) / kTwoPi + 0.5) * image_w;
  const double v_floor = (0.5 + std::atan(1.0 / depth) / kPi) * image_h;
  const double v_ceil = (0.5 - std::atan(ratio.r / depth) / kPi) * image_h;
  out.push_back({u, v_floor});
  out.push_back({u, v_ceil});
}

}  // namespace

double corner_error(const std::vector<Vec2>& pred_corners, const std::vector<Vec2>& gt_corners,
                    int image_w, int image_h, RatioValue ratio) {
  if (pred_corners.empty() || gt_corners.empty()) {
    throw std::invalid_argument("corner_error: empty corner list");
  }
  std::vector<ImagePoint> pred, gt;
  for (const Vec2& c : pred_corners) project_corner(c, image_w, image_h, ratio, pred);
  for (const Vec2& c : gt_corners) project_corner(c, image_w, image_h, ratio, gt);

  const double diagonal = std::hypot(static_cast<double>(image_w), static_cast<double>(image_h));
  const int n = static_cast<int>(std::max(pred.size(), gt.size()));
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool dummy_i = i >= static_cast<int>(pred.size());
      const bool dummy_j = j >= static_cast<int>(gt.size());
      if (dummy_i && dummy_j) {
        cost[i][j] = 0.0;
      } else if (dummy_i || dummy_j) {
        cost[i][j] = diagonal;  // unmatched corner penalty
      } else {
        double du = std::abs(pred[i].u - gt[j].u);
        du = std::min(du, image_w - du);  // longitude wraps
        cost[i][j] = std::hypot(du, pred[i].v - gt[j].v);
      }
    }
  }
  return hungarian_total(cost) / (n * diagonal);
}

double pixel_error(const HorizonDepth& d_pred, RatioValue r_pred, const HorizonDepth& d_gt,
                   RatioValue r_gt, int image_h) {
  if (d_pred.width() != d_gt.width()) throw std::invalid_argument("pixel_error: width mismatch");
  const ImageRows pred = project_to_image(d_pred, r_pred, image_h);
  const ImageRows gt = project_to_image(d_gt, r_gt, image_h);
  long long disagree = 0;
  long long total = 0;
  for (int i = 0; i < d_pred.width(); ++i) {
    if (!pred.valid[i] || !gt.valid[i]) continue;
    total += image_h;
    for (int v = 0; v < image_h; ++v) {
      const double y = v + 0.5;
      const int cls_pred = y < pred.ceil_row[i] ? 0 : (y >= pred.floor_row[i] ? 2 : 1);
      const int cls_gt = y < gt.ceil_row[i] ? 0 : (y >= gt.floor_row[i] ? 2 : 1);
      disagree += cls_pred != cls_gt;
    }
  }
  if (total == 0) throw std::invalid_argument("pixel_error: empty shared valid mask");
  return static_cast<double>(disagree) / static_cast<double>(total);
}

}  // namespace mvlayout
