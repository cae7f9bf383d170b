#include "mvlayout/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvlayout {

double bce(const std::vector<double>& pred, const std::vector<double>& gt) {
  if (pred.size() != gt.size()) throw std::invalid_argument("bce: length mismatch");
  if (pred.empty()) throw std::invalid_argument("bce: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], 1e-7, 1.0 - 1e-7);
    sum += gt[i] * std::log(p) + (1.0 - gt[i]) * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(pred.size());
}

double pretrain_loss(double l_seg, double l_lay, const LossWeights& w) {
  return w.mu * l_seg + l_lay;
}

std::vector<double> sigma_weight(const std::vector<double>& x, const std::vector<double>& sigma,
                                 double floor) {
  if (x.size() != sigma.size()) throw std::invalid_argument("sigma_weight: length mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = std::max(sigma[i], floor);
    out[i] = x[i] / (s * s);
  }
  return out;
}

namespace {

double inv_sigma_sq(const std::vector<double>& sigma, std::size_t i) {
  const double s = std::max(sigma[i], kSigmaFloor);
  return 1.0 / (s * s);
}

void check_widths(const HorizonDepth& d, const HorizonDepth& d_hat,
                  const std::vector<double>& sigma, const char* who) {
  if (d.width() != d_hat.width() || sigma.size() != d.depths.size()) {
    throw std::invalid_argument(std::string(who) + ": width mismatch");
  }
}

}  // namespace

double weighted_depth_loss(const HorizonDepth& d, const HorizonDepth& d_hat,
                           const std::vector<double>& sigma) {
  check_widths(d, d_hat, sigma, "weighted_depth_loss");
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < d.width(); ++i) {
    if (!d.valid[i] || !d_hat.valid[i]) continue;
    sum += std::abs(d.depths[i] - d_hat.depths[i]) * inv_sigma_sq(sigma, i);
    ++n;
  }
  if (n == 0) throw std::invalid_argument("weighted_depth_loss: disjoint valid masks");
  return sum / n;
}

namespace {

// Unit normals of the closed boundary polyline segments (column i to i+1).
// Degenerate segments are flagged invalid and skipped by both normal losses.
struct SegmentNormals {
  std::vector<Vec2> normals;
  std::vector<std::uint8_t> valid;
};

SegmentNormals boundary_normals(const HorizonDepth& d, const LongitudeGrid& grid,
                                const std::vector<std::uint8_t>& shared_valid) {
  const int w = d.width();
  SegmentNormals out;
  out.normals.resize(w);
  out.valid.assign(w, 0);
  for (int i = 0; i < w; ++i) {
    const int j = (i + 1) % w;
    if (!shared_valid[i] || !shared_valid[j]) continue;
    const Vec2 a{d.depths[i] * std::sin(grid.angles[i]), d.depths[i] * std::cos(grid.angles[i])};
    const Vec2 b{d.depths[j] * std::sin(grid.angles[j]), d.depths[j] * std::cos(grid.angles[j])};
    const Vec2 t = b - a;
    const double len = norm(t);
    if (len < 1e-12) continue;
    out.normals[i] = {t.z / len, -t.x / len};
    out.valid[i] = 1;
  }
  return out;
}

std::vector<std::uint8_t> shared_mask(const HorizonDepth& d, const HorizonDepth& d_hat) {
  std::vector<std::uint8_t> mask(d.depths.size(), 0);
  for (int i = 0; i < d.width(); ++i) mask[i] = d.valid[i] && d_hat.valid[i];
  return mask;
}

}  // namespace

double normal_loss(const HorizonDepth& d, const HorizonDepth& d_hat,
                   const std::vector<double>& sigma) {
  check_widths(d, d_hat, sigma, "normal_loss");
  const LongitudeGrid grid = longitude_grid(d.width());
  const auto mask = shared_mask(d, d_hat);
  const SegmentNormals n = boundary_normals(d, grid, mask);
  const SegmentNormals n_hat = boundary_normals(d_hat, grid, mask);
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < d.width(); ++i) {
    if (!n.valid[i] || !n_hat.valid[i]) continue;
    sum += (1.0 - dot(n.normals[i], n_hat.normals[i])) * inv_sigma_sq(sigma, i);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("normal_loss: need >= 3 valid consecutive columns");
  return sum / count;
}

double normal_gradient_loss(const HorizonDepth& d, const HorizonDepth& d_hat,
                            const std::vector<double>& sigma) {
  check_widths(d, d_hat, sigma, "normal_gradient_loss");
  const LongitudeGrid grid = longitude_grid(d.width());
  const auto mask = shared_mask(d, d_hat);
  const SegmentNormals n = boundary_normals(d, grid, mask);
  const SegmentNormals n_hat = boundary_normals(d_hat, grid, mask);
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < d.width(); ++i) {
    const int j = (i + 1) % d.width();
    if (!n.valid[i] || !n.valid[j] || !n_hat.valid[i] || !n_hat.valid[j]) continue;
    const double turn = std::atan2(cross(n.normals[i], n.normals[j]),
                                   dot(n.normals[i], n.normals[j]));
    const double turn_hat = std::atan2(cross(n_hat.normals[i], n_hat.normals[j]),
                                       dot(n_hat.normals[i], n_hat.normals[j]));
    sum += std::abs(turn - turn_hat) * inv_sigma_sq(sigma, i);
    ++count;
  }
  if (count == 0) {
    throw std::invalid_argument("normal_gradient_loss: need >= 3 valid consecutive columns");
  }
  return sum / count;
}

double ceiling3d_loss(const HorizonDepth& d, RatioValue r_pred, const HorizonDepth& d_pseudo,
                      RatioValue r_pseudo, const std::vector<double>& sigma) {
  check_widths(d, d_pseudo, sigma, "ceiling3d_loss");
  if (!(r_pred.r > 0.0) || !(r_pseudo.r > 0.0)) {
    throw std::invalid_argument("ceiling3d_loss: ratios must be > 0");
  }
  const LongitudeGrid grid = longitude_grid(d.width());
  const Points3D pred = ceiling_points(depth_to_points(d, grid), r_pred);
  const Points3D pseudo = ceiling_points(depth_to_points(d_pseudo, grid), r_pseudo);
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < d.width(); ++i) {
    if (!pred.valid[i] || !pseudo.valid[i]) continue;
    const double w = inv_sigma_sq(sigma, i);
    sum += (std::abs(pred.points[i].x - pseudo.points[i].x) +
            std::abs(pred.points[i].y - pseudo.points[i].y) +
            std::abs(pred.points[i].z - pseudo.points[i].z)) *
           w;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("ceiling3d_loss: disjoint valid masks");
  return sum / (3.0 * n);
}

double finetune_loss(const FinetuneParts& parts, const LossWeights& w) {
  // Summation order keeps the all-ones case with the default weights at the
  // double nearest 1.18.
  return w.lambda2 * parts.depth + w.lambda3 * parts.ratio +
         w.lambda1 * (parts.normal + parts.gradient);
}

}  // namespace mvlayout
