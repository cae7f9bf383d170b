#pragma once

// Layout evaluation metrics against simulator ground truth: floor-shape and
// volumetric IoU, depth error statistics, and corner / pixel errors in the
// equirectangular image.

#include <vector>

#include "mvlayout/geometry.hpp"
#include "mvlayout/simulator.hpp"

namespace mvlayout {

struct MetricReport {
  double iou2d = 0.0;
  double iou3d = 0.0;
  double rmse = 0.0;
  double delta1 = 0.0;
  double corner_error = 0.0;
  double pixel_error = 0.0;
};

// Intersection-over-union of two floor polygons. Areas come from a scanline
// rasterization with `resolution` rows over the union bounding box and exact
// per-row intervals; error is O(perimeter * cell) in the row direction only.
double iou2d(const FloorPolygon& pred, const FloorPolygon& gt, int resolution = 512);

// Vertical extrusion overlap: I = area(inter) * min(h), U = Ap*hp + Ag*hg - I.
// Footprint areas are exact shoelace; the intersection is rasterized.
double iou3d(const FloorPolygon& pred, double pred_height, const FloorPolygon& gt,
             double gt_height, int resolution = 512);

double rmse(const HorizonDepth& d, const HorizonDepth& d_hat);

// Fraction of shared-valid columns with max(d/d_hat, d_hat/d) < threshold.
double delta_acc(const HorizonDepth& d, const HorizonDepth& d_hat, double threshold = 1.25);

// Douglas-Peucker simplification of the closed boundary polyline; corners
// ordered by the column index of their supporting sample.
std::vector<Vec2> extract_corners(const BoundarySamples& s, double tolerance = 0.05);

// Corners projected to floor and ceiling image pixels (longitude column,
// boundary row), optimally matched; unmatched corners cost one diagonal.
// Corner coordinates are camera-height-normalized view-frame points.
double corner_error(const std::vector<Vec2>& pred_corners, const std::vector<Vec2>& gt_corners,
                    int image_w, int image_h, RatioValue ratio);

// Fraction of ceiling/wall/floor pixels the two layouts classify differently.
double pixel_error(const HorizonDepth& d_pred, RatioValue r_pred, const HorizonDepth& d_gt,
                   RatioValue r_gt, int image_h = 512);

}  // namespace mvlayout
