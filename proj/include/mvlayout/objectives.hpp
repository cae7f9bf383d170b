#pragma once

// Scalar objective functions for pre-training and fine-tuning diagnostics.
// The fine-tuning terms weight per-column residuals by 1/sigma^2, with
// sigma clamped below so exact-consensus columns keep finite weights.

#include <vector>

#include "mvlayout/geometry.hpp"

namespace mvlayout {

constexpr double kSigmaFloor = 1e-3;

struct LossWeights {
  double mu = 0.75;
  double lambda1 = 0.1;
  double lambda2 = 0.9;
  double lambda3 = 0.08;
};

// Binary cross-entropy, predictions clamped to [1e-7, 1 - 1e-7].
double bce(const std::vector<double>& pred, const std::vector<double>& gt);

double pretrain_loss(double l_seg, double l_lay, const LossWeights& w = {});

// x_i / max(sigma_i, floor)^2, element-wise.
std::vector<double> sigma_weight(const std::vector<double>& x, const std::vector<double>& sigma,
                                 double floor = kSigmaFloor);

// L1 between sigma^-2-weighted depths, mean over the shared valid columns.
double weighted_depth_loss(const HorizonDepth& d, const HorizonDepth& d_hat,
                           const std::vector<double>& sigma);

// Cosine dissimilarity of per-segment boundary normals and L1 on adjacent
// normal-angle differences, both sigma^-2-weighted per column.
double normal_loss(const HorizonDepth& d, const HorizonDepth& d_hat,
                   const std::vector<double>& sigma);
double normal_gradient_loss(const HorizonDepth& d, const HorizonDepth& d_hat,
                            const std::vector<double>& sigma);

// Mean per-axis L1 between the two ceiling point sets, sigma^-2-weighted.
double ceiling3d_loss(const HorizonDepth& d, RatioValue r_pred, const HorizonDepth& d_pseudo,
                      RatioValue r_pseudo, const std::vector<double>& sigma);

struct FinetuneParts {
  double normal = 0.0;
  double gradient = 0.0;
  double depth = 0.0;
  double ratio = 0.0;
};

double finetune_loss(const FinetuneParts& parts, const LossWeights& w = {});

}  // namespace mvlayout
