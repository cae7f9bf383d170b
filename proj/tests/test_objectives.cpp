#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mvlayout/objectives.hpp"
#include "mvlayout/simulator.hpp"

using namespace mvlayout;

TEST_CASE("binary cross entropy") {
  CHECK(bce({1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1e-7).epsilon(0.01));
  CHECK(bce({0.5, 0.5, 0.5}, {1.0, 0.0, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce({0.9}, {1.0}) == doctest::Approx(-std::log(0.9)).epsilon(1e-12));
  CHECK_THROWS_AS(bce({0.5}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("pretrain loss combination") {
  CHECK(pretrain_loss(0.0, 2.5) == 2.5);
  CHECK(pretrain_loss(1.0, 0.0) == 0.75);
  CHECK(pretrain_loss(2.0, 1.0) - pretrain_loss(1.0, 1.0) == doctest::Approx(0.75));
}

TEST_CASE("sigma weighting") {
  CHECK(sigma_weight({3.0}, {1.0})[0] == 3.0);
  CHECK(sigma_weight({4.0}, {2.0})[0] == 1.0);
  const double clamped = sigma_weight({1.0}, {0.0})[0];
  CHECK(std::isfinite(clamped));
  CHECK(clamped == doctest::Approx(1.0 / 1e-6).epsilon(1e-12));
  CHECK_THROWS_AS(sigma_weight({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("weighted depth loss") {
  const int w = 16;
  const std::vector<double> ones(w, 1.0);
  const HorizonDepth d = make_horizon_depth(std::vector<double>(w, 2.0));

  CHECK(weighted_depth_loss(d, d, ones) == 0.0);

  HorizonDepth shifted = d;
  for (double& v : shifted.depths) v += 0.3;
  CHECK(weighted_depth_loss(d, shifted, ones) == doctest::Approx(0.3).epsilon(1e-12));

  const std::vector<double> doubled(w, 2.0);
  CHECK(weighted_depth_loss(d, shifted, doubled) ==
        doctest::Approx(0.3 / 4.0).epsilon(1e-12));

  HorizonDepth left = d, right = d;
  for (int i = 0; i < w; ++i) {
    left.valid[i] = i < w / 2;
    right.valid[i] = i >= w / 2;
  }
  CHECK_THROWS_AS(weighted_depth_loss(left, right, ones), std::invalid_argument);
}

TEST_CASE("normal losses") {
  // Square room seen from the center: depth profile of a 4x4 rectangle.
  const int w = 64;
  const LongitudeGrid g = longitude_grid(w);
  std::vector<double> square(w), doubled(w);
  for (int i = 0; i < w; ++i) {
    square[i] = rect_depth_analytic(4, 4, {0, 0}, g.angles[i]);
    doubled[i] = 2.0 * square[i];
  }
  const HorizonDepth d = make_horizon_depth(square);
  const HorizonDepth d2 = make_horizon_depth(doubled);
  const std::vector<double> ones(w, 1.0);

  CHECK(normal_loss(d, d, ones) == doctest::Approx(0.0));
  CHECK(normal_gradient_loss(d, d, ones) == doctest::Approx(0.0));

  // Scaling the layout leaves normals alone but moves the walls.
  CHECK(normal_loss(d, d2, ones) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(normal_gradient_loss(d, d2, ones) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(weighted_depth_loss(d, d2, ones) > 0.1);

  // A genuinely different shape has a positive normal loss.
  std::vector<double> wide(w);
  for (int i = 0; i < w; ++i) wide[i] = rect_depth_analytic(6, 3, {0.5, 0}, g.angles[i]);
  const HorizonDepth other = make_horizon_depth(wide);
  CHECK(normal_loss(d, other, ones) > 1e-3);

  // Shifting both layouts by the same whole-grid rotation changes nothing.
  const int k = 13;
  std::vector<double> square_s(w), wide_s(w);
  for (int i = 0; i < w; ++i) {
    square_s[i] = square[(i + k) % w];
    wide_s[i] = wide[(i + k) % w];
  }
  CHECK(normal_loss(make_horizon_depth(square_s), make_horizon_depth(wide_s), ones) ==
        doctest::Approx(normal_loss(d, other, ones)).epsilon(1e-12));
  CHECK(normal_gradient_loss(make_horizon_depth(square_s), make_horizon_depth(wide_s), ones) ==
        doctest::Approx(normal_gradient_loss(d, other, ones)).epsilon(1e-12));
}

TEST_CASE("ceiling-3D loss") {
  const int w = 32;
  const HorizonDepth d = make_horizon_depth(std::vector<double>(w, 1.5));
  const std::vector<double> ones(w, 1.0);

  CHECK(ceiling3d_loss(d, RatioValue{0.8}, d, RatioValue{0.8}, ones) == 0.0);

  // Same depths, ratios 1 vs 0.5: only y differs, by 0.5, so the loss is
  // 0.5 / 3 regardless of the depth values.
  CHECK(ceiling3d_loss(d, RatioValue{1.0}, d, RatioValue{0.5}, ones) ==
        doctest::Approx(0.5 / 3.0).epsilon(1e-13));

  double prev = 0.0;
  for (double r : {0.6, 0.8, 1.1, 1.6}) {
    const double loss = ceiling3d_loss(d, RatioValue{r}, d, RatioValue{0.5}, ones);
    CHECK(loss >= prev);
    prev = loss;
  }

  CHECK_THROWS_AS(ceiling3d_loss(d, RatioValue{-1.0}, d, RatioValue{0.5}, ones),
                  std::invalid_argument);

  // Scaling sigma by k scales the loss by 1/k^2.
  HorizonDepth shifted = d;
  for (double& v : shifted.depths) v += 0.2;
  const std::vector<double> twos(w, 2.0);
  const double base = ceiling3d_loss(shifted, RatioValue{1.0}, d, RatioValue{1.0}, ones);
  const double scaled = ceiling3d_loss(shifted, RatioValue{1.0}, d, RatioValue{1.0}, twos);
  CHECK(scaled == doctest::Approx(base / 4.0).epsilon(1e-12));
}

TEST_CASE("fine-tune combination") {
  CHECK(finetune_loss({0, 0, 0, 0}) == 0.0);
  CHECK(finetune_loss({1, 1, 1, 1}) == doctest::Approx(1.18).epsilon(1e-15));
  const double base = finetune_loss({1, 1, 1, 1});
  CHECK(finetune_loss({2, 1, 1, 1}) - base == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(finetune_loss({1, 1, 2, 1}) - base == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(finetune_loss({1, 1, 1, 2}) - base == doctest::Approx(0.08).epsilon(1e-12));
}

TEST_CASE("finite differences match the analytic subgradient") {
  const int w = 24;
  const LongitudeGrid g = longitude_grid(w);
  std::vector<double> base(w), target(w), sigma(w);
  for (int i = 0; i < w; ++i) {
    base[i] = 1.5 + 0.3 * std::sin(3.0 * g.angles[i]);
    target[i] = base[i] + 0.2 + 0.05 * std::cos(g.angles[i]);  // keeps |d - d_hat| > 0
    sigma[i] = 0.5 + 0.1 * (i % 4);
  }
  const HorizonDepth d = make_horizon_depth(target);
  const double h = 1e-5;

  SUBCASE("weighted depth loss") {
    for (int k : {0, 7, 15}) {
      auto eval = [&](double delta) {
        std::vector<double> perturbed = base;
        perturbed[k] += delta;
        return weighted_depth_loss(d, make_horizon_depth(perturbed), sigma);
      };
      const double fd = (eval(h) - eval(-h)) / (2 * h);
      const double s = std::max(sigma[k], kSigmaFloor);
      const double analytic = -std::copysign(1.0, target[k] - base[k]) / (w * s * s);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
    }
  }

  SUBCASE("ceiling-3D loss") {
    const RatioValue r{0.9}, rp{1.1};
    for (int k : {2, 9, 20}) {
      auto eval = [&](double delta) {
        std::vector<double> perturbed = base;
        perturbed[k] += delta;
        return ceiling3d_loss(make_horizon_depth(perturbed), r, d, rp, sigma);
      };
      const double fd = (eval(h) - eval(-h)) / (2 * h);
      const double s = std::max(sigma[k], kSigmaFloor);
      // x and z terms contribute |sin| and |cos| of the column longitude;
      // the y term does not depend on the depth.
      const double sign = std::copysign(1.0, base[k] - target[k]);
      const double analytic = sign *
                              (std::abs(std::sin(g.angles[k])) +
                               std::abs(std::cos(g.angles[k]))) /
                              (3.0 * w * s * s);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
    }
  }
}
