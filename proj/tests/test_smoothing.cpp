#include <doctest.h>

#include "mocca/rng.hpp"
#include "mocca/sampling.hpp"
#include "mocca/smoothing.hpp"

using namespace mocca;

namespace {

RealImage random_positive(int n, std::uint64_t seed) {
  GaussianStream g(seed, 17);
  RealImage img(n);
  for (auto& v : img.values()) v = std::abs(g.next_complex_gaussian());
  return img;
}

bool max_principle_holds(const RealImage& before, const RealImage& after) {
  const CenteredGrid grid(before.size());
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1) {
      double lo = before.at(n1, n2), hi = lo;
      for (int r2 = -1; r2 <= 1; ++r2)
        for (int r1 = -1; r1 <= 1; ++r1) {
          if (!grid.contains(n1 + r1, n2 + r2)) continue;
          lo = std::min(lo, before.at(n1 + r1, n2 + r2));
          hi = std::max(hi, before.at(n1 + r1, n2 + r2));
        }
      const double v = after.at(n1, n2);
      if (v < lo - 1e-14 || v > hi + 1e-14) return false;
    }
  return true;
}

}  // namespace

TEST_SUITE("smoothing") {

TEST_CASE("constants are exact fixed points") {
  RealImage img(8);
  for (auto& v : img.values()) v = 0.7321;
  SmoothingConfig cfg;
  cfg.lambda = 1e-3;
  const RealImage out = smooth_step(img, cfg);
  CHECK(out == img);
}

TEST_CASE("single raised interior pixel follows the closed-form update") {
  const int n = 8;
  const double b = 0.25, v = 1.0;
  RealImage img(n);
  for (auto& x : img.values()) x = b;
  img.at(0, 0) = v;

  SmoothingConfig cfg;
  cfg.lambda = 1e6;
  const RealImage out = smooth_step(img, cfg);

  // Interior pixel: tau = 1/6 and all eight neighbors share the same jump.
  const double g = perona_malik(v - b, cfg.lambda);
  CHECK(out.at(0, 0) == doctest::Approx(v + g * (b - v)).epsilon(1e-14));
  // Axial neighbor: one contribution from the raised pixel at weight 1.
  const double gn = perona_malik(v - b, cfg.lambda);
  CHECK(out.at(1, 0) == doctest::Approx(b + gn * (v - b) / 6.0).epsilon(1e-14));
  // Diagonal neighbor: weight 2 halves the flow.
  CHECK(out.at(1, 1) == doctest::Approx(b + gn * (v - b) / 12.0).epsilon(1e-14));
  // A pixel two steps away is untouched.
  CHECK(out.at(3, 0) == doctest::Approx(b));
}

TEST_CASE("maximum principle holds for random images") {
  for (double lambda : {1e-4, 1e-2, 1.0}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const RealImage img = random_positive(16, seed);
      SmoothingConfig cfg;
      cfg.lambda = lambda;
      CHECK(max_principle_holds(img, smooth_step(img, cfg)));
    }
  }
}

TEST_CASE("diffusivity decreases with contrast") {
  CHECK(perona_malik(0.1, 1e-2) > perona_malik(0.2, 1e-2));
  CHECK(perona_malik(0.0, 1e-2) == 1.0);
  // Two-pixel contrast: the large step diffuses relatively less.
  RealImage small(8), large(8);
  for (auto& v : small.values()) v = 0.0;
  for (auto& v : large.values()) v = 0.0;
  small.at(0, 0) = 0.1;
  large.at(0, 0) = 10.0;
  SmoothingConfig cfg;
  cfg.lambda = 1e-2;
  const double drop_small = (0.1 - smooth_step(small, cfg).at(0, 0)) / 0.1;
  const double drop_large = (10.0 - smooth_step(large, cfg).at(0, 0)) / 10.0;
  CHECK(drop_small > drop_large);
}

TEST_CASE("multiple steps equal repeated application") {
  const RealImage img = random_positive(12, 21);
  SmoothingConfig one;
  one.lambda = 1e-2;
  SmoothingConfig two = one;
  two.steps = 2;
  CHECK(smooth_step(smooth_step(img, one), one) == smooth_step(img, two));
}

TEST_CASE("literal distance weights differ but stay bounded") {
  const RealImage img = random_positive(12, 22);
  SmoothingConfig cfg;
  cfg.lambda = 1e-2;
  SmoothingConfig literal = cfg;
  literal.literal_distance_weights = true;
  const RealImage a = smooth_step(img, cfg);
  const RealImage b = smooth_step(img, literal);
  CHECK(a != b);
  CHECK(max_principle_holds(img, b));
}

TEST_CASE("border pixels shrink their neighborhood instead of wrapping") {
  const int n = 4;
  RealImage img(n);
  // Mark one far corner; with wrapping it would influence the opposite one.
  img.at(-2, -2) = 1.0;
  SmoothingConfig cfg;
  cfg.lambda = 1e6;
  const RealImage out = smooth_step(img, cfg);
  CHECK(out.at(1, 1) == 0.0);
  CHECK(out.at(-2, -2) < 1.0);
}

TEST_CASE("lambda presets follow the pattern") {
  CHECK(smoothing_lambda_preset(make_columns_pattern(16, 4, 3, 2)) ==
        doctest::Approx(4.5e-4));
  CHECK(smoothing_lambda_preset(make_columns_pattern(24, 4, 3, 3)) ==
        doctest::Approx(1.8e-3));
  CHECK(smoothing_lambda_preset(make_columns_pattern(16, 4, 3, 4)) ==
        doctest::Approx(1.8e-3));
  CHECK(smoothing_lambda_preset(make_rows_cols_pattern(16, 4, 3, 2, 2)) ==
        doctest::Approx(1.5e-3));
  CHECK(smoothing_lambda_preset(make_rows_cols_pattern(24, 4, 3, 2, 3)) ==
        doctest::Approx(3.5e-3));
}

TEST_CASE("invalid configurations are rejected") {
  RealImage img(8);
  SmoothingConfig cfg;
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(smooth_step(img, cfg), std::invalid_argument);
  cfg.lambda = 1.0;
  cfg.steps = 0;
  CHECK_THROWS_AS(smooth_step(img, cfg), std::invalid_argument);
}

}  // TEST_SUITE
