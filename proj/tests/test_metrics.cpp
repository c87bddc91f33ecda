#include <doctest.h>

#include <cmath>

#include "mocca/metrics.hpp"
#include "mocca/rng.hpp"

using namespace mocca;

namespace {

RealImage constant_image(int n, double v) {
  RealImage img(n);
  for (auto& x : img.values()) x = v;
  return img;
}

RealImage random_image(int n, std::uint64_t seed) {
  GaussianStream g(seed, 3);
  RealImage img(n);
  for (auto& v : img.values()) v = std::abs(g.next_complex_gaussian());
  return img;
}

// Deterministic fixture pair shared with the frozen reference value below.
void fixture_pair(RealImage& ref, RealImage& test) {
  const int n = 16;
  ref = RealImage(n);
  test = RealImage(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double r = std::sin(0.3 * a) + std::cos(0.2 * b) + 0.05 * a * b / 15.0;
      ref.values()[std::size_t(a) * n + b] = r;
      test.values()[std::size_t(a) * n + b] = r + 0.1 * std::sin(0.5 * (a + b));
    }
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("psnr of identical images is infinite") {
  const RealImage img = random_image(8, 1);
  CHECK(std::isinf(psnr(img, img)));
}

TEST_CASE("psnr hand computation on a 2x2 image") {
  const RealImage ref = constant_image(2, 1.0);
  RealImage test = ref;
  test[0] = 0.0;  // MSE = 1/4
  CHECK(psnr(ref, test) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
}

TEST_CASE("doubling a uniform error costs one factor-two step in dB") {
  const RealImage ref = random_image(8, 2);
  RealImage t1 = ref, t2 = ref;
  for (std::size_t i = 0; i < ref.pixels(); ++i) {
    t1[i] += 0.01;
    t2[i] += 0.02;
  }
  CHECK(psnr(ref, t1) - psnr(ref, t2) ==
        doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-10));
}

TEST_CASE("psnr symmetry requires agreeing peaks") {
  RealImage a = random_image(8, 3);
  RealImage b = a;
  b[3] += 0.5;
  // Make peaks agree at the same pixel.
  a[0] = b[0] = 10.0;
  CHECK(psnr(a, b) == doctest::Approx(psnr(b, a)).epsilon(1e-12));
  // Distinct peaks break the symmetry.
  RealImage c = a;
  c[0] = 20.0;
  CHECK(psnr(a, c) != doctest::Approx(psnr(c, a)).epsilon(1e-12));
}

TEST_CASE("psnr rejects degenerate input") {
  CHECK_THROWS_AS(psnr(constant_image(4, 0.0), constant_image(4, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(psnr(constant_image(4, 1.0), constant_image(8, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("ssim of an image with itself is one") {
  const RealImage img = random_image(16, 4);
  CHECK(ssim(img, img) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a mean shift is penalized") {
  const RealImage ref = random_image(16, 5);
  RealImage shifted = ref;
  for (auto& v : shifted.values()) v += 2.0;
  CHECK(ssim(ref, shifted) < 1.0);
}

TEST_CASE("ssim matches the frozen independent reference") {
  RealImage ref, test;
  fixture_pair(ref, test);
  // Computed once with an independent NumPy implementation of the same
  // definition (Gaussian 11x11 window, sigma 1.5, symmetric padding).
  CHECK(ssim(ref, test) == doctest::Approx(0.9466581669272908).epsilon(1e-6));
}

TEST_CASE("ssim rejects small or flat images") {
  CHECK_THROWS_AS(ssim(constant_image(8, 1.0), constant_image(8, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ssim(constant_image(16, 1.0), random_image(16, 6)),
                  std::invalid_argument);
}

TEST_CASE("relative error map basics") {
  const RealImage ref = random_image(8, 7);
  const RealImage zero_map = relative_error_map(ref, ref, 0.12);
  for (double v : zero_map.values()) CHECK(v == 0.0);

  RealImage test = ref;
  test[5] += 100.0;
  const RealImage clipped = relative_error_map(ref, test, 0.12);
  for (std::size_t i = 0; i < clipped.pixels(); ++i) {
    CHECK(clipped[i] >= 0.0);
    CHECK(clipped[i] <= 0.12);
    if (i != 5) CHECK(clipped[i] == 0.0);
  }
  CHECK(clipped[5] == 0.12);
}

TEST_CASE("quality report carries all three measures") {
  RealImage ref, test;
  fixture_pair(ref, test);
  const QualityReport q = quality_report(ref, test, 0.12);
  CHECK(q.psnr > 0.0);
  CHECK(q.ssim <= 1.0);
  CHECK(q.max_rel_err > 0.0);
  CHECK(q.error_map.size() == 16);
}

}  // TEST_SUITE
