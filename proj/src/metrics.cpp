#include "mocca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mocca {
namespace {

constexpr int kWindow = 11;
constexpr int kHalf = kWindow / 2;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

void check_shapes(const RealImage& a, const RealImage& b, const char* who) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(who) + ": image shapes differ");
}

double max_value(const RealImage& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x.values()) m = std::max(m, v);
  return m;
}

// Symmetric (edge-repeating) extension index.
int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

}  // namespace

double psnr(const RealImage& reference, const RealImage& test) {
  check_shapes(reference, test, "psnr");
  const double peak = max_value(reference);
  bool all_zero = true;
  for (double v : reference.values())
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) throw std::invalid_argument("psnr: reference image is all zero");

  double mse = 0.0;
  for (std::size_t i = 0; i < reference.pixels(); ++i) {
    const double d = reference[i] - test[i];
    mse += d * d;
  }
  mse /= double(reference.pixels());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const RealImage& reference, const RealImage& test) {
  check_shapes(reference, test, "ssim");
  const int n = reference.size();
  if (n < kWindow)
    throw std::invalid_argument("ssim: image must be at least 11 pixels per side");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : reference.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double range = hi - lo;
  if (!(range > 0.0)) throw std::invalid_argument("ssim: degenerate dynamic range");
  const double c1 = (kK1 * range) * (kK1 * range);
  const double c2 = (kK2 * range) * (kK2 * range);

  double kernel[kWindow][kWindow];
  double ksum = 0.0;
  for (int i = -kHalf; i <= kHalf; ++i)
    for (int j = -kHalf; j <= kHalf; ++j) {
      const double w = std::exp(-(double(i) * i + double(j) * j) / (2.0 * kSigma * kSigma));
      kernel[i + kHalf][j + kHalf] = w;
      ksum += w;
    }
  for (auto& row : kernel)
    for (auto& w : row) w /= ksum;

  // Raster access on the padded grid (enumeration order, symmetric extension).
  auto sample = [n](const RealImage& img, int a, int b) {
    return img.values()[std::size_t(reflect(a, n)) * std::size_t(n) +
                        std::size_t(reflect(b, n))];
  };

  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
      for (int i = -kHalf; i <= kHalf; ++i) {
        for (int j = -kHalf; j <= kHalf; ++j) {
          const double w = kernel[i + kHalf][j + kHalf];
          const double x = sample(reference, a + i, b + j);
          const double y = sample(test, a + i, b + j);
          mx += w * x;
          my += w * y;
          xx += w * x * x;
          yy += w * y * y;
          xy += w * x * y;
        }
      }
      const double vx = xx - mx * mx;
      const double vy = yy - my * my;
      const double cxy = xy - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / (double(n) * double(n));
}

RealImage relative_error_map(const RealImage& reference, const RealImage& test, double clip) {
  check_shapes(reference, test, "relative_error_map");
  if (!(clip > 0.0)) throw std::invalid_argument("relative_error_map: clip must be positive");
  const double peak = max_value(reference);
  if (!(peak > 0.0))
    throw std::invalid_argument("relative_error_map: reference maximum must be positive");
  RealImage out(reference.size());
  for (std::size_t i = 0; i < out.pixels(); ++i)
    out[i] = std::min(std::abs(test[i] - reference[i]) / peak, clip);
  return out;
}

QualityReport quality_report(const RealImage& reference, const RealImage& test, double clip) {
  QualityReport q;
  q.psnr = psnr(reference, test);
  q.ssim = ssim(reference, test);
  q.error_map = relative_error_map(reference, test, clip);
  const double peak = max_value(reference);
  double worst = 0.0;
  for (std::size_t i = 0; i < reference.pixels(); ++i)
    worst = std::max(worst, std::abs(test[i] - reference[i]) / peak);
  q.max_rel_err = worst;
  return q;
}

}  // namespace mocca
