#pragma once

#include "mocca/image.hpp"

namespace mocca {

struct QualityReport {
  double psnr = 0.0;  // dB; +infinity when the images agree exactly
  double ssim = 0.0;
  double max_rel_err = 0.0;
  RealImage error_map;
};

// 10 log10(peak^2 / MSE) with peak taken from the reference; +infinity when
// the mean squared error vanishes.
double psnr(const RealImage& reference, const RealImage& test);

// Mean local SSIM, 11 x 11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
// dynamic range max(reference) - min(reference), symmetric boundary padding.
double ssim(const RealImage& reference, const RealImage& test);

// |test - reference| / max(reference), clipped to [0, clip].
RealImage relative_error_map(const RealImage& reference, const RealImage& test, double clip);

QualityReport quality_report(const RealImage& reference, const RealImage& test,
                             double clip = 0.12);

}  // namespace mocca
