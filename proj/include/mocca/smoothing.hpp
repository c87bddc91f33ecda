#pragma once

#include "mocca/image.hpp"
#include "mocca/sampling.hpp"

namespace mocca {

struct SmoothingConfig {
  double lambda = 4.5e-4;  // Perona-Malik contrast parameter
  int steps = 1;
  // Weight neighbor differences by the squared neighbor position instead of
  // the squared offset; kept for comparison, offsets are the default.
  bool literal_distance_weights = false;
};

inline double perona_malik(double s, double lambda) { return 1.0 / (1.0 + s * s / lambda); }

// One (or cfg.steps) simultaneous updates of the local nonlinear smoothing
// scheme over the 8-neighborhood; borders shrink the neighborhood, no wrap.
RealImage smooth_step(const RealImage& m, const SmoothingConfig& cfg);

// Per-pattern default contrast parameters.
double smoothing_lambda_preset(const SamplingPattern& pattern);

}  // namespace mocca
