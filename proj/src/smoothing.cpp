#include "mocca/smoothing.hpp"

#include <cmath>

namespace mocca {

RealImage smooth_step(const RealImage& m, const SmoothingConfig& cfg) {
  if (!(cfg.lambda > 0.0))
    throw std::invalid_argument("smooth_step: lambda must be positive");
  if (cfg.steps < 1) throw std::invalid_argument("smooth_step: steps must be >= 1");

  const CenteredGrid grid(m.size());
  RealImage cur = m;
  RealImage next(m.size());
  for (int step = 0; step < cfg.steps; ++step) {
    for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2) {
      for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1) {
        const double center = cur.at(n1, n2);
        double tau_denom = 0.0;
        double flow = 0.0;
        for (int r2 = -1; r2 <= 1; ++r2) {
          for (int r1 = -1; r1 <= 1; ++r1) {
            if (r1 == 0 && r2 == 0) continue;
            const int m1 = n1 - r1, m2 = n2 - r2;
            if (!grid.contains(m1, m2)) continue;
            const double w = cfg.literal_distance_weights
                                 ? double(m1) * m1 + double(m2) * m2
                                 : double(r1) * r1 + double(r2) * r2;
            if (w <= 0.0) continue;  // literal weights degenerate at the origin
            const double neighbor = cur.at(m1, m2);
            tau_denom += 1.0 / w;
            flow += perona_malik(std::abs(center - neighbor), cfg.lambda) / w *
                    (neighbor - center);
          }
        }
        next.at(n1, n2) = tau_denom > 0.0 ? center + flow / tau_denom : center;
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

double smoothing_lambda_preset(const SamplingPattern& pattern) {
  if (pattern.kind == PatternKind::columns) {
    if (pattern.stride2 == 2) return 4.5e-4;
    if (pattern.stride2 == 3) return 1.8e-3;
    if (pattern.stride2 == 4) return 1.8e-3;
  }
  if (pattern.kind == PatternKind::rows_cols) {
    if (pattern.stride1 == 2 && pattern.stride2 == 2) return 1.5e-3;
    if (pattern.stride1 == 2 && pattern.stride2 == 3) return 3.5e-3;
  }
  return 4.5e-4;
}

}  // namespace mocca
