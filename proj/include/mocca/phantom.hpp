#pragma once

#include <cstdint>

#include "mocca/calibration.hpp"
#include "mocca/image.hpp"
#include "mocca/sampling.hpp"

namespace mocca {

enum class MagnetizationKind { dense_random, piecewise, sparse };

// Deterministic generator of multi-coil data that satisfies the discrete
// model exactly, so uniqueness and nullspace guarantees become runnable tests.
struct PhantomSpec {
  int n = 32;
  int coils = 4;
  int support_l = 3;
  std::uint64_t seed = 0;
  MagnetizationKind magnetization = MagnetizationKind::dense_random;
  double sparse_fraction = 0.1;  // used by MagnetizationKind::sparse
  double noise_level = 0.0;      // k-space complex Gaussian noise scale

  void validate() const;
};

// Seeded coefficient vectors, redrawn until every coil has nonvanishing
// boundary coefficient sums on all four edges of the support; the stacked
// vector is normalized to unit 2-norm.
SensitivityCoefficients random_coefficients(const PhantomSpec& spec);

// Seeded magnetization image. Sparse and piecewise kinds are redrawn until
// the interpolation matrix on the doubled support has full rank.
ComplexImage random_magnetization(const PhantomSpec& spec);

// y_j = dft2(m o s_j) plus optional circularly symmetric k-space noise.
KSpaceStack forward_model(const ComplexImage& m, const SensitivityCoefficients& coeffs,
                          const PhantomSpec& spec);

// |m| * sqrt(sum_j |s_j|^2), scaled to unit 2-norm: the sos image the
// pipeline reconstructs under exact-model data.
RealImage ground_truth_sos(const ComplexImage& m, const SensitivityCoefficients& coeffs);

// Regular lattice united with the fully sampled ACS block.
SamplingPattern make_pattern(PatternKind kind, int n, int acs_m, int support_l,
                             int stride1 = 1, int stride2 = 1);

}  // namespace mocca
