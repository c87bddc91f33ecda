#pragma once

#include <Eigen/Dense>

#include "mocca/fourier.hpp"
#include "mocca/image.hpp"
#include "mocca/sampling.hpp"

namespace mocca {

// Multi-coil k-space data, one centered N x N image per receiver channel.
struct KSpaceStack {
  int n = 0;
  std::vector<ComplexImage> coils;

  KSpaceStack() = default;
  KSpaceStack(int n_, int n_coils) : n(n_), coils(std::size_t(n_coils), ComplexImage(n_)) {}
  int num_coils() const { return int(coils.size()); }
};

struct CalibrationConfig {
  int support_l = 5;
  int acs_m = 20;
  int num_singular = 0;             // 0 = automatic: count values below sigma_max/100
  double d_threshold_rel = 1e-8;    // threshold for d as a fraction of max d
  double singular_gap_ratio = 1e-6; // diagnostics only, never alters results
  std::vector<cdouble> manual_alpha;  // overrides the V*w combination when nonempty
};

struct MoccaMatrix {
  Eigen::MatrixXcd a;  // (M^2 Nc) x (L^2 Nc), block-Hankel structure
  int coils = 0;
  int support_l = 0;
  int acs_m = 0;
};

struct SingularSubspace {
  std::vector<double> values;   // all singular values, ascending
  Eigen::MatrixXcd vectors;     // right singular vectors for the smallest values
  int coils = 0;
  int support_l = 0;
};

using SensitivityCoefficients = std::vector<CoefficientVector>;

struct SensitivitySet {
  std::vector<ComplexImage> raw;         // s
  std::vector<ComplexImage> normalized;  // s-tilde, pixelwise sos in {0, 1}
  RealImage d;       // sum of |s|^2 over coils
  RealImage d_plus;  // 1/d where d exceeds the threshold, else 0

  int n() const { return raw.empty() ? 0 : raw.front().size(); }
  int num_coils() const { return int(raw.size()); }
};

// Matrix of wrapped k-space shifts y_((v - r) mod N) with v running over
// rowGrid and r over the centered L x L support, both in enumeration order.
// When an acquisition mask is given, referencing an unacquired sample throws.
Eigen::MatrixXcd block_hankel(const ComplexImage& y, const CenteredGrid& row_grid,
                              int support_l, const SamplingPattern* acquired = nullptr);

// Block matrix with Y^(j) on the off-diagonal blocks of block row j and
// -(sum of the other coils' blocks) on the diagonal.
MoccaMatrix assemble_mocca(const KSpaceStack& stack, const CalibrationConfig& cfg,
                           const SamplingPattern* acquired = nullptr);

// Dense SVD; returns every singular value (ascending) and the ns right
// singular vectors of the smallest values, each rotated so its largest
// component is real positive.
SingularSubspace smallest_singular_vectors(const MoccaMatrix& a, int ns);

// Optional iterative route: inverse power iteration on A*A. The dense SVD
// above is the reference path.
Eigen::VectorXcd smallest_singular_vector_power(const MoccaMatrix& a, int iterations = 50);

// c = sum_v alpha_v c_v with alpha = V* w, w stacking one unit weight at the
// center index of each coil block; result normalized to unit 2-norm and split
// per coil. Throws when the combination vanishes.
SensitivityCoefficients combine_singular_vectors(const SingularSubspace& subspace,
                                                 const CalibrationConfig& cfg);

// Raw maps by synthesis, d and thresholded reciprocal, sos-normalized maps.
SensitivitySet build_sensitivities(const SensitivityCoefficients& coeffs, int n,
                                   double d_threshold_rel = 1e-8);

// Number of singular values below sigma_max / 100, clamped to [1, L^2 Nc].
int automatic_num_singular(const std::vector<double>& values_ascending);

}  // namespace mocca
