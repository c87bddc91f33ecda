#pragma once

#include <string>
#include <vector>

#include "mocca/calibration.hpp"
#include "mocca/image.hpp"
#include "mocca/sampling.hpp"

namespace mocca {

enum class SolverKind { automatic, iterative, direct };

struct ReconConfig {
  double beta = 1e-3;       // Tikhonov weight, 0 <= beta < N^2
  double tol = 1e-9;        // sup-norm stopping; 0 runs exactly max_iter steps
  int max_iter = 200;
  SolverKind solver = SolverKind::automatic;
};

struct IterationResult {
  ComplexImage m;
  int iterations = 0;
  bool converged = false;
  // step_sup[k] = ||m_k - m_{k-1}||_inf (k = 0 compares against zero);
  // residual_2[k] = 2-norm of the normal-equation residual at iterate k,
  // obtained as N^2 ||m_{k+1} - m_k||_2.
  std::vector<double> step_sup;
  std::vector<double> residual_2;
};

struct DirectResult {
  ComplexImage m;
  int singular_groups = 0;  // groups solved by pseudoinverse fallback
};

struct InvertibilityReport {
  bool available = false;
  std::string method;  // "group-svd", "dense-rank" or ""
  std::string message;
  bool invertible = false;
  double min_group_sv = 0.0;
  double max_group_sv = 0.0;
  long rank = 0;
  long required_rank = 0;
};

// sum_j conj(s~_j) o idft2(P y_j); equals 1/N^2 times the right-hand side of
// the regularized normal equations.
ComplexImage normal_rhs(const KSpaceStack& stack, const SamplingPattern& pattern,
                        const SensitivitySet& sens);

// Weighted Jacobi-Richardson fixed-point iteration for the regularized
// least-squares system. Converges for 0 <= beta < N^2; with beta = 0 and a
// singular system it yields the minimal 2-norm solution.
IterationResult jacobi_richardson(const KSpaceStack& stack, const SamplingPattern& pattern,
                                  const SensitivitySet& sens, const ReconConfig& cfg);

// Pattern-specialized direct solver: the normal equations decouple into small
// Hermitian systems per group of aliased pixels. Supported kinds: columns with
// stride 2, 3 or 4 (N divisible by twice the stride) and rows_cols(2,2)
// (N divisible by 4). Only samples on the regular lattice are consumed; ACS
// samples off that lattice are excluded.
DirectResult direct_block_solver(const KSpaceStack& stack, const SamplingPattern& pattern,
                                 const SensitivitySet& sens, double beta);

bool direct_solver_supports(const SamplingPattern& pattern);

// Columns coupled with `col` by the direct solver (congruent modulo N/stride).
std::vector<int> coupled_columns(int n, int stride, int col);
// The four pixels coupled with (n1, n2) under the rows_cols(2,2) pattern.
std::vector<GridIndex> coupled_pixels_rows_cols(int n, GridIndex p);

struct FinalizeResult {
  RealImage image;      // modulus, scaled to unit 2-norm
  SensitivitySet sens;  // normalized maps multiplied by sign(m)
};

// Moves the image phase into the sensitivities and returns the nonnegative
// sos-consistent image. Throws on an all-zero image.
FinalizeResult finalize_sos(const ComplexImage& m, const SensitivitySet& sens);

// For rows_cols(2,2): smallest singular value over all Nc x 4 group matrices.
// Other kinds fall back to the dense rank test, available for N <= 16 only.
InvertibilityReport invertibility_diagnostic(const SensitivitySet& sens,
                                             const SamplingPattern& pattern);

}  // namespace mocca
