#pragma once

#include <optional>
#include <string>

#include "mocca/calibration.hpp"
#include "mocca/phantom.hpp"
#include "mocca/reconstruct.hpp"
#include "mocca/smoothing.hpp"

namespace mocca {

struct CalibrationResult {
  SensitivityCoefficients coeffs;
  SensitivitySet sens;
  std::vector<double> singular_values;  // full spectrum, descending
  int ns_used = 0;
  // Second-smallest value also under singular_gap_ratio * sigma_max: the
  // nullspace may not be one-dimensional. Diagnostic only.
  bool gap_warning = false;
};

// Steps 1-5: MOCCA matrix, singular subspace, combination, sensitivity maps.
CalibrationResult run_calibration(const KSpaceStack& stack, const CalibrationConfig& cfg,
                                  const SamplingPattern* acquired = nullptr);

struct ReconstructionResult {
  RealImage image;      // nonnegative, unit 2-norm
  SensitivitySet sens;  // phase-adjusted
  SolverKind solver_used = SolverKind::iterative;
  int iterations = 0;
  bool converged = true;
  std::vector<double> step_sup;
  std::vector<double> residual_2;
  int singular_groups = 0;
  InvertibilityReport diagnostic;
};

// Steps 6-7: solve for the image (direct for supported patterns when
// solver = automatic and beta > 0, iterative otherwise) and finalize.
ReconstructionResult run_reconstruction(const KSpaceStack& stack, const SamplingPattern& pattern,
                                        const SensitivitySet& sens, const ReconConfig& cfg);

// Declarative all-stages run driven by a key = value config file.
struct PipelineConfig {
  // simulation inputs (used when no kspace path is given)
  int n = 32;
  int coils = 4;
  std::uint64_t seed = 0;
  std::string pattern = "cols:2";
  MagnetizationKind magnetization = MagnetizationKind::dense_random;
  double sparse_fraction = 0.1;
  double noise = 0.0;
  // external inputs (override simulation)
  std::string kspace_path;
  std::string mask_path;
  std::string truth_path;
  // stage parameters
  int support_l = 5;
  int acs_m = 20;
  int num_singular = 0;
  double d_threshold = 1e-8;
  SolverKind solver = SolverKind::automatic;
  double beta = 1e-3;
  int max_iter = 200;
  double tol = 1e-9;
  std::optional<double> smooth_lambda;  // "preset" resolves per pattern
  bool smooth_preset = false;
  int smooth_steps = 1;
  double clip = 0.12;
  std::string out_dir = ".";

  static PipelineConfig load(const std::string& path);
};

void run_pipeline(const PipelineConfig& cfg);

SolverKind parse_solver(const std::string& name);
std::string solver_name(SolverKind kind);

}  // namespace mocca
