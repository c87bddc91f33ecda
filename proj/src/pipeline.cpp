#include "mocca/pipeline.hpp"

#include <filesystem>

#include "mocca/errors.hpp"
#include "mocca/io.hpp"
#include "mocca/metrics.hpp"

namespace mocca {

CalibrationResult run_calibration(const KSpaceStack& stack, const CalibrationConfig& cfg,
                                  const SamplingPattern* acquired) {
  const MoccaMatrix a = assemble_mocca(stack, cfg, acquired);
  // One SVD serves both the automatic subspace choice and the combination.
  const int all = int(a.a.cols());
  SingularSubspace full = smallest_singular_vectors(a, all);

  CalibrationResult res;
  res.singular_values.assign(full.values.rbegin(), full.values.rend());
  res.ns_used = cfg.num_singular > 0 ? std::min(cfg.num_singular, all)
                                     : automatic_num_singular(full.values);
  if (full.values.size() > 1)
    res.gap_warning = full.values[1] < cfg.singular_gap_ratio * full.values.back();

  SingularSubspace cut;
  cut.coils = full.coils;
  cut.support_l = full.support_l;
  cut.values = full.values;
  cut.vectors = full.vectors.leftCols(res.ns_used);
  res.coeffs = combine_singular_vectors(cut, cfg);
  res.sens = build_sensitivities(res.coeffs, stack.n, cfg.d_threshold_rel);
  return res;
}

ReconstructionResult run_reconstruction(const KSpaceStack& stack,
                                        const SamplingPattern& pattern,
                                        const SensitivitySet& sens, const ReconConfig& cfg) {
  ReconstructionResult res;
  SolverKind pick = cfg.solver;
  if (pick == SolverKind::automatic)
    pick = (cfg.beta > 0.0 && direct_solver_supports(pattern)) ? SolverKind::direct
                                                               : SolverKind::iterative;
  res.solver_used = pick;

  ComplexImage m;
  if (pick == SolverKind::direct) {
    DirectResult direct = direct_block_solver(stack, pattern, sens, cfg.beta);
    res.singular_groups = direct.singular_groups;
    m = std::move(direct.m);
  } else {
    IterationResult it = jacobi_richardson(stack, pattern, sens, cfg);
    res.iterations = it.iterations;
    res.converged = it.converged;
    res.step_sup = std::move(it.step_sup);
    res.residual_2 = std::move(it.residual_2);
    m = std::move(it.m);
  }

  FinalizeResult fin = finalize_sos(m, sens);
  res.image = std::move(fin.image);
  res.sens = std::move(fin.sens);
  res.diagnostic = invertibility_diagnostic(sens, pattern);
  return res;
}

SolverKind parse_solver(const std::string& name) {
  if (name == "auto") return SolverKind::automatic;
  if (name == "iterative") return SolverKind::iterative;
  if (name == "direct") return SolverKind::direct;
  throw std::invalid_argument("unknown solver '" + name + "' (auto|iterative|direct)");
}

std::string solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::automatic:
      return "auto";
    case SolverKind::iterative:
      return "iterative";
    case SolverKind::direct:
      return "direct";
  }
  return "auto";
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  PipelineConfig cfg;
  for (const auto& [key, value] : read_key_value_file(path)) {
    try {
      if (key == "n") cfg.n = std::stoi(value);
      else if (key == "coils") cfg.coils = std::stoi(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "pattern") cfg.pattern = value;
      else if (key == "magnetization") {
        if (value == "dense") cfg.magnetization = MagnetizationKind::dense_random;
        else if (value == "piecewise") cfg.magnetization = MagnetizationKind::piecewise;
        else if (value.rfind("sparse:", 0) == 0) {
          cfg.magnetization = MagnetizationKind::sparse;
          cfg.sparse_fraction = std::stod(value.substr(7));
        } else throw data_error(path + ": unknown magnetization '" + value + "'");
      }
      else if (key == "noise") cfg.noise = std::stod(value);
      else if (key == "kspace") cfg.kspace_path = value;
      else if (key == "mask") cfg.mask_path = value;
      else if (key == "truth") cfg.truth_path = value;
      else if (key == "support-l") cfg.support_l = std::stoi(value);
      else if (key == "acs-m") cfg.acs_m = std::stoi(value);
      else if (key == "num-singular")
        cfg.num_singular = value == "auto" ? 0 : std::stoi(value);
      else if (key == "d-threshold") cfg.d_threshold = std::stod(value);
      else if (key == "solver") cfg.solver = parse_solver(value);
      else if (key == "beta") cfg.beta = std::stod(value);
      else if (key == "max-iter") cfg.max_iter = std::stoi(value);
      else if (key == "tol") cfg.tol = std::stod(value);
      else if (key == "smooth-lambda") {
        if (value == "preset") cfg.smooth_preset = true;
        else cfg.smooth_lambda = std::stod(value);
      }
      else if (key == "smooth-steps") cfg.smooth_steps = std::stoi(value);
      else if (key == "clip") cfg.clip = std::stod(value);
      else if (key == "out-dir") cfg.out_dir = value;
      else throw data_error(path + ": unknown config key '" + key + "'");
    } catch (const data_error&) {
      throw;
    } catch (const std::exception&) {
      throw data_error(path + ": invalid value for '" + key + "'");
    }
  }
  return cfg;
}

void run_pipeline(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  auto out = [&cfg](const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
  };

  KSpaceStack stack;
  SamplingPattern pattern;
  RealImage truth;
  bool have_truth = false;

  if (!cfg.kspace_path.empty()) {
    stack = read_stack(cfg.kspace_path);
    if (cfg.mask_path.empty())
      throw data_error("pipeline: external kspace requires a mask path");
    pattern = read_mask(cfg.mask_path);
    if (!cfg.truth_path.empty()) {
      truth = read_image_auto(cfg.truth_path);
      have_truth = true;
    }
  } else {
    PhantomSpec spec;
    spec.n = cfg.n;
    spec.coils = cfg.coils;
    spec.support_l = cfg.support_l;
    spec.seed = cfg.seed;
    spec.magnetization = cfg.magnetization;
    spec.sparse_fraction = cfg.sparse_fraction;
    spec.noise_level = cfg.noise;
    pattern = parse_pattern(cfg.pattern, cfg.n, cfg.acs_m, cfg.support_l);
    const SensitivityCoefficients coeffs = random_coefficients(spec);
    const ComplexImage m = random_magnetization(spec);
    KSpaceStack complete = forward_model(m, coeffs, spec);
    stack = KSpaceStack(cfg.n, cfg.coils);
    for (int j = 0; j < cfg.coils; ++j)
      for (std::size_t i = 0; i < stack.coils[0].pixels(); ++i)
        stack.coils[std::size_t(j)][i] =
            pattern.mask[i] ? complete.coils[std::size_t(j)][i] : cdouble(0.0);
    truth = ground_truth_sos(m, coeffs);
    have_truth = true;
    write_stack(out("kspace.ksp"), stack);
    write_mask(out("mask.msk"), pattern);
    write_real_stack(out("truth.img"), truth);
    write_pgm16(out("truth.pgm"), truth);
  }

  CalibrationConfig cal;
  cal.support_l = cfg.support_l;
  cal.acs_m = cfg.acs_m;
  cal.num_singular = cfg.num_singular;
  cal.d_threshold_rel = cfg.d_threshold;
  const CalibrationResult calres = run_calibration(stack, cal, &pattern);

  KSpaceStack sens_stack(stack.n, stack.num_coils());
  for (int j = 0; j < stack.num_coils(); ++j)
    sens_stack.coils[std::size_t(j)] = calres.sens.normalized[std::size_t(j)];
  write_stack(out("sens.ksp"), sens_stack);

  Report calrep;
  calrep.add("n", long(stack.n));
  calrep.add("coils", long(stack.num_coils()));
  calrep.add("support-l", long(cfg.support_l));
  calrep.add("acs-m", long(cfg.acs_m));
  calrep.add("num-singular-used", long(calres.ns_used));
  calrep.add("nullspace-gap-warning", calres.gap_warning ? "true" : "false");
  for (std::size_t k = 0; k < calres.singular_values.size(); ++k)
    calrep.add("sigma[" + std::to_string(k) + "]", calres.singular_values[k]);
  calrep.write(out("calibrate_report.txt"));

  ReconConfig rc;
  rc.beta = cfg.beta;
  rc.tol = cfg.tol;
  rc.max_iter = cfg.max_iter;
  rc.solver = cfg.solver;
  const ReconstructionResult recon = run_reconstruction(stack, pattern, calres.sens, rc);
  write_real_stack(out("recon.img"), recon.image);
  write_pgm16(out("recon.pgm"), recon.image);

  Report recrep;
  recrep.add("solver", solver_name(recon.solver_used));
  recrep.add("beta", cfg.beta);
  recrep.add("iterations", long(recon.iterations));
  recrep.add("converged", recon.converged ? "true" : "false");
  recrep.add("singular-groups", long(recon.singular_groups));
  recrep.add("reduction-rate", pattern.reduction_rate());
  for (std::size_t k = 0; k < recon.residual_2.size(); ++k)
    recrep.add("residual[" + std::to_string(k) + "]", recon.residual_2[k]);
  recrep.add("diagnostic-available", recon.diagnostic.available ? "true" : "false");
  if (recon.diagnostic.available) {
    recrep.add("diagnostic-method", recon.diagnostic.method);
    recrep.add("diagnostic-invertible", recon.diagnostic.invertible ? "true" : "false");
    if (recon.diagnostic.method == "group-svd")
      recrep.add("diagnostic-min-group-sv", recon.diagnostic.min_group_sv);
    else
      recrep.add("diagnostic-rank", recon.diagnostic.rank);
  }
  recrep.write(out("reconstruct_report.txt"));

  RealImage final_image = recon.image;
  if (cfg.smooth_lambda || cfg.smooth_preset) {
    SmoothingConfig sc;
    sc.lambda = cfg.smooth_preset ? smoothing_lambda_preset(pattern) : *cfg.smooth_lambda;
    sc.steps = cfg.smooth_steps;
    final_image = smooth_step(final_image, sc);
    write_real_stack(out("recon_smooth.img"), final_image);
    write_pgm16(out("recon_smooth.pgm"), final_image);
  }

  if (have_truth) {
    const QualityReport q = quality_report(truth, final_image, cfg.clip);
    Report mrep;
    mrep.add("psnr", q.psnr);
    mrep.add("ssim", q.ssim);
    mrep.add("max_rel_err", q.max_rel_err);
    mrep.add("clip", cfg.clip);
    mrep.write(out("metrics_report.txt"));
    write_pgm16(out("error_map.pgm"), q.error_map, cfg.clip);
  }
}

}  // namespace mocca
