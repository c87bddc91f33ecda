#include <CLI11.hpp>

#include <iostream>

#include "mocca/errors.hpp"
#include "mocca/io.hpp"
#include "mocca/metrics.hpp"
#include "mocca/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

struct SimulateArgs {
  int n = 32;
  int coils = 4;
  int support_l = 3;
  std::uint64_t seed = 0;
  std::string pattern = "cols:2";
  int acs_m = 8;
  double noise = 0.0;
  std::string magnetization = "dense";
  std::string out_kspace;
  std::string out_mask;
  std::string out_truth;
};

int do_simulate(const SimulateArgs& a) {
  mocca::PhantomSpec spec;
  spec.n = a.n;
  spec.coils = a.coils;
  spec.support_l = a.support_l;
  spec.seed = a.seed;
  spec.noise_level = a.noise;
  if (a.magnetization == "dense") {
    spec.magnetization = mocca::MagnetizationKind::dense_random;
  } else if (a.magnetization == "piecewise") {
    spec.magnetization = mocca::MagnetizationKind::piecewise;
  } else if (a.magnetization.rfind("sparse:", 0) == 0) {
    spec.magnetization = mocca::MagnetizationKind::sparse;
    spec.sparse_fraction = std::stod(a.magnetization.substr(7));
  } else {
    throw std::invalid_argument("simulate: unknown magnetization '" + a.magnetization + "'");
  }

  const mocca::SamplingPattern pattern =
      mocca::parse_pattern(a.pattern, a.n, a.acs_m, a.support_l);
  const mocca::SensitivityCoefficients coeffs = mocca::random_coefficients(spec);
  const mocca::ComplexImage m = mocca::random_magnetization(spec);
  const mocca::KSpaceStack complete = mocca::forward_model(m, coeffs, spec);

  mocca::KSpaceStack masked(a.n, a.coils);
  for (int j = 0; j < a.coils; ++j)
    for (std::size_t i = 0; i < masked.coils[0].pixels(); ++i)
      masked.coils[std::size_t(j)][i] =
          pattern.mask[i] ? complete.coils[std::size_t(j)][i] : mocca::cdouble(0.0);

  mocca::write_stack(a.out_kspace, masked);
  if (!a.out_mask.empty()) mocca::write_mask(a.out_mask, pattern);
  if (!a.out_truth.empty())
    mocca::write_image_auto(a.out_truth, mocca::ground_truth_sos(m, coeffs));
  std::cerr << "simulate: N=" << a.n << " coils=" << a.coils
            << " R=" << pattern.reduction_rate() << "\n";
  return 0;
}

struct CalibrateArgs {
  std::string kspace;
  int acs_m = 20;
  int support_l = 5;
  std::string num_singular = "auto";
  double d_threshold = 1e-8;
  std::string out_sens;
  std::string report;
};

int do_calibrate(const CalibrateArgs& a) {
  const mocca::KSpaceStack stack = mocca::read_stack(a.kspace);
  mocca::CalibrationConfig cfg;
  cfg.support_l = a.support_l;
  cfg.acs_m = a.acs_m;
  cfg.num_singular = a.num_singular == "auto" ? 0 : std::stoi(a.num_singular);
  cfg.d_threshold_rel = a.d_threshold;
  const mocca::CalibrationResult res = mocca::run_calibration(stack, cfg);

  mocca::KSpaceStack sens(stack.n, stack.num_coils());
  for (int j = 0; j < stack.num_coils(); ++j)
    sens.coils[std::size_t(j)] = res.sens.normalized[std::size_t(j)];
  mocca::write_stack(a.out_sens, sens);

  if (!a.report.empty()) {
    mocca::Report rep;
    rep.add("n", long(stack.n));
    rep.add("coils", long(stack.num_coils()));
    rep.add("support-l", long(a.support_l));
    rep.add("acs-m", long(a.acs_m));
    rep.add("num-singular-used", long(res.ns_used));
    rep.add("nullspace-gap-warning", res.gap_warning ? "true" : "false");
    for (std::size_t k = 0; k < res.singular_values.size(); ++k)
      rep.add("sigma[" + std::to_string(k) + "]", res.singular_values[k]);
    rep.write(a.report);
  }
  return 0;
}

struct ReconstructArgs {
  std::string kspace;
  std::string mask;
  std::string sens;
  std::string solver = "auto";
  double beta = 1e-3;
  int max_iter = 200;
  double tol = 1e-9;
  std::string out_image;
  std::string report;
};

int do_reconstruct(const ReconstructArgs& a) {
  const mocca::KSpaceStack stack = mocca::read_stack(a.kspace);
  const mocca::SamplingPattern pattern = mocca::read_mask(a.mask);
  const mocca::KSpaceStack sens_stack = mocca::read_stack(a.sens);
  if (pattern.n != stack.n || sens_stack.n != stack.n ||
      sens_stack.num_coils() != stack.num_coils())
    throw mocca::data_error("reconstruct: kspace, mask and sensitivities disagree in shape");

  // Rebuild the sensitivity set from the stored normalized maps; the sos
  // field of normalized maps is their own modulus square sum.
  mocca::SensitivitySet sens;
  sens.raw = sens_stack.coils;
  sens.normalized = sens_stack.coils;
  sens.d = mocca::RealImage(stack.n);
  sens.d_plus = mocca::RealImage(stack.n);
  for (const auto& coil : sens.normalized)
    for (std::size_t i = 0; i < coil.pixels(); ++i) sens.d[i] += std::norm(coil[i]);
  for (std::size_t i = 0; i < sens.d.pixels(); ++i)
    sens.d_plus[i] = sens.d[i] > 0.0 ? 1.0 / sens.d[i] : 0.0;

  mocca::ReconConfig cfg;
  cfg.solver = mocca::parse_solver(a.solver);
  cfg.beta = a.beta;
  cfg.max_iter = a.max_iter;
  cfg.tol = a.tol;
  const mocca::ReconstructionResult res =
      mocca::run_reconstruction(stack, pattern, sens, cfg);
  mocca::write_image_auto(a.out_image, res.image);

  if (!a.report.empty()) {
    mocca::Report rep;
    rep.add("solver", mocca::solver_name(res.solver_used));
    rep.add("beta", a.beta);
    rep.add("iterations", long(res.iterations));
    rep.add("converged", res.converged ? "true" : "false");
    rep.add("singular-groups", long(res.singular_groups));
    for (std::size_t k = 0; k < res.residual_2.size(); ++k)
      rep.add("residual[" + std::to_string(k) + "]", res.residual_2[k]);
    rep.add("diagnostic-available", res.diagnostic.available ? "true" : "false");
    if (res.diagnostic.available) {
      rep.add("diagnostic-method", res.diagnostic.method);
      rep.add("diagnostic-invertible", res.diagnostic.invertible ? "true" : "false");
      if (res.diagnostic.method == "group-svd") {
        rep.add("diagnostic-min-group-sv", res.diagnostic.min_group_sv);
        rep.add("diagnostic-max-group-sv", res.diagnostic.max_group_sv);
      } else {
        rep.add("diagnostic-rank", res.diagnostic.rank);
        rep.add("diagnostic-required-rank", res.diagnostic.required_rank);
      }
    }
    rep.write(a.report);
  }
  return 0;
}

struct SmoothArgs {
  std::string image;
  double lambda = 4.5e-4;
  int steps = 1;
  bool literal_weights = false;
  std::string out_image;
};

int do_smooth(const SmoothArgs& a) {
  const mocca::RealImage img = mocca::read_image_auto(a.image);
  mocca::SmoothingConfig cfg;
  cfg.lambda = a.lambda;
  cfg.steps = a.steps;
  cfg.literal_distance_weights = a.literal_weights;
  mocca::write_image_auto(a.out_image, mocca::smooth_step(img, cfg));
  return 0;
}

struct MetricsArgs {
  std::string reference;
  std::string test;
  std::string report;
  std::string out_error_map;
  double clip = 0.12;
};

int do_metrics(const MetricsArgs& a) {
  const mocca::RealImage ref = mocca::read_image_auto(a.reference);
  const mocca::RealImage test = mocca::read_image_auto(a.test);
  const mocca::QualityReport q = mocca::quality_report(ref, test, a.clip);
  mocca::Report rep;
  rep.add("psnr", q.psnr);
  rep.add("ssim", q.ssim);
  rep.add("max_rel_err", q.max_rel_err);
  rep.add("clip", a.clip);
  if (a.report.empty() || a.report == "-")
    std::cout << rep.str();
  else
    rep.write(a.report);
  if (!a.out_error_map.empty()) mocca::write_pgm16(a.out_error_map, q.error_map, a.clip);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MOCCA parallel-MRI reconstruction toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate model-exact phantom k-space data");
  simulate->add_option("--n", sim.n, "Grid size (even)")->required();
  simulate->add_option("--coils", sim.coils, "Number of receiver channels")->required();
  simulate->add_option("--support-l", sim.support_l, "Sensitivity k-space support (odd)");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--pattern", sim.pattern, "full | cols:S | rows-cols:A,B");
  simulate->add_option("--acs-m", sim.acs_m, "Calibration row-grid size M");
  simulate->add_option("--noise", sim.noise, "k-space noise level");
  simulate->add_option("--magnetization", sim.magnetization, "dense | piecewise | sparse:F");
  simulate->add_option("--out-kspace", sim.out_kspace, "Masked stack output")->required();
  simulate->add_option("--out-mask", sim.out_mask, "Sampling mask output");
  simulate->add_option("--out-truth", sim.out_truth, "Ground-truth sos image output");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Recover coil sensitivities from the ACS region");
  calibrate->add_option("--kspace", cal.kspace, "Input stack")->required();
  calibrate->add_option("--acs-m", cal.acs_m, "Calibration row-grid size M");
  calibrate->add_option("--support-l", cal.support_l, "Sensitivity k-space support (odd)");
  calibrate->add_option("--num-singular", cal.num_singular, "auto or a vector count");
  calibrate->add_option("--d-threshold", cal.d_threshold, "Relative sos threshold");
  calibrate->add_option("--out-sens", cal.out_sens, "Normalized sensitivity stack output")->required();
  calibrate->add_option("--report", cal.report, "Singular-spectrum report path");

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Solve for the magnetization image");
  reconstruct->add_option("--kspace", rec.kspace, "Input stack")->required();
  reconstruct->add_option("--mask", rec.mask, "Sampling mask")->required();
  reconstruct->add_option("--sens", rec.sens, "Normalized sensitivity stack")->required();
  reconstruct->add_option("--solver", rec.solver, "auto | iterative | direct");
  reconstruct->add_option("--beta", rec.beta, "Tikhonov weight");
  reconstruct->add_option("--max-iter", rec.max_iter, "Iteration cap");
  reconstruct->add_option("--tol", rec.tol, "Sup-norm stopping tolerance (0 = fixed count)");
  reconstruct->add_option("--out-image", rec.out_image, "Final image output")->required();
  reconstruct->add_option("--report", rec.report, "Residual/diagnostic report path");

  SmoothArgs smo;
  auto* smooth = app.add_subcommand("smooth", "Edge-preserving local smoothing");
  smooth->add_option("--image", smo.image, "Input image")->required();
  smooth->add_option("--lambda", smo.lambda, "Diffusivity contrast parameter");
  smooth->add_option("--steps", smo.steps, "Number of smoothing steps");
  smooth->add_flag("--literal-weights", smo.literal_weights,
                   "Weight by squared neighbor position instead of offset");
  smooth->add_option("--out-image", smo.out_image, "Output image")->required();

  MetricsArgs met;
  auto* metrics = app.add_subcommand("metrics", "PSNR / SSIM / relative error");
  metrics->add_option("--reference", met.reference, "Reference image")->required();
  metrics->add_option("--test", met.test, "Test image")->required();
  metrics->add_option("--report", met.report, "Report path ('-' for stdout)");
  metrics->add_option("--out-error-map", met.out_error_map, "Clipped error map PGM");
  metrics->add_option("--clip", met.clip, "Error-map clip value");

  std::string pipeline_config;
  auto* pipeline = app.add_subcommand("pipeline", "Run all stages from one config file");
  pipeline->add_option("--config", pipeline_config, "key = value config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) return do_simulate(sim);
    if (calibrate->parsed()) return do_calibrate(cal);
    if (reconstruct->parsed()) return do_reconstruct(rec);
    if (smooth->parsed()) return do_smooth(smo);
    if (metrics->parsed()) return do_metrics(met);
    if (pipeline->parsed()) {
      mocca::run_pipeline(mocca::PipelineConfig::load(pipeline_config));
      return 0;
    }
  } catch (const mocca::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const mocca::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitUsage;
}
