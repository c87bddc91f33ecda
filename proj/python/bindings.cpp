#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mocca/errors.hpp"
#include "mocca/io.hpp"
#include "mocca/metrics.hpp"
#include "mocca/pipeline.hpp"

namespace py = pybind11;
using namespace mocca;

namespace {

// Arrays are (N, N) with axis 0 the slow (second) coordinate and axis 1 the
// fast (first) coordinate; the centered origin sits at index N/2.

ComplexImage to_complex_image(const py::array_t<cdouble, py::array::c_style |
                                                             py::array::forcecast>& arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
    throw std::invalid_argument("expected a square (N, N) array");
  ComplexImage img(int(arr.shape(0)));
  std::copy(arr.data(), arr.data() + img.pixels(), img.values().data());
  return img;
}

RealImage to_real_image(const py::array_t<double, py::array::c_style |
                                                      py::array::forcecast>& arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
    throw std::invalid_argument("expected a square (N, N) array");
  RealImage img(int(arr.shape(0)));
  std::copy(arr.data(), arr.data() + img.pixels(), img.values().data());
  return img;
}

py::array_t<cdouble> from_complex_image(const ComplexImage& img) {
  py::array_t<cdouble> out({img.size(), img.size()});
  std::copy(img.values().begin(), img.values().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_real_image(const RealImage& img) {
  py::array_t<double> out({img.size(), img.size()});
  std::copy(img.values().begin(), img.values().end(), out.mutable_data());
  return out;
}

KSpaceStack to_stack(const py::array_t<cdouble, py::array::c_style |
                                                    py::array::forcecast>& arr) {
  if (arr.ndim() != 3 || arr.shape(1) != arr.shape(2))
    throw std::invalid_argument("expected a (coils, N, N) array");
  KSpaceStack stack(int(arr.shape(1)), int(arr.shape(0)));
  const std::size_t per = stack.coils[0].pixels();
  for (int j = 0; j < stack.num_coils(); ++j)
    std::copy(arr.data() + std::size_t(j) * per, arr.data() + std::size_t(j + 1) * per,
              stack.coils[std::size_t(j)].values().data());
  return stack;
}

py::array_t<cdouble> from_stack(const KSpaceStack& stack) {
  py::array_t<cdouble> out({stack.num_coils(), stack.n, stack.n});
  const std::size_t per = stack.coils[0].pixels();
  for (int j = 0; j < stack.num_coils(); ++j)
    std::copy(stack.coils[std::size_t(j)].values().begin(),
              stack.coils[std::size_t(j)].values().end(),
              out.mutable_data() + std::size_t(j) * per);
  return out;
}

py::array_t<cdouble> coeffs_array(const SensitivityCoefficients& coeffs) {
  const int l = coeffs.front().support_l;
  py::array_t<cdouble> out({int(coeffs.size()), l, l});
  const std::size_t per = coeffs.front().v.size();
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    std::copy(coeffs[j].v.begin(), coeffs[j].v.end(), out.mutable_data() + j * per);
  return out;
}

SensitivitySet sens_from_array(const py::array_t<cdouble, py::array::c_style |
                                                              py::array::forcecast>& arr) {
  const KSpaceStack maps = to_stack(arr);
  SensitivitySet sens;
  sens.raw = maps.coils;
  sens.normalized = maps.coils;
  sens.d = RealImage(maps.n);
  sens.d_plus = RealImage(maps.n);
  for (const auto& coil : sens.normalized)
    for (std::size_t i = 0; i < coil.pixels(); ++i) sens.d[i] += std::norm(coil[i]);
  for (std::size_t i = 0; i < sens.d.pixels(); ++i)
    sens.d_plus[i] = sens.d[i] > 0.0 ? 1.0 / sens.d[i] : 0.0;
  return sens;
}

MagnetizationKind parse_magnetization(const std::string& kind, double& fraction) {
  if (kind == "dense") return MagnetizationKind::dense_random;
  if (kind == "piecewise") return MagnetizationKind::piecewise;
  if (kind.rfind("sparse:", 0) == 0) {
    fraction = std::stod(kind.substr(7));
    return MagnetizationKind::sparse;
  }
  throw std::invalid_argument("unknown magnetization '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_mocca, mod) {
  mod.doc() = "Parallel-MRI reconstruction with model-based coil calibration";

  py::register_exception<data_error>(mod, "DataError", PyExc_ValueError);
  py::register_exception<numeric_error>(mod, "NumericError", PyExc_ArithmeticError);

  py::class_<SamplingPattern>(mod, "SamplingPattern")
      .def_readonly("n", &SamplingPattern::n)
      .def_readonly("acs_m", &SamplingPattern::acs_m)
      .def_readonly("support_l", &SamplingPattern::support_l)
      .def_property_readonly("kind", &SamplingPattern::kind_string)
      .def_property_readonly("reduction_rate", &SamplingPattern::reduction_rate)
      .def_property_readonly("mask",
                             [](const SamplingPattern& p) {
                               py::array_t<bool> out({p.n, p.n});
                               std::copy(p.mask.begin(), p.mask.end(), out.mutable_data());
                               return out;
                             })
      .def("__repr__", [](const SamplingPattern& p) {
        return "<SamplingPattern " + p.kind_string() + " n=" + std::to_string(p.n) + ">";
      });

  mod.def("make_pattern", &parse_pattern, py::arg("desc"), py::arg("n"), py::arg("acs_m"),
          py::arg("support_l"),
          "Build a sampling pattern from 'full', 'cols:S' or 'rows-cols:A,B'.");

  mod.def("dft2", [](const py::array_t<cdouble, py::array::c_style | py::array::forcecast>&
                         x) { return from_complex_image(dft2_centered(to_complex_image(x))); },
          py::arg("x"), "Centered 2-D DFT.");
  mod.def("idft2",
          [](const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& y) {
            return from_complex_image(idft2_centered(to_complex_image(y)));
          },
          py::arg("y"), "Inverse centered 2-D DFT.");
  mod.def("synthesize",
          [](const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& c,
             int n) {
            if (c.ndim() != 2 || c.shape(0) != c.shape(1))
              throw std::invalid_argument("expected a square (L, L) coefficient array");
            CoefficientVector cv(int(c.shape(0)));
            std::copy(c.data(), c.data() + cv.v.size(), cv.v.data());
            return from_complex_image(synthesize_from_support(cv, n));
          },
          py::arg("coefficients"), py::arg("n"),
          "Sample the trigonometric polynomial with the given support on the N grid.");

  mod.def("simulate",
          [](int n, int coils, int support_l, std::uint64_t seed, const std::string& pattern,
             int acs_m, double noise, const std::string& magnetization) {
            PhantomSpec spec;
            spec.n = n;
            spec.coils = coils;
            spec.support_l = support_l;
            spec.seed = seed;
            spec.noise_level = noise;
            spec.magnetization = parse_magnetization(magnetization, spec.sparse_fraction);
            const SamplingPattern pat = parse_pattern(pattern, n, acs_m, support_l);
            const SensitivityCoefficients coeffs = random_coefficients(spec);
            const ComplexImage m = random_magnetization(spec);
            const KSpaceStack complete = forward_model(m, coeffs, spec);
            KSpaceStack masked(n, coils);
            for (int j = 0; j < coils; ++j)
              for (std::size_t i = 0; i < masked.coils[0].pixels(); ++i)
                masked.coils[std::size_t(j)][i] =
                    pat.mask[i] ? complete.coils[std::size_t(j)][i] : cdouble(0.0);
            py::dict out;
            out["kspace"] = from_stack(masked);
            out["pattern"] = pat;
            out["truth"] = from_real_image(ground_truth_sos(m, coeffs));
            out["coefficients"] = coeffs_array(coeffs);
            out["magnetization"] = from_complex_image(m);
            return out;
          },
          py::arg("n"), py::arg("coils"), py::arg("support_l"), py::arg("seed"),
          py::arg("pattern") = "cols:2", py::arg("acs_m") = 8, py::arg("noise") = 0.0,
          py::arg("magnetization") = "dense",
          "Model-exact phantom: masked k-space stack, pattern, sos ground truth.");

  mod.def("calibrate",
          [](const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& kspace,
             int acs_m, int support_l, int num_singular, double d_threshold) {
            const KSpaceStack stack = to_stack(kspace);
            CalibrationConfig cfg;
            cfg.acs_m = acs_m;
            cfg.support_l = support_l;
            cfg.num_singular = num_singular;
            cfg.d_threshold_rel = d_threshold;
            const CalibrationResult res = run_calibration(stack, cfg);
            KSpaceStack maps(stack.n, stack.num_coils());
            for (int j = 0; j < stack.num_coils(); ++j)
              maps.coils[std::size_t(j)] = res.sens.normalized[std::size_t(j)];
            py::dict out;
            out["sensitivities"] = from_stack(maps);
            out["coefficients"] = coeffs_array(res.coeffs);
            out["d"] = from_real_image(res.sens.d);
            out["singular_values"] =
                py::array_t<double>(py::ssize_t(res.singular_values.size()),
                                    res.singular_values.data());
            out["num_singular_used"] = res.ns_used;
            return out;
          },
          py::arg("kspace"), py::arg("acs_m") = 20, py::arg("support_l") = 5,
          py::arg("num_singular") = 0, py::arg("d_threshold") = 1e-8,
          "Recover normalized coil sensitivities from the ACS region.");

  mod.def("reconstruct",
          [](const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& kspace,
             const SamplingPattern& pattern,
             const py::array_t<cdouble, py::array::c_style | py::array::forcecast>&
                 sensitivities,
             const std::string& solver, double beta, int max_iter, double tol) {
            const KSpaceStack stack = to_stack(kspace);
            const SensitivitySet sens = sens_from_array(sensitivities);
            ReconConfig cfg;
            cfg.solver = parse_solver(solver);
            cfg.beta = beta;
            cfg.max_iter = max_iter;
            cfg.tol = tol;
            const ReconstructionResult res = run_reconstruction(stack, pattern, sens, cfg);
            py::dict out;
            out["image"] = from_real_image(res.image);
            out["solver"] = solver_name(res.solver_used);
            out["iterations"] = res.iterations;
            out["converged"] = res.converged;
            out["residuals"] = py::array_t<double>(py::ssize_t(res.residual_2.size()),
                                                   res.residual_2.data());
            out["singular_groups"] = res.singular_groups;
            return out;
          },
          py::arg("kspace"), py::arg("pattern"), py::arg("sensitivities"),
          py::arg("solver") = "auto", py::arg("beta") = 1e-3, py::arg("max_iter") = 200,
          py::arg("tol") = 1e-9,
          "Solve for the nonnegative unit-norm magnetization image.");

  mod.def("smooth",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& image,
             double lambda, int steps, bool literal_weights) {
            SmoothingConfig cfg;
            cfg.lambda = lambda;
            cfg.steps = steps;
            cfg.literal_distance_weights = literal_weights;
            return from_real_image(smooth_step(to_real_image(image), cfg));
          },
          py::arg("image"), py::arg("lambda"), py::arg("steps") = 1,
          py::arg("literal_weights") = false, "One or more local nonlinear smoothing steps.");

  mod.def("psnr",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& ref,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& test) {
            return psnr(to_real_image(ref), to_real_image(test));
          },
          py::arg("reference"), py::arg("test"));
  mod.def("ssim",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& ref,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& test) {
            return ssim(to_real_image(ref), to_real_image(test));
          },
          py::arg("reference"), py::arg("test"));
  mod.def("relative_error_map",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& ref,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& test,
             double clip) {
            return from_real_image(relative_error_map(to_real_image(ref),
                                                      to_real_image(test), clip));
          },
          py::arg("reference"), py::arg("test"), py::arg("clip") = 0.12);

  mod.def("write_stack",
          [](const std::string& path,
             const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& arr) {
            write_stack(path, to_stack(arr));
          },
          py::arg("path"), py::arg("stack"));
  mod.def("read_stack",
          [](const std::string& path) { return from_stack(read_stack(path)); },
          py::arg("path"));
  mod.def("write_mask", &write_mask, py::arg("path"), py::arg("pattern"));
  mod.def("read_mask", &read_mask, py::arg("path"));
  mod.def("read_image",
          [](const std::string& path) { return from_real_image(read_image_auto(path)); },
          py::arg("path"));
  mod.def("write_image",
          [](const std::string& path,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& image) {
            write_image_auto(path, to_real_image(image));
          },
          py::arg("path"), py::arg("image"),
          "16-bit PGM for .pgm paths, lossless single-channel stack otherwise.");

  mod.attr("__version__") = "0.1.0";
}
