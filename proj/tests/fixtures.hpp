#pragma once

#include "mocca/phantom.hpp"

namespace fixtures {

struct ModelData {
  mocca::PhantomSpec spec;
  mocca::SensitivityCoefficients coeffs;
  mocca::ComplexImage m;
  mocca::KSpaceStack stack;  // complete, noiseless
};

inline ModelData model_stack(int n, int coils, int support_l, std::uint64_t seed,
                             mocca::MagnetizationKind kind =
                                 mocca::MagnetizationKind::dense_random) {
  ModelData d;
  d.spec.n = n;
  d.spec.coils = coils;
  d.spec.support_l = support_l;
  d.spec.seed = seed;
  d.spec.magnetization = kind;
  d.coeffs = mocca::random_coefficients(d.spec);
  d.m = mocca::random_magnetization(d.spec);
  d.stack = mocca::forward_model(d.m, d.coeffs, d.spec);
  return d;
}

inline mocca::KSpaceStack masked_stack(const mocca::KSpaceStack& stack,
                                       const mocca::SamplingPattern& pattern) {
  mocca::KSpaceStack out(stack.n, stack.num_coils());
  for (int j = 0; j < stack.num_coils(); ++j)
    for (std::size_t i = 0; i < out.coils[0].pixels(); ++i)
      out.coils[std::size_t(j)][i] =
          pattern.mask[i] ? stack.coils[std::size_t(j)][i] : mocca::cdouble(0.0);
  return out;
}

// Raw lattice-only pattern (no ACS fill); bypasses validation on purpose so
// solver comparisons can run on identical regular-lattice inputs.
inline mocca::SamplingPattern lattice_only_columns(int n, int stride) {
  mocca::SamplingPattern p;
  p.n = n;
  p.acs_m = 1;
  p.support_l = 1;
  p.kind = mocca::PatternKind::columns;
  p.stride2 = stride;
  p.mask.assign(std::size_t(n) * std::size_t(n), 0);
  const mocca::CenteredGrid grid(n);
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2) {
    if (((n2 % stride) + stride) % stride != 0) continue;
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1)
      p.mask[mocca::flat_index(grid, n1, n2)] = 1;
  }
  return p;
}

inline mocca::SamplingPattern lattice_only_rows_cols(int n, int s1, int s2) {
  mocca::SamplingPattern p;
  p.n = n;
  p.acs_m = 1;
  p.support_l = 1;
  p.kind = mocca::PatternKind::rows_cols;
  p.stride1 = s1;
  p.stride2 = s2;
  p.mask.assign(std::size_t(n) * std::size_t(n), 0);
  const mocca::CenteredGrid grid(n);
  auto on = [](int x, int s) { return ((x % s) + s) % s == 0; };
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1)
      if (on(n1, s1) && on(n2, s2)) p.mask[mocca::flat_index(grid, n1, n2)] = 1;
  return p;
}

}  // namespace fixtures
