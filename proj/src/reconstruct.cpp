#include "mocca/reconstruct.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

#include "mocca/errors.hpp"
#include "mocca/fourier.hpp"

namespace mocca {
namespace {

void check_shapes(const KSpaceStack& stack, const SamplingPattern& pattern,
                  const SensitivitySet& sens) {
  if (stack.num_coils() < 1) throw std::invalid_argument("reconstruct: empty stack");
  if (sens.num_coils() != stack.num_coils())
    throw std::invalid_argument("reconstruct: coil counts differ between data and maps");
  if (pattern.n != stack.n || sens.n() != stack.n)
    throw std::invalid_argument("reconstruct: grid sizes differ");
  for (const auto& c : stack.coils)
    if (c.size() != stack.n) throw std::invalid_argument("reconstruct: ragged stack");
}

ComplexImage apply_mask(const ComplexImage& y, const SamplingPattern& pattern) {
  ComplexImage out = y;
  for (std::size_t i = 0; i < out.pixels(); ++i)
    if (!pattern.mask[i]) out[i] = 0.0;
  return out;
}

// Acquisition restricted to the regular lattice of the pattern kind; ACS
// samples off that lattice are dropped (the block decoupling holds only
// for the pure lattice).
SamplingPattern regular_lattice_only(const SamplingPattern& pattern) {
  SamplingPattern p = pattern;
  const CenteredGrid grid(pattern.n);
  auto on = [](int x, int s) { return ((x % s) + s) % s == 0; };
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1) {
      bool keep = false;
      switch (pattern.kind) {
        case PatternKind::full:
          keep = true;
          break;
        case PatternKind::columns:
          keep = on(n2, pattern.stride2);
          break;
        case PatternKind::rows_cols:
          keep = on(n1, pattern.stride1) && on(n2, pattern.stride2);
          break;
        case PatternKind::explicit_mask:
          keep = pattern.acquired(n1, n2);
          break;
      }
      p.mask[flat_index(grid, n1, n2)] = keep ? 1 : 0;
    }
  return p;
}

ComplexImage accumulate_adjoint(const KSpaceStack& masked, const SensitivitySet& sens) {
  ComplexImage acc(masked.n);
  for (int j = 0; j < masked.num_coils(); ++j) {
    const ComplexImage t = idft2_centered(masked.coils[j]);
    const ComplexImage& s = sens.normalized[std::size_t(j)];
    for (std::size_t i = 0; i < acc.pixels(); ++i) acc[i] += std::conj(s[i]) * t[i];
  }
  return acc;
}

}  // namespace

ComplexImage normal_rhs(const KSpaceStack& stack, const SamplingPattern& pattern,
                        const SensitivitySet& sens) {
  check_shapes(stack, pattern, sens);
  KSpaceStack masked(stack.n, stack.num_coils());
  for (int j = 0; j < stack.num_coils(); ++j)
    masked.coils[std::size_t(j)] = apply_mask(stack.coils[std::size_t(j)], pattern);
  return accumulate_adjoint(masked, sens);
}

IterationResult jacobi_richardson(const KSpaceStack& stack, const SamplingPattern& pattern,
                                  const SensitivitySet& sens, const ReconConfig& cfg) {
  check_shapes(stack, pattern, sens);
  const double n2 = double(stack.n) * double(stack.n);
  if (cfg.beta < 0.0 || cfg.beta >= n2)
    throw std::invalid_argument("jacobi_richardson: beta must lie in [0, N^2)");
  if (cfg.tol < 0.0) throw std::invalid_argument("jacobi_richardson: negative tolerance");
  if (cfg.max_iter < 1) throw std::invalid_argument("jacobi_richardson: max_iter must be >= 1");

  const int nc = stack.num_coils();
  KSpaceStack y0(stack.n, nc);
  for (int j = 0; j < nc; ++j)
    y0.coils[std::size_t(j)] = apply_mask(stack.coils[std::size_t(j)], pattern);

  IterationResult res;
  res.m = accumulate_adjoint(y0, sens);

  const double damp = 1.0 - cfg.beta / n2;
  ComplexImage scratch(stack.n);
  ComplexImage next(stack.n);
  double diff = sup_norm(res.m);  // first step compares against zero
  for (;;) {
    res.step_sup.push_back(diff);
    if (cfg.tol > 0.0 && diff <= cfg.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= cfg.max_iter) break;

    for (auto& v : next.values()) v = 0.0;
    for (int j = 0; j < nc; ++j) {
      const ComplexImage& s = sens.normalized[std::size_t(j)];
      const ComplexImage& y0j = y0.coils[std::size_t(j)];
      for (std::size_t i = 0; i < scratch.pixels(); ++i) scratch[i] = s[i] * res.m[i];
      dft2_centered_inplace(scratch);
      for (std::size_t i = 0; i < scratch.pixels(); ++i) {
        const double w = pattern.mask[i] ? -cfg.beta / n2 : damp;
        scratch[i] = w * scratch[i] + y0j[i];
      }
      idft2_centered_inplace(scratch);
      for (std::size_t i = 0; i < next.pixels(); ++i)
        next[i] += std::conj(s[i]) * scratch[i];
    }

    double step2 = 0.0;
    diff = 0.0;
    for (std::size_t i = 0; i < next.pixels(); ++i) {
      const double d = std::abs(next[i] - res.m[i]);
      diff = std::max(diff, d);
      step2 += d * d;
    }
    res.residual_2.push_back(n2 * std::sqrt(step2));

    std::swap(res.m, next);
    ++res.iterations;
  }
  return res;
}

bool direct_solver_supports(const SamplingPattern& pattern) {
  if (pattern.kind == PatternKind::columns)
    return (pattern.stride2 == 2 || pattern.stride2 == 3 || pattern.stride2 == 4) &&
           pattern.n % (2 * pattern.stride2) == 0;
  if (pattern.kind == PatternKind::rows_cols)
    return pattern.stride1 == 2 && pattern.stride2 == 2 && pattern.n % 4 == 0;
  return false;
}

std::vector<int> coupled_columns(int n, int stride, int col) {
  if (stride < 1 || n % (2 * stride) != 0)
    throw std::invalid_argument("coupled_columns: incompatible stride");
  const int period = n / stride;
  int base = col;
  while (base - period >= -n / 2) base -= period;
  std::vector<int> out(std::size_t(stride), 0);
  for (int t = 0; t < stride; ++t) out[std::size_t(t)] = base + t * period;
  return out;
}

std::vector<GridIndex> coupled_pixels_rows_cols(int n, GridIndex p) {
  if (n % 4 != 0)
    throw std::invalid_argument("coupled_pixels_rows_cols: N must be a multiple of 4");
  const int q = n / 4;
  // Fold onto the group representative in the centered half grid.
  const int k0 = p.n1 < 0 ? p.n1 + q : p.n1 - q;
  const int l0 = p.n2 < 0 ? p.n2 + q : p.n2 - q;
  return {{k0 - q, l0 - q}, {k0 - q, l0 + q}, {k0 + q, l0 - q}, {k0 + q, l0 + q}};
}

DirectResult direct_block_solver(const KSpaceStack& stack, const SamplingPattern& pattern,
                                 const SensitivitySet& sens, double beta) {
  check_shapes(stack, pattern, sens);
  if (beta < 0.0) throw std::invalid_argument("direct_block_solver: beta must be nonnegative");
  if (!direct_solver_supports(pattern))
    throw std::invalid_argument(
        "direct_block_solver: pattern must be cols:2, cols:3, cols:4 or rows-cols:2,2 "
        "with compatible N");

  const int n = stack.n;
  const double n2 = double(n) * double(n);
  const int nc = stack.num_coils();
  const SamplingPattern regular = regular_lattice_only(pattern);

  KSpaceStack masked(n, nc);
  for (int j = 0; j < nc; ++j)
    masked.coils[std::size_t(j)] = apply_mask(stack.coils[std::size_t(j)], regular);
  const ComplexImage rhs = accumulate_adjoint(masked, sens);

  DirectResult res;
  res.m = ComplexImage(n);

  // Solves the g x g Hermitian system for one aliased pixel group.
  auto solve_group = [&](const std::vector<GridIndex>& pixels) {
    const int g = int(pixels.size());
    Eigen::MatrixXcd gram = (double(g) * beta / n2) *
                            Eigen::MatrixXcd::Identity(g, g);
    for (int j = 0; j < nc; ++j) {
      Eigen::VectorXcd sv(g);
      for (int t = 0; t < g; ++t)
        sv[t] = sens.normalized[std::size_t(j)].at(pixels[std::size_t(t)].n1,
                                                   pixels[std::size_t(t)].n2);
      gram += sv.conjugate() * sv.transpose();
    }
    Eigen::VectorXcd b(g);
    for (int t = 0; t < g; ++t)
      b[t] = double(g) * rhs.at(pixels[std::size_t(t)].n1, pixels[std::size_t(t)].n2);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    if (eig.info() != Eigen::Success)
      throw numeric_error("direct_block_solver: group eigendecomposition failed");
    const auto& ev = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(ev[g - 1], 0.0);
    bool singular = false;
    Eigen::VectorXcd proj = eig.eigenvectors().adjoint() * b;
    for (int t = 0; t < g; ++t) {
      if (ev[t] > cutoff) {
        proj[t] /= ev[t];
      } else {
        proj[t] = 0.0;  // minimal-norm fallback on a rank-deficient group
        singular = true;
      }
    }
    if (singular) ++res.singular_groups;
    const Eigen::VectorXcd sol = eig.eigenvectors() * proj;
    for (int t = 0; t < g; ++t)
      res.m.at(pixels[std::size_t(t)].n1, pixels[std::size_t(t)].n2) = sol[t];
  };

  const CenteredGrid grid(n);
  if (pattern.kind == PatternKind::columns) {
    const int stride = pattern.stride2;
    const int period = n / stride;
    for (int k = grid.lo(); k <= grid.hi(); ++k) {
      for (int base = -n / 2; base < -n / 2 + period; ++base) {
        std::vector<GridIndex> pixels(std::size_t(stride), GridIndex{});
        for (int t = 0; t < stride; ++t) pixels[std::size_t(t)] = {k, base + t * period};
        solve_group(pixels);
      }
    }
  } else {
    const int q = n / 4;
    for (int k = -q; k < q; ++k)
      for (int l = -q; l < q; ++l)
        solve_group({{k - q, l - q}, {k - q, l + q}, {k + q, l - q}, {k + q, l + q}});
  }
  return res;
}

FinalizeResult finalize_sos(const ComplexImage& m, const SensitivitySet& sens) {
  if (sens.n() != m.size())
    throw std::invalid_argument("finalize_sos: grid sizes differ");
  FinalizeResult out{RealImage(m.size()), sens};
  double norm = 0.0;
  for (std::size_t i = 0; i < m.pixels(); ++i) {
    out.image[i] = std::abs(m[i]);
    norm += out.image[i] * out.image[i];
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw numeric_error("finalize_sos: cannot normalize an all-zero image");

  for (auto& coil : out.sens.normalized) {
    for (std::size_t i = 0; i < coil.pixels(); ++i) {
      const cdouble sign = out.image[i] > 0.0 ? m[i] / out.image[i] : cdouble(0.0);
      coil[i] *= sign;
    }
  }
  for (auto& v : out.image.values()) v /= norm;
  return out;
}

InvertibilityReport invertibility_diagnostic(const SensitivitySet& sens,
                                             const SamplingPattern& pattern) {
  InvertibilityReport rep;
  const int n = sens.n();
  if (pattern.n != n)
    throw std::invalid_argument("invertibility_diagnostic: grid sizes differ");
  const int nc = sens.num_coils();

  if (pattern.kind == PatternKind::rows_cols && pattern.stride1 == 2 &&
      pattern.stride2 == 2 && n % 4 == 0) {
    rep.available = true;
    rep.method = "group-svd";
    const int q = n / 4;
    double min_sv = std::numeric_limits<double>::infinity();
    double max_sv = 0.0;
    for (int k = -q; k < q; ++k) {
      for (int l = -q; l < q; ++l) {
        Eigen::MatrixXcd g(nc, 4);
        const int offs[4][2] = {{q, q}, {q, -q}, {-q, q}, {-q, -q}};
        for (int j = 0; j < nc; ++j)
          for (int t = 0; t < 4; ++t)
            g(j, t) = sens.raw[std::size_t(j)].at(k + offs[t][0], l + offs[t][1]);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
        const auto& sv = svd.singularValues();
        // As a map on the 4 coupled pixels the matrix has 4 singular values;
        // fewer than 4 coils leaves the trailing ones at zero.
        min_sv = std::min(min_sv, nc < 4 ? 0.0 : sv[sv.size() - 1]);
        max_sv = std::max(max_sv, sv[0]);
      }
    }
    rep.min_group_sv = min_sv;
    rep.max_group_sv = max_sv;
    rep.invertible = nc >= 4 && min_sv > 1e-10 * max_sv;
    rep.message = rep.invertible ? "all pixel groups have full rank 4"
                                 : "rank-deficient pixel group found; use beta > 0";
    return rep;
  }

  if (n <= 16) {
    rep.available = true;
    rep.method = "dense-rank";
    // Recover the zero-extended coefficients from the raw maps; entries in
    // the convolution matrix are their wrapped shifts over acquired rows.
    std::vector<ComplexImage> chat;
    chat.reserve(std::size_t(nc));
    for (int j = 0; j < nc; ++j) {
      ComplexImage c = dft2_centered(sens.raw[std::size_t(j)]);
      const double scale = 1.0 / (double(n) * double(n));
      for (auto& v : c.values()) v *= scale;
      chat.push_back(std::move(c));
    }
    const CenteredGrid grid(n);
    const auto all = enumerate(grid);
    std::vector<GridIndex> acquired;
    for (const auto& idx : all)
      if (pattern.acquired(idx.n1, idx.n2)) acquired.push_back(idx);

    const Eigen::Index rows = Eigen::Index(acquired.size()) * nc;
    const Eigen::Index cols = Eigen::Index(all.size());
    Eigen::MatrixXcd mat(rows, cols);
    for (int j = 0; j < nc; ++j)
      for (std::size_t r = 0; r < acquired.size(); ++r)
        for (std::size_t c = 0; c < all.size(); ++c) {
          const GridIndex g = centered_mod(
              {acquired[r].n1 - all[c].n1, acquired[r].n2 - all[c].n2}, n);
          mat(Eigen::Index(j) * Eigen::Index(acquired.size()) + Eigen::Index(r),
              Eigen::Index(c)) = chat[std::size_t(j)].at(g.n1, g.n2);
        }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(mat);
    qr.setThreshold(1e-10);
    rep.rank = long(qr.rank());
    rep.required_rank = long(cols);
    rep.invertible = rep.rank == rep.required_rank;
    rep.message = rep.invertible ? "convolution matrix has full rank"
                                 : "convolution matrix is rank deficient; use beta > 0";
    return rep;
  }

  rep.available = false;
  rep.message = "diagnostic unavailable for this pattern kind at N > 16";
  return rep;
}

}  // namespace mocca
