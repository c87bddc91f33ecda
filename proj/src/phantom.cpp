#include "mocca/phantom.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "mocca/errors.hpp"
#include "mocca/fourier.hpp"
#include "mocca/rng.hpp"

namespace mocca {
namespace {

constexpr int kMaxRetries = 64;
constexpr std::uint64_t kCoefficientStream = 1;
constexpr std::uint64_t kMagnetizationStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

// All four boundary coefficient sums of the support must be nonvanishing.
bool boundary_condition(const CoefficientVector& c) {
  const int nn = (c.support_l - 1) / 2;
  double top = 0.0, bottom = 0.0, left = 0.0, right = 0.0;
  for (int r = -nn; r <= nn; ++r) {
    right += std::abs(c.at(nn, r));
    left += std::abs(c.at(-nn, r));
    top += std::abs(c.at(r, nn));
    bottom += std::abs(c.at(r, -nn));
  }
  return right > 0.0 && left > 0.0 && top > 0.0 && bottom > 0.0;
}

// Full column rank of the interpolation matrix on the doubled support.
bool support_rank_ok(const ComplexImage& m, int support_l) {
  const int n = m.size();
  const int d = 2 * support_l - 1;
  const CenteredGrid cols(d);
  const auto col_idx = enumerate(cols);
  std::vector<GridIndex> rows;
  const CenteredGrid grid(n);
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1)
      if (m.at(n1, n2) != cdouble(0.0)) rows.push_back({n1, n2});
  if (rows.size() < col_idx.size()) return false;

  Eigen::MatrixXcd v(rows.size(), col_idx.size());
  const double w = -2.0 * M_PI / double(n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      const double phase =
          w * (-double(rows[r].n1) * col_idx[c].n1 - double(rows[r].n2) * col_idx[c].n2);
      v(Eigen::Index(r), Eigen::Index(c)) = cdouble(std::cos(phase), std::sin(phase));
    }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v);
  qr.setThreshold(1e-10);
  return qr.rank() == Eigen::Index(col_idx.size());
}

ComplexImage draw_dense(GaussianStream& g, int n) {
  ComplexImage m(n);
  for (auto& v : m.values()) {
    do {
      v = g.next_complex_gaussian();
    } while (v == cdouble(0.0));
  }
  return m;
}

ComplexImage draw_sparse(GaussianStream& g, const PhantomSpec& spec) {
  const std::size_t total = std::size_t(spec.n) * std::size_t(spec.n);
  const std::size_t want = std::size_t(
      std::llround(spec.sparse_fraction * double(total)));
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  for (std::size_t i = total - 1; i > 0; --i)
    std::swap(order[i], order[g.next_below(i + 1)]);
  ComplexImage m(spec.n);
  for (std::size_t i = 0; i < std::min(want, total); ++i)
    m[order[i]] = g.next_complex_gaussian();
  return m;
}

ComplexImage draw_piecewise(GaussianStream& g, const PhantomSpec& spec) {
  const int n = spec.n;
  ComplexImage m(n);
  const CenteredGrid grid(n);
  // A centered disk covering the doubled support plus two jittered shapes.
  const double base_radius = std::max(double(2 * spec.support_l), 0.3 * n);
  const double r0 = base_radius * (1.0 + 0.2 * g.next_uniform());
  const cdouble a0 = g.next_complex_gaussian();
  const double r1 = 0.15 * n * (1.0 + 0.5 * g.next_uniform());
  const double c1x = 0.2 * n * (g.next_uniform() - 0.5);
  const double c1y = 0.2 * n * (g.next_uniform() - 0.5);
  const cdouble a1 = g.next_complex_gaussian();
  const int half = std::max(1, int(0.12 * n));
  const int b1 = int(0.25 * n * (g.next_uniform() - 0.5));
  const int b2 = int(0.25 * n * (g.next_uniform() - 0.5));
  const cdouble a2 = g.next_complex_gaussian();

  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2) {
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1) {
      cdouble v = 0.0;
      if (double(n1) * n1 + double(n2) * n2 <= r0 * r0) v += a0;
      const double d1 = (n1 - c1x) * (n1 - c1x) + (n2 - c1y) * (n2 - c1y);
      if (d1 <= r1 * r1) v += a1;
      if (std::abs(n1 - b1) <= half && std::abs(n2 - b2) <= half) v += a2;
      m.at(n1, n2) = v;
    }
  }
  return m;
}

}  // namespace

void PhantomSpec::validate() const {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("PhantomSpec: grid size must be even and >= 2");
  if (coils < 2) throw std::invalid_argument("PhantomSpec: at least two coils required");
  if (support_l < 1 || support_l % 2 == 0 || support_l > n)
    throw std::invalid_argument("PhantomSpec: invalid support size");
  if (noise_level < 0.0) throw std::invalid_argument("PhantomSpec: negative noise level");
  if (sparse_fraction <= 0.0 || sparse_fraction > 1.0)
    throw std::invalid_argument("PhantomSpec: sparse fraction must lie in (0, 1]");
}

SensitivityCoefficients random_coefficients(const PhantomSpec& spec) {
  spec.validate();
  GaussianStream g(spec.seed, kCoefficientStream);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    SensitivityCoefficients coeffs;
    coeffs.reserve(std::size_t(spec.coils));
    for (int j = 0; j < spec.coils; ++j) {
      CoefficientVector c(spec.support_l);
      for (auto& v : c.v) v = g.next_complex_gaussian();
      coeffs.push_back(std::move(c));
    }
    bool ok = true;
    for (const auto& c : coeffs) ok = ok && boundary_condition(c);
    if (!ok) continue;

    double norm = 0.0;
    for (const auto& c : coeffs)
      for (const auto& v : c.v) norm += std::norm(v);
    norm = std::sqrt(norm);
    for (auto& c : coeffs)
      for (auto& v : c.v) v /= norm;
    return coeffs;
  }
  throw numeric_error("random_coefficients: boundary condition retries exhausted");
}

ComplexImage random_magnetization(const PhantomSpec& spec) {
  spec.validate();
  GaussianStream g(spec.seed, kMagnetizationStream);
  if (spec.magnetization == MagnetizationKind::dense_random) return draw_dense(g, spec.n);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    ComplexImage m = spec.magnetization == MagnetizationKind::sparse
                         ? draw_sparse(g, spec)
                         : draw_piecewise(g, spec);
    if (support_rank_ok(m, spec.support_l)) return m;
  }
  throw numeric_error(
      "random_magnetization: support too poor for the rank condition after retries");
}

KSpaceStack forward_model(const ComplexImage& m, const SensitivityCoefficients& coeffs,
                          const PhantomSpec& spec) {
  spec.validate();
  if (m.size() != spec.n) throw std::invalid_argument("forward_model: grid sizes differ");
  if (int(coeffs.size()) != spec.coils)
    throw std::invalid_argument("forward_model: coil count mismatch");

  KSpaceStack stack(spec.n, spec.coils);
  for (int j = 0; j < spec.coils; ++j) {
    const ComplexImage s = synthesize_from_support(coeffs[std::size_t(j)], spec.n);
    ComplexImage prod(spec.n);
    for (std::size_t i = 0; i < prod.pixels(); ++i) prod[i] = m[i] * s[i];
    stack.coils[std::size_t(j)] = dft2_centered(prod);
  }
  if (spec.noise_level > 0.0) {
    GaussianStream g(spec.seed, kNoiseStream);
    for (auto& coil : stack.coils)
      for (auto& v : coil.values()) v += spec.noise_level * g.next_complex_gaussian();
  }
  return stack;
}

RealImage ground_truth_sos(const ComplexImage& m, const SensitivityCoefficients& coeffs) {
  const int n = m.size();
  RealImage d(n);
  for (const auto& c : coeffs) {
    const ComplexImage s = synthesize_from_support(c, n);
    for (std::size_t i = 0; i < d.pixels(); ++i) d[i] += std::norm(s[i]);
  }
  RealImage out(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < out.pixels(); ++i) {
    out[i] = std::abs(m[i]) * std::sqrt(d[i]);
    norm += out[i] * out[i];
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw numeric_error("ground_truth_sos: image is identically zero");
  for (auto& v : out.values()) v /= norm;
  return out;
}

SamplingPattern make_pattern(PatternKind kind, int n, int acs_m, int support_l, int stride1,
                             int stride2) {
  switch (kind) {
    case PatternKind::full:
      return make_full_pattern(n, acs_m, support_l);
    case PatternKind::columns:
      return make_columns_pattern(n, acs_m, support_l, stride2);
    case PatternKind::rows_cols:
      return make_rows_cols_pattern(n, acs_m, support_l, stride1, stride2);
    case PatternKind::explicit_mask:
      throw std::invalid_argument("make_pattern: explicit masks come from files");
  }
  throw std::invalid_argument("make_pattern: unknown kind");
}

}  // namespace mocca
