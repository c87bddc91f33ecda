#include "mocca/calibration.hpp"

#include <Eigen/SVD>

#include "mocca/errors.hpp"

namespace mocca {
namespace {

void check_config(const CalibrationConfig& cfg, int n, int coils) {
  if (coils < 2)
    throw std::invalid_argument("calibration: at least two coils are required");
  if (cfg.support_l < 1 || cfg.support_l % 2 == 0)
    throw std::invalid_argument("calibration: support size must be odd and positive");
  if (cfg.acs_m < cfg.support_l)
    throw std::invalid_argument("calibration: ACS size must be at least the support size");
  if (cfg.acs_m + cfg.support_l - 1 > n)
    throw data_error("calibration: ACS block of side " +
                     std::to_string(cfg.acs_m + cfg.support_l - 1) +
                     " does not fit the acquired grid of side " + std::to_string(n));
}

// Rotate so the largest-magnitude component is real positive; deterministic
// tie-break on the first maximum.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (best <= 0.0) return;
  v *= std::conj(v[arg]) / best;
}

}  // namespace

Eigen::MatrixXcd block_hankel(const ComplexImage& y, const CenteredGrid& row_grid,
                              int support_l, const SamplingPattern* acquired) {
  if (support_l < 1 || support_l % 2 == 0)
    throw std::invalid_argument("block_hankel: support size must be odd and positive");
  const int n = y.size();
  const CenteredGrid col_grid(support_l);
  const auto rows = enumerate(row_grid);
  const auto cols = enumerate(col_grid);
  Eigen::MatrixXcd out(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const GridIndex g =
          centered_mod({rows[r].n1 - cols[c].n1, rows[r].n2 - cols[c].n2}, n);
      if (acquired && !acquired->acquired(g.n1, g.n2))
        throw data_error("block_hankel: sample (" + std::to_string(g.n1) + "," +
                         std::to_string(g.n2) + ") is not acquired");
      out(Eigen::Index(r), Eigen::Index(c)) = y.at(g.n1, g.n2);
    }
  }
  return out;
}

MoccaMatrix assemble_mocca(const KSpaceStack& stack, const CalibrationConfig& cfg,
                           const SamplingPattern* acquired) {
  const int nc = stack.num_coils();
  check_config(cfg, stack.n, nc);
  if (acquired) {
    const CenteredGrid block(cfg.acs_m + cfg.support_l - 1);
    for (int n2 = block.lo(); n2 <= block.hi(); ++n2)
      for (int n1 = block.lo(); n1 <= block.hi(); ++n1)
        if (!acquired->acquired(n1, n2))
          throw data_error("assemble_mocca: ACS block of side " +
                           std::to_string(block.size) + " is not fully acquired");
  }

  const CenteredGrid row_grid(cfg.acs_m);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(nc);
  for (int j = 0; j < nc; ++j)
    blocks.push_back(block_hankel(stack.coils[j], row_grid, cfg.support_l, acquired));

  const Eigen::Index br = blocks[0].rows();
  const Eigen::Index bc = blocks[0].cols();
  MoccaMatrix m;
  m.coils = nc;
  m.support_l = cfg.support_l;
  m.acs_m = cfg.acs_m;
  m.a.resize(br * nc, bc * nc);
  for (int j = 0; j < nc; ++j) {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(br, bc);
    for (int l = 0; l < nc; ++l)
      if (l != j) diag -= blocks[l];
    for (int l = 0; l < nc; ++l) {
      if (l == j)
        m.a.block(j * br, l * bc, br, bc) = diag;
      else
        m.a.block(j * br, l * bc, br, bc) = blocks[j];
    }
  }
  return m;
}

SingularSubspace smallest_singular_vectors(const MoccaMatrix& a, int ns) {
  const Eigen::Index cols = a.a.cols();
  if (ns < 1 || Eigen::Index(ns) > cols)
    throw std::invalid_argument("smallest_singular_vectors: invalid subspace size");
  if (a.a.rows() < cols)
    throw std::invalid_argument("smallest_singular_vectors: matrix must have at least "
                                "as many rows as columns");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.a, Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw numeric_error("smallest_singular_vectors: SVD did not converge");

  SingularSubspace out;
  out.coils = a.coils;
  out.support_l = a.support_l;
  const auto& sv = svd.singularValues();
  out.values.assign(sv.data(), sv.data() + sv.size());
  std::reverse(out.values.begin(), out.values.end());
  out.vectors.resize(cols, ns);
  for (int k = 0; k < ns; ++k) {
    out.vectors.col(k) = svd.matrixV().col(cols - 1 - k);
    fix_phase(out.vectors.col(k));
  }
  return out;
}

Eigen::VectorXcd smallest_singular_vector_power(const MoccaMatrix& a, int iterations) {
  const Eigen::Index cols = a.a.cols();
  const Eigen::MatrixXcd gram = a.a.adjoint() * a.a;
  // Small diagonal shift keeps the factorization well defined at an exact
  // nullspace; the smallest eigenvector is unaffected.
  const double shift = 1e-12 * gram.norm() / double(cols) + 1e-300;
  Eigen::LDLT<Eigen::MatrixXcd> fac(gram +
                                    shift * Eigen::MatrixXcd::Identity(cols, cols));
  if (fac.info() != Eigen::Success)
    throw numeric_error("smallest_singular_vector_power: factorization failed");
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(cols, cdouble(1.0, 0.0));
  v.normalize();
  for (int it = 0; it < iterations; ++it) {
    v = fac.solve(v);
    v.normalize();
  }
  fix_phase(v);
  return v;
}

SensitivityCoefficients combine_singular_vectors(const SingularSubspace& subspace,
                                                 const CalibrationConfig& cfg) {
  const int l = subspace.support_l;
  const int nc = subspace.coils;
  const Eigen::Index l2 = Eigen::Index(l) * l;
  const Eigen::Index ns = subspace.vectors.cols();
  if (ns < 1) throw std::invalid_argument("combine_singular_vectors: empty subspace");
  if (subspace.vectors.rows() != l2 * nc)
    throw std::invalid_argument("combine_singular_vectors: inconsistent subspace shape");

  Eigen::VectorXcd alpha;
  if (!cfg.manual_alpha.empty()) {
    if (Eigen::Index(cfg.manual_alpha.size()) != ns)
      throw std::invalid_argument(
          "combine_singular_vectors: manual alpha length does not match the subspace");
    alpha = Eigen::Map<const Eigen::VectorXcd>(cfg.manual_alpha.data(), ns);
  } else {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(l2 * nc);
    const Eigen::Index center = (l2 - 1) / 2;
    for (int j = 0; j < nc; ++j) w[Eigen::Index(j) * l2 + center] = 1.0;
    alpha = subspace.vectors.adjoint() * w;
  }

  Eigen::VectorXcd c = subspace.vectors * alpha;
  const double nrm = c.norm();
  if (!(nrm > 0.0))
    throw numeric_error(
        "combine_singular_vectors: combination vanishes (singular vectors are "
        "orthogonal to the center weight)");
  c /= nrm;

  SensitivityCoefficients out;
  out.reserve(nc);
  for (int j = 0; j < nc; ++j) {
    CoefficientVector cv(l);
    for (Eigen::Index i = 0; i < l2; ++i) cv.v[std::size_t(i)] = c[Eigen::Index(j) * l2 + i];
    out.push_back(std::move(cv));
  }
  return out;
}

SensitivitySet build_sensitivities(const SensitivityCoefficients& coeffs, int n,
                                   double d_threshold_rel) {
  if (coeffs.empty()) throw std::invalid_argument("build_sensitivities: no coefficients");
  const int l = coeffs.front().support_l;
  for (const auto& c : coeffs)
    if (c.support_l != l)
      throw std::invalid_argument("build_sensitivities: mixed support sizes");
  if (l > n) throw std::invalid_argument("build_sensitivities: support exceeds grid size");
  if (d_threshold_rel < 0.0)
    throw std::invalid_argument("build_sensitivities: threshold must be nonnegative");

  SensitivitySet s;
  s.raw.reserve(coeffs.size());
  for (const auto& c : coeffs) s.raw.push_back(synthesize_from_support(c, n));

  s.d = RealImage(n);
  for (const auto& coil : s.raw)
    for (std::size_t i = 0; i < coil.pixels(); ++i) s.d[i] += std::norm(coil[i]);

  double dmax = 0.0;
  for (double v : s.d.values()) dmax = std::max(dmax, v);
  const double eps = d_threshold_rel * dmax;

  s.d_plus = RealImage(n);
  for (std::size_t i = 0; i < s.d.pixels(); ++i)
    s.d_plus[i] = s.d[i] > eps ? 1.0 / s.d[i] : 0.0;

  s.normalized.reserve(coeffs.size());
  for (const auto& coil : s.raw) {
    ComplexImage t(n);
    for (std::size_t i = 0; i < coil.pixels(); ++i)
      t[i] = std::sqrt(s.d_plus[i]) * coil[i];
    s.normalized.push_back(std::move(t));
  }
  return s;
}

int automatic_num_singular(const std::vector<double>& values_ascending) {
  if (values_ascending.empty())
    throw std::invalid_argument("automatic_num_singular: empty spectrum");
  const double bound = values_ascending.back() / 100.0;
  int count = 0;
  for (double v : values_ascending)
    if (v < bound) ++count;
  return std::max(1, std::min<int>(count, int(values_ascending.size())));
}

}  // namespace mocca
