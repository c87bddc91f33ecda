#include <doctest.h>

#include "fixtures.hpp"
#include "mocca/errors.hpp"
#include "mocca/fourier.hpp"
#include "mocca/phantom.hpp"
#include "oracles.hpp"

using namespace mocca;

TEST_SUITE("phantom") {

TEST_CASE("identical specs produce bit-identical outputs") {
  const auto a = fixtures::model_stack(16, 3, 3, 5);
  const auto b = fixtures::model_stack(16, 3, 3, 5);
  REQUIRE(a.coeffs.size() == b.coeffs.size());
  for (std::size_t j = 0; j < a.coeffs.size(); ++j) CHECK(a.coeffs[j].v == b.coeffs[j].v);
  CHECK(a.m == b.m);
  for (std::size_t j = 0; j < a.stack.coils.size(); ++j)
    CHECK(a.stack.coils[j] == b.stack.coils[j]);
}

TEST_CASE("different seeds diverge") {
  const auto a = fixtures::model_stack(16, 3, 3, 5);
  const auto b = fixtures::model_stack(16, 3, 3, 6);
  CHECK(a.coeffs[0].v != b.coeffs[0].v);
  CHECK(a.m != b.m);
}

TEST_CASE("boundary coefficient sums are strictly positive") {
  PhantomSpec spec;
  spec.n = 16;
  spec.coils = 4;
  spec.support_l = 3;
  spec.seed = 9;
  const SensitivityCoefficients coeffs = random_coefficients(spec);
  for (const auto& c : coeffs) {
    double right = 0.0, left = 0.0, top = 0.0, bottom = 0.0;
    for (int r = -1; r <= 1; ++r) {
      right += std::abs(c.at(1, r));
      left += std::abs(c.at(-1, r));
      top += std::abs(c.at(r, 1));
      bottom += std::abs(c.at(r, -1));
    }
    CHECK(right > 0.0);
    CHECK(left > 0.0);
    CHECK(top > 0.0);
    CHECK(bottom > 0.0);
  }
  double norm = 0.0;
  for (const auto& c : coeffs)
    for (const auto& v : c.v) norm += std::norm(v);
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("support size one degenerates to a nonzero scalar per coil") {
  PhantomSpec spec;
  spec.n = 8;
  spec.coils = 2;
  spec.support_l = 1;
  spec.seed = 10;
  const SensitivityCoefficients coeffs = random_coefficients(spec);
  for (const auto& c : coeffs) {
    REQUIRE(c.v.size() == 1);
    CHECK(std::abs(c.v[0]) > 0.0);
  }
}

TEST_CASE("dense magnetization has full support") {
  PhantomSpec spec;
  spec.n = 16;
  spec.coils = 2;
  spec.support_l = 3;
  spec.seed = 11;
  const ComplexImage m = random_magnetization(spec);
  for (const auto& v : m.values()) CHECK(v != cdouble(0.0));
}

TEST_CASE("sparse magnetization satisfies the doubled-support rank condition") {
  PhantomSpec spec;
  spec.n = 32;
  spec.coils = 2;
  spec.support_l = 3;
  spec.seed = 12;
  spec.magnetization = MagnetizationKind::sparse;
  spec.sparse_fraction = 0.1;
  const ComplexImage m = random_magnetization(spec);

  std::size_t support = 0;
  const CenteredGrid grid(32);
  std::vector<GridIndex> where;
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1)
      if (m.at(n1, n2) != cdouble(0.0)) {
        ++support;
        where.push_back({n1, n2});
      }
  CHECK(support == std::size_t(std::llround(0.1 * 32 * 32)));

  // Independent rank check of the interpolation matrix.
  const auto cols = enumerate(CenteredGrid(5));
  Eigen::MatrixXcd v(where.size(), cols.size());
  for (std::size_t r = 0; r < where.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      v(Eigen::Index(r), Eigen::Index(c)) = oracle::unit_root(
          32, -(double(where[r].n1) * cols[c].n1 + double(where[r].n2) * cols[c].n2));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  CHECK(svd.singularValues()(Eigen::Index(cols.size()) - 1) >
        1e-10 * svd.singularValues()(0));
}

TEST_CASE("piecewise magnetization passes the rank condition") {
  PhantomSpec spec;
  spec.n = 32;
  spec.coils = 2;
  spec.support_l = 3;
  spec.seed = 13;
  spec.magnetization = MagnetizationKind::piecewise;
  const ComplexImage m = random_magnetization(spec);
  double nonzero = 0;
  for (const auto& v : m.values())
    if (v != cdouble(0.0)) ++nonzero;
  CHECK(nonzero >= 25);  // at least the doubled support must be coverable
}

TEST_CASE("forward model of a zero image is a zero stack") {
  PhantomSpec spec;
  spec.n = 8;
  spec.coils = 2;
  spec.support_l = 3;
  spec.seed = 14;
  const SensitivityCoefficients coeffs = random_coefficients(spec);
  const KSpaceStack stack = forward_model(ComplexImage(8), coeffs, spec);
  for (const auto& coil : stack.coils) CHECK(norm2(coil) == 0.0);
}

TEST_CASE("unit zero-frequency sensitivities make the transform of m") {
  PhantomSpec spec;
  spec.n = 8;
  spec.coils = 2;
  spec.support_l = 1;
  spec.seed = 15;
  SensitivityCoefficients coeffs(2, CoefficientVector(1));
  coeffs[0].v[0] = 1.0;
  coeffs[1].v[0] = 1.0;
  const ComplexImage m = random_magnetization(spec);
  const KSpaceStack stack = forward_model(m, coeffs, spec);
  const ComplexImage expect = dft2_centered(m);
  for (const auto& coil : stack.coils) CHECK(sup_distance(coil, expect) < 1e-12);
}

TEST_CASE("noise is deterministic and scales") {
  PhantomSpec spec;
  spec.n = 8;
  spec.coils = 2;
  spec.support_l = 3;
  spec.seed = 16;
  spec.noise_level = 0.1;
  const auto data = fixtures::model_stack(8, 2, 3, 16);
  const KSpaceStack a = forward_model(data.m, data.coeffs, spec);
  const KSpaceStack b = forward_model(data.m, data.coeffs, spec);
  CHECK(a.coils[0] == b.coils[0]);
  CHECK(sup_distance(a.coils[0], data.stack.coils[0]) > 0.0);
}

TEST_CASE("model consistency: the calibration matrix annihilates the truth") {
  const auto data = fixtures::model_stack(32, 4, 3, 18);
  CalibrationConfig cfg;
  cfg.support_l = 3;
  cfg.acs_m = 8;
  const MoccaMatrix a = assemble_mocca(data.stack, cfg);
  Eigen::VectorXcd c(Eigen::Index(4 * 9));
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 9; ++i)
      c[Eigen::Index(j * 9 + i)] = data.coeffs[std::size_t(j)].v[std::size_t(i)];
  CHECK((a.a * c).norm() <= 1e-10 * a.a.norm());
}

TEST_CASE("full pattern acquires everything") {
  const SamplingPattern p = make_pattern(PatternKind::full, 16, 4, 3);
  CHECK(p.count() == 256);
  CHECK(p.reduction_rate() == doctest::Approx(1.0));
}

TEST_CASE("column pattern is the lattice plus the ACS block") {
  const SamplingPattern p = make_pattern(PatternKind::columns, 16, 4, 3, 1, 2);
  const CenteredGrid grid(16);
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1) {
      const bool lattice = ((n2 % 2) + 2) % 2 == 0;
      const bool acs = n1 >= -3 && n1 <= 2 && n2 >= -3 && n2 <= 2;
      CHECK(p.acquired(n1, n2) == (lattice || acs));
    }
  CHECK(p.reduction_rate() < 2.0);
  CHECK(p.reduction_rate() > 1.5);
}

TEST_CASE("rows-cols 2,3 is the paper's reduction-six scheme") {
  const SamplingPattern p = make_pattern(PatternKind::rows_cols, 36, 6, 3, 2, 3);
  CHECK(p.acquired(0, 0));
  CHECK(p.acquired(2, 3));
  CHECK(p.acquired(-18, -18));
  CHECK(!p.acquired(1, 9));
  CHECK(!p.acquired(2, 10));
  // Away from the ACS block the lattice alone is acquired.
  const CenteredGrid grid(36);
  for (int n2 = 9; n2 <= grid.hi(); ++n2)
    for (int n1 = 9; n1 <= grid.hi(); ++n1)
      CHECK(p.acquired(n1, n2) == (n1 % 2 == 0 && n2 % 3 == 0));
  // The achieved rate includes the fully sampled ACS block.
  CHECK(p.reduction_rate() > 4.5);
  CHECK(p.reduction_rate() <= 6.0);
}

TEST_CASE("generated patterns always cover the ACS block") {
  for (const auto& p :
       {make_pattern(PatternKind::columns, 16, 4, 3, 1, 2),
        make_pattern(PatternKind::columns, 24, 6, 5, 1, 3),
        make_pattern(PatternKind::rows_cols, 16, 4, 3, 2, 2),
        make_pattern(PatternKind::rows_cols, 36, 6, 3, 2, 3)}) {
    CHECK_NOTHROW(p.validate());
    const CenteredGrid block(p.acs_block());
    for (int n2 = block.lo(); n2 <= block.hi(); ++n2)
      for (int n1 = block.lo(); n1 <= block.hi(); ++n1) CHECK(p.acquired(n1, n2));
  }
}

TEST_CASE("incompatible strides are rejected") {
  CHECK_THROWS_AS(make_columns_pattern(16, 4, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_rows_cols_pattern(18, 4, 3, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_pattern("cols:0", 16, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_pattern("bogus", 16, 4, 3), std::invalid_argument);
}

TEST_CASE("sos ground truth is unit norm and matches its definition") {
  const auto data = fixtures::model_stack(16, 3, 3, 20);
  const RealImage truth = ground_truth_sos(data.m, data.coeffs);
  CHECK(norm2(truth) == doctest::Approx(1.0).epsilon(1e-12));

  // Equation check against complete-data inverse transforms.
  std::vector<ComplexImage> backs;
  for (const auto& coil : data.stack.coils) backs.push_back(idft2_centered(coil));
  RealImage direct(16);
  double norm = 0.0;
  for (std::size_t i = 0; i < direct.pixels(); ++i) {
    double sos = 0.0;
    for (const auto& back : backs) sos += std::norm(back[i]);
    direct[i] = std::sqrt(sos);
    norm += sos;
  }
  norm = std::sqrt(norm);
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.pixels(); ++i)
    worst = std::max(worst, std::abs(direct[i] / norm - truth[i]));
  CHECK(worst < 1e-10);
}

}  // TEST_SUITE
