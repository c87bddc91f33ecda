#pragma once

#include "mocca/image.hpp"

namespace mocca {

// Coefficients on the centered odd support grid of side L, enumeration order.
struct CoefficientVector {
  int support_l = 1;
  std::vector<cdouble> v = std::vector<cdouble>(1);

  CoefficientVector() = default;
  explicit CoefficientVector(int l) : support_l(l), v(std::size_t(l) * std::size_t(l)) {
    if (l < 1 || l % 2 == 0)
      throw std::invalid_argument("CoefficientVector: support size must be odd and positive");
  }

  cdouble& at(int r1, int r2) {
    return v[flat_index(CenteredGrid(support_l), r1, r2)];
  }
  const cdouble& at(int r1, int r2) const {
    return v[flat_index(CenteredGrid(support_l), r1, r2)];
  }
};

// Centered 2-D DFT y_v = sum_n x_n w^(v.n) with w = exp(-2 pi i / N), realized
// as a standard FFT with half-grid index rolls on input and output. Even N only.
ComplexImage dft2_centered(const ComplexImage& x);

// Exact inverse of dft2_centered, including the 1/N^2 factor.
ComplexImage idft2_centered(const ComplexImage& y);

// In-place variants for iteration-heavy callers; same results bit for bit.
void dft2_centered_inplace(ComplexImage& x);
void idft2_centered_inplace(ComplexImage& y);

// s_n = sum_{r in support} c_r w^(-r.n): zero-extend c to the full grid and
// apply N^2 times the inverse transform. Requires L <= N.
ComplexImage synthesize_from_support(const CoefficientVector& c, int n);

}  // namespace mocca
