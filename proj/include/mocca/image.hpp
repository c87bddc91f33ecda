#pragma once

#include <complex>
#include <vector>

#include "mocca/lattice.hpp"

namespace mocca {

using cdouble = std::complex<double>;

// Square complex image over the centered grid, values in enumeration order.
class ComplexImage {
public:
  ComplexImage() = default;
  explicit ComplexImage(int n) : grid_(n), v_(grid_.cardinality()) {}

  int size() const { return grid_.size; }
  const CenteredGrid& grid() const { return grid_; }

  cdouble& at(int n1, int n2) { return v_[flat_index(grid_, n1, n2)]; }
  const cdouble& at(int n1, int n2) const { return v_[flat_index(grid_, n1, n2)]; }
  cdouble& operator[](std::size_t i) { return v_[i]; }
  const cdouble& operator[](std::size_t i) const { return v_[i]; }

  std::size_t pixels() const { return v_.size(); }
  std::vector<cdouble>& values() { return v_; }
  const std::vector<cdouble>& values() const { return v_; }

  friend bool operator==(const ComplexImage&, const ComplexImage&) = default;

private:
  CenteredGrid grid_{1};
  std::vector<cdouble> v_;
};

class RealImage {
public:
  RealImage() = default;
  explicit RealImage(int n) : grid_(n), v_(grid_.cardinality()) {}

  int size() const { return grid_.size; }
  const CenteredGrid& grid() const { return grid_; }

  double& at(int n1, int n2) { return v_[flat_index(grid_, n1, n2)]; }
  const double& at(int n1, int n2) const { return v_[flat_index(grid_, n1, n2)]; }
  double& operator[](std::size_t i) { return v_[i]; }
  const double& operator[](std::size_t i) const { return v_[i]; }

  std::size_t pixels() const { return v_.size(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  friend bool operator==(const RealImage&, const RealImage&) = default;

private:
  CenteredGrid grid_{1};
  std::vector<double> v_;
};

double norm2(const ComplexImage& x);
double norm2(const RealImage& x);
double sup_norm(const ComplexImage& x);
double sup_distance(const ComplexImage& a, const ComplexImage& b);

}  // namespace mocca
