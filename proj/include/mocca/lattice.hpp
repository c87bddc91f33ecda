#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mocca {

// Centered square index set of side `size`, covering
// {-floor(size/2), ..., floor((size-1)/2)} on each axis.
struct CenteredGrid {
  int size;

  explicit CenteredGrid(int n) : size(n) {
    if (n < 1) throw std::invalid_argument("CenteredGrid: size must be positive");
  }

  friend bool operator==(const CenteredGrid&, const CenteredGrid&) = default;

  int lo() const { return -(size / 2); }
  int hi() const { return (size - 1) / 2; }
  std::size_t cardinality() const { return std::size_t(size) * std::size_t(size); }
  bool contains(int n1, int n2) const {
    return n1 >= lo() && n1 <= hi() && n2 >= lo() && n2 <= hi();
  }
};

struct GridIndex {
  int n1 = 0;
  int n2 = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

// Unique representative of v modulo N per axis inside {-N/2, ..., N/2-1}.
// N must be even and >= 2.
GridIndex centered_mod(GridIndex v, int n);

// Deterministic enumeration of the grid: n2 is the slow (outer) coordinate,
// n1 the fast one, both ascending. Every vector or matrix indexed by a grid
// uses exactly this order.
std::vector<GridIndex> enumerate(const CenteredGrid& grid);

// Flat position of an in-range index under the enumeration order.
inline std::size_t flat_index(const CenteredGrid& g, int n1, int n2) {
  return std::size_t(n2 - g.lo()) * std::size_t(g.size) + std::size_t(n1 - g.lo());
}

}  // namespace mocca
