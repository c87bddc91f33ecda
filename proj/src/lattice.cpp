#include "mocca/lattice.hpp"

namespace mocca {

GridIndex centered_mod(GridIndex v, int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("centered_mod: N must be even and >= 2");
  auto wrap = [n](int x) {
    int r = x % n;
    if (r < 0) r += n;
    if (r >= n / 2) r -= n;
    return r;
  };
  return {wrap(v.n1), wrap(v.n2)};
}

std::vector<GridIndex> enumerate(const CenteredGrid& grid) {
  std::vector<GridIndex> out;
  out.reserve(grid.cardinality());
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1)
      out.push_back({n1, n2});
  return out;
}

}  // namespace mocca
