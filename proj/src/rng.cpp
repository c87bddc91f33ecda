#include "mocca/rng.hpp"

#include <cmath>

namespace mocca {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0xa5a5a5a5a5a5a5a5ULL * (stream + 1);
  eng_.seed(splitmix64(state));
}

std::uint64_t GaussianStream::next_u64() { return eng_(); }

double GaussianStream::next_uniform() {
  return double(eng_() >> 11) * 0x1.0p-53;
}

cdouble GaussianStream::next_complex_gaussian() {
  // Box-Muller: u1 in (0, 1] keeps the log finite.
  const double u1 = (double(eng_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = double(eng_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  // (g1 + i g2)/sqrt(2): unit-variance circularly symmetric sample.
  return cdouble(r * std::cos(phi) * M_SQRT1_2, r * std::sin(phi) * M_SQRT1_2);
}

std::uint64_t GaussianStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace mocca
