#pragma once

#include <cstdint>
#include <random>

#include "mocca/image.hpp"

namespace mocca {

std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic stream of complex Gaussians: mt19937_64 advanced through a
// fixed Box-Muller mapping on 53-bit uniforms, so fixtures can be reproduced
// bit-for-bit from (seed, stream) in any implementation.
class GaussianStream {
public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53-bit resolution.
  double next_uniform();
  // Circularly symmetric CN(0,1): one Box-Muller pair per sample.
  cdouble next_complex_gaussian();
  // Uniform integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound);

private:
  std::mt19937_64 eng_;
};

}  // namespace mocca
