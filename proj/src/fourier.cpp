#include "mocca/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>

namespace mocca {
namespace {

// Planning is not thread-safe in FFTW; executing a cached plan on fresh
// arrays is. Plans are created unaligned so any buffer qualifies.
class PlanCache {
public:
  fftw_plan get(int n, bool forward) {
    std::lock_guard<std::mutex> lock(mutex_);
    const long key = 2L * n + (forward ? 1 : 0);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cdouble> scratch(std::size_t(n) * std::size_t(n));
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, p, p, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::unordered_map<long, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// Swap grid halves on both axes; an involution for even n, done as pairwise
// swaps without scratch. Maps between the centered layout and the standard
// DFT index order.
void half_shift(std::vector<cdouble>& v, int n) {
  const int h = n / 2;
  for (int i2 = 0; i2 < h; ++i2) {
    const std::size_t row = std::size_t(i2) * n;
    const std::size_t other = std::size_t(i2 + h) * n;
    for (int i1 = 0; i1 < n; ++i1)
      std::swap(v[row + std::size_t(i1)], v[other + std::size_t((i1 + h) % n)]);
  }
}

void require_even(int n, const char* who) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": grid size must be even and >= 2");
}

void transform_inplace(ComplexImage& x, bool forward) {
  const int n = x.size();
  half_shift(x.values(), n);
  auto* p = reinterpret_cast<fftw_complex*>(x.values().data());
  fftw_execute_dft(plan_cache().get(n, forward), p, p);
  half_shift(x.values(), n);
}

}  // namespace

ComplexImage dft2_centered(const ComplexImage& x) {
  ComplexImage out = x;
  dft2_centered_inplace(out);
  return out;
}

ComplexImage idft2_centered(const ComplexImage& y) {
  ComplexImage out = y;
  idft2_centered_inplace(out);
  return out;
}

void dft2_centered_inplace(ComplexImage& x) {
  require_even(x.size(), "dft2_centered");
  transform_inplace(x, true);
}

void idft2_centered_inplace(ComplexImage& y) {
  require_even(y.size(), "idft2_centered");
  transform_inplace(y, false);
  const double scale = 1.0 / (double(y.size()) * double(y.size()));
  for (auto& v : y.values()) v *= scale;
}

ComplexImage synthesize_from_support(const CoefficientVector& c, int n) {
  require_even(n, "synthesize_from_support");
  if (c.support_l > n)
    throw std::invalid_argument("synthesize_from_support: support exceeds grid size");
  ComplexImage ext(n);
  const CenteredGrid support(c.support_l);
  for (int r2 = support.lo(); r2 <= support.hi(); ++r2)
    for (int r1 = support.lo(); r1 <= support.hi(); ++r1)
      ext.at(r1, r2) = c.at(r1, r2);
  // N^2 * idft2(ext) without the round-trip scaling.
  transform_inplace(ext, false);
  return ext;
}

}  // namespace mocca
