#include "mocca/image.hpp"

#include <cmath>

namespace mocca {

double norm2(const ComplexImage& x) {
  double s = 0.0;
  for (const auto& v : x.values()) s += std::norm(v);
  return std::sqrt(s);
}

double norm2(const RealImage& x) {
  double s = 0.0;
  for (double v : x.values()) s += v * v;
  return std::sqrt(s);
}

double sup_norm(const ComplexImage& x) {
  double s = 0.0;
  for (const auto& v : x.values()) s = std::max(s, std::abs(v));
  return s;
}

double sup_distance(const ComplexImage& a, const ComplexImage& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sup_distance: image sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.pixels(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace mocca
