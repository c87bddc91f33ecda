#include "mocca/sampling.hpp"

#include <numeric>

#include "mocca/errors.hpp"

namespace mocca {
namespace {

void require_geometry(int n, int acs_m, int support_l) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("SamplingPattern: grid size must be even and >= 2");
  if (support_l < 1 || support_l % 2 == 0)
    throw std::invalid_argument("SamplingPattern: support size must be odd and positive");
  if (acs_m < support_l)
    throw std::invalid_argument("SamplingPattern: ACS size must be at least the support size");
  if (acs_m + support_l - 1 > n)
    throw std::invalid_argument("SamplingPattern: ACS block exceeds the grid");
}

void fill_acs(SamplingPattern& p) {
  const CenteredGrid grid(p.n);
  const CenteredGrid block(p.acs_block());
  for (int n2 = block.lo(); n2 <= block.hi(); ++n2)
    for (int n1 = block.lo(); n1 <= block.hi(); ++n1)
      p.mask[flat_index(grid, n1, n2)] = 1;
}

}  // namespace

std::size_t SamplingPattern::count() const {
  return std::size_t(std::accumulate(mask.begin(), mask.end(), std::size_t(0)));
}

double SamplingPattern::reduction_rate() const {
  const std::size_t acquired = count();
  if (acquired == 0) throw data_error("SamplingPattern: empty mask");
  return double(std::size_t(n) * std::size_t(n)) / double(acquired);
}

std::string SamplingPattern::kind_string() const {
  switch (kind) {
    case PatternKind::full:
      return "full";
    case PatternKind::columns:
      return "cols:" + std::to_string(stride2);
    case PatternKind::rows_cols:
      return "rows-cols:" + std::to_string(stride1) + "," + std::to_string(stride2);
    case PatternKind::explicit_mask:
      return "explicit";
  }
  return "explicit";
}

void SamplingPattern::validate() const {
  require_geometry(n, acs_m, support_l);
  if (mask.size() != std::size_t(n) * std::size_t(n))
    throw data_error("SamplingPattern: mask length does not match the grid");
  for (auto b : mask)
    if (b > 1) throw data_error("SamplingPattern: mask entries must be 0 or 1");
  const CenteredGrid block(acs_block());
  for (int n2 = block.lo(); n2 <= block.hi(); ++n2)
    for (int n1 = block.lo(); n1 <= block.hi(); ++n1)
      if (!acquired(n1, n2))
        throw data_error("SamplingPattern: ACS block of side " +
                         std::to_string(acs_block()) + " is not fully acquired");
}

SamplingPattern make_full_pattern(int n, int acs_m, int support_l) {
  require_geometry(n, acs_m, support_l);
  SamplingPattern p;
  p.n = n;
  p.acs_m = acs_m;
  p.support_l = support_l;
  p.kind = PatternKind::full;
  p.mask.assign(std::size_t(n) * std::size_t(n), 1);
  return p;
}

SamplingPattern make_columns_pattern(int n, int acs_m, int support_l, int stride) {
  require_geometry(n, acs_m, support_l);
  if (stride < 1) throw std::invalid_argument("make_columns_pattern: stride must be positive");
  if (n % (2 * stride) != 0)
    throw std::invalid_argument("make_columns_pattern: N must be a multiple of twice the stride");
  SamplingPattern p;
  p.n = n;
  p.acs_m = acs_m;
  p.support_l = support_l;
  p.kind = stride == 1 ? PatternKind::full : PatternKind::columns;
  p.stride2 = stride;
  p.mask.assign(std::size_t(n) * std::size_t(n), 0);
  const CenteredGrid grid(n);
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2) {
    if (((n2 % stride) + stride) % stride != 0) continue;
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1) p.mask[flat_index(grid, n1, n2)] = 1;
  }
  fill_acs(p);
  return p;
}

SamplingPattern make_rows_cols_pattern(int n, int acs_m, int support_l, int stride1,
                                       int stride2) {
  require_geometry(n, acs_m, support_l);
  if (stride1 < 1 || stride2 < 1)
    throw std::invalid_argument("make_rows_cols_pattern: strides must be positive");
  if (n % (2 * stride1) != 0 || n % (2 * stride2) != 0)
    throw std::invalid_argument(
        "make_rows_cols_pattern: N must be a multiple of twice each stride");
  SamplingPattern p;
  p.n = n;
  p.acs_m = acs_m;
  p.support_l = support_l;
  p.kind = (stride1 == 1 && stride2 == 1) ? PatternKind::full : PatternKind::rows_cols;
  p.stride1 = stride1;
  p.stride2 = stride2;
  p.mask.assign(std::size_t(n) * std::size_t(n), 0);
  const CenteredGrid grid(n);
  auto on = [](int x, int s) { return ((x % s) + s) % s == 0; };
  for (int n2 = grid.lo(); n2 <= grid.hi(); ++n2)
    for (int n1 = grid.lo(); n1 <= grid.hi(); ++n1)
      if (on(n1, stride1) && on(n2, stride2)) p.mask[flat_index(grid, n1, n2)] = 1;
  fill_acs(p);
  return p;
}

SamplingPattern make_pattern_from_mask(int n, int acs_m, int support_l,
                                       std::vector<std::uint8_t> mask) {
  require_geometry(n, acs_m, support_l);
  SamplingPattern p;
  p.n = n;
  p.acs_m = acs_m;
  p.support_l = support_l;
  p.kind = PatternKind::explicit_mask;
  p.mask = std::move(mask);
  p.validate();
  return p;
}

SamplingPattern parse_pattern(const std::string& desc, int n, int acs_m, int support_l) {
  if (desc == "full") return make_full_pattern(n, acs_m, support_l);
  if (desc.rfind("cols:", 0) == 0) {
    const int stride = std::stoi(desc.substr(5));
    return make_columns_pattern(n, acs_m, support_l, stride);
  }
  if (desc.rfind("rows-cols:", 0) == 0) {
    const std::string rest = desc.substr(10);
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("parse_pattern: expected rows-cols:A,B");
    const int s1 = std::stoi(rest.substr(0, comma));
    const int s2 = std::stoi(rest.substr(comma + 1));
    return make_rows_cols_pattern(n, acs_m, support_l, s1, s2);
  }
  throw std::invalid_argument("parse_pattern: unknown pattern '" + desc +
                              "' (expected full, cols:S or rows-cols:A,B)");
}

}  // namespace mocca
