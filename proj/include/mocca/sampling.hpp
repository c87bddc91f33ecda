#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mocca/lattice.hpp"

namespace mocca {

enum class PatternKind { full, columns, rows_cols, explicit_mask };

// Boolean acquisition mask over the centered N x N grid. The centered block
// of side acs_m + support_l - 1 (the ACS region) is always fully acquired.
struct SamplingPattern {
  int n = 0;
  int acs_m = 1;
  int support_l = 1;
  PatternKind kind = PatternKind::full;
  int stride1 = 1;  // first coordinate (rows)
  int stride2 = 1;  // second coordinate (columns)
  std::vector<std::uint8_t> mask;

  int acs_block() const { return acs_m + support_l - 1; }
  bool acquired(int n1, int n2) const {
    return mask[flat_index(CenteredGrid(n), n1, n2)] != 0;
  }
  std::size_t count() const;
  double reduction_rate() const;  // N^2 / number of acquired samples
  std::string kind_string() const;

  // Checks mask shape, 0/1 payload and ACS coverage; throws data_error.
  void validate() const;
};

SamplingPattern make_full_pattern(int n, int acs_m, int support_l);
// Every stride-th column acquired, anchored at -N/2; requires N % (2*stride) == 0.
SamplingPattern make_columns_pattern(int n, int acs_m, int support_l, int stride);
// Intersection lattice: rows on stride1, columns on stride2, both anchored at -N/2.
SamplingPattern make_rows_cols_pattern(int n, int acs_m, int support_l, int stride1, int stride2);
SamplingPattern make_pattern_from_mask(int n, int acs_m, int support_l,
                                       std::vector<std::uint8_t> mask);

// Parses "full", "cols:S" or "rows-cols:A,B".
SamplingPattern parse_pattern(const std::string& desc, int n, int acs_m, int support_l);

}  // namespace mocca
