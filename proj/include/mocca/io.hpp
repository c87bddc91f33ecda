#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mocca/calibration.hpp"
#include "mocca/image.hpp"
#include "mocca/sampling.hpp"

namespace mocca {

// MOCCA-KSP/1: self-describing text header followed by raw complex samples,
// two little-endian 64-bit floats per sample (real then imaginary), coil 0
// first, enumeration order within each coil.
void write_stack(const std::string& path, const KSpaceStack& stack);
KSpaceStack read_stack(const std::string& path);

// MOCCA-MSK/1: header with N, M, L and the kind descriptor, then N^2 bytes of
// 0/1 in enumeration order. ACS coverage is validated on load.
void write_mask(const std::string& path, const SamplingPattern& pattern);
SamplingPattern read_mask(const std::string& path);

// 16-bit binary portable graymap, sample order equal to the enumeration
// order, values mapped linearly from [0, full_scale] (image maximum when
// full_scale <= 0). Reading returns the raw gray levels.
void write_pgm16(const std::string& path, const RealImage& image, double full_scale = 0.0);
RealImage read_pgm16(const std::string& path);

// Lossless real image carried as a one-coil stack with zero imaginary parts.
void write_real_stack(const std::string& path, const RealImage& image);

// Writes PGM when the path ends in .pgm, the lossless stack form otherwise.
void write_image_auto(const std::string& path, const RealImage& image);
// Dispatches on the file magic (P5 or MOCCA-KSP/1).
RealImage read_image_auto(const std::string& path);

// Line-oriented "key = value" report, deterministic formatting.
class Report {
public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add(const std::string& key, int value) { add(key, long(value)); }
  void add(const std::string& key, std::size_t value) { add(key, long(value)); }

  std::string str() const;
  void write(const std::string& path) const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double value);  // shortest round-trip "%.17g"

// Parses a line-oriented "key = value" file (used by pipeline configs).
std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path);

}  // namespace mocca
