#pragma once

#include <stdexcept>
#include <string>

namespace mocca {

// Input files or data inconsistent with what an operation requires.
class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (SVD did not converge, singular system without fallback).
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mocca
