#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "core/params.hpp"

namespace bilform {

/// Dense matrix of exact rationals.
struct RatMat {
  int rows = 0, cols = 0;
  std::vector<mpq_class> v;

  RatMat() = default;
  RatMat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0) {}

  mpq_class& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  const mpq_class& at(int r, int c) const {
    return v[static_cast<size_t>(r) * cols + c];
  }
  bool operator==(const RatMat&) const = default;

  static RatMat identity(int n);
  bool is_identity() const;
  bool is_zero() const;
  RatMat transposed() const;
};

RatMat operator*(const RatMat& a, const RatMat& b);
RatMat operator+(const RatMat& a, const RatMat& b);
RatMat operator-(const RatMat& a, const RatMat& b);
RatMat operator*(const mpq_class& s, const RatMat& a);

std::vector<mpq_class> matvec(const RatMat& a, const std::vector<mpq_class>& x);

int rat_rank(RatMat a);  // by value: elimination clobbers
std::optional<RatMat> rat_inverse(const RatMat& a);

// Solution of A x = b for square invertible A.
std::vector<mpq_class> rat_solve(const RatMat& a, const std::vector<mpq_class>& b);

std::string rat_str(const mpq_class& v);

}  // namespace bilform
