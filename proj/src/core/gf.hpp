#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/params.hpp"

namespace bilform {

/// GF(q) with table-driven arithmetic, q = p^e <= 1024. Elements are encoded
/// as integers in [0, q): for e = 1 the residue itself, for e > 1 the base-p
/// digit string of the polynomial representative (coefficient of x^j is
/// digit j). The representative polynomial is the lexicographically least
/// primitive monic polynomial of degree e over GF(p), found deterministically
/// at construction.
class Field {
 public:
  explicit Field(uint32_t q);

  uint32_t q() const { return q_; }
  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return e_; }
  // Modulus polynomial coefficients c_0..c_e (monic), empty for e = 1.
  const std::vector<uint32_t>& modulus() const { return poly_; }

  uint16_t add(uint16_t a, uint16_t b) const { return add_[a * q_ + b]; }
  uint16_t sub(uint16_t a, uint16_t b) const { return sub_[a * q_ + b]; }
  uint16_t mul(uint16_t a, uint16_t b) const { return mul_[a * q_ + b]; }
  uint16_t neg(uint16_t a) const { return sub_[a]; }  // 0 - a
  uint16_t inv(uint16_t a) const;

  const uint16_t* add_table() const { return add_.data(); }
  const uint16_t* sub_table() const { return sub_.data(); }
  const uint16_t* mul_table() const { return mul_.data(); }

 private:
  uint32_t q_, p_, e_;
  std::vector<uint32_t> poly_;
  std::vector<uint16_t> add_, sub_, mul_, inv_;
};

/// Dense D x (N-D) matrix over GF(q); a vertex of the graph.
struct GfMat {
  uint32_t rows = 0, cols = 0;
  std::vector<uint16_t> v;  // row-major

  GfMat() = default;
  GfMat(uint32_t r, uint32_t c) : rows(r), cols(c), v(r * c, 0) {}

  uint16_t& at(uint32_t r, uint32_t c) { return v[r * cols + c]; }
  uint16_t at(uint32_t r, uint32_t c) const { return v[r * cols + c]; }
  bool operator==(const GfMat&) const = default;
};

GfMat gf_sub(const Field& f, const GfMat& a, const GfMat& b);
GfMat gf_add(const Field& f, const GfMat& a, const GfMat& b);

enum class Strip { FirstCol, FirstRow, Both };
GfMat strip(const GfMat& m, Strip mode);

// Rank by Gaussian elimination on a scratch copy.
int rank(const Field& f, const GfMat& m);
// Early exit: returns min(rank, cap + 1); cap < 0 disables the cap.
int rank_capped(const Field& f, const GfMat& m, int cap);

// In-place elimination on a raw row-major buffer; clobbers `a`.
int rank_inplace(const Field& f, uint16_t* a, uint32_t rows, uint32_t cols,
                 int cap = -1);

// Matrix literal: semicolon-separated rows of space-separated entries,
// e.g. "0 0 0 1; 0 0 0 0; 0 0 0 0". Entries must lie in [0, q).
GfMat parse_matrix(const std::string& literal, uint32_t q);
GfMat parse_matrix(const std::string& literal, const Params& p);  // also checks shape
std::string format_matrix(const GfMat& m);

// D x D (resp. C x C) invertible P with P u = e_1 for a nonzero column u,
// and Q with v Q = e_1^T for a nonzero row v. Used to normalize an adjacent
// pair to the standard one.
GfMat column_reducer(const Field& f, const std::vector<uint16_t>& u);
GfMat row_reducer(const Field& f, const std::vector<uint16_t>& v);

GfMat gf_mul(const Field& f, const GfMat& a, const GfMat& b);

}  // namespace bilform
