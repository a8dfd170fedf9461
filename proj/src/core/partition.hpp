#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/gf.hpp"
#include "core/params.hpp"

namespace bilform {

// Standard basepoints: x = 0, y = elementary matrix with 1 at (1,1).
GfMat standard_x(const Params& p);
GfMat standard_y(const Params& p);

// The five classifying ranks of a vertex z relative to the standard pair:
// rank(z), rank(z-y), rank(z with first column zeroed), rank(z with first
// row zeroed), rank(z with both zeroed).
struct RankProfile {
  int r, ry, rc, rr, rb;
  bool operator==(const RankProfile&) const = default;
};

RankProfile rank_profile(const Field& f, const GfMat& z);

// Total dispatch on the rank characterization; throws internal_error if no
// clause (or more than one) matches -- unreachable for a correct transcription.
CellId classify_profile(const Params& p, const RankProfile& pr);

// Reference path: all five ranks, exhaustive clause match.
CellId classify(const Params& p, const Field& f, const GfMat& z);

// Classification of z relative to the swapped pair (y, x); exchanges the
// Lower and Upper families and fixes A..D.
CellId classify_swapped(const Params& p, const Field& f, const GfMat& z);

// Allocation-free classifier for enumeration loops. Computes rank(z),
// rank of the column-stripped and row-stripped submatrices always, and the
// corner rank / rank(z-y) only when the signature needs them.
class FastClassifier {
 public:
  FastClassifier(const Params& p, const Field& f);
  CellId operator()(const uint16_t* z);          // row-major D x (N-D)
  int index(const uint16_t* z);                  // canonical cell index

 private:
  const Field& f_;
  uint32_t rows_, cols_, q_;
  uint32_t d_;
  std::vector<uint16_t> scratch_;
  std::vector<int> cell_index_;  // [family * (D+2) + i]
};

// Canonical orbit representative of a cell: identity blocks plus corner
// entries, one fixed matrix per cell.
GfMat representative(const Params& p, CellId c);

// Recomputes the defining common-neighbor counts (or the distance pair for
// the Lower/Upper families) by brute force and checks them against the cell.
// detail, when non-null, receives the observed counts on failure.
bool definitional_check(const Params& p, const Field& f, const GfMat& z,
                        CellId c, uint64_t budget, std::string* detail = nullptr);

// Product of at most 32 allowed elementary row/column operations (those
// fixing both basepoints), applied to m. Reproducible via the caller's PRNG.
GfMat random_g_perturbation(const Params& p, const Field& f, const GfMat& m,
                            std::mt19937_64& rng);

// Carries an arbitrary adjacent pair (x, y) to the standard one:
// z -> P (z - x) Q with invertible P, Q such that P (y - x) Q = E11.
struct PairNormalizer {
  GfMat p_left, q_right;
  GfMat apply(const Field& f, const GfMat& x, const GfMat& z) const;
};
PairNormalizer normalize_pair(const Field& f, const GfMat& x, const GfMat& y);

// Per-cell vertex counts from a full enumeration with the reference
// classifier; order follows CellTable.
std::vector<uint64_t> partition_census(const Params& p, const Field& f,
                                       uint64_t budget, uint32_t jobs);

}  // namespace bilform
