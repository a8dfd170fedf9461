#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/gf.hpp"
#include "core/params.hpp"

namespace bilform {

// Neighbor-count table of the (x,y)-partition in the canonical cell order:
// at(s, t) = number of neighbors in cell t of any vertex in cell s.
struct QuotientMatrix {
  int order = 0;
  std::vector<mpz_class> m;

  explicit QuotientMatrix(int n) : order(n), m(n * n, 0) {}
  mpz_class& at(int s, int t) { return m[s * order + t]; }
  const mpz_class& at(int s, int t) const { return m[s * order + t]; }
  bool operator==(const QuotientMatrix&) const = default;
};

// Assembles the table from the closed forms and asserts row sums = k,
// reversibility |S| at(S,T) = |T| at(T,S), and the distance-pair support
// condition.
QuotientMatrix quotient_formula(const Params& p);

struct Discrepancy {
  std::string source, target;  // cell labels
  std::string expected, observed;
  std::string vertex;  // matrix literal of the offending vertex, if any
};

struct EquitabilityReport {
  enum class Mode { Full, Sampled } mode = Mode::Full;
  bool pass = false;
  QuotientMatrix formula{0};
  std::optional<QuotientMatrix> observed;
  std::vector<mpz_class> cell_census;  // full mode: per-cell populations
  std::vector<Discrepancy> discrepancies;
  uint64_t samples_per_cell = 0;
  uint64_t seed = 0;
  uint64_t vertices_scanned = 0;
  std::string warning;
  double elapsed_ms = 0;
};

// Full enumeration: classifies every vertex and all of its neighbors, checks
// the per-vertex neighbor-count vector against `expected`, and reports the
// observed table. `expected` is normally quotient_formula(p); tests inject
// perturbed tables to exercise the failure path. Neighbor indices use
// precomputed half-index addition tables capped at `split_table_max_bytes`
// (a digitwise fallback runs otherwise).
EquitabilityReport quotient_bruteforce(const Params& p, const Field& f,
                                       const QuotientMatrix& expected,
                                       uint64_t budget, uint32_t jobs,
                                       uint64_t split_table_max_bytes = 256ull
                                                                       << 20);

// Sampled verification: per cell, representative plus random allowed
// row/column perturbations; each sample's neighbor-count vector must equal
// the formula row. The per-sample neighbor scan costs k, so k is capped by
// the budget.
EquitabilityReport quotient_sampled(const Params& p, const Field& f,
                                    uint64_t samples_per_cell, uint64_t seed,
                                    uint64_t budget, uint32_t jobs);

std::string quotient_csv(const Params& p, const QuotientMatrix& m);
std::string cells_csv(const Params& p);

}  // namespace bilform
