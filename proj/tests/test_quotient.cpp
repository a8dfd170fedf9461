#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/partition.hpp"
#include "core/quotient.hpp"
#include "oracles.hpp"

using namespace bilform;

namespace {

CellId swap_cell(CellId c) {
  if (c.family == Family::Lower) return {Family::Upper, c.i};
  if (c.family == Family::Upper) return {Family::Lower, c.i};
  return c;
}

}  // namespace

TEST_CASE("frozen quotient entries for (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  const CellTable t(p);
  const QuotientMatrix m = quotient_formula(p);
  auto at = [&](CellId a, CellId b) { return m.at(t.index(a), t.index(b)); };

  // row O(1,0)
  CHECK(at({Family::Lower, 1}, {Family::Upper, 1}) == 1);
  CHECK(at({Family::Lower, 1}, {Family::B, 1}) == 1);
  CHECK(at({Family::Lower, 1}, {Family::C, 1}) == 78);
  CHECK(at({Family::Lower, 1}, {Family::D, 1}) == 24);
  CHECK(at({Family::Lower, 1}, {Family::Lower, 2}) == 936);
  CHECK(at({Family::Lower, 1}, {Family::Lower, 1}) == 0);
  // row OB(1,1): alpha_1 = q - 3 = 0
  CHECK(at({Family::B, 1}, {Family::B, 1}) == 0);
  CHECK(at({Family::B, 1}, {Family::B, 2}) == 936);
  CHECK(at({Family::B, 1}, {Family::Lower, 1}) == 1);
  CHECK(at({Family::B, 1}, {Family::Upper, 1}) == 1);

  const IntersectionNumbers in = intersection_numbers(p);
  for (int a = 0; a < m.order; ++a) {
    mpz_class sum = 0;
    for (int b = 0; b < m.order; ++b) sum += m.at(a, b);
    CHECK(sum == in.k);
  }
}

TEST_CASE("quotient rows against brute-force neighbor scans at representatives") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  const CellTable t(p);
  const QuotientMatrix m = quotient_formula(p);
  FastClassifier cls(p, f);
  // direct neighbor scan for three representative sources
  for (CellId src : {CellId{Family::Lower, 1}, {Family::B, 1}, {Family::A, 2},
                     {Family::C, 2}, {Family::D, 2}, {Family::Upper, 3}}) {
    CAPTURE(cell_label(src));
    const GfMat z = representative(p, src);
    std::vector<uint64_t> counts(t.order(), 0);
    for (const auto& w : neighbors(f, z)) ++counts[cls.index(w.v.data())];
    for (int b = 0; b < t.order(); ++b)
      CHECK(mpz_class(static_cast<unsigned long>(counts[b])) ==
            m.at(t.index(src), b));
  }
}

TEST_CASE("formula invariants across the parameter grid") {
  for (uint32_t q : {3u, 4u, 5u, 7u, 9u}) {
    for (uint32_t d : {3u, 4u, 5u}) {
      for (uint32_t n : {2 * d + 1, 2 * d + 2, 2 * d + 3}) {
        CAPTURE(q);
        CAPTURE(d);
        CAPTURE(n);
        const Params p = Params::validate(q, d, n);
        // quotient_formula itself asserts row sums, reversibility and the
        // distance-support condition; reaching here means they hold
        const QuotientMatrix m = quotient_formula(p);
        const CellTable t(p);
        // x <-> y symmetry: the Upper table is the Lower table under the swap
        for (int a = 0; a < m.order; ++a) {
          for (int b = 0; b < m.order; ++b) {
            const int sa = t.index(swap_cell(t.cells[a]));
            const int sb = t.index(swap_cell(t.cells[b]));
            CHECK(m.at(a, b) == m.at(sa, sb));
          }
        }
      }
    }
  }
}

TEST_CASE("digitwise neighbor indexing agrees with the table-accelerated scan") {
  // force the fallback path by disallowing the half-index addition tables
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  const QuotientMatrix formula = quotient_formula(p);
  const EquitabilityReport rep =
      quotient_bruteforce(p, f, formula, 10'000'000, 0, /*split bytes=*/0);
  CHECK(rep.pass);
  REQUIRE(rep.observed.has_value());
  CHECK(*rep.observed == formula);
}

TEST_CASE("sampled verification passes and is seed-deterministic") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  const EquitabilityReport r1 = quotient_sampled(p, f, 5, 42, 10'000'000, 0);
  CHECK(r1.pass);
  CHECK(r1.discrepancies.empty());
  const EquitabilityReport r2 = quotient_sampled(p, f, 5, 42, 10'000'000, 1);
  CHECK(r2.pass);  // thread count must not affect the outcome
}

TEST_CASE("sampled verification with zero samples is a vacuous pass") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  const EquitabilityReport r = quotient_sampled(p, f, 0, 0, 10'000'000, 0);
  CHECK(r.pass);
  CHECK_FALSE(r.warning.empty());
}

TEST_CASE("csv rendering") {
  const Params p = Params::validate(3, 3, 7);
  const std::string csv = quotient_csv(p, quotient_formula(p));
  CHECK(csv.find("cell,O(1,0),OB(1,1),OC(1,1),OD(1,1),O(0,1),O(2,1)") == 0);
  const std::string cells = cells_csv(p);
  CHECK(cells.find("cell,dist_x,dist_y,size\nO(1,0),1,0,1\n") == 0);
}
