#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/partition.hpp"
#include "core/graph.hpp"
#include "oracles.hpp"

using namespace bilform;

namespace {

Family swapped(Family f) {
  if (f == Family::Lower) return Family::Upper;
  if (f == Family::Upper) return Family::Lower;
  return f;
}

}  // namespace

TEST_CASE("classification of the basepoints and the single-entry vertices") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);

  CHECK(classify(p, f, standard_x(p)) == CellId{Family::Upper, 1});  // z = x
  CHECK(classify(p, f, standard_y(p)) == CellId{Family::Lower, 1});  // z = y

  GfMat b(3, 4);
  b.at(0, 0) = 2;  // xi != 0, 1
  CHECK(classify(p, f, b) == CellId{Family::B, 1});

  GfMat c(3, 4);
  c.at(0, 3) = 1;  // single 1 at (1, N-D)
  CHECK(classify(p, f, c) == CellId{Family::C, 1});
  CHECK(rank_profile(f, c) == RankProfile{1, 1, 1, 0, 0});

  GfMat d(3, 4);
  d.at(1, 0) = 1;  // single 1 at (2, 1)
  CHECK(classify(p, f, d) == CellId{Family::D, 1});
  CHECK(rank_profile(f, d) == RankProfile{1, 1, 0, 1, 0});
}

TEST_CASE("rank profile constraints hold on random vertices") {
  const Params p = Params::validate(4, 3, 7);
  const Field f(4);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    const RankProfile pr = rank_profile(f, oracles::random_matrix(p, rng));
    CHECK(std::abs(pr.r - pr.ry) <= 1);
    CHECK(pr.rc <= pr.r);
    CHECK(pr.rc >= pr.r - 1);
    CHECK(pr.rr <= pr.r);
    CHECK(pr.rr >= pr.r - 1);
    CHECK(pr.rb >= pr.r - 2);
  }
}

TEST_CASE("representative block forms") {
  const Params p = Params::validate(3, 3, 7);
  // Lower i=2: I_2 in the top-left corner
  GfMat lower2(3, 4);
  lower2.at(0, 0) = 1;
  lower2.at(1, 1) = 1;
  CHECK(representative(p, {Family::Lower, 2}) == lower2);
  // A i=2: antidiagonal pair, 1 at (1, N-D) and 1 at (2, 1)
  GfMat a2(3, 4);
  a2.at(0, 3) = 1;
  a2.at(1, 0) = 1;
  CHECK(representative(p, {Family::A, 2}) == a2);
  // B i=1: single entry xi not in {0, 1}
  const GfMat b1 = representative(p, {Family::B, 1});
  CHECK(b1.at(0, 0) >= 2);
  CHECK_THROWS_AS(representative(p, {Family::A, 1}), invalid_argument_error);
}

TEST_CASE("classify(representative(c)) = c for every cell") {
  for (auto [q, d, n] : {std::tuple{3u, 3u, 7u}, {3u, 4u, 9u}, {4u, 3u, 7u},
                         {5u, 4u, 10u}, {9u, 5u, 11u}}) {
    CAPTURE(q);
    CAPTURE(d);
    CAPTURE(n);
    const Params p = Params::validate(q, d, n);
    const Field f(q);
    const CellTable table(p);
    for (const CellId& c : table.cells) {
      const GfMat rep = representative(p, c);
      CHECK(classify(p, f, rep) == c);
    }
  }
}

TEST_CASE("representatives satisfy the defining neighborhood counts") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  const CellTable table(p);
  std::string detail;

  // frozen examples: counts for A2 are (2q, 0), C1 (1, q^D - q), B1 (1, 0)
  CHECK(oracles::count_common_at(p, f, standard_y(p),
                                 representative(p, {Family::A, 2}), 1) == 6);
  CHECK(oracles::count_common_at(p, f, standard_y(p),
                                 representative(p, {Family::A, 2}), 3) == 0);
  CHECK(oracles::count_common_at(p, f, standard_y(p),
                                 representative(p, {Family::C, 1}), 0) == 1);
  CHECK(oracles::count_common_at(p, f, standard_y(p),
                                 representative(p, {Family::C, 1}), 2) == 24);
  CHECK(oracles::count_common_at(p, f, standard_y(p),
                                 representative(p, {Family::B, 1}), 0) == 1);
  CHECK(oracles::count_common_at(p, f, standard_y(p),
                                 representative(p, {Family::B, 1}), 2) == 0);

  std::mt19937_64 rng(1234);
  for (const CellId& c : table.cells) {
    CAPTURE(cell_label(c));
    const GfMat rep = representative(p, c);
    CHECK(definitional_check(p, f, rep, c, 10'000'000, &detail));
    for (int t = 0; t < 3; ++t) {
      const GfMat z = random_g_perturbation(p, f, rep, rng);
      CHECK(definitional_check(p, f, z, c, 10'000'000, &detail));
    }
  }
}

TEST_CASE("allowed perturbations preserve the cell") {
  const Params p = Params::validate(4, 3, 7);
  const Field f(4);
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const GfMat z = oracles::random_matrix(p, rng);
    const CellId c = classify(p, f, z);
    CHECK(classify(p, f, random_g_perturbation(p, f, z, rng)) == c);
  }
}

TEST_CASE("fast classifier agrees with the reference path") {
  for (auto [q, d, n] : {std::tuple{3u, 3u, 7u}, {4u, 3u, 7u}, {5u, 3u, 7u},
                         {3u, 4u, 9u}}) {
    CAPTURE(q);
    const Params p = Params::validate(q, d, n);
    const Field f(q);
    FastClassifier fast(p, f);
    const CellTable table(p);
    std::mt19937_64 rng(2024);
    const int samples = (q == 3 && d == 3) ? 100000 : 20000;
    for (int t = 0; t < samples; ++t) {
      const GfMat z = oracles::random_matrix(p, rng);
      const CellId ref = classify(p, f, z);
      const CellId got = fast(z.v.data());
      REQUIRE(got == ref);
      REQUIRE(fast.index(z.v.data()) == table.index(ref));
    }
  }
}

TEST_CASE("swapping the basepoints swaps Lower and Upper") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  std::mt19937_64 rng(55);
  for (int t = 0; t < 2000; ++t) {
    const GfMat z = oracles::random_matrix(p, rng);
    const CellId c = classify(p, f, z);
    const CellId cs = classify_swapped(p, f, z);
    CHECK(cs.family == swapped(c.family));
    CHECK(cs.i == c.i);
  }
}

TEST_CASE("full census of (3,3,7) matches the cell sizes exactly") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  const CellTable table(p);
  const auto census = partition_census(p, f, 10'000'000, 0);
  REQUIRE(census.size() == 16);
  mpz_class total = 0;
  for (int c = 0; c < table.order(); ++c) {
    CHECK(mpz_class(static_cast<unsigned long>(census[c])) ==
          cell_size(p, table.cells[c]));
    total += census[c];
  }
  CHECK(total == p.n_vertices);
}

TEST_CASE("full census over an extension field matches the cell sizes") {
  const Params p = Params::validate(4, 3, 7);
  const Field f(4);
  const CellTable table(p);
  const auto census = partition_census(p, f, 20'000'000, 0);
  mpz_class total = 0;
  for (int c = 0; c < table.order(); ++c) {
    CHECK(mpz_class(static_cast<unsigned long>(census[c])) ==
          cell_size(p, table.cells[c]));
    total += census[c];
  }
  CHECK(total == p.n_vertices);
}

TEST_CASE("pair normalization carries any adjacent pair to the standard one") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  std::mt19937_64 rng(77);
  const auto r1 = rank_one_basis(f, p.rows(), p.cols());
  std::uniform_int_distribution<size_t> pick(0, r1.size() - 1);
  for (int t = 0; t < 50; ++t) {
    const GfMat x = oracles::random_matrix(p, rng);
    const GfMat y = gf_add(f, x, r1[pick(rng)]);
    const PairNormalizer nz = normalize_pair(f, x, y);
    // x maps to 0, y maps to the standard y
    CHECK(nz.apply(f, x, x) == standard_x(p));
    CHECK(nz.apply(f, x, y) == standard_y(p));
    // distances to the pair are preserved
    const GfMat z = oracles::random_matrix(p, rng);
    const GfMat zn = nz.apply(f, x, z);
    CHECK(distance(f, z, x) == rank(f, zn));
    CHECK(distance(f, z, y) == distance(f, zn, standard_y(p)));
  }
  // non-adjacent pair is rejected
  GfMat far(3, 4);
  far.at(0, 0) = 1;
  far.at(1, 1) = 1;
  CHECK_THROWS_AS(normalize_pair(f, GfMat(3, 4), far), invalid_argument_error);
}
