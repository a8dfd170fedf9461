#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/exact.hpp"
#include "core/ratmat.hpp"

using namespace bilform;

namespace {

RatMat from_longs(const std::vector<std::vector<long>>& rows) {
  RatMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      m.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  return m;
}

}  // namespace

TEST_CASE("rational matrix helpers") {
  RatMat a = from_longs({{1, 2}, {3, 4}});
  auto inv = rat_inverse(a);
  REQUIRE(inv.has_value());
  CHECK((a * *inv).is_identity());
  CHECK(rat_rank(a) == 2);
  RatMat sing = from_longs({{1, 2}, {2, 4}});
  CHECK(rat_rank(sing) == 1);
  CHECK_FALSE(rat_inverse(sing).has_value());
  CHECK(rat_solve(a, {mpq_class(1), mpq_class(0)}) ==
        std::vector<mpq_class>{mpq_class(-2), mpq_class(3, 2)});
}

TEST_CASE("level structure bookkeeping") {
  const Params p = Params::validate(3, 3, 7);
  CHECK(level_dim(3, 0) == 1);
  CHECK(level_dim(3, 1) == 5);
  CHECK(level_dim(3, 2) == 6);
  CHECK(level_dim(3, 3) == 4);
  const auto basis = level_basis(p);
  REQUIRE(basis.size() == 16);
  CHECK(cell_label(basis[0]) == "O(0,1)");
  CHECK(cell_label(basis[1]) == "O(1,0)");
  CHECK(cell_label(basis[5]) == "O(1,2)");
  CHECK(cell_label(basis[15]) == "OC(3,3)");
  CHECK(level_offset(p, 1) == 1);
  CHECK(level_offset(p, 2) == 6);
  CHECK(level_offset(p, 3) == 12);
}

TEST_CASE("frozen flat blocks of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  CHECK(build_f(p, 0) == from_longs({{0}}));
  CHECK(build_f(p, 1) == from_longs({{0, 1, 78, 24, 0},
                                     {1, 0, 78, 24, 0},
                                     {1, 1, 77, 0, 24},
                                     {1, 1, 0, 23, 78},
                                     {0, 0, 2, 2, 99}}));
}

TEST_CASE("frozen raising and lowering blocks of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  CHECK(build_r(p, 0) == from_longs({{1}, {1}, {1}, {1}, {1}}));
  CHECK(build_r(p, 1) == from_longs({{1, 0, 2, 2, 7},
                                     {0, 0, 3, 3, 6},
                                     {0, 1, 2, 2, 7},
                                     {0, 0, 3, 0, 9},
                                     {0, 0, 0, 3, 9},
                                     {0, 0, 0, 0, 12}}));
  CHECK(build_l(p, 1) == from_longs({{1, 1, 78, 24, 936}}));
}

TEST_CASE("frozen transition matrix H_1 and its closed-form inverse") {
  const Params p = Params::validate(3, 3, 7);
  CHECK(build_h(p, 0) == from_longs({{1}}));
  CHECK(build_h(p, 1) == from_longs({{1, 12, 39, 520, 468},
                                     {1, 12, 39, -520, 468},
                                     {1, 12, -1, 0, -12},
                                     {1, -1, 39, 0, -39},
                                     {1, -1, -1, 0, 1}}));
  RatMat want = from_longs({{1, 1, 78, 24, 936},
                            {1, 1, 78, -2, -78},
                            {1, 1, -2, 24, -24},
                            {1, -1, 0, 0, 0},
                            {1, 1, -2, -2, 2}});
  want = mpq_class(1, 1040) * want;
  CHECK(build_h_inv(p, 1) == want);
}

TEST_CASE("closed-form inverses agree with independent matrix inversion") {
  for (auto [q, d, n] : {std::tuple{3u, 3u, 7u}, {3u, 4u, 9u}, {4u, 3u, 8u},
                         {7u, 5u, 13u}}) {
    CAPTURE(q);
    CAPTURE(d);
    const Params p = Params::validate(q, d, n);
    for (int l = 0; l <= static_cast<int>(d); ++l) {
      const RatMat h = build_h(p, l);
      auto inv = rat_inverse(h);
      REQUIRE(inv.has_value());
      CHECK(*inv == build_h_inv(p, l));
    }
  }
}

TEST_CASE("frozen eigenvalue lists of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  auto diag = [&](int l) {
    std::vector<mpq_class> d = build_diag(p, l);
    std::vector<long> out;
    for (const auto& v : d) out.push_back(v.get_num().get_si());
    return out;
  };
  CHECK(diag(0) == std::vector<long>{0});
  CHECK(diag(1) == std::vector<long>{103, 77, 23, -1, -3});
  CHECK(diag(2) == std::vector<long>{380, 302, 140, 92, 62, 94});
  CHECK(diag(3) == std::vector<long>{923, 203, 275, 281});
}

TEST_CASE("frozen conjugated ladder entries of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  // H_1^{-1} R_0 H_0 = e_1
  CHECK(build_ladder_r(p, 0) == from_longs({{1}, {0}, {0}, {0}, {0}}));
  // H_2^{-1} R_1 H_1: diagonal q(q+1), q^2, q^2, q, q/(q+1); corner -1/(q+1)
  const RatMat lr1 = build_ladder_r(p, 1);
  CHECK(lr1.at(0, 0) == 12);
  CHECK(lr1.at(1, 1) == 9);
  CHECK(lr1.at(2, 2) == 9);
  CHECK(lr1.at(3, 3) == 3);
  CHECK(lr1.at(4, 4) == mpq_class(3, 4));
  CHECK(lr1.at(5, 4) == mpq_class(-1, 4));
  // W5 boundary: R w-_{D-1} = -q^{D-2}(q-1)/(q^D-1) w+_D = -3/13
  const RatMat lr2 = build_ladder_r(p, 2);
  CHECK(lr2.at(3, 4) == mpq_class(-3, 13));
  // H_0^{-1} L_1 H_1 = (k, 0, 0, 0, 0)
  CHECK(build_ladder_l(p, 1) == from_longs({{1040, 0, 0, 0, 0}}));
  // L w+_2 = -(q^D-1)(q^{N-D}-1)/(q-1) w-_1 = -1040
  const RatMat ll2 = build_ladder_l(p, 2);
  CHECK(ll2.at(4, 5) == -1040);
}

TEST_CASE("graded operator blocks match the neighbor-count table") {
  const Params p = Params::validate(5, 4, 9);
  std::vector<Check> checks;
  build_graded_operator(p, &checks);
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].name == "graded_vs_quotient");
  CHECK(checks[0].pass);
}

TEST_CASE("full certification of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  const AlgebraCertificate cert = verify_algebra(p);
  CHECK(cert.pass);
  CHECK(cert.findings.empty());
  std::vector<size_t> dims;
  for (const WModule& m : cert.decomposition.modules) dims.push_back(m.basis.size());
  CHECK(dims == std::vector<size_t>{4, 2, 3, 3, 4});
  CHECK(cert.decomposition.modules[0].endpoint == 0);
  CHECK(cert.decomposition.modules[0].thin);
  CHECK(cert.decomposition.modules[1].diameter == 1);
  CHECK_FALSE(cert.decomposition.modules[4].thin);
  REQUIRE(cert.decomposition.modules[4].local_eig.has_value());
  CHECK(*cert.decomposition.modules[4].local_eig == -3);

  // spectrum of A|_U with multiplicities
  REQUIRE(cert.spectrum.size() == 4);
  CHECK(cert.spectrum[0] == std::pair{mpz_class(1040), 1});
  CHECK(cert.spectrum[1] == std::pair{mpz_class(311), 5});
  CHECK(cert.spectrum[2] == std::pair{mpz_class(68), 6});
  CHECK(cert.spectrum[3] == std::pair{mpz_class(-13), 4});

  // yhat components: the W1 component is (1/k) H_1 w1-column = ones/1040
  const auto& w1comp = cert.yhat_components[0];
  for (int r = 0; r < 16; ++r) {
    const mpq_class want = (r >= 1 && r <= 5) ? mpq_class(1, 1040) : mpq_class(0);
    CHECK(w1comp[r] == want);
  }
}

TEST_CASE("certification passes on further instances") {
  for (auto [q, d, n] : {std::tuple{3u, 4u, 9u}, {4u, 3u, 7u}, {9u, 3u, 8u}}) {
    CAPTURE(q);
    CAPTURE(d);
    const Params p = Params::validate(q, d, n);
    const AlgebraCertificate cert = verify_algebra(p);
    CHECK(cert.pass);
    CHECK(cert.findings.empty());
  }
}

TEST_CASE("entrywise product on the characteristic-vector basis") {
  const int n = 16;
  for (int a = 0; a < n; ++a) {
    std::vector<mpq_class> ea(n, 0);
    ea[a] = 1;
    for (int b = 0; b < n; ++b) {
      std::vector<mpq_class> eb(n, 0);
      eb[b] = 1;
      const auto prod = entrywise(ea, eb);
      CHECK(prod == entrywise(eb, ea));
      if (a == b)
        CHECK(prod == ea);
      else
        CHECK(std::all_of(prod.begin(), prod.end(),
                          [](const mpq_class& v) { return v == 0; }));
    }
  }
  // all-ones acts as the identity for the entrywise product on U
  std::vector<mpq_class> ones(n, 1), e0(n, 0);
  e0[1] = 1;
  CHECK(entrywise(e0, ones) == e0);
}
