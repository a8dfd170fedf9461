#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/gf.hpp"
#include "core/params.hpp"
#include "oracles.hpp"

using namespace bilform;

TEST_CASE("validate accepts (3,3,7) and computes the vertex count") {
  const Params p = Params::validate(3, 3, 7);
  CHECK(p.q == 3);
  CHECK(p.p == 3);
  CHECK(p.e == 1);
  CHECK(p.n_vertices == mpz_class("531441"));  // 3^12
}

TEST_CASE("validate rejects bad triples with distinct diagnostics") {
  CHECK_THROWS_WITH_AS(Params::validate(2, 3, 7), "q must differ from 2",
                       invalid_argument_error);
  CHECK_THROWS_WITH_AS(Params::validate(3, 3, 6), "requires N > 2D",
                       invalid_argument_error);
  CHECK_THROWS_WITH_AS(Params::validate(3, 2, 7), "requires D >= 3",
                       invalid_argument_error);
  CHECK_THROWS_AS(Params::validate(6, 3, 7), invalid_argument_error);
  CHECK_THROWS_AS(Params::validate(12, 3, 7), invalid_argument_error);
  CHECK_NOTHROW(Params::validate(9, 3, 7));
  CHECK_NOTHROW(Params::validate(1024, 3, 7));
}

TEST_CASE("prime power detection") {
  uint32_t p = 0, e = 0;
  CHECK(prime_power(1024, p, e));
  CHECK(p == 2);
  CHECK(e == 10);
  CHECK(prime_power(729, p, e));
  CHECK(p == 3);
  CHECK(e == 6);
  CHECK(prime_power(1 << 20, p, e));
  CHECK_FALSE(prime_power(0, p, e));
  CHECK_FALSE(prime_power(1, p, e));
  CHECK_FALSE(prime_power(1000, p, e));
}

TEST_CASE("intersection numbers of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  const IntersectionNumbers in = intersection_numbers(p);
  CHECK(in.k == 1040);
  CHECK(in.c[0] == 0);
  CHECK(in.c[1] == 1);
  CHECK(in.c[2] == 12);
  CHECK(in.c[3] == 117);
  CHECK(in.a[0] == 0);
  CHECK(in.a[1] == 103);
  CHECK(in.a[2] == 380);
  CHECK(in.a[3] == 923);
  CHECK(in.b[0] == 1040);
  CHECK(in.b[1] == 936);
  CHECK(in.b[2] == 648);
  CHECK(in.b[3] == 0);
  CHECK(in.k_i[0] == 1);
  CHECK(in.k_i[1] == 1040);
  CHECK(in.k_i[2] == 81120);
  CHECK(in.k_i[3] == 449280);
}

TEST_CASE("c_2 and a_1 against brute-force neighborhood counts") {
  const Params p = Params::validate(3, 3, 7);
  const Field f(3);
  // c_2 = |Gamma(x) n Gamma_1(y)| for a vertex y at distance 2 from x = 0
  GfMat y2(p.rows(), p.cols());
  y2.at(0, 0) = 1;
  y2.at(1, 1) = 1;
  CHECK(oracles::count_sphere_neighbors(p, f, y2, 1) == 12);
  // a_1 = common neighbors of an adjacent pair
  GfMat y1(p.rows(), p.cols());
  y1.at(0, 0) = 1;
  CHECK(oracles::count_sphere_neighbors(p, f, y1, 1) == 103);
}

TEST_CASE("eigenvalues and local spectrum of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  const Spectrum sp = eigenvalues(p);
  REQUIRE(sp.theta.size() == 4);
  CHECK(sp.theta[0] == 1040);  // theta_0 = k
  CHECK(sp.theta[1] == 311);
  CHECK(sp.theta[2] == 68);
  CHECK(sp.theta[3] == -13);
  CHECK(sp.local_eig[0] == 103);
  CHECK(sp.local_eig[1] == 77);
  CHECK(sp.local_eig[2] == 23);
  CHECK(sp.local_eig[3] == -1);
  CHECK(sp.local_eig[4] == -3);
  CHECK(sp.local_mult[0] == 1);
  CHECK(sp.local_mult[1] == 12);
  CHECK(sp.local_mult[2] == 39);
  CHECK(sp.local_mult[3] == 520);
  CHECK(sp.local_mult[4] == 468);
}

TEST_CASE("cell sizes of (3,3,7)") {
  const Params p = Params::validate(3, 3, 7);
  auto size = [&](Family f, uint32_t i) { return cell_size(p, {f, i}); };
  CHECK(size(Family::Lower, 1) == 1);
  CHECK(size(Family::Upper, 1) == 1);
  CHECK(size(Family::B, 1) == 1);
  CHECK(size(Family::C, 1) == 78);
  CHECK(size(Family::D, 1) == 24);
  CHECK(size(Family::Lower, 2) == 936);
  CHECK(size(Family::A, 2) == 624);
  CHECK(size(Family::B, 2) == 936);
  CHECK(size(Family::C, 2) == 22464);
  CHECK(size(Family::D, 2) == 5616);
  CHECK(size(Family::Lower, 3) == 50544);
  CHECK(size(Family::A, 3) == 44928);
  CHECK(size(Family::B, 3) == 50544);
  CHECK(size(Family::C, 3) == 303264);
  // Gamma(x) n Gamma(y) splits into B, C, D at i = 1
  CHECK(size(Family::B, 1) + size(Family::C, 1) + size(Family::D, 1) == 103);
  CHECK_THROWS_AS(cell_size(p, {Family::A, 1}), invalid_argument_error);
  CHECK_THROWS_AS(cell_size(p, {Family::D, 3}), invalid_argument_error);
}

TEST_CASE("scalar invariants across the parameter grid") {
  for (uint32_t q : {3u, 4u, 5u, 7u, 9u}) {
    for (uint32_t d : {3u, 4u, 5u}) {
      for (uint32_t n : {2 * d + 1, 2 * d + 2, 2 * d + 3}) {
        CAPTURE(q);
        CAPTURE(d);
        CAPTURE(n);
        const Params p = Params::validate(q, d, n);
        const IntersectionNumbers in = intersection_numbers(p);
        for (uint32_t i = 0; i <= d; ++i)
          CHECK(in.c[i] + in.a[i] + in.b[i] == in.k);
        CHECK(in.c[1] == 1);
        CHECK(in.a[0] == 0);
        CHECK(in.k_i[0] == 1);
        CHECK(in.k_i[1] == in.k);

        const Spectrum sp = eigenvalues(p);
        CHECK(sp.theta[0] == in.k);
        for (uint32_t i = 1; i <= d; ++i) CHECK(sp.theta[i - 1] > sp.theta[i]);
        mpz_class mult_total = 0;
        for (const auto& m : sp.local_mult) {
          CHECK(m >= 0);
          mult_total += m;
        }
        CHECK(mult_total == in.k);

        const CellTable table(p);
        CHECK(table.order() == static_cast<int>(6 * d - 2));
        mpz_class cell_total = 0;
        for (const CellId& c : table.cells) cell_total += cell_size(p, c);
        CHECK(cell_total == p.n_vertices);
        for (uint32_t i = 1; i <= d; ++i)
          CHECK(cell_size(p, {Family::Lower, i}) ==
                cell_size(p, {Family::Upper, i}));
      }
    }
  }
}

TEST_CASE("cell table ordering and labels") {
  const Params p = Params::validate(3, 3, 7);
  const CellTable t(p);
  REQUIRE(t.order() == 16);
  CHECK(t.labels[0] == "O(1,0)");
  CHECK(t.labels[1] == "OB(1,1)");
  CHECK(t.labels[2] == "OC(1,1)");
  CHECK(t.labels[3] == "OD(1,1)");
  CHECK(t.labels[4] == "O(0,1)");
  CHECK(t.labels[5] == "O(2,1)");
  CHECK(t.labels[6] == "OA(2,2)");
  CHECK(t.labels[15] == "O(2,3)");
  for (int i = 0; i < t.order(); ++i) CHECK(t.index(t.cells[i]) == i);
  CHECK(cell_short({Family::C, 1}) == "C i=1");
  CHECK(cell_dist_x({Family::Upper, 1}) == 0);
  CHECK(cell_dist_y({Family::Upper, 1}) == 1);
}
