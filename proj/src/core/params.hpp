#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilform {

// Error taxonomy mirrored by the C API status codes.
class invalid_argument_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class budget_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Invariant violations that indicate a bug (unreachable classifier branch,
// non-integral division in a closed form). Never raised on valid inputs.
class internal_error : public std::logic_error {
  using std::logic_error::logic_error;
};

mpz_class zpow(const mpz_class& base, unsigned long e);

// Trial factorization; on success fills p, e with q = p^e. Supports q < 2^20.
bool prime_power(uint32_t q, uint32_t& p, uint32_t& e);

/// Validated instance (q, D, N) of the bilinear forms graph H_q(D, N-D).
struct Params {
  uint32_t q = 0;   // field order, prime power, q != 2
  uint32_t d = 0;   // diameter D >= 3 (matrix row count)
  uint32_t n = 0;   // N > 2D
  uint32_t p = 0;   // characteristic
  uint32_t e = 0;   // extension degree, q = p^e
  mpz_class n_vertices;  // q^{D(N-D)}

  uint32_t rows() const { return d; }
  uint32_t cols() const { return n - d; }

  static Params validate(uint32_t q, uint32_t d, uint32_t n);
};

struct IntersectionNumbers {
  std::vector<mpz_class> c;    // c_0..c_D, c_0 = 0
  std::vector<mpz_class> a;    // a_0..a_D
  std::vector<mpz_class> b;    // b_0..b_D, b_D = 0
  std::vector<mpz_class> k_i;  // sphere sizes k_0..k_D
  mpz_class k;                 // valency = b_0
};
IntersectionNumbers intersection_numbers(const Params& p);

struct Spectrum {
  std::vector<mpz_class> theta;         // theta_0 > ... > theta_D
  std::array<mpz_class, 5> local_eig;   // local graph eigenvalues, descending
  std::array<mpz_class, 5> local_mult;  // multiplicities, sum = k
};
Spectrum eigenvalues(const Params& p);

// The six families of the (x,y)-partition. Lower is O_{i,i-1}, Upper is
// O_{i-1,i}; A..D are the O^A..O^D subsets of Gamma_i(x) n Gamma_i(y).
enum class Family : uint8_t { Lower = 0, A, B, C, D, Upper };

struct CellId {
  Family family;
  uint32_t i;
  bool operator==(const CellId&) const = default;
};

bool cell_valid(const Params& p, CellId c);
// Distance pair (to x, to y) shared by all vertices of the cell.
uint32_t cell_dist_x(CellId c);
uint32_t cell_dist_y(CellId c);
// Label such as "O(1,0)", "OA(2,2)", "O(0,1)".
std::string cell_label(CellId c);
// Short form such as "B i=1".
std::string cell_short(CellId c);

mpz_class cell_size(const Params& p, CellId c);

// Canonical cell ordering used for the quotient matrix: for i ascending,
// O_{i,i-1}, O^A_{i,i}, O^B_{i,i}, O^C_{i,i}, O^D_{i,i}, O_{i-1,i}, skipping
// families that do not exist at that i. Total 6D-2 cells.
struct CellTable {
  std::vector<CellId> cells;
  std::vector<std::string> labels;

  explicit CellTable(const Params& p);
  int order() const { return static_cast<int>(cells.size()); }
  int index(CellId c) const;

 private:
  // flat_[family][i] = position in cells, -1 when absent
  std::vector<std::vector<int>> flat_;
};

}  // namespace bilform
