#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/quotient.hpp"
#include "core/ratmat.hpp"

namespace bilform {

// Eigenvector tags of the level transition matrices; columns of H_i.
// Wm and Wp are the two interacting columns spanning the nonthin module.
enum class WTag : uint8_t { W1 = 0, W2, W3, W4, Wm, Wp };
const char* wtag_name(WTag t);

// Cell slots within a level, in the (0/1)-basis order of the level bases:
// O_{i,i-1}, O^A_{i,i}, O^B_{i,i}, O^C_{i,i}, O^D_{i,i}, O_{i,i+1}.
enum class CSlot : uint8_t { L = 0, A, B, C, D, U };

// Which slots exist at a level: level 0 is {U}/{W1}; level 1 lacks A/Wp;
// level D lacks D, U / W2, Wm.
std::vector<CSlot> cell_slots(uint32_t d, int level);
std::vector<WTag> w_slots(uint32_t d, int level);
int level_dim(uint32_t d, int level);
CellId slot_cell(int level, CSlot s);

// The (0/1)-basis of U grouped by level; total 6D-2 cells.
std::vector<CellId> level_basis(const Params& p);
// Position of a (level, slot) pair in the level basis.
int level_offset(const Params& p, int level);

// Closed-form matrices of the level structure. All are exact; boundary
// levels are restrictions of the generic forms (dropped slots are asserted to
// carry zero coefficients where that is required for consistency).
RatMat build_f(const Params& p, int i);        // flat block on level i
RatMat build_r(const Params& p, int i);        // raising block, level i -> i+1
RatMat build_l(const Params& p, int i);        // lowering block, level i -> i-1
RatMat build_h(const Params& p, int i);        // transition matrix
RatMat build_h_inv(const Params& p, int i);    // closed-form inverse
std::vector<mpq_class> build_diag(const Params& p, int i);  // eigenvalues of F_i
RatMat build_ladder_r(const Params& p, int i);  // closed form of H^{-1}_{i+1} R_i H_i
RatMat build_ladder_l(const Params& p, int i);  // closed form of H^{-1}_{i-1} L_i H_i

struct GradedOperator {
  std::vector<int> dims;   // level dimensions, sum = 6D-2
  std::vector<RatMat> F;   // F[i], 0 <= i <= D
  std::vector<RatMat> R;   // R[i], 0 <= i <= D-1
  std::vector<RatMat> L;   // L[i], 1 <= i <= D (L[0] unused)
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Builds the graded blocks from the closed forms and cross-checks them against
// the blocks of the neighbor-count table; mismatches become failed checks.
GradedOperator build_graded_operator(const Params& p, std::vector<Check>* checks);

// A|_U in the level-ordered (0/1)-basis, assembled blockwise as L + F + R.
RatMat assemble_block_action(const Params& p, const GradedOperator& g);

struct ModuleVec {
  int level;
  WTag tag;
  std::vector<mpq_class> coords;  // level-ordered (0/1)-basis coordinates
};

struct WModule {
  std::string name;
  int endpoint = 0, diameter = 0;
  bool thin = true;
  std::optional<mpz_class> local_eig;
  std::vector<ModuleVec> basis;
};

struct ModuleDecomposition {
  std::array<WModule, 5> modules;
  std::vector<std::string> basis_labels;
};

// Assembles the five modules from tagged H_i columns and verifies every
// claimed action equation, the dimensions, flags, local eigenvalues and
// Gram orthogonality. Failures are appended as failed checks.
ModuleDecomposition decompose(const Params& p, const GradedOperator& g,
                              std::vector<Check>& checks);

// Exact components of yhat = characteristic vector of O_{1,0} in the five
// modules; all five must be nonzero.
std::array<std::vector<mpq_class>, 5> project_yhat(const Params& p,
                                                   const ModuleDecomposition& dec,
                                                   std::vector<Check>& checks);

// Coordinatewise product of U-vectors in the (0/1)-basis (the cells are
// disjoint, so the entrywise product is diagonal in this basis).
std::vector<mpq_class> entrywise(const std::vector<mpq_class>& u,
                                 const std::vector<mpq_class>& v);

// Multiset spectrum of A|_U: list of (theta_j, multiplicity), only nonzero
// multiplicities. Verifies the multiplicities fill dim U.
std::vector<std::pair<mpz_class, int>> module_spectrum(const Params& p,
                                                       const RatMat& a_u,
                                                       std::vector<Check>& checks);

struct AlgebraCertificate {
  bool pass = false;
  std::vector<Check> checks;
  std::vector<std::string> findings;  // descriptions of failed checks
  GradedOperator graded;
  ModuleDecomposition decomposition;
  std::vector<std::pair<mpz_class, int>> spectrum;
  std::array<std::vector<mpq_class>, 5> yhat_components;
  double elapsed_ms = 0;
};

AlgebraCertificate verify_algebra(const Params& p);

}  // namespace bilform
