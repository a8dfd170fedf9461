#pragma once

#include <string>
#include <vector>

#include "core/exact.hpp"
#include "core/params.hpp"

namespace bilform {

// Evidence report for the Norton-algebra conjecture; everything here is
// reported, never asserted, except the projector contracts.
struct NortonReport {
  mpz_class theta1;
  bool idempotent = false;        // E|_U^2 = E|_U
  bool commutes = false;          // E|_U A|_U = A|_U E|_U
  int dim_eu = 0;                 // rank of E|_U
  int conjectured_rank = 0;       // rank of {Ex, Ey, EO^B, EO^C, EO^D}
  bool conjectured_spans = false; // conjectured vectors form a basis of EU
  int closure_dim = 0;            // dim of star-closure of {Ex, Ey}
  int closure_rounds = 0;
  bool closure_generates = false;
  std::string basis_used;         // "conjectured" or "fallback"
  std::vector<std::string> basis_names;
  // star_table[i][j] = coordinates of b_i * b_j in the reported basis
  std::vector<std::vector<std::vector<mpq_class>>> star_table;
  std::vector<std::string> notes;
};

NortonReport norton_explore(const Params& p);

}  // namespace bilform
