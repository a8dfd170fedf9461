#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/gf.hpp"
#include "core/params.hpp"

namespace bilform {

// Heavy confirmation of the local-spectrum table: builds the local graph on
// Gamma(x) explicitly and checks, for each claimed eigenvalue, that the
// nullity of (A_local - lambda I) over a 61-bit prime field equals the
// claimed multiplicity.
struct LocalSpectrumCheck {
  bool pass = false;
  std::vector<mpz_class> eigenvalue;
  std::vector<mpz_class> claimed;
  std::vector<uint64_t> nullity;
  double elapsed_ms = 0;
};

LocalSpectrumCheck local_spectrum_nullity(const Params& p, const Field& f,
                                          uint64_t budget, uint32_t jobs);

}  // namespace bilform
