#pragma once

#include <gmpxx.h>

#include "core/params.hpp"

namespace bilform {

// Exact scalar evaluation context for the closed-form tables. Exponents may
// be negative at boundary indices (the formulas then cancel to integers or
// to zero), so everything is evaluated in rationals.
struct Scal {
  mpz_class q;
  long D, Nd;

  explicit Scal(const Params& p) : q(p.q), D(p.d), Nd(p.n - p.d) {}

  // q^e
  mpq_class P(long e) const {
    if (e >= 0) return mpq_class(zpow(q, static_cast<unsigned long>(e)));
    mpq_class r(1, zpow(q, static_cast<unsigned long>(-e)));
    r.canonicalize();
    return r;
  }
  // (q^n - 1)/(q - 1)
  mpq_class G(long n) const {
    mpq_class r = (P(n) - 1) / mpq_class(q - 1);
    r.canonicalize();
    return r;
  }
  mpq_class qm(long c) const { return mpq_class(q - c); }  // q - c
};

inline mpz_class rational_to_int(const mpq_class& v, const char* what) {
  if (v.get_den() != 1)
    throw internal_error(std::string("non-integral value in ") + what + ": " +
                         v.get_str());
  return v.get_num();
}

}  // namespace bilform
