#include "core/params.hpp"

#include <sstream>

namespace bilform {

mpz_class zpow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

bool prime_power(uint32_t q, uint32_t& p, uint32_t& e) {
  if (q < 2 || q > (1u << 20)) return false;
  uint32_t m = q;
  for (uint32_t f = 2; f * f <= m; ++f) {
    if (m % f == 0) {
      uint32_t k = 0;
      while (m % f == 0) {
        m /= f;
        ++k;
      }
      if (m != 1) return false;  // second prime factor
      p = f;
      e = k;
      return true;
    }
  }
  // m is prime
  p = m;
  e = 1;
  return true;
}

Params Params::validate(uint32_t q, uint32_t d, uint32_t n) {
  if (q == 2) throw invalid_argument_error("q must differ from 2");
  uint32_t p = 0, e = 0;
  if (!prime_power(q, p, e))
    throw invalid_argument_error("q must be a prime power (2 < q <= 2^20)");
  if (d < 3) throw invalid_argument_error("requires D >= 3");
  if (n <= 2 * d) throw invalid_argument_error("requires N > 2D");

  Params out;
  out.q = q;
  out.d = d;
  out.n = n;
  out.p = p;
  out.e = e;
  out.n_vertices = zpow(mpz_class(q), static_cast<unsigned long>(d) * (n - d));
  return out;
}

namespace {

// (q^m - 1)/(q - 1), exact
mpz_class gaussian(const mpz_class& q, unsigned long m) {
  mpz_class num = zpow(q, m) - 1;
  mpz_class den = q - 1;
  mpz_class quo, rem;
  mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem != 0) throw internal_error("gaussian binomial not integral");
  return quo;
}

mpz_class exact_div(const mpz_class& num, const mpz_class& den, const char* what) {
  mpz_class quo, rem;
  mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem != 0) throw internal_error(std::string("non-exact division in ") + what);
  return quo;
}

}  // namespace

IntersectionNumbers intersection_numbers(const Params& p) {
  const mpz_class q(p.q);
  const unsigned long D = p.d, ND = p.n - p.d;
  IntersectionNumbers out;
  out.c.resize(D + 1);
  out.a.resize(D + 1);
  out.b.resize(D + 1);
  out.k_i.resize(D + 1);

  for (unsigned long i = 0; i <= D; ++i) {
    // c_i = q^{i-1} (q^i - 1)/(q - 1); c_0 = 0 by convention
    out.c[i] = (i == 0) ? mpz_class(0) : mpz_class(zpow(q, i - 1) * gaussian(q, i));
    // b_i = (q^{N-D} - q^i)(q^D - q^i)/(q - 1)
    out.b[i] = exact_div((zpow(q, ND) - zpow(q, i)) * (zpow(q, D) - zpow(q, i)),
                         q - 1, "b_i");
    // a_i = (q^i - 1)/(q - 1) (q^{N-D} + q^D - q^i - q^{i-1} - 1)
    out.a[i] = (i == 0)
                   ? mpz_class(0)
                   : mpz_class(gaussian(q, i) * (zpow(q, ND) + zpow(q, D) -
                                                 zpow(q, i) - zpow(q, i - 1) - 1));
  }
  out.k = out.b[0];

  for (unsigned long i = 0; i <= D; ++i) {
    if (out.c[i] + out.a[i] + out.b[i] != out.k)
      throw internal_error("c_i + a_i + b_i != k");
  }

  out.k_i[0] = 1;
  mpz_class total = 1;
  for (unsigned long i = 1; i <= D; ++i) {
    out.k_i[i] = exact_div(out.k_i[i - 1] * out.b[i - 1], out.c[i], "k_i");
    total += out.k_i[i];
  }
  if (total != p.n_vertices) throw internal_error("sum k_i != q^{D(N-D)}");
  return out;
}

Spectrum eigenvalues(const Params& p) {
  const mpz_class q(p.q);
  const unsigned long D = p.d, N = p.n, ND = p.n - p.d;
  Spectrum out;
  out.theta.resize(D + 1);
  for (unsigned long i = 0; i <= D; ++i) {
    // theta_i = (q^{N-i} + 1 - q^D - q^{N-D})/(q - 1)
    out.theta[i] = exact_div(zpow(q, N - i) + 1 - zpow(q, D) - zpow(q, ND),
                             q - 1, "theta_i");
  }
  const IntersectionNumbers in = intersection_numbers(p);
  if (out.theta[0] != in.k) throw internal_error("theta_0 != k");
  for (unsigned long i = 1; i <= D; ++i) {
    if (out.theta[i - 1] <= out.theta[i])
      throw internal_error("theta not strictly decreasing");
  }

  // Local graph spectrum (eigenvalue, multiplicity) table.
  out.local_eig[0] = in.a[1];
  out.local_eig[1] = zpow(q, ND) - q - 1;
  out.local_eig[2] = zpow(q, D) - q - 1;
  out.local_eig[3] = -1;
  out.local_eig[4] = -q;

  const mpz_class qm1 = q - 1;
  out.local_mult[0] = 1;
  out.local_mult[1] = exact_div(zpow(q, D) - q, qm1, "local mult 2");
  out.local_mult[2] = exact_div(zpow(q, ND) - q, qm1, "local mult 3");
  out.local_mult[3] = exact_div((zpow(q, D) - 1) * (zpow(q, ND) - 1) * (q - 2),
                                qm1 * qm1, "local mult 4");
  out.local_mult[4] = exact_div((zpow(q, D) - q) * (zpow(q, ND) - q), qm1 * qm1,
                                "local mult 5");
  mpz_class msum = 0;
  for (const auto& m : out.local_mult) {
    if (m < 0) throw internal_error("negative local multiplicity");
    msum += m;
  }
  if (msum != in.k) throw internal_error("local multiplicities do not sum to k");
  return out;
}

bool cell_valid(const Params& p, CellId c) {
  switch (c.family) {
    case Family::Lower:
    case Family::B:
    case Family::C:
    case Family::Upper:
      return c.i >= 1 && c.i <= p.d;
    case Family::A:
      return c.i >= 2 && c.i <= p.d;
    case Family::D:
      return c.i >= 1 && c.i + 1 <= p.d;
  }
  return false;
}

uint32_t cell_dist_x(CellId c) {
  return c.family == Family::Upper ? c.i - 1 : c.i;
}

uint32_t cell_dist_y(CellId c) {
  return c.family == Family::Lower ? c.i - 1 : c.i;
}

std::string cell_label(CellId c) {
  std::ostringstream os;
  switch (c.family) {
    case Family::Lower:
      os << "O(" << c.i << "," << c.i - 1 << ")";
      break;
    case Family::Upper:
      os << "O(" << c.i - 1 << "," << c.i << ")";
      break;
    case Family::A:
      os << "OA(" << c.i << "," << c.i << ")";
      break;
    case Family::B:
      os << "OB(" << c.i << "," << c.i << ")";
      break;
    case Family::C:
      os << "OC(" << c.i << "," << c.i << ")";
      break;
    case Family::D:
      os << "OD(" << c.i << "," << c.i << ")";
      break;
  }
  return os.str();
}

std::string cell_short(CellId c) {
  static const char* names[] = {"lower", "A", "B", "C", "D", "upper"};
  std::ostringstream os;
  os << names[static_cast<int>(c.family)] << " i=" << c.i;
  return os.str();
}

mpz_class cell_size(const Params& p, CellId c) {
  if (!cell_valid(p, c)) throw invalid_argument_error("invalid cell " + cell_label(c));
  const mpz_class q(p.q);
  const unsigned long D = p.d, ND = p.n - p.d, i = c.i;
  const IntersectionNumbers in = intersection_numbers(p);
  const mpz_class qm1 = q - 1;
  switch (c.family) {
    case Family::Lower:
    case Family::Upper:
      // |O_{i,i-1}| = |O_{i-1,i}| = k_i c_i / k
      return exact_div(in.k_i[i] * in.c[i], in.k, "lower/upper cell size");
    case Family::A:
      return exact_div(in.k_i[i] * (zpow(q, i) - 1) * (zpow(q, i - 1) - 1),
                       in.k * qm1, "A cell size");
    case Family::B:
      return exact_div(in.k_i[i] * zpow(q, i - 1) * (zpow(q, i) - 1) * (q - 2),
                       in.k * qm1, "B cell size");
    case Family::C:
      return exact_div(in.k_i[i] * (zpow(q, ND) - zpow(q, i)) * (zpow(q, i) - 1),
                       in.k * qm1, "C cell size");
    case Family::D:
      return exact_div(in.k_i[i] * (zpow(q, D) - zpow(q, i)) * (zpow(q, i) - 1),
                       in.k * qm1, "D cell size");
  }
  throw internal_error("unreachable family");
}

CellTable::CellTable(const Params& p) {
  std::vector<std::vector<int>> idx(6, std::vector<int>(p.d + 2, -1));
  auto push = [&](CellId c) {
    idx[static_cast<int>(c.family)][c.i] = static_cast<int>(cells.size());
    cells.push_back(c);
    labels.push_back(cell_label(c));
  };
  for (uint32_t i = 1; i <= p.d; ++i) {
    push({Family::Lower, i});
    if (i >= 2) push({Family::A, i});
    push({Family::B, i});
    push({Family::C, i});
    if (i + 1 <= p.d) push({Family::D, i});
    push({Family::Upper, i});
  }
  if (cells.size() != 6u * p.d - 2)
    throw internal_error("cell count != 6D-2");
  flat_ = std::move(idx);
}

int CellTable::index(CellId c) const {
  const auto& row = flat_[static_cast<int>(c.family)];
  if (c.i >= row.size() || row[c.i] < 0)
    throw invalid_argument_error("invalid cell " + cell_label(c));
  return row[c.i];
}

}  // namespace bilform
