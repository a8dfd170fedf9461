#include "core/gf.hpp"

#include <algorithm>
#include <sstream>

namespace bilform {

namespace {

constexpr uint32_t kMaxFieldOrder = 1024;

// Polynomial arithmetic over GF(p) on base-p encoded elements.
std::vector<uint32_t> digits(uint32_t x, uint32_t p, uint32_t e) {
  std::vector<uint32_t> d(e, 0);
  for (uint32_t j = 0; j < e && x; ++j) {
    d[j] = x % p;
    x /= p;
  }
  return d;
}

uint32_t undigits(const std::vector<uint32_t>& d, uint32_t p) {
  uint32_t x = 0;
  for (size_t j = d.size(); j-- > 0;) x = x * p + d[j];
  return x;
}

// (a * b) mod f over GF(p); f monic of degree e, coefficients f[0..e].
uint32_t poly_mulmod(uint32_t a, uint32_t b, const std::vector<uint32_t>& f,
                     uint32_t p, uint32_t e) {
  std::vector<uint32_t> da = digits(a, p, e), db = digits(b, p, e);
  std::vector<uint32_t> prod(2 * e - 1, 0);
  for (uint32_t i = 0; i < e; ++i) {
    if (!da[i]) continue;
    for (uint32_t j = 0; j < e; ++j)
      prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  }
  for (size_t k = prod.size(); k-- > e;) {
    uint32_t c = prod[k];
    if (!c) continue;
    prod[k] = 0;
    // x^k = x^{k-e} * (x^e) = -x^{k-e} * (f - x^e)
    for (uint32_t j = 0; j < e; ++j)
      prod[k - e + j] = (prod[k - e + j] + c * (p - f[j] % p)) % p;
  }
  prod.resize(e);
  return undigits(prod, p);
}

}  // namespace

Field::Field(uint32_t q) : q_(q) {
  if (!prime_power(q, p_, e_) || q == 2)
    throw invalid_argument_error("field order must be a prime power != 2");
  if (q > kMaxFieldOrder)
    throw invalid_argument_error("field arithmetic supports q <= 1024");

  add_.resize(q * q);
  sub_.resize(q * q);
  mul_.resize(q * q);
  inv_.assign(q, 0);

  for (uint32_t a = 0; a < q; ++a) {
    for (uint32_t b = 0; b < q; ++b) {
      if (e_ == 1) {
        add_[a * q + b] = static_cast<uint16_t>((a + b) % p_);
        sub_[a * q + b] = static_cast<uint16_t>((a + p_ - b) % p_);
      } else {
        std::vector<uint32_t> da = digits(a, p_, e_), db = digits(b, p_, e_);
        std::vector<uint32_t> s(e_), t(e_);
        for (uint32_t j = 0; j < e_; ++j) {
          s[j] = (da[j] + db[j]) % p_;
          t[j] = (da[j] + p_ - db[j]) % p_;
        }
        add_[a * q + b] = static_cast<uint16_t>(undigits(s, p_));
        sub_[a * q + b] = static_cast<uint16_t>(undigits(t, p_));
      }
    }
  }

  if (e_ == 1) {
    for (uint32_t a = 0; a < q; ++a)
      for (uint32_t b = 0; b < q; ++b)
        mul_[a * q + b] = static_cast<uint16_t>((a * b) % p_);
  } else {
    // Deterministic modulus: scan monic degree-e polynomials in ascending
    // encoded order for the first whose quotient ring is a field with x
    // primitive. Keeps the element encoding reproducible across runs.
    bool found = false;
    for (uint32_t lo = 0; lo < q && !found; ++lo) {
      std::vector<uint32_t> f = digits(lo, p_, e_);
      f.push_back(1);  // monic
      if (f[0] == 0) continue;  // x | f, reducible
      std::vector<uint16_t> cand(q * q);
      bool zero_divisor = false;
      for (uint32_t a = 0; a < q && !zero_divisor; ++a) {
        for (uint32_t b = 0; b < q; ++b) {
          uint32_t m = poly_mulmod(a, b, f, p_, e_);
          cand[a * q + b] = static_cast<uint16_t>(m);
          if (a && b && m == 0) {
            zero_divisor = true;
            break;
          }
        }
      }
      if (zero_divisor) continue;
      // order of the element x (encoded as p_)
      uint32_t pw = p_, ord = 1;
      while (pw != 1) {
        pw = cand[pw * q + p_];
        ++ord;
        if (ord > q) break;
      }
      if (ord != q - 1) continue;
      mul_.swap(cand);
      poly_ = f;
      found = true;
    }
    if (!found) throw internal_error("no primitive polynomial found");
  }

  for (uint32_t a = 1; a < q; ++a) {
    for (uint32_t b = 1; b < q; ++b) {
      if (mul_[a * q + b] == 1) {
        inv_[a] = static_cast<uint16_t>(b);
        break;
      }
    }
    if (inv_[a] == 0) throw internal_error("non-invertible nonzero element");
  }
}

uint16_t Field::inv(uint16_t a) const {
  if (a == 0) throw invalid_argument_error("inverse of zero");
  return inv_[a];
}

GfMat gf_sub(const Field& f, const GfMat& a, const GfMat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw invalid_argument_error("matrix shape mismatch");
  GfMat r(a.rows, a.cols);
  const uint16_t* st = f.sub_table();
  const uint32_t q = f.q();
  for (size_t k = 0; k < a.v.size(); ++k) r.v[k] = st[a.v[k] * q + b.v[k]];
  return r;
}

GfMat gf_add(const Field& f, const GfMat& a, const GfMat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw invalid_argument_error("matrix shape mismatch");
  GfMat r(a.rows, a.cols);
  const uint16_t* at = f.add_table();
  const uint32_t q = f.q();
  for (size_t k = 0; k < a.v.size(); ++k) r.v[k] = at[a.v[k] * q + b.v[k]];
  return r;
}

GfMat strip(const GfMat& m, Strip mode) {
  GfMat r = m;
  if (mode == Strip::FirstCol || mode == Strip::Both)
    for (uint32_t i = 0; i < r.rows; ++i) r.at(i, 0) = 0;
  if (mode == Strip::FirstRow || mode == Strip::Both)
    for (uint32_t j = 0; j < r.cols; ++j) r.at(0, j) = 0;
  return r;
}

int rank_inplace(const Field& f, uint16_t* a, uint32_t rows, uint32_t cols,
                 int cap) {
  const uint32_t q = f.q();
  const uint16_t* mt = f.mul_table();
  const uint16_t* st = f.sub_table();
  int r = 0;
  for (uint32_t col = 0; col < cols && r < static_cast<int>(rows); ++col) {
    uint32_t piv = rows;
    for (uint32_t i = r; i < rows; ++i) {
      if (a[i * cols + col]) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != static_cast<uint32_t>(r)) {
      for (uint32_t j = col; j < cols; ++j)
        std::swap(a[piv * cols + j], a[r * cols + j]);
    }
    const uint16_t pinv = f.inv(a[r * cols + col]);
    for (uint32_t j = col; j < cols; ++j)
      a[r * cols + j] = mt[a[r * cols + j] * q + pinv];
    for (uint32_t i = r + 1; i < rows; ++i) {
      const uint16_t c = a[i * cols + col];
      if (!c) continue;
      const uint16_t* crow = mt + c * q;
      for (uint32_t j = col; j < cols; ++j)
        a[i * cols + j] = st[a[i * cols + j] * q + crow[a[r * cols + j]]];
    }
    ++r;
    if (cap >= 0 && r > cap) return r;
  }
  return r;
}

int rank(const Field& f, const GfMat& m) {
  std::vector<uint16_t> scratch(m.v);
  return rank_inplace(f, scratch.data(), m.rows, m.cols);
}

int rank_capped(const Field& f, const GfMat& m, int cap) {
  std::vector<uint16_t> scratch(m.v);
  return rank_inplace(f, scratch.data(), m.rows, m.cols, cap);
}

GfMat parse_matrix(const std::string& literal, uint32_t q) {
  std::vector<std::vector<uint16_t>> rows;
  std::string rowbuf;
  std::istringstream is(literal);
  while (std::getline(is, rowbuf, ';')) {
    std::istringstream rs(rowbuf);
    std::vector<uint16_t> row;
    long long x;
    while (rs >> x) {
      if (x < 0 || x >= static_cast<long long>(q))
        throw invalid_argument_error("matrix entry out of range [0, q)");
      row.push_back(static_cast<uint16_t>(x));
    }
    if (!rs.eof()) throw invalid_argument_error("malformed matrix literal");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw invalid_argument_error("empty matrix literal");
  const size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols)
      throw invalid_argument_error("ragged matrix literal");
  GfMat m(static_cast<uint32_t>(rows.size()), static_cast<uint32_t>(cols));
  for (uint32_t i = 0; i < m.rows; ++i)
    for (uint32_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

GfMat parse_matrix(const std::string& literal, const Params& p) {
  GfMat m = parse_matrix(literal, p.q);
  if (m.rows != p.rows() || m.cols != p.cols()) {
    std::ostringstream os;
    os << "matrix must be " << p.rows() << " x " << p.cols() << ", got "
       << m.rows << " x " << m.cols;
    throw invalid_argument_error(os.str());
  }
  return m;
}

std::string format_matrix(const GfMat& m) {
  std::ostringstream os;
  for (uint32_t i = 0; i < m.rows; ++i) {
    if (i) os << "; ";
    for (uint32_t j = 0; j < m.cols; ++j) {
      if (j) os << ' ';
      os << m.at(i, j);
    }
  }
  return os.str();
}

GfMat gf_mul(const Field& f, const GfMat& a, const GfMat& b) {
  if (a.cols != b.rows) throw invalid_argument_error("matrix shape mismatch");
  GfMat r(a.rows, b.cols);
  for (uint32_t i = 0; i < a.rows; ++i) {
    for (uint32_t k = 0; k < a.cols; ++k) {
      const uint16_t c = a.at(i, k);
      if (!c) continue;
      for (uint32_t j = 0; j < b.cols; ++j)
        r.at(i, j) = f.add(r.at(i, j), f.mul(c, b.at(k, j)));
    }
  }
  return r;
}

GfMat column_reducer(const Field& f, const std::vector<uint16_t>& u) {
  const uint32_t n = static_cast<uint32_t>(u.size());
  uint32_t piv = n;
  for (uint32_t i = 0; i < n; ++i) {
    if (u[i]) {
      piv = i;
      break;
    }
  }
  if (piv == n) throw invalid_argument_error("zero vector has no reducer");
  GfMat p(n, n);
  for (uint32_t i = 0; i < n; ++i) p.at(i, i) = 1;
  // P is assembled by applying to the identity the row operations that send
  // u to e_1: swap pivot to row 0, scale to 1, clear the other entries.
  auto swap_rows = [&](uint32_t a, uint32_t b) {
    for (uint32_t j = 0; j < n; ++j) std::swap(p.at(a, j), p.at(b, j));
  };
  std::vector<uint16_t> w = u;
  if (piv != 0) {
    swap_rows(0, piv);
    std::swap(w[0], w[piv]);
  }
  const uint16_t s = f.inv(w[0]);
  for (uint32_t j = 0; j < n; ++j) p.at(0, j) = f.mul(s, p.at(0, j));
  w[0] = 1;
  for (uint32_t i = 1; i < n; ++i) {
    if (!w[i]) continue;
    const uint16_t c = w[i];
    for (uint32_t j = 0; j < n; ++j)
      p.at(i, j) = f.sub(p.at(i, j), f.mul(c, p.at(0, j)));
    w[i] = 0;
  }
  return p;
}

GfMat row_reducer(const Field& f, const std::vector<uint16_t>& v) {
  // v Q = e_1^T  <=>  Q^T v^T = e_1
  GfMat pt = column_reducer(f, v);
  GfMat q(pt.rows, pt.cols);
  for (uint32_t i = 0; i < q.rows; ++i)
    for (uint32_t j = 0; j < q.cols; ++j) q.at(i, j) = pt.at(j, i);
  return q;
}

}  // namespace bilform
