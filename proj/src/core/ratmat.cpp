#include "core/ratmat.hpp"

#include <algorithm>

namespace bilform {

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool RatMat::is_identity() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool RatMat::is_zero() const {
  return std::all_of(v.begin(), v.end(), [](const mpq_class& x) { return x == 0; });
}

RatMat RatMat::transposed() const {
  RatMat t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMat operator*(const RatMat& a, const RatMat& b) {
  if (a.cols != b.rows) throw invalid_argument_error("ratmat shape mismatch");
  RatMat r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const mpq_class& c = a.at(i, k);
      if (c == 0) continue;
      for (int j = 0; j < b.cols; ++j) r.at(i, j) += c * b.at(k, j);
    }
  }
  return r;
}

RatMat operator+(const RatMat& a, const RatMat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw invalid_argument_error("ratmat shape mismatch");
  RatMat r(a.rows, a.cols);
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] = a.v[k] + b.v[k];
  return r;
}

RatMat operator-(const RatMat& a, const RatMat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw invalid_argument_error("ratmat shape mismatch");
  RatMat r(a.rows, a.cols);
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] = a.v[k] - b.v[k];
  return r;
}

RatMat operator*(const mpq_class& s, const RatMat& a) {
  RatMat r(a.rows, a.cols);
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] = s * a.v[k];
  return r;
}

std::vector<mpq_class> matvec(const RatMat& a, const std::vector<mpq_class>& x) {
  if (static_cast<size_t>(a.cols) != x.size())
    throw invalid_argument_error("ratmat/vector shape mismatch");
  std::vector<mpq_class> y(a.rows, 0);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (a.at(i, j) != 0 && x[j] != 0) y[i] += a.at(i, j) * x[j];
  return y;
}

int rat_rank(RatMat a) {
  int r = 0;
  for (int col = 0; col < a.cols && r < a.rows; ++col) {
    int piv = -1;
    for (int i = r; i < a.rows; ++i) {
      if (a.at(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = col; j < a.cols; ++j) std::swap(a.at(piv, j), a.at(r, j));
    const mpq_class pinv = 1 / a.at(r, col);
    for (int j = col; j < a.cols; ++j) a.at(r, j) *= pinv;
    for (int i = r + 1; i < a.rows; ++i) {
      const mpq_class c = a.at(i, col);
      if (c == 0) continue;
      for (int j = col; j < a.cols; ++j) a.at(i, j) -= c * a.at(r, j);
    }
    ++r;
  }
  return r;
}

std::optional<RatMat> rat_inverse(const RatMat& a) {
  if (a.rows != a.cols) throw invalid_argument_error("inverse of non-square");
  const int n = a.rows;
  RatMat w = a;
  RatMat inv = RatMat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i) {
      if (w.at(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(w.at(piv, j), w.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    }
    const mpq_class pinv = 1 / w.at(col, col);
    for (int j = 0; j < n; ++j) {
      w.at(col, j) *= pinv;
      inv.at(col, j) *= pinv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const mpq_class c = w.at(i, col);
      if (c == 0) continue;
      for (int j = 0; j < n; ++j) {
        w.at(i, j) -= c * w.at(col, j);
        inv.at(i, j) -= c * inv.at(col, j);
      }
    }
  }
  return inv;
}

std::vector<mpq_class> rat_solve(const RatMat& a, const std::vector<mpq_class>& b) {
  auto inv = rat_inverse(a);
  if (!inv) throw internal_error("singular system in rat_solve");
  return matvec(*inv, b);
}

std::string rat_str(const mpq_class& v) { return v.get_str(); }

}  // namespace bilform
