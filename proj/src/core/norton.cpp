#include "core/norton.hpp"

#include <optional>
#include <sstream>

#include "core/ratmat.hpp"

namespace bilform {

namespace {

using Vec = std::vector<mpq_class>;

// Incremental echelon span tracker over exact rationals.
struct SpanTracker {
  std::vector<Vec> rows;  // each normalized with leading 1 at its pivot
  std::vector<int> pivots;

  bool add(Vec v) {
    for (size_t r = 0; r < rows.size(); ++r) {
      const mpq_class& c = v[pivots[r]];
      if (c != 0) {
        for (size_t k = 0; k < v.size(); ++k) v[k] -= c * rows[r][k];
      }
    }
    int piv = -1;
    for (size_t k = 0; k < v.size(); ++k) {
      if (v[k] != 0) {
        piv = static_cast<int>(k);
        break;
      }
    }
    if (piv < 0) return false;
    const mpq_class inv = 1 / v[piv];
    for (auto& x : v) x *= inv;
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  }
  int dim() const { return static_cast<int>(rows.size()); }
};

std::optional<Vec> in_span_coords(const std::vector<Vec>& basis, const Vec& v) {
  const int n = static_cast<int>(v.size());
  const int m = static_cast<int>(basis.size());
  RatMat aug(n, m + 1);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) aug.at(i, j) = basis[j][i];
  for (int i = 0; i < n; ++i) aug.at(i, m) = v[i];

  // forward elimination with column pivoting over the basis columns
  std::vector<int> pivot_col_of_row;
  int r = 0;
  for (int col = 0; col < m && r < n; ++col) {
    int piv = -1;
    for (int i = r; i < n; ++i) {
      if (aug.at(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j <= m; ++j) std::swap(aug.at(piv, j), aug.at(r, j));
    const mpq_class inv = 1 / aug.at(r, col);
    for (int j = 0; j <= m; ++j) aug.at(r, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == r) continue;
      const mpq_class c = aug.at(i, col);
      if (c == 0) continue;
      for (int j = 0; j <= m; ++j) aug.at(i, j) -= c * aug.at(r, j);
    }
    pivot_col_of_row.push_back(col);
    ++r;
  }
  // consistency: rows past r must have zero rhs
  for (int i = r; i < n; ++i)
    if (aug.at(i, m) != 0) return std::nullopt;
  Vec coeff(m, 0);
  for (int i = 0; i < r; ++i) coeff[pivot_col_of_row[i]] = aug.at(i, m);
  return coeff;
}

}  // namespace

NortonReport norton_explore(const Params& p) {
  NortonReport rep;
  const int n = 6 * p.d - 2;

  GradedOperator g = build_graded_operator(p, nullptr);
  const RatMat a_u = assemble_block_action(p, g);
  const Spectrum sp = eigenvalues(p);
  rep.theta1 = sp.theta[1];

  // Eigenvalues of A|_U among theta_0..theta_D, with multiplicities.
  std::vector<mpz_class> present;
  int total = 0;
  bool theta1_present = false;
  for (const mpz_class& theta : sp.theta) {
    RatMat shifted = a_u;
    for (int i = 0; i < n; ++i) shifted.at(i, i) -= mpq_class(theta);
    const int nullity = n - rat_rank(shifted);
    if (nullity > 0) {
      present.push_back(theta);
      if (theta == sp.theta[1]) theta1_present = true;
    }
    total += nullity;
  }
  if (total != n)
    throw internal_error("A|_U is not diagonalized by theta_0..theta_D");
  if (!theta1_present)
    throw internal_error("theta_1 is not an eigenvalue of A|_U");

  // Spectral projector onto the theta_1 eigenspace, by Lagrange
  // interpolation over the eigenvalues actually present.
  RatMat e_proj = RatMat::identity(n);
  for (const mpz_class& theta : present) {
    if (theta == sp.theta[1]) continue;
    RatMat factor = a_u;
    for (int i = 0; i < n; ++i) factor.at(i, i) -= mpq_class(theta);
    const mpq_class scale =
        1 / mpq_class(mpz_class(sp.theta[1] - theta));
    e_proj = e_proj * (scale * factor);
  }
  rep.idempotent = (e_proj * e_proj == e_proj);
  rep.commutes = (e_proj * a_u == a_u * e_proj);
  rep.dim_eu = rat_rank(e_proj);

  auto unit = [&](int pos) {
    Vec v(n, 0);
    v[pos] = 1;
    return v;
  };
  // x = O_{0,1}, y = O_{1,0}; the level-1 block is (L, B, C, D, U).
  const int off1 = level_offset(p, 1);
  const Vec xs = unit(level_offset(p, 0));
  const Vec ys = unit(off1 + 0);
  const Vec bs = unit(off1 + 1);
  const Vec cs = unit(off1 + 2);
  const Vec ds = unit(off1 + 3);

  auto apply = [&](const Vec& v) { return matvec(e_proj, v); };
  std::vector<Vec> conjectured = {apply(xs), apply(ys), apply(bs), apply(cs),
                                  apply(ds)};
  rep.basis_names = {"E x", "E y", "E O^B_{1,1}", "E O^C_{1,1}", "E O^D_{1,1}"};

  {
    SpanTracker span;
    for (const Vec& v : conjectured) span.add(Vec(v));
    rep.conjectured_rank = span.dim();
  }
  rep.conjectured_spans =
      rep.conjectured_rank == 5 && rep.dim_eu == rep.conjectured_rank;

  auto star = [&](const Vec& u, const Vec& v) {
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = u[i] * v[i];
    return matvec(e_proj, w);
  };

  // Star-closure of {Ex, Ey}.
  {
    std::vector<Vec> gens = {conjectured[0], conjectured[1]};
    SpanTracker span;
    for (const Vec& v : gens) span.add(Vec(v));
    int rounds = 0;
    bool grew = true;
    while (grew && span.dim() < rep.dim_eu && rounds < n + 2) {
      grew = false;
      ++rounds;
      const size_t sz = gens.size();
      for (size_t i = 0; i < sz; ++i) {
        for (size_t j = i; j < sz; ++j) {
          Vec prod = star(gens[i], gens[j]);
          if (span.add(Vec(prod))) {
            gens.push_back(std::move(prod));
            grew = true;
          }
        }
      }
    }
    rep.closure_dim = span.dim();
    rep.closure_rounds = rounds;
    rep.closure_generates = rep.closure_dim == rep.dim_eu;
  }

  // Structure constants of the star product on a basis of EU.
  std::vector<Vec> basis;
  if (rep.conjectured_spans) {
    basis = conjectured;
    rep.basis_used = "conjectured";
  } else {
    // fallback: first dim_eu independent columns of the projector
    SpanTracker span;
    for (int j = 0; j < n && static_cast<int>(basis.size()) < rep.dim_eu; ++j) {
      Vec col(n);
      for (int i = 0; i < n; ++i) col[i] = e_proj.at(i, j);
      if (span.add(Vec(col))) basis.push_back(std::move(col));
    }
    rep.basis_used = "fallback";
    rep.basis_names.clear();
    for (size_t j = 0; j < basis.size(); ++j)
      rep.basis_names.push_back("E col" + std::to_string(j));
  }
  const int m = static_cast<int>(basis.size());
  rep.star_table.assign(m, std::vector<Vec>(m));
  bool all_expressed = true;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      auto coeff = in_span_coords(basis, star(basis[i], basis[j]));
      if (coeff) {
        rep.star_table[i][j] = *coeff;
      } else {
        rep.star_table[i][j].assign(m, 0);
        all_expressed = false;
      }
    }
  }

  {
    std::ostringstream os;
    os << "conjectured vectors: rank " << rep.conjectured_rank << ", dim EU = "
       << rep.dim_eu << (rep.conjectured_spans ? " (basis)" : " (not a basis)");
    rep.notes.push_back(os.str());
  }
  {
    std::ostringstream os;
    os << "star-closure of {Ex, Ey} reaches dim " << rep.closure_dim << " in "
       << rep.closure_rounds << " rounds"
       << (rep.closure_generates ? " (generates EU)" : " (does not generate EU)");
    rep.notes.push_back(os.str());
  }
  if (!all_expressed)
    rep.notes.push_back("some star products fell outside the reported basis span");
  return rep;
}

}  // namespace bilform
