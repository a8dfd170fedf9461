#include "core/partition.hpp"

#include <algorithm>
#include <sstream>

#include "core/graph.hpp"
#include "core/shard.hpp"

namespace bilform {

GfMat standard_x(const Params& p) { return GfMat(p.rows(), p.cols()); }

GfMat standard_y(const Params& p) {
  GfMat y(p.rows(), p.cols());
  y.at(0, 0) = 1;
  return y;
}

RankProfile rank_profile(const Field& f, const GfMat& z) {
  GfMat zy = z;
  zy.at(0, 0) = f.sub(zy.at(0, 0), 1);
  return RankProfile{
      rank(f, z),
      rank(f, zy),
      rank(f, strip(z, Strip::FirstCol)),
      rank(f, strip(z, Strip::FirstRow)),
      rank(f, strip(z, Strip::Both)),
  };
}

CellId classify_profile(const Params& p, const RankProfile& pr) {
  const int r = pr.r;
  int matches = 0;
  CellId out{Family::Lower, 0};
  auto claim = [&](Family fam, uint32_t i) {
    ++matches;
    out = CellId{fam, i};
  };
  // The six rank-characterization clauses, checked exhaustively.
  if (pr.ry == r - 1 && pr.rc == r - 1 && pr.rr == r - 1 && pr.rb == r - 1)
    claim(Family::Lower, r);
  if (pr.ry == r && pr.rc == r - 1 && pr.rr == r - 1 && pr.rb == r - 2)
    claim(Family::A, r);
  if (pr.ry == r && pr.rc == r - 1 && pr.rr == r - 1 && pr.rb == r - 1)
    claim(Family::B, r);
  if (pr.ry == r && pr.rc == r && pr.rr == r - 1 && pr.rb == r - 1)
    claim(Family::C, r);
  if (pr.ry == r && pr.rc == r - 1 && pr.rr == r && pr.rb == r - 1)
    claim(Family::D, r);
  if (pr.ry == r + 1 && pr.rc == r && pr.rr == r && pr.rb == r)
    claim(Family::Upper, r + 1);

  if (matches != 1) {
    std::ostringstream os;
    os << "rank profile (" << pr.r << "," << pr.ry << "," << pr.rc << ","
       << pr.rr << "," << pr.rb << ") matched " << matches << " clauses";
    throw internal_error(os.str());
  }
  if (!cell_valid(p, out))
    throw internal_error("classified into out-of-range cell " + cell_label(out));
  return out;
}

CellId classify(const Params& p, const Field& f, const GfMat& z) {
  return classify_profile(p, rank_profile(f, z));
}

CellId classify_swapped(const Params& p, const Field& f, const GfMat& z) {
  RankProfile pr = rank_profile(f, z);
  std::swap(pr.r, pr.ry);
  return classify_profile(p, pr);
}

FastClassifier::FastClassifier(const Params& p, const Field& f)
    : f_(f), rows_(p.rows()), cols_(p.cols()), q_(p.q), d_(p.d) {
  scratch_.resize(rows_ * cols_);
  cell_index_.assign(6 * (d_ + 2), -1);
  CellTable table(p);
  for (const CellId& c : table.cells)
    cell_index_[static_cast<int>(c.family) * (d_ + 2) + c.i] = table.index(c);
}

CellId FastClassifier::operator()(const uint16_t* z) {
  uint16_t* s = scratch_.data();
  const uint32_t R = rows_, C = cols_;

  std::copy(z, z + R * C, s);
  const int r = rank_inplace(f_, s, R, C);

  // column-stripped: drop column 0
  for (uint32_t i = 0; i < R; ++i)
    std::copy(z + i * C + 1, z + (i + 1) * C, s + i * (C - 1));
  const int rc = rank_inplace(f_, s, R, C - 1);

  // row-stripped: drop row 0
  std::copy(z + C, z + R * C, s);
  const int rr = rank_inplace(f_, s, R - 1, C);

  const int dc = rc - r, dr = rr - r;
  if (dc == 0 && dr == 0) return CellId{Family::Upper, static_cast<uint32_t>(r + 1)};
  if (dc == 0 && dr == -1) return CellId{Family::C, static_cast<uint32_t>(r)};
  if (dc == -1 && dr == 0) return CellId{Family::D, static_cast<uint32_t>(r)};
  if (dc != -1 || dr != -1) throw internal_error("impossible rank signature");

  // corner-stripped: drop row 0 and column 0
  for (uint32_t i = 1; i < R; ++i)
    std::copy(z + i * C + 1, z + (i + 1) * C, s + (i - 1) * (C - 1));
  const int rb = rank_inplace(f_, s, R - 1, C - 1);
  if (rb == r - 2) return CellId{Family::A, static_cast<uint32_t>(r)};
  if (rb != r - 1) throw internal_error("impossible corner rank");

  // Lower vs B: decided by rank(z - y).
  std::copy(z, z + R * C, s);
  s[0] = f_.sub(s[0], 1);
  const int ry = rank_inplace(f_, s, R, C);
  if (ry == r - 1) return CellId{Family::Lower, static_cast<uint32_t>(r)};
  if (ry == r) return CellId{Family::B, static_cast<uint32_t>(r)};
  throw internal_error("impossible rank(z-y)");
}

int FastClassifier::index(const uint16_t* z) {
  CellId c = (*this)(z);
  int idx = cell_index_[static_cast<int>(c.family) * (d_ + 2) + c.i];
  if (idx < 0) throw internal_error("classified into out-of-range cell");
  return idx;
}

GfMat representative(const Params& p, CellId c) {
  if (!cell_valid(p, c))
    throw invalid_argument_error("invalid cell " + cell_label(c));
  GfMat m(p.rows(), p.cols());
  const uint32_t i = c.i, C = p.cols();
  switch (c.family) {
    case Family::Lower:  // I_i in the top-left corner
      for (uint32_t j = 0; j < i; ++j) m.at(j, j) = 1;
      break;
    case Family::A:  // 1 at (1, N-D), I_{i-2} inside, 1 at (i, 1)
      m.at(0, C - 1) = 1;
      for (uint32_t j = 1; j + 1 < i; ++j) m.at(j, j) = 1;
      m.at(i - 1, 0) = 1;
      break;
    case Family::B:  // xi at (1,1) with xi != 0,1, then I_{i-1}
      m.at(0, 0) = 2;
      for (uint32_t j = 1; j < i; ++j) m.at(j, j) = 1;
      break;
    case Family::C:  // 1 at (1, N-D), I_{i-1} inside
      m.at(0, C - 1) = 1;
      for (uint32_t j = 1; j < i; ++j) m.at(j, j) = 1;
      break;
    case Family::D:  // I_{i-1} inside, 1 at (i+1, 1)
      for (uint32_t j = 1; j < i; ++j) m.at(j, j) = 1;
      m.at(i, 0) = 1;
      break;
    case Family::Upper:  // I_{i-1} inside, first row and column zero
      for (uint32_t j = 1; j < i; ++j) m.at(j, j) = 1;
      break;
  }
  return m;
}

bool definitional_check(const Params& p, const Field& f, const GfMat& z,
                        CellId c, uint64_t budget, std::string* detail) {
  if (!cell_valid(p, c))
    throw invalid_argument_error("invalid cell " + cell_label(c));
  const GfMat y = standard_y(p);
  const int dx = rank(f, z);
  const int dy = rank(f, gf_sub(f, z, y));

  if (c.family == Family::Lower || c.family == Family::Upper) {
    const bool ok = dx == static_cast<int>(cell_dist_x(c)) &&
                    dy == static_cast<int>(cell_dist_y(c));
    if (!ok && detail) {
      std::ostringstream os;
      os << "distance pair (" << dx << "," << dy << ")";
      *detail = os.str();
    }
    return ok;
  }

  const IntersectionNumbers in = intersection_numbers(p);
  if (in.k > mpz_class(static_cast<unsigned long>(budget)))
    throw budget_error("common-neighbor scan exceeds budget");

  // Gamma(x) n Gamma(y): rank-1 vertices w with rank(w - y) = 1.
  uint64_t n_minus = 0, n_plus = 0, n_common = 0;
  const uint32_t i = c.i;
  for (const GfMat& w : rank_one_basis(f, p.rows(), p.cols())) {
    if (rank(f, gf_sub(f, w, y)) != 1) continue;
    ++n_common;
    const int dz = distance(f, w, z);
    if (dz == static_cast<int>(i) - 1) ++n_minus;
    if (dz == static_cast<int>(i) + 1) ++n_plus;
  }
  if (mpz_class(static_cast<unsigned long>(n_common)) != in.a[1])
    throw internal_error("common neighborhood size != a_1");

  const mpz_class q(p.q);
  mpz_class want_minus, want_plus;
  switch (c.family) {
    case Family::A:
      want_minus = 2 * zpow(q, i - 1);
      want_plus = 0;
      break;
    case Family::B:
      want_minus = 2 * zpow(q, i - 1) - 1;
      want_plus = 0;
      break;
    case Family::C:
      want_minus = zpow(q, i - 1);
      want_plus = zpow(q, p.d) - zpow(q, i);
      break;
    case Family::D:
      want_minus = zpow(q, i - 1);
      want_plus = zpow(q, p.n - p.d) - zpow(q, i);
      break;
    default:
      throw internal_error("unreachable family");
  }
  const bool ok = dx == static_cast<int>(i) && dy == static_cast<int>(i) &&
                  mpz_class(static_cast<unsigned long>(n_minus)) == want_minus &&
                  mpz_class(static_cast<unsigned long>(n_plus)) == want_plus;
  if (!ok && detail) {
    std::ostringstream os;
    os << "distances (" << dx << "," << dy << "), counts (" << n_minus << ","
       << n_plus << "), expected (" << want_minus.get_str() << ","
       << want_plus.get_str() << ")";
    *detail = os.str();
  }
  return ok;
}

GfMat random_g_perturbation(const Params& p, const Field& f, const GfMat& m,
                            std::mt19937_64& rng) {
  GfMat z = m;
  const uint32_t R = p.rows(), C = p.cols(), q = p.q;
  std::uniform_int_distribution<int> len_dist(1, 32);
  std::uniform_int_distribution<int> op_dist(0, 5);
  std::uniform_int_distribution<uint32_t> nz_dist(1, q - 1);
  const int len = len_dist(rng);
  for (int step = 0; step < len; ++step) {
    switch (op_dist(rng)) {
      case 0: {  // swap rows a, b (both >= 2 in 1-based terms)
        if (R < 3) break;
        std::uniform_int_distribution<uint32_t> d(1, R - 1);
        uint32_t a = d(rng), b = d(rng);
        if (a == b) break;
        for (uint32_t j = 0; j < C; ++j) std::swap(z.at(a, j), z.at(b, j));
        break;
      }
      case 1: {  // scale row a >= 2
        std::uniform_int_distribution<uint32_t> d(1, R - 1);
        uint32_t a = d(rng);
        uint16_t s = static_cast<uint16_t>(nz_dist(rng));
        for (uint32_t j = 0; j < C; ++j) z.at(a, j) = f.mul(s, z.at(a, j));
        break;
      }
      case 2: {  // row a += s * row b, b >= 2, a != b
        std::uniform_int_distribution<uint32_t> da(0, R - 1), db(1, R - 1);
        uint32_t a = da(rng), b = db(rng);
        if (a == b) break;
        uint16_t s = static_cast<uint16_t>(nz_dist(rng));
        for (uint32_t j = 0; j < C; ++j)
          z.at(a, j) = f.add(z.at(a, j), f.mul(s, z.at(b, j)));
        break;
      }
      case 3: {  // swap cols
        if (C < 3) break;
        std::uniform_int_distribution<uint32_t> d(1, C - 1);
        uint32_t a = d(rng), b = d(rng);
        if (a == b) break;
        for (uint32_t i = 0; i < R; ++i) std::swap(z.at(i, a), z.at(i, b));
        break;
      }
      case 4: {  // scale col
        std::uniform_int_distribution<uint32_t> d(1, C - 1);
        uint32_t a = d(rng);
        uint16_t s = static_cast<uint16_t>(nz_dist(rng));
        for (uint32_t i = 0; i < R; ++i) z.at(i, a) = f.mul(z.at(i, a), s);
        break;
      }
      case 5: {  // col a += s * col b, b >= 2, a != b
        std::uniform_int_distribution<uint32_t> da(0, C - 1), db(1, C - 1);
        uint32_t a = da(rng), b = db(rng);
        if (a == b) break;
        uint16_t s = static_cast<uint16_t>(nz_dist(rng));
        for (uint32_t i = 0; i < R; ++i)
          z.at(i, a) = f.add(z.at(i, a), f.mul(z.at(i, b), s));
        break;
      }
    }
  }
  return z;
}

GfMat PairNormalizer::apply(const Field& f, const GfMat& x, const GfMat& z) const {
  return gf_mul(f, gf_mul(f, p_left, gf_sub(f, z, x)), q_right);
}

PairNormalizer normalize_pair(const Field& f, const GfMat& x, const GfMat& y) {
  const GfMat d = gf_sub(f, y, x);
  if (rank(f, d) != 1)
    throw invalid_argument_error("basepoints must be adjacent (rank(y-x)=1)");
  uint32_t r0 = 0, c0 = 0;
  bool found = false;
  for (uint32_t i = 0; i < d.rows && !found; ++i)
    for (uint32_t j = 0; j < d.cols && !found; ++j)
      if (d.at(i, j)) {
        r0 = i;
        c0 = j;
        found = true;
      }
  // d = u v with u = d[:,c0] / d[r0][c0], v = d[r0,:]
  const uint16_t pivot_inv = f.inv(d.at(r0, c0));
  std::vector<uint16_t> u(d.rows), v(d.cols);
  for (uint32_t i = 0; i < d.rows; ++i) u[i] = f.mul(d.at(i, c0), pivot_inv);
  for (uint32_t j = 0; j < d.cols; ++j) v[j] = d.at(r0, j);

  PairNormalizer out;
  out.p_left = column_reducer(f, u);
  out.q_right = row_reducer(f, v);
  // sanity: P d Q = E11
  GfMat e11 = gf_mul(f, gf_mul(f, out.p_left, d), out.q_right);
  GfMat want(d.rows, d.cols);
  want.at(0, 0) = 1;
  if (!(e11 == want)) throw internal_error("pair normalization failed");
  return out;
}

std::vector<uint64_t> partition_census(const Params& p, const Field& f,
                                       uint64_t budget, uint32_t jobs) {
  check_budget(p, budget);
  const uint64_t n = p.n_vertices.get_ui();
  const uint32_t nent = p.rows() * p.cols();
  const uint32_t q = p.q;
  CellTable table(p);
  const uint32_t ncells = table.order();

  std::vector<std::vector<uint64_t>> tallies(resolve_jobs(jobs),
                                             std::vector<uint64_t>(ncells, 0));
  run_sharded(n, jobs, [&](uint32_t shard, uint64_t lo, uint64_t hi) {
    GfMat m(p.rows(), p.cols());
    decode_vertex64(lo, q, m.v.data(), nent);
    auto& tally = tallies[shard];
    for (uint64_t idx = lo; idx < hi; ++idx) {
      tally[table.index(classify(p, f, m))]++;
      for (uint32_t k = 0; k < nent; ++k) {
        if (++m.v[k] < q) break;
        m.v[k] = 0;
      }
    }
  });

  std::vector<uint64_t> out(ncells, 0);
  for (const auto& t : tallies)
    for (uint32_t i = 0; i < ncells; ++i) out[i] += t[i];
  return out;
}

}  // namespace bilform
