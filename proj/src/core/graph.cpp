#include "core/graph.hpp"

#include <mutex>

#include "core/shard.hpp"

namespace bilform {

mpz_class encode_vertex(const Params& p, const GfMat& m) {
  if (m.rows != p.rows() || m.cols != p.cols())
    throw invalid_argument_error("matrix shape mismatch");
  mpz_class idx = 0;
  for (size_t k = m.v.size(); k-- > 0;) idx = idx * p.q + m.v[k];
  return idx;
}

GfMat decode_vertex(const Params& p, const mpz_class& idx) {
  if (idx < 0 || idx >= p.n_vertices)
    throw invalid_argument_error("vertex index out of range");
  GfMat m(p.rows(), p.cols());
  mpz_class rest = idx, digit;
  for (size_t k = 0; k < m.v.size(); ++k) {
    mpz_tdiv_qr_ui(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), p.q);
    m.v[k] = static_cast<uint16_t>(digit.get_ui());
  }
  return m;
}

uint64_t encode_vertex64(const Params& p, const GfMat& m) {
  uint64_t idx = 0;
  for (size_t k = m.v.size(); k-- > 0;) idx = idx * p.q + m.v[k];
  return idx;
}

void decode_vertex64(uint64_t idx, uint32_t q, uint16_t* out, uint32_t n) {
  for (uint32_t k = 0; k < n; ++k) {
    out[k] = static_cast<uint16_t>(idx % q);
    idx /= q;
  }
}

std::vector<GfMat> rank_one_basis(const Field& f, uint32_t rows, uint32_t cols) {
  std::vector<GfMat> out;
  const uint32_t q = f.q();
  // Nonzero columns with first nonzero entry 1: iterate the pivot position,
  // free entries below it run over all of GF(q).
  std::vector<std::vector<uint16_t>> columns;
  for (uint32_t piv = 0; piv < rows; ++piv) {
    uint32_t free_below = rows - piv - 1;
    uint64_t count = 1;
    for (uint32_t t = 0; t < free_below; ++t) count *= q;
    for (uint64_t code = 0; code < count; ++code) {
      std::vector<uint16_t> u(rows, 0);
      u[piv] = 1;
      uint64_t c = code;
      for (uint32_t t = 0; t < free_below; ++t) {
        u[piv + 1 + t] = static_cast<uint16_t>(c % q);
        c /= q;
      }
      columns.push_back(std::move(u));
    }
  }
  for (const auto& u : columns) {
    // nonzero rows in ascending encoded order
    std::vector<uint16_t> v(cols, 0);
    uint64_t total = 1;
    for (uint32_t t = 0; t < cols; ++t) total *= q;
    for (uint64_t code = 1; code < total; ++code) {
      uint64_t c = code;
      for (uint32_t t = 0; t < cols; ++t) {
        v[t] = static_cast<uint16_t>(c % q);
        c /= q;
      }
      GfMat m(rows, cols);
      for (uint32_t i = 0; i < rows; ++i) {
        if (!u[i]) continue;
        for (uint32_t j = 0; j < cols; ++j) m.at(i, j) = f.mul(u[i], v[j]);
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

int distance(const Field& f, const GfMat& u, const GfMat& v) {
  return rank(f, gf_sub(f, u, v));
}

void for_each_neighbor(const Field& f, const std::vector<GfMat>& r1basis,
                       const GfMat& v,
                       const std::function<void(const GfMat&)>& fn) {
  for (const auto& r : r1basis) fn(gf_add(f, v, r));
}

std::vector<GfMat> neighbors(const Field& f, const GfMat& v) {
  std::vector<GfMat> out;
  auto basis = rank_one_basis(f, v.rows, v.cols);
  out.reserve(basis.size());
  for (const auto& r : basis) out.push_back(gf_add(f, v, r));
  return out;
}

void check_budget(const Params& p, uint64_t budget) {
  if (p.n_vertices > mpz_class(static_cast<unsigned long>(budget))) {
    throw budget_error("full enumeration of " + p.n_vertices.get_str() +
                       " vertices exceeds budget " + std::to_string(budget));
  }
}

std::vector<mpz_class> sphere_census(const Params& p, const Field& f,
                                     const GfMat& x, uint64_t budget,
                                     uint32_t jobs) {
  check_budget(p, budget);
  const uint64_t n = p.n_vertices.get_ui();
  const uint32_t nent = p.rows() * p.cols();
  const uint32_t q = p.q;
  const uint32_t d = p.d;

  std::vector<std::vector<uint64_t>> tallies(resolve_jobs(jobs),
                                             std::vector<uint64_t>(d + 1, 0));
  run_sharded(n, jobs, [&](uint32_t shard, uint64_t lo, uint64_t hi) {
    std::vector<uint16_t> digitsbuf(nent), diff(nent), scratch(nent);
    decode_vertex64(lo, q, digitsbuf.data(), nent);
    auto& tally = tallies[shard];
    const uint16_t* st = f.sub_table();
    for (uint64_t idx = lo; idx < hi; ++idx) {
      for (uint32_t k = 0; k < nent; ++k)
        diff[k] = st[digitsbuf[k] * q + x.v[k]];
      std::copy(diff.begin(), diff.end(), scratch.begin());
      int r = rank_inplace(f, scratch.data(), p.rows(), p.cols());
      ++tally[r];
      // odometer increment
      for (uint32_t k = 0; k < nent; ++k) {
        if (++digitsbuf[k] < q) break;
        digitsbuf[k] = 0;
      }
    }
  });

  std::vector<mpz_class> out(d + 1, 0);
  for (const auto& t : tallies)
    for (uint32_t i = 0; i <= d; ++i) out[i] += t[i];
  return out;
}

}  // namespace bilform
