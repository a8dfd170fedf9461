#include "core/localspec.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "core/graph.hpp"
#include "core/shard.hpp"

namespace bilform {

namespace {

constexpr uint64_t kPrime = (1ull << 61) - 1;  // Mersenne prime 2^61 - 1

uint64_t mulmod(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

uint64_t submod(uint64_t a, uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

uint64_t invmod(uint64_t a) {
  // Fermat: a^(p-2)
  uint64_t r = 1, base = a % kPrime, e = kPrime - 2;
  while (e) {
    if (e & 1) r = mulmod(r, base);
    base = mulmod(base, base);
    e >>= 1;
  }
  return r;
}

uint64_t reduce_signed(const mpz_class& v) {
  mpz_class m = v % mpz_class(static_cast<unsigned long>(kPrime));
  if (m < 0) m += mpz_class(static_cast<unsigned long>(kPrime));
  return m.get_ui();
}

// Rank of a dense matrix over GF(kPrime); clobbers `a`.
uint64_t rank_modp(std::vector<uint64_t>& a, uint64_t n) {
  uint64_t r = 0;
  for (uint64_t col = 0; col < n && r < n; ++col) {
    uint64_t piv = n;
    for (uint64_t i = r; i < n; ++i) {
      if (a[i * n + col]) {
        piv = i;
        break;
      }
    }
    if (piv == n) continue;
    if (piv != r) {
      for (uint64_t j = col; j < n; ++j)
        std::swap(a[piv * n + j], a[r * n + j]);
    }
    const uint64_t pinv = invmod(a[r * n + col]);
    for (uint64_t j = col; j < n; ++j) a[r * n + j] = mulmod(a[r * n + j], pinv);
    for (uint64_t i = r + 1; i < n; ++i) {
      const uint64_t c = a[i * n + col];
      if (!c) continue;
      for (uint64_t j = col; j < n; ++j)
        a[i * n + j] = submod(a[i * n + j], mulmod(c, a[r * n + j]));
    }
    ++r;
  }
  return r;
}

}  // namespace

LocalSpectrumCheck local_spectrum_nullity(const Params& p, const Field& f,
                                          uint64_t budget, uint32_t jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const IntersectionNumbers in = intersection_numbers(p);
  if (in.k * in.k > mpz_class(static_cast<unsigned long>(budget)))
    throw budget_error("local adjacency matrix exceeds budget");
  const uint64_t k = in.k.get_ui();

  // Local graph on Gamma(x): vertices are the rank-one matrices.
  const auto verts = rank_one_basis(f, p.rows(), p.cols());
  std::vector<uint8_t> adj(k * k, 0);
  {
    std::vector<uint16_t> scratch(p.rows() * p.cols());
    for (uint64_t i = 0; i < k; ++i) {
      for (uint64_t j = i + 1; j < k; ++j) {
        const uint16_t* a = verts[i].v.data();
        const uint16_t* b = verts[j].v.data();
        for (size_t e = 0; e < scratch.size(); ++e) scratch[e] = f.sub(a[e], b[e]);
        std::vector<uint16_t> tmp(scratch);
        const int r = rank_inplace(f, tmp.data(), p.rows(), p.cols(), 1);
        if (r == 1) {
          adj[i * k + j] = 1;
          adj[j * k + i] = 1;
        }
      }
    }
  }

  const Spectrum sp = eigenvalues(p);
  LocalSpectrumCheck out;
  out.eigenvalue.assign(sp.local_eig.begin(), sp.local_eig.end());
  out.claimed.assign(sp.local_mult.begin(), sp.local_mult.end());
  out.nullity.assign(5, 0);

  const uint32_t nthreads = std::min<uint32_t>(resolve_jobs(jobs), 5);
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= 5) return;
      const uint64_t lam = reduce_signed(sp.local_eig[idx]);
      std::vector<uint64_t> m(k * k);
      for (uint64_t i = 0; i < k; ++i)
        for (uint64_t j = 0; j < k; ++j)
          m[i * k + j] = submod(adj[i * k + j], i == j ? lam : 0);
      out.nullity[idx] = k - rank_modp(m, k);
    }
  };
  for (uint32_t t = 0; t < nthreads; ++t) workers.emplace_back(work);
  for (auto& w : workers) w.join();

  out.pass = true;
  for (int idx = 0; idx < 5; ++idx) {
    if (mpz_class(static_cast<unsigned long>(out.nullity[idx])) !=
        out.claimed[idx])
      out.pass = false;
  }
  out.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return out;
}

}  // namespace bilform
