#pragma once

// Test-side oracles, independent of the closed-form code paths they check:
// brute-force neighborhood counts built directly on rank arithmetic, and a
// generic random-matrix source.

#include <random>

#include "core/gf.hpp"
#include "core/graph.hpp"
#include "core/params.hpp"

namespace oracles {

inline bilform::GfMat random_matrix(const bilform::Params& p,
                                    std::mt19937_64& rng) {
  bilform::GfMat m(p.rows(), p.cols());
  std::uniform_int_distribution<uint32_t> d(0, p.q - 1);
  for (auto& e : m.v) e = static_cast<uint16_t>(d(rng));
  return m;
}

// |Gamma(x) n Gamma_j(y)| for x = 0, counted over the rank-one basis.
inline uint64_t count_sphere_neighbors(const bilform::Params& p,
                                       const bilform::Field& f,
                                       const bilform::GfMat& y, int j) {
  uint64_t n = 0;
  for (const auto& w : bilform::rank_one_basis(f, p.rows(), p.cols()))
    if (bilform::distance(f, w, y) == j) ++n;
  return n;
}

// |Gamma(x) n Gamma(y) n Gamma_j(z)| for x = 0 and adjacent y.
inline uint64_t count_common_at(const bilform::Params& p,
                                const bilform::Field& f,
                                const bilform::GfMat& y,
                                const bilform::GfMat& z, int j) {
  uint64_t n = 0;
  for (const auto& w : bilform::rank_one_basis(f, p.rows(), p.cols())) {
    if (bilform::rank(f, bilform::gf_sub(f, w, y)) != 1) continue;
    if (bilform::distance(f, w, z) == j) ++n;
  }
  return n;
}

}  // namespace oracles
