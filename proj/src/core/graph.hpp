#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/gf.hpp"
#include "core/params.hpp"

namespace bilform {

// Mixed-radix (base-q) vertex index: digit k (least significant first) is the
// matrix entry at row-major position k. Bijective with D x (N-D) matrices.
mpz_class encode_vertex(const Params& p, const GfMat& m);
GfMat decode_vertex(const Params& p, const mpz_class& idx);

// 64-bit fast path, valid whenever q^{D(N-D)} fits (guaranteed under the
// enumeration budget).
uint64_t encode_vertex64(const Params& p, const GfMat& m);
void decode_vertex64(uint64_t idx, uint32_t q, uint16_t* out, uint32_t n);

// All rank-1 D x (N-D) matrices, enumerated canonically as (nonzero column
// normalized to leading entry 1, ascending) x (nonzero row, ascending).
// Count equals the valency k.
std::vector<GfMat> rank_one_basis(const Field& f, uint32_t rows, uint32_t cols);

int distance(const Field& f, const GfMat& u, const GfMat& v);

// Yields the k distinct neighbors v + r, r over the rank-1 basis.
void for_each_neighbor(const Field& f, const std::vector<GfMat>& r1basis,
                       const GfMat& v, const std::function<void(const GfMat&)>& fn);
std::vector<GfMat> neighbors(const Field& f, const GfMat& v);

void check_budget(const Params& p, uint64_t budget);

// |Gamma_i(x)| for i = 0..D by full enumeration, sharded over the vertex
// index space. Throws budget_error when q^{D(N-D)} > budget.
std::vector<mpz_class> sphere_census(const Params& p, const Field& f,
                                     const GfMat& x, uint64_t budget,
                                     uint32_t jobs);

}  // namespace bilform
