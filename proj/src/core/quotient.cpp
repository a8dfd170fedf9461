#include "core/quotient.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "core/graph.hpp"
#include "core/partition.hpp"
#include "core/scal.hpp"
#include "core/shard.hpp"

namespace bilform {

namespace {

struct Entry {
  CellId cell;
  mpq_class value;
};

// One row of the neighbor-count table, straight from the per-family tables
// of the equitability section. Formulas for cells that do not exist at the
// given index must evaluate to zero; this is asserted by the caller.
std::vector<Entry> formula_row(const Params& p, CellId src) {
  const Scal s(p);
  const long i = src.i;
  const long D = s.D;
  auto L = [](long j) { return CellId{Family::Lower, static_cast<uint32_t>(j)}; };
  auto A = [](long j) { return CellId{Family::A, static_cast<uint32_t>(j)}; };
  auto B = [](long j) { return CellId{Family::B, static_cast<uint32_t>(j)}; };
  auto C = [](long j) { return CellId{Family::C, static_cast<uint32_t>(j)}; };
  auto Dc = [](long j) { return CellId{Family::D, static_cast<uint32_t>(j)}; };
  auto U = [](long j) { return CellId{Family::Upper, static_cast<uint32_t>(j)}; };

  std::vector<Entry> row;
  switch (src.family) {
    case Family::Lower:
      row = {
          {L(i - 1), s.P(i - 2) * s.G(i - 1)},
          {U(i), s.P(2 * i - 2) - s.P(2 * i - 3) + s.P(i - 2)},
          {L(i), s.G(i - 1) * (s.P(s.Nd) + s.P(D) - 3 * s.P(i - 1) + s.P(i - 2) - 1)},
          {L(i + 1), (s.P(s.Nd) - s.P(i)) * (s.P(D) - s.P(i)) / s.qm(1)},
          {A(i - 1), 0},
          {B(i - 1), 0},
          {C(i - 1), s.P(i - 2) * (s.P(i - 1) - 1)},
          {Dc(i - 1), s.P(i - 2) * (s.P(i - 1) - 1)},
          {A(i), (s.P(i - 1) - 1) * (s.P(i - 1) - s.P(i - 2))},
          {B(i), s.P(i - 2) * s.qm(2) * (s.P(i) - s.P(i - 1) + 1)},
          {C(i), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {Dc(i), s.P(i - 1) * (s.P(D) - s.P(i))},
      };
      break;
    case Family::A:
      row = {
          {U(i), s.P(i - 1) * (s.P(i - 1) - s.P(i - 2))},
          {L(i), s.P(i - 1) * (s.P(i - 1) - s.P(i - 2))},
          {U(i + 1), 0},
          {L(i + 1), 0},
          {A(i - 1), s.P(i - 1) * s.G(i - 2)},
          {B(i - 1), 0},
          {C(i - 1), s.P(2 * i - 3)},
          {Dc(i - 1), s.P(2 * i - 3)},
          {A(i), s.G(i - 1) * (s.P(s.Nd) + s.P(D) - 3 * s.P(i - 1) + s.P(i - 2) - 2) +
                     s.G(i - 2)},
          {B(i), s.P(2 * i - 3) * s.qm(1) * s.qm(2)},
          {C(i), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {Dc(i), s.P(i - 1) * (s.P(D) - s.P(i))},
          {A(i + 1), (s.P(D) - s.P(i)) * (s.P(s.Nd) - s.P(i)) / s.qm(1)},
          {B(i + 1), 0},
          {C(i + 1), 0},
          {Dc(i + 1), 0},
      };
      break;
    case Family::B:
      row = {
          {U(i), s.P(i - 2) * (s.P(i) - s.P(i - 1) + 1)},
          {L(i), s.P(i - 2) * (s.P(i) - s.P(i - 1) + 1)},
          {U(i + 1), 0},
          {L(i + 1), 0},
          {A(i - 1), 0},
          {B(i - 1), s.P(i - 2) * s.G(i - 1)},
          {C(i - 1), s.P(i - 2) * (s.P(i - 1) - 1)},
          {Dc(i - 1), s.P(i - 2) * (s.P(i - 1) - 1)},
          {A(i), s.P(i - 2) * s.qm(1) * (s.P(i - 1) - 1)},
          // alpha_i
          {B(i), s.G(i - 1) * (s.P(s.Nd) + s.P(D) + s.P(i + 1) - 5 * s.P(i) +
                               4 * s.P(i - 1) - 2 * s.P(i - 2) + s.q * s.q -
                               4 * s.q + 2) +
                     s.q - 3},
          {C(i), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {Dc(i), s.P(i - 1) * (s.P(D) - s.P(i))},
          {A(i + 1), 0},
          {B(i + 1), (s.P(D) - s.P(i)) * (s.P(s.Nd) - s.P(i)) / s.qm(1)},
          {C(i + 1), 0},
          {Dc(i + 1), 0},
      };
      break;
    case Family::C:
      row = {
          {U(i), s.P(2 * i - 2)},
          {L(i), s.P(2 * i - 2)},
          {U(i + 1), s.P(i - 1) * (s.P(D) - s.P(i))},
          {L(i + 1), s.P(i - 1) * (s.P(D) - s.P(i))},
          {A(i - 1), 0},
          {B(i - 1), 0},
          {C(i - 1), s.P(i - 1) * s.G(i - 1)},
          {Dc(i - 1), 0},
          {A(i), s.P(i - 1) * (s.P(i - 1) - 1)},
          {B(i), s.P(2 * i - 2) * s.qm(2)},
          {C(i), s.G(i) * (s.P(s.Nd) - s.P(i) - 1) + s.G(i - 1) * (s.P(D) - s.P(i))},
          {Dc(i), 0},
          {A(i + 1), s.P(i - 1) * (s.P(D) - s.P(i))},
          {B(i + 1), s.P(i - 1) * (s.P(D) - s.P(i)) * s.qm(2)},
          {C(i + 1), (s.P(D) - s.P(i)) * (s.P(s.Nd) - s.P(i + 1)) / s.qm(1)},
          {Dc(i + 1), 0},
      };
      break;
    case Family::D:
      row = {
          {U(i), s.P(2 * i - 2)},
          {L(i), s.P(2 * i - 2)},
          {U(i + 1), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {L(i + 1), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {A(i - 1), 0},
          {B(i - 1), 0},
          {C(i - 1), 0},
          {Dc(i - 1), s.P(i - 1) * s.G(i - 1)},
          {A(i), s.P(i - 1) * (s.P(i - 1) - 1)},
          {B(i), s.P(2 * i - 2) * s.qm(2)},
          {C(i), 0},
          {Dc(i), s.G(i) * (s.P(D) - s.P(i) - 1) + s.G(i - 1) * (s.P(s.Nd) - s.P(i))},
          {A(i + 1), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {B(i + 1), s.P(i - 1) * (s.P(s.Nd) - s.P(i)) * s.qm(2)},
          {C(i + 1), 0},
          {Dc(i + 1), (s.P(D) - s.P(i + 1)) * (s.P(s.Nd) - s.P(i)) / s.qm(1)},
      };
      break;
    case Family::Upper:
      row = {
          {U(i - 1), s.P(i - 2) * s.G(i - 1)},
          {L(i), s.P(2 * i - 2) - s.P(2 * i - 3) + s.P(i - 2)},
          {U(i), s.G(i - 1) * (s.P(s.Nd) + s.P(D) - 3 * s.P(i - 1) + s.P(i - 2) - 1)},
          {U(i + 1), (s.P(s.Nd) - s.P(i)) * (s.P(D) - s.P(i)) / s.qm(1)},
          {A(i - 1), 0},
          {B(i - 1), 0},
          {C(i - 1), s.P(i - 2) * (s.P(i - 1) - 1)},
          {Dc(i - 1), s.P(i - 2) * (s.P(i - 1) - 1)},
          {A(i), (s.P(i - 1) - 1) * (s.P(i - 1) - s.P(i - 2))},
          {B(i), s.P(i - 2) * s.qm(2) * (s.P(i) - s.P(i - 1) + 1)},
          {C(i), s.P(i - 1) * (s.P(s.Nd) - s.P(i))},
          {Dc(i), s.P(i - 1) * (s.P(D) - s.P(i))},
      };
      break;
  }
  return row;
}

}  // namespace

QuotientMatrix quotient_formula(const Params& p) {
  const CellTable table(p);
  const int n = table.order();
  QuotientMatrix out(n);

  const IntersectionNumbers in = intersection_numbers(p);
  for (int si = 0; si < n; ++si) {
    const CellId src = table.cells[si];
    mpz_class row_sum = 0;
    for (const Entry& e : formula_row(p, src)) {
      mpz_class v = rational_to_int(e.value, "quotient entry");
      if (v < 0) throw internal_error("negative quotient entry");
      if (!cell_valid(p, e.cell)) {
        if (v != 0)
          throw internal_error("nonzero count into nonexistent cell " +
                               cell_label(e.cell) + " from " + cell_label(src));
        continue;
      }
      out.at(si, table.index(e.cell)) += v;
      row_sum += v;
    }
    if (row_sum != in.k)
      throw internal_error("quotient row " + cell_label(src) + " sums to " +
                           row_sum.get_str() + ", expected k = " + in.k.get_str());
  }

  // Reversibility and the distance-pair support condition.
  std::vector<mpz_class> sizes(n);
  for (int i = 0; i < n; ++i) sizes[i] = cell_size(p, table.cells[i]);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (sizes[a] * out.at(a, b) != sizes[b] * out.at(b, a))
        throw internal_error("reversibility fails at (" + table.labels[a] +
                             ", " + table.labels[b] + ")");
      const int ddx = std::abs(static_cast<int>(cell_dist_x(table.cells[a])) -
                               static_cast<int>(cell_dist_x(table.cells[b])));
      const int ddy = std::abs(static_cast<int>(cell_dist_y(table.cells[a])) -
                               static_cast<int>(cell_dist_y(table.cells[b])));
      if ((ddx > 1 || ddy > 1) && out.at(a, b) != 0)
        throw internal_error("adjacency across distance gap at (" +
                             table.labels[a] + ", " + table.labels[b] + ")");
    }
  }
  return out;
}

namespace {

struct IndexSplit {
  uint32_t lo_digits = 0, hi_digits = 0;
  uint64_t nlo = 1, nhi = 1;
  std::vector<uint32_t> add_lo;  // [a*nlo + b] -> index of digitwise sum
  std::vector<uint64_t> add_hi;  // [a*nhi + b] -> index of digitwise sum, * nlo
  bool usable = false;
};

IndexSplit build_index_split(const Params& p, const Field& f,
                             uint64_t max_bytes) {
  IndexSplit sp;
  const uint32_t nent = p.rows() * p.cols();
  sp.lo_digits = (nent + 1) / 2;
  sp.hi_digits = nent - sp.lo_digits;
  for (uint32_t t = 0; t < sp.lo_digits; ++t) sp.nlo *= p.q;
  for (uint32_t t = 0; t < sp.hi_digits; ++t) sp.nhi *= p.q;
  const uint64_t bytes = sp.nlo * sp.nlo * 4 + sp.nhi * sp.nhi * 8;
  if (bytes > max_bytes) return sp;  // fall back to digitwise adds

  auto fill = [&](uint64_t half, uint32_t ndig, auto& tab, uint64_t scale) {
    tab.resize(half * half);
    std::vector<uint16_t> da(ndig), db(ndig);
    for (uint64_t a = 0; a < half; ++a) {
      decode_vertex64(a, p.q, da.data(), ndig);
      for (uint64_t b = 0; b < half; ++b) {
        decode_vertex64(b, p.q, db.data(), ndig);
        uint64_t s = 0;
        for (uint32_t t = ndig; t-- > 0;) s = s * p.q + f.add(da[t], db[t]);
        tab[a * half + b] = static_cast<std::decay_t<decltype(tab[0])>>(s * scale);
      }
    }
  };
  fill(sp.nlo, sp.lo_digits, sp.add_lo, 1);
  fill(sp.nhi, sp.hi_digits, sp.add_hi, sp.nlo);
  sp.usable = true;
  return sp;
}

std::string describe_value(const mpz_class& v) { return v.get_str(); }

}  // namespace

EquitabilityReport quotient_bruteforce(const Params& p, const Field& f,
                                       const QuotientMatrix& expected,
                                       uint64_t budget, uint32_t jobs,
                                       uint64_t split_table_max_bytes) {
  const auto t0 = std::chrono::steady_clock::now();
  check_budget(p, budget);
  const uint64_t n = p.n_vertices.get_ui();
  const uint32_t nent = p.rows() * p.cols();
  const uint32_t q = p.q;
  const CellTable table(p);
  const uint32_t ncells = table.order();
  if (ncells > 255)
    throw budget_error("cell index does not fit the enumeration tally");
  if (expected.order != static_cast<int>(ncells))
    throw invalid_argument_error("expected matrix has wrong order");

  std::vector<uint32_t> expect32(ncells * ncells);
  for (uint32_t a = 0; a < ncells * ncells; ++a) {
    if (!expected.m[a].fits_uint_p())
      throw invalid_argument_error("expected entry too large for enumeration");
    expect32[a] = static_cast<uint32_t>(expected.m[a].get_ui());
  }

  // Pass 1: classify every vertex.
  std::vector<uint8_t> cell_of(n);
  run_sharded(n, jobs, [&](uint32_t, uint64_t lo, uint64_t hi) {
    FastClassifier cls(p, f);
    std::vector<uint16_t> digitsbuf(nent);
    decode_vertex64(lo, q, digitsbuf.data(), nent);
    for (uint64_t idx = lo; idx < hi; ++idx) {
      cell_of[idx] = static_cast<uint8_t>(cls.index(digitsbuf.data()));
      for (uint32_t k = 0; k < nent; ++k) {
        if (++digitsbuf[k] < q) break;
        digitsbuf[k] = 0;
      }
    }
  });

  // Rank-one steps as split indices.
  const auto r1 = rank_one_basis(f, p.rows(), p.cols());
  const uint64_t k = r1.size();
  const IndexSplit sp = build_index_split(p, f, split_table_max_bytes);
  std::vector<uint32_t> rlo(k), rhi(k);
  if (sp.usable) {
    for (uint64_t t = 0; t < k; ++t) {
      const uint64_t ridx = encode_vertex64(p, r1[t]);
      rlo[t] = static_cast<uint32_t>(ridx % sp.nlo);
      rhi[t] = static_cast<uint32_t>(ridx / sp.nlo);
    }
  }

  // Pass 2: per-vertex neighbor tallies.
  const uint32_t nshards = resolve_jobs(jobs);
  struct ShardResult {
    std::vector<uint64_t> tally;       // ncells x ncells
    std::vector<uint64_t> population;  // ncells
    uint64_t bad_vertex = UINT64_MAX;
    int bad_target = -1;
    uint32_t bad_observed = 0;
  };
  std::vector<ShardResult> results(nshards);
  for (auto& r : results) {
    r.tally.assign(static_cast<size_t>(ncells) * ncells, 0);
    r.population.assign(ncells, 0);
  }

  run_sharded(n, jobs, [&](uint32_t shard, uint64_t lo, uint64_t hi) {
    ShardResult& res = results[shard];
    std::vector<uint32_t> counts(ncells);
    std::vector<uint16_t> digitsbuf(nent);
    decode_vertex64(lo, q, digitsbuf.data(), nent);
    const uint16_t* addtab = f.add_table();
    for (uint64_t idx = lo; idx < hi; ++idx) {
      std::fill(counts.begin(), counts.end(), 0);
      if (sp.usable) {
        const uint32_t zl = static_cast<uint32_t>(idx % sp.nlo);
        const uint32_t zh = static_cast<uint32_t>(idx / sp.nlo);
        const uint32_t* lorow = sp.add_lo.data() + static_cast<uint64_t>(zl) * sp.nlo;
        const uint64_t* hirow = sp.add_hi.data() + static_cast<uint64_t>(zh) * sp.nhi;
        for (uint64_t t = 0; t < k; ++t)
          ++counts[cell_of[lorow[rlo[t]] + hirow[rhi[t]]]];
      } else {
        for (uint64_t t = 0; t < k; ++t) {
          const uint16_t* rv = r1[t].v.data();
          uint64_t widx = 0;
          for (uint32_t e = nent; e-- > 0;)
            widx = widx * q + addtab[digitsbuf[e] * q + rv[e]];
          ++counts[cell_of[widx]];
        }
      }
      const uint8_t src = cell_of[idx];
      ++res.population[src];
      uint64_t* trow = res.tally.data() + static_cast<size_t>(src) * ncells;
      const uint32_t* erow = expect32.data() + static_cast<size_t>(src) * ncells;
      for (uint32_t c = 0; c < ncells; ++c) {
        trow[c] += counts[c];
        if (counts[c] != erow[c] && idx < res.bad_vertex) {
          res.bad_vertex = idx;
          res.bad_target = static_cast<int>(c);
          res.bad_observed = counts[c];
        }
      }
      for (uint32_t e = 0; e < nent; ++e) {
        if (++digitsbuf[e] < q) break;
        digitsbuf[e] = 0;
      }
    }
  });

  EquitabilityReport rep;
  rep.mode = EquitabilityReport::Mode::Full;
  rep.formula = expected;
  rep.vertices_scanned = n;

  std::vector<uint64_t> tally(static_cast<size_t>(ncells) * ncells, 0);
  std::vector<uint64_t> population(ncells, 0);
  uint64_t bad_vertex = UINT64_MAX;
  int bad_target = -1;
  uint32_t bad_observed = 0;
  for (const auto& r : results) {
    for (size_t a = 0; a < tally.size(); ++a) tally[a] += r.tally[a];
    for (uint32_t c = 0; c < ncells; ++c) population[c] += r.population[c];
    if (r.bad_vertex < bad_vertex) {
      bad_vertex = r.bad_vertex;
      bad_target = r.bad_target;
      bad_observed = r.bad_observed;
    }
  }

  rep.cell_census.resize(ncells);
  for (uint32_t c = 0; c < ncells; ++c)
    rep.cell_census[c] = mpz_class(static_cast<unsigned long>(population[c]));

  QuotientMatrix observed(ncells);
  bool welldef = true;
  for (uint32_t a = 0; a < ncells; ++a) {
    for (uint32_t b = 0; b < ncells; ++b) {
      const uint64_t t = tally[static_cast<size_t>(a) * ncells + b];
      if (population[a] == 0 || t % population[a] != 0) {
        welldef = false;
        continue;
      }
      observed.at(a, b) = mpz_class(static_cast<unsigned long>(t / population[a]));
    }
  }
  rep.observed = observed;

  if (bad_vertex != UINT64_MAX) {
    Discrepancy d;
    GfMat zm = decode_vertex(p, mpz_class(static_cast<unsigned long>(bad_vertex)));
    d.vertex = format_matrix(zm);
    d.source = table.labels[cell_of[bad_vertex]];
    d.target = table.labels[bad_target];
    d.expected = describe_value(expected.at(cell_of[bad_vertex], bad_target));
    d.observed = std::to_string(bad_observed);
    rep.discrepancies.push_back(std::move(d));
  }
  rep.pass = rep.discrepancies.empty() && welldef && observed == expected;
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return rep;
}

EquitabilityReport quotient_sampled(const Params& p, const Field& f,
                                    uint64_t samples_per_cell, uint64_t seed,
                                    uint64_t budget, uint32_t jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const CellTable table(p);
  const uint32_t ncells = table.order();
  if (intersection_numbers(p).k > mpz_class(static_cast<unsigned long>(budget)))
    throw budget_error("per-sample neighbor scan exceeds budget");

  EquitabilityReport rep;
  rep.mode = EquitabilityReport::Mode::Sampled;
  rep.formula = quotient_formula(p);
  rep.samples_per_cell = samples_per_cell;
  rep.seed = seed;

  if (samples_per_cell == 0) {
    rep.pass = true;
    rep.warning = "samples_per_cell = 0: vacuous pass";
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
  }

  std::vector<uint64_t> expect64(static_cast<size_t>(ncells) * ncells);
  for (size_t a = 0; a < expect64.size(); ++a) {
    if (!rep.formula.m[a].fits_uint_p())
      throw invalid_argument_error("formula entry exceeds 64-bit tally range");
    expect64[a] = rep.formula.m[a].get_ui();
  }

  // All samples are drawn from one seeded generator so the run is
  // reproducible independently of the thread count.
  std::mt19937_64 rng(seed);
  struct Sample {
    int cell;
    GfMat z;
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<size_t>(ncells) * samples_per_cell);
  for (uint32_t c = 0; c < ncells; ++c) {
    const GfMat rep_mat = representative(p, table.cells[c]);
    for (uint64_t s = 0; s < samples_per_cell; ++s)
      samples.push_back({static_cast<int>(c),
                         random_g_perturbation(p, f, rep_mat, rng)});
  }

  const auto r1 = rank_one_basis(f, p.rows(), p.cols());
  const uint32_t nent = p.rows() * p.cols();
  const uint32_t q = p.q;

  const uint32_t nshards = resolve_jobs(jobs);
  std::vector<std::vector<Discrepancy>> found(nshards);
  run_sharded(samples.size(), jobs, [&](uint32_t shard, uint64_t lo, uint64_t hi) {
    FastClassifier cls(p, f);
    std::vector<uint64_t> counts(ncells);
    std::vector<uint16_t> wbuf(nent);
    const uint16_t* addtab = f.add_table();
    for (uint64_t s = lo; s < hi; ++s) {
      const Sample& smp = samples[s];
      std::fill(counts.begin(), counts.end(), 0);
      for (const GfMat& r : r1) {
        for (uint32_t e = 0; e < nent; ++e)
          wbuf[e] = addtab[smp.z.v[e] * q + r.v[e]];
        ++counts[cls.index(wbuf.data())];
      }
      const uint64_t* erow = expect64.data() + static_cast<size_t>(smp.cell) * ncells;
      for (uint32_t c = 0; c < ncells; ++c) {
        if (counts[c] != erow[c]) {
          Discrepancy d;
          d.source = table.labels[smp.cell];
          d.target = table.labels[c];
          d.expected = std::to_string(erow[c]);
          d.observed = std::to_string(counts[c]);
          d.vertex = format_matrix(smp.z);
          found[shard].push_back(std::move(d));
        }
      }
    }
  });

  for (auto& fs : found)
    for (auto& d : fs) rep.discrepancies.push_back(std::move(d));
  rep.pass = rep.discrepancies.empty();
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return rep;
}

std::string quotient_csv(const Params& p, const QuotientMatrix& m) {
  const CellTable table(p);
  std::ostringstream os;
  os << "cell";
  for (const auto& l : table.labels) os << ',' << l;
  os << '\n';
  for (int a = 0; a < m.order; ++a) {
    os << table.labels[a];
    for (int b = 0; b < m.order; ++b) os << ',' << m.at(a, b).get_str();
    os << '\n';
  }
  return os.str();
}

std::string cells_csv(const Params& p) {
  const CellTable table(p);
  std::ostringstream os;
  os << "cell,dist_x,dist_y,size\n";
  for (const CellId& c : table.cells) {
    os << cell_label(c) << ',' << cell_dist_x(c) << ',' << cell_dist_y(c) << ','
       << cell_size(p, c).get_str() << '\n';
  }
  return os.str();
}

}  // namespace bilform
