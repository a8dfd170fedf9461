#include "bilform.h"

#include <cstring>
#include <new>
#include <string>

#include "core/params.hpp"
#include "core/report.hpp"

using bilform::Params;
using bilform::RunOptions;
using bilform::RunResult;

struct bf_params {
  Params p;
  std::string n_vertices_str;
  std::string valency_str;
};

struct bf_report {
  RunResult r;
};

namespace {

thread_local std::string g_last_error;

bf_status set_error(bf_status st, const char* msg) {
  g_last_error = msg ? msg : "";
  return st;
}

RunOptions to_options(const bf_options* opt) {
  RunOptions o;
  if (opt) {
    o.seed = opt->seed;
    o.jobs = opt->jobs;
    o.budget = opt->budget;
    o.samples_per_cell = opt->samples_per_cell;
    o.full = opt->full != 0;
    o.heavy = opt->heavy != 0;
  }
  return o;
}

template <typename Fn>
bf_status guarded(bf_report** out, const Fn& fn) {
  if (!out) return set_error(BF_ERR_INVALID, "null output pointer");
  *out = nullptr;
  try {
    RunResult r = fn();
    *out = new bf_report{std::move(r)};
    g_last_error.clear();
    return BF_OK;
  } catch (const bilform::invalid_argument_error& e) {
    return set_error(BF_ERR_INVALID, e.what());
  } catch (const bilform::budget_error& e) {
    return set_error(BF_ERR_BUDGET, e.what());
  } catch (const bilform::internal_error& e) {
    return set_error(BF_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BF_ERR_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BF_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* bf_version(void) { return "1.0.0"; }

const char* bf_last_error(void) { return g_last_error.c_str(); }

void bf_options_init(bf_options* opt) {
  if (!opt) return;
  opt->seed = 0;
  opt->jobs = 0;
  opt->budget = 10'000'000;
  opt->samples_per_cell = 50;
  opt->full = 0;
  opt->heavy = 0;
}

bf_status bf_params_create(uint32_t q, uint32_t d, uint32_t n, bf_params** out) {
  if (!out) return set_error(BF_ERR_INVALID, "null output pointer");
  *out = nullptr;
  try {
    Params p = Params::validate(q, d, n);
    auto* h = new bf_params;
    h->n_vertices_str = p.n_vertices.get_str();
    h->valency_str = bilform::intersection_numbers(p).k.get_str();
    h->p = std::move(p);
    *out = h;
    g_last_error.clear();
    return BF_OK;
  } catch (const bilform::invalid_argument_error& e) {
    return set_error(BF_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return set_error(BF_ERR_INTERNAL, e.what());
  }
}

void bf_params_free(bf_params* p) { delete p; }

uint32_t bf_params_q(const bf_params* p) { return p ? p->p.q : 0; }
uint32_t bf_params_d(const bf_params* p) { return p ? p->p.d : 0; }
uint32_t bf_params_n(const bf_params* p) { return p ? p->p.n : 0; }

const char* bf_params_n_vertices(const bf_params* p) {
  return p ? p->n_vertices_str.c_str() : nullptr;
}

const char* bf_params_valency(const bf_params* p) {
  return p ? p->valency_str.c_str() : nullptr;
}

bf_status bf_census(const bf_params* p, const bf_options* opt, bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  return guarded(out, [&] { return bilform::run_census(p->p, to_options(opt)); });
}

bf_status bf_classify(const bf_params* p, const char* matrix, const char* x,
                      const char* y, bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  if (!matrix) return set_error(BF_ERR_INVALID, "null matrix literal");
  return guarded(out, [&] {
    return bilform::run_classify(p->p, matrix, x ? x : "", y ? y : "");
  });
}

bf_status bf_cells(const bf_params* p, bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  return guarded(out, [&] { return bilform::run_cells(p->p); });
}

bf_status bf_verify_equitable(const bf_params* p, const bf_options* opt,
                              bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  return guarded(out,
                 [&] { return bilform::run_verify_equitable(p->p, to_options(opt)); });
}

bf_status bf_verify_algebra(const bf_params* p, const bf_options* opt,
                            bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  return guarded(out,
                 [&] { return bilform::run_verify_algebra(p->p, to_options(opt)); });
}

bf_status bf_verify_algebra_grid(const bf_options* opt, bf_report** out) {
  return guarded(out,
                 [&] { return bilform::run_verify_algebra_grid(to_options(opt)); });
}

bf_status bf_export_modules(const bf_params* p, bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  return guarded(out, [&] { return bilform::run_export_modules(p->p); });
}

bf_status bf_norton(const bf_params* p, bf_report** out) {
  if (!p) return set_error(BF_ERR_INVALID, "null params");
  return guarded(out, [&] { return bilform::run_norton(p->p); });
}

int bf_report_pass(const bf_report* r) { return r && r->r.pass ? 1 : 0; }

const char* bf_report_json(const bf_report* r) {
  return r ? r->r.json.c_str() : nullptr;
}

const char* bf_report_csv(const bf_report* r) {
  if (!r || r->r.csv.empty()) return nullptr;
  return r->r.csv.c_str();
}

const char* bf_report_text(const bf_report* r) {
  return r ? r->r.text.c_str() : nullptr;
}

void bf_report_free(bf_report* r) { delete r; }

}  // extern "C"
