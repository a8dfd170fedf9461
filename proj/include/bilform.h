/* bilform - exact toolkit for the bilinear forms graph H_q(D, N-D):
 * sphere censuses, the 6D-2 cell partition around an adjacent basepoint
 * pair, its quotient matrix, and the exact module decomposition of the
 * associated subconstituent-algebra module, all certified against
 * brute-force enumeration.
 *
 * C API over an opaque-handle core. All run functions return BF_OK when the
 * computation completed (reports may still carry pass = false for failed
 * certification checks) and a nonzero status on invalid input, exceeded
 * budgets, or internal errors. Error text is available from bf_last_error()
 * on the calling thread.
 */
#ifndef BILFORM_H
#define BILFORM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define BF_API __declspec(dllexport)
#else
#define BF_API __attribute__((visibility("default")))
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_INVALID = 1,  /* bad parameters, literals, or usage */
  BF_ERR_BUDGET = 2,   /* enumeration would exceed the vertex budget */
  BF_ERR_INTERNAL = 3, /* invariant violation; indicates a bug */
  BF_ERR_NOMEM = 4
} bf_status;

typedef struct bf_params bf_params;
typedef struct bf_report bf_report;

typedef struct bf_options {
  uint64_t seed;             /* PRNG seed for sampled verification */
  uint32_t jobs;             /* worker threads; 0 = hardware concurrency */
  uint64_t budget;           /* max vertices for full enumeration */
  uint64_t samples_per_cell; /* sampled equitability verification */
  int32_t full;              /* nonzero: full enumeration mode */
  int32_t heavy;             /* nonzero: include local-graph nullity check */
} bf_options;

BF_API const char* bf_version(void);
BF_API const char* bf_last_error(void);
BF_API void bf_options_init(bf_options* opt);

/* Validates (q, D, N): q a prime power != 2, D >= 3, N > 2D. */
BF_API bf_status bf_params_create(uint32_t q, uint32_t d, uint32_t n,
                                  bf_params** out);
BF_API void bf_params_free(bf_params* p);
BF_API uint32_t bf_params_q(const bf_params* p);
BF_API uint32_t bf_params_d(const bf_params* p);
BF_API uint32_t bf_params_n(const bf_params* p);
/* Decimal strings owned by the handle. */
BF_API const char* bf_params_n_vertices(const bf_params* p);
BF_API const char* bf_params_valency(const bf_params* p);

/* Full sphere census around the zero matrix. */
BF_API bf_status bf_census(const bf_params* p, const bf_options* opt,
                           bf_report** out);
/* Classifies a vertex into its partition cell. matrix uses the literal
 * grammar "r11 r12 ...; r21 r22 ...". x/y may be NULL for the standard
 * basepoints; when given, the pair is normalized first. */
BF_API bf_status bf_classify(const bf_params* p, const char* matrix,
                             const char* x, const char* y, bf_report** out);
/* Cell-size table. */
BF_API bf_status bf_cells(const bf_params* p, bf_report** out);
/* Equitability certification (full or sampled per options). */
BF_API bf_status bf_verify_equitable(const bf_params* p, const bf_options* opt,
                                     bf_report** out);
/* Exact certification of the level structure and module decomposition. */
BF_API bf_status bf_verify_algebra(const bf_params* p, const bf_options* opt,
                                   bf_report** out);
/* Same over the built-in parameter grid; p is ignored. */
BF_API bf_status bf_verify_algebra_grid(const bf_options* opt, bf_report** out);
/* Exact bases of the five irreducible modules. */
BF_API bf_status bf_export_modules(const bf_params* p, bf_report** out);
/* Norton algebra evidence report. */
BF_API bf_status bf_norton(const bf_params* p, bf_report** out);

/* 1 when every certification check in the report passed. */
BF_API int bf_report_pass(const bf_report* r);
/* Deterministic JSON document (timing only under "elapsed_ms" keys). */
BF_API const char* bf_report_json(const bf_report* r);
/* CSV rendering when the command has one (cells, verify-equitable), else NULL. */
BF_API const char* bf_report_csv(const bf_report* r);
/* Human-readable summary. */
BF_API const char* bf_report_text(const bf_report* r);
BF_API void bf_report_free(bf_report* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BILFORM_H */
