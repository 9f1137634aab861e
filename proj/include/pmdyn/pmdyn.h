#ifndef PMDYN_H
#define PMDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PMDYN_API __declspec(dllexport)
#else
#define PMDYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pmdyn_map pmdyn_map;
typedef struct pmdyn_diagram pmdyn_diagram;

typedef enum {
  PMDYN_OK = 0,
  PMDYN_ERR_INVALID_ARGUMENT = 1,
  PMDYN_SPREAD_ZERO = 2,
  PMDYN_ENTROPY_SHORTFALL = 3,
  PMDYN_BUDGET_EXCEEDED = 4,
  PMDYN_ERR_PARSE = 5,
  PMDYN_ERR_DOMAIN = 6,
  PMDYN_ERR_MODE_MISMATCH = 7,
  PMDYN_ERR_BOUNDARY_HIT = 8,
  PMDYN_ERR_INADMISSIBLE = 9,
  PMDYN_ERR_NO_CYCLE = 10,
  PMDYN_ERR_NON_CONVERGENCE = 11,
  PMDYN_ERR_NOT_STRONGLY_CONNECTED = 12,
  PMDYN_ERR_NO_FIXED_POINT = 13,
  PMDYN_ERR_NO_PERIODIC_ORBITS = 14,
  PMDYN_ERR_NO_PATH = 15,
  PMDYN_ERR_INTERNAL = 99
} pmdyn_status;

typedef enum { PMDYN_MODE_AUTO = 0, PMDYN_MODE_EXACT = 1, PMDYN_MODE_FLOAT = 2 } pmdyn_mode;

/* Message of the last failing call on this thread ("" after success). */
PMDYN_API const char* pmdyn_last_error(void);
PMDYN_API const char* pmdyn_version(void);
/* Frees strings returned through char** out-parameters. */
PMDYN_API void pmdyn_string_free(char* s);

/* Maps. Spec text uses the key = "value" format. */
PMDYN_API pmdyn_status pmdyn_map_from_string(const char* text, pmdyn_mode mode, pmdyn_map** out);
PMDYN_API pmdyn_status pmdyn_map_from_file(const char* path, pmdyn_mode mode, pmdyn_map** out);
PMDYN_API void pmdyn_map_free(pmdyn_map* map);
/* Normalised spec text plus a mode line. */
PMDYN_API pmdyn_status pmdyn_map_describe(const pmdyn_map* map, char** out);
PMDYN_API int pmdyn_map_branches(const pmdyn_map* map);
PMDYN_API int pmdyn_map_is_exact(const pmdyn_map* map);
/* x and the result are decimal or p/q strings. */
PMDYN_API pmdyn_status pmdyn_map_evaluate(const pmdyn_map* map, const char* x, char** out);
PMDYN_API pmdyn_status pmdyn_count_words(const pmdyn_map* map, size_t n, uint64_t* out);

/* Markov diagrams. */
PMDYN_API pmdyn_status pmdyn_diagram_build(const pmdyn_map* map, size_t depth, pmdyn_diagram** out);
PMDYN_API void pmdyn_diagram_free(pmdyn_diagram* d);
PMDYN_API pmdyn_status pmdyn_diagram_info(const pmdyn_diagram* d, size_t* vertices, size_t* arrows, int* saturated);
PMDYN_API pmdyn_status pmdyn_diagram_dot(const pmdyn_diagram* d, char** out);
PMDYN_API pmdyn_status pmdyn_diagram_vertex_csv(const pmdyn_diagram* d, char** out);
PMDYN_API pmdyn_status pmdyn_diagram_edge_csv(const pmdyn_diagram* d, char** out);
/* log of the Perron root of the irreducible core. */
PMDYN_API pmdyn_status pmdyn_diagram_core_entropy(const pmdyn_diagram* d, double* out);
/* Specification gap of the core, certified over words up to test_len. */
PMDYN_API pmdyn_status pmdyn_diagram_core_gap(const pmdyn_diagram* d, size_t test_len, size_t* gap,
                                              size_t* gap_positive, int* verified);

/* Reports. CSV and JSON documents are returned as strings. */
PMDYN_API pmdyn_status pmdyn_entropy_report(const pmdyn_map* map, size_t n, const size_t* depths, size_t n_depths,
                                            char** csv);
/* phi may be NULL (no integral column). */
PMDYN_API pmdyn_status pmdyn_periodic_catalog(const pmdyn_map* map, size_t max_period, const char* phi,
                                              char** csv);
PMDYN_API pmdyn_status pmdyn_spread(const pmdyn_map* map, const char* phi, size_t max_period, int include_boundary,
                                    double* min, double* max, char** witnesses);

typedef struct {
  const char* u;
  const char* v;
  const char* phi;
  double growth;
  size_t horizon;
  size_t prefix_len; /* symbols written to *prefix */
} pmdyn_irregular_options;

/* Connectors come from the core of a depth-12 diagram. *certified is 1 when
   the block-end averages stay in their certified bands. */
PMDYN_API pmdyn_status pmdyn_irregular(const pmdyn_map* map, const pmdyn_irregular_options* opt,
                                       char** checkpoint_csv, char** prefix, double* tail_gap,
                                       double* certified_gap_lb, int* certified);

typedef struct {
  const char* phi;
  double epsilon;
  size_t depth_cap;
  size_t period_cap;
  int has_target;
  double target;
} pmdyn_prop31_options;

/* On PMDYN_SPREAD_ZERO *json holds a document with status "spread_zero". */
PMDYN_API pmdyn_status pmdyn_prop31(const pmdyn_map* map, const pmdyn_prop31_options* opt, char** json);

/* components: "0,1/2,1" style cut list. */
PMDYN_API pmdyn_status pmdyn_decompose(const pmdyn_map* map, const char* components, const char* phi,
                                       size_t depth, size_t max_period, char** csv, double* value, int* empty);

#ifdef __cplusplus
}
#endif

#endif
