// Copyright 2026 The q4dr Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

/*
 * C interface to the q4dr drone-routing library.
 *
 * All objects are opaque handles created by the library and released with
 * the matching *_free function. Functions return a q4dr_status; on failure
 * q4dr_last_error() describes the problem (thread-local, valid until the
 * next call on the same thread). Strings returned as `const char*` are owned
 * by the handle they came from.
 */
#ifndef Q4DR_H
#define Q4DR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(Q4DR_BUILDING_LIBRARY)
#    define Q4DR_API __declspec(dllexport)
#  else
#    define Q4DR_API __declspec(dllimport)
#  endif
#else
#  define Q4DR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum q4dr_status {
    Q4DR_OK = 0,
    Q4DR_ERR_INVALID_ARGUMENT = 1,
    Q4DR_ERR_IO = 2,
    Q4DR_ERR_SCHEMA = 3,
    Q4DR_ERR_RANGE = 4,
    Q4DR_ERR_MISSING_FIELD = 5,
    Q4DR_ERR_INFEASIBLE_INSTANCE = 6,
    Q4DR_ERR_ALL_TRIVIAL_PARTITIONS = 7,
    Q4DR_ERR_INFEASIBLE_ASSIGNMENT = 8,
    Q4DR_ERR_NO_FEASIBLE_SOLUTION = 9,
    Q4DR_ERR_SIZE_GUARD = 10,
    Q4DR_ERR_INTERNAL = 99
} q4dr_status;

typedef enum q4dr_use_case {
    Q4DR_UC1 = 1, /* two drones, one shared depot, closed tours */
    Q4DR_UC2 = 2, /* two drones, two depots, closed tours */
    Q4DR_UC3 = 3  /* two depots, open routes ending at a charging station */
} q4dr_use_case;

typedef enum q4dr_solver_kind {
    Q4DR_SOLVER_AUTO = 0, /* exact for small clusters, portfolio otherwise */
    Q4DR_SOLVER_EXACT = 1,
    Q4DR_SOLVER_SA = 2,
    Q4DR_SOLVER_PORTFOLIO = 3
} q4dr_solver_kind;

typedef enum q4dr_optimizer {
    Q4DR_OPTIMIZER_COBYLA = 0,
    Q4DR_OPTIMIZER_NELDER_MEAD = 1
} q4dr_optimizer;

typedef struct q4dr_instance q4dr_instance;
typedef struct q4dr_solution q4dr_solution;
typedef struct q4dr_bench_report q4dr_bench_report;

typedef struct q4dr_generate_options {
    double lat_min, lat_max, lon_min, lon_max;
    double asymmetry;          /* u_ij ~ U[0, asymmetry] */
    double forbidden_fraction; /* in [0, 0.1] */
} q4dr_generate_options;

typedef struct q4dr_instance_info {
    q4dr_use_case use_case;
    uint64_t seed;
    size_t n;
    size_t depots;
    size_t charging;
    size_t forbidden_arcs;
    double big_m;
} q4dr_instance_info;

typedef struct q4dr_qaoa_config {
    uint32_t depth;
    uint32_t max_iter;
    uint64_t seed;
    uint32_t shots; /* 0 = exact expectation */
    q4dr_optimizer optimizer;
} q4dr_qaoa_config;

typedef struct q4dr_solver_config {
    q4dr_solver_kind kind;
    uint32_t threads;
    uint32_t sweeps;
    uint32_t restarts;
    uint64_t seed;
    int guided;               /* nonzero enables the guided re-anneal */
    uint32_t exact_threshold; /* AUTO: largest closed cluster solved exactly */
} q4dr_solver_config;

typedef struct q4dr_bench_options {
    uint64_t instance_seed;
    double asymmetry;
    double forbidden_fraction;
    uint32_t parallel_cells;
    unsigned use_case_mask;  /* bit 0 = UC1, bit 1 = UC2, bit 2 = UC3 */
    const uint32_t* sizes;   /* NULL = {12, 16, 22} */
    size_t size_count;
    const char* out_dir;     /* NULL = do not write per-cell files */
} q4dr_bench_options;

Q4DR_API const char* q4dr_version(void);
Q4DR_API const char* q4dr_last_error(void);
Q4DR_API const char* q4dr_status_name(q4dr_status status);

Q4DR_API void q4dr_generate_options_default(q4dr_generate_options* options);
Q4DR_API void q4dr_qaoa_config_default(q4dr_qaoa_config* config);
Q4DR_API void q4dr_solver_config_default(q4dr_solver_config* config);
Q4DR_API void q4dr_bench_options_default(q4dr_bench_options* options);

/* Instances */
Q4DR_API q4dr_status q4dr_instance_generate(q4dr_use_case use_case, size_t n, uint64_t seed,
                                            const q4dr_generate_options* options,
                                            q4dr_instance** out);
Q4DR_API q4dr_status q4dr_instance_load(const char* path, q4dr_instance** out);
Q4DR_API q4dr_status q4dr_instance_save(const q4dr_instance* inst, const char* path);
Q4DR_API q4dr_status q4dr_instance_get_info(const q4dr_instance* inst, q4dr_instance_info* info);
/* Benchmark name such as "UC1_12". */
Q4DR_API const char* q4dr_instance_name(const q4dr_instance* inst);
Q4DR_API void q4dr_instance_free(q4dr_instance* inst);

/* Solving */
Q4DR_API q4dr_status q4dr_solve(const q4dr_instance* inst, const char* instance_path,
                                const q4dr_qaoa_config* qaoa, const q4dr_solver_config* solver,
                                q4dr_solution** out);
Q4DR_API q4dr_status q4dr_solution_load(const char* path, q4dr_solution** out);
Q4DR_API q4dr_status q4dr_solution_save(const q4dr_solution* sol, const char* path,
                                        int include_timings);
Q4DR_API q4dr_status q4dr_solution_save_geojson(const q4dr_solution* sol, const char* path);
Q4DR_API double q4dr_solution_total_cost(const q4dr_solution* sol);
Q4DR_API q4dr_status q4dr_solution_route(const q4dr_solution* sol, size_t route,
                                         const size_t** sequence, size_t* length, double* cost);
/* Copy of the instance embedded in the solution. */
Q4DR_API q4dr_status q4dr_solution_instance(const q4dr_solution* sol, q4dr_instance** out);

/* Checks `sol` against `inst` (or the embedded instance when inst is NULL).
 * Violation descriptions stay available through q4dr_solution_violation
 * until the next verify call on the same handle. */
Q4DR_API q4dr_status q4dr_solution_verify(q4dr_solution* sol, const q4dr_instance* inst,
                                          size_t* violation_count);
Q4DR_API const char* q4dr_solution_violation(const q4dr_solution* sol, size_t index);
Q4DR_API void q4dr_solution_free(q4dr_solution* sol);

/* Benchmark matrix */
Q4DR_API q4dr_status q4dr_bench_run(const q4dr_bench_options* options,
                                    const q4dr_qaoa_config* qaoa,
                                    const q4dr_solver_config* solver, q4dr_bench_report** out);
Q4DR_API size_t q4dr_bench_report_rows(const q4dr_bench_report* report);
Q4DR_API size_t q4dr_bench_report_failures(const q4dr_bench_report* report);
Q4DR_API const char* q4dr_bench_report_csv(const q4dr_bench_report* report);
Q4DR_API const char* q4dr_bench_report_table(const q4dr_bench_report* report);
Q4DR_API void q4dr_bench_report_free(q4dr_bench_report* report);

#ifdef __cplusplus
}
#endif

#endif /* Q4DR_H */
