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

#include "q4dr/q4dr.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "q4dr/bench.hpp"
#include "q4dr/errors.hpp"
#include "q4dr/pipeline.hpp"
#include "json_io.hpp"

struct q4dr_instance {
    q4dr::Instance inst;
    std::string name;
};

struct q4dr_solution {
    q4dr::Solution sol;
    std::vector<std::string> violations;
};

struct q4dr_bench_report {
    q4dr::BenchReport report;
    std::string csv;
    std::string table;
};

namespace {

thread_local std::string last_error_;

q4dr_status fail(q4dr_status status, const std::string& message) {
    last_error_ = message;
    return status;
}

/// Runs `body`, translating exceptions into status codes.
template <typename Body>
q4dr_status guarded(Body&& body) {
    try {
        last_error_.clear();
        body();
        return Q4DR_OK;
    } catch (const q4dr::Error& e) {
        return fail(static_cast<q4dr_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(Q4DR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(Q4DR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(Q4DR_ERR_INTERNAL, "unknown error");
    }
}

q4dr::UseCase to_use_case(q4dr_use_case uc) {
    switch (uc) {
        case Q4DR_UC1: return q4dr::UseCase::kUC1;
        case Q4DR_UC2: return q4dr::UseCase::kUC2;
        case Q4DR_UC3: return q4dr::UseCase::kUC3;
    }
    throw q4dr::InvalidArgument("unknown use case " + std::to_string(static_cast<int>(uc)));
}

q4dr_use_case from_use_case(q4dr::UseCase uc) {
    switch (uc) {
        case q4dr::UseCase::kUC1: return Q4DR_UC1;
        case q4dr::UseCase::kUC2: return Q4DR_UC2;
        case q4dr::UseCase::kUC3: return Q4DR_UC3;
    }
    return Q4DR_UC1;
}

q4dr::QaoaConfig to_qaoa(const q4dr_qaoa_config* c) {
    q4dr::QaoaConfig cfg;
    if (!c) return cfg;
    cfg.depth = c->depth;
    cfg.max_iter = c->max_iter;
    cfg.seed = c->seed;
    if (c->shots > 0) {
        cfg.eval_mode = q4dr::EvalMode::kSampled;
        cfg.shots = c->shots;
    }
    switch (c->optimizer) {
        case Q4DR_OPTIMIZER_COBYLA: cfg.optimizer = q4dr::OptimizerKind::kCobyla; break;
        case Q4DR_OPTIMIZER_NELDER_MEAD: cfg.optimizer = q4dr::OptimizerKind::kNelderMead; break;
        default: throw q4dr::InvalidArgument("unknown optimizer");
    }
    return cfg;
}

/// Fills the solver part of `opts`; AUTO keeps `auto_selection` as the policy.
void apply_solver(const q4dr_solver_config* c, q4dr::PipelineOptions& opts,
                  q4dr::SolverSelection auto_selection) {
    if (!c) return;
    auto& s = opts.solver;
    s.threads = c->threads;
    s.sweeps = c->sweeps;
    s.restarts = c->restarts;
    s.seed = c->seed;
    s.guided = c->guided != 0;
    opts.exact_threshold = c->exact_threshold;
    switch (c->kind) {
        case Q4DR_SOLVER_AUTO:
            opts.selection = auto_selection;
            s.kind = q4dr::SolverKind::kPortfolio;
            break;
        case Q4DR_SOLVER_EXACT:
            opts.selection = q4dr::SolverSelection::kForced;
            s.kind = q4dr::SolverKind::kExact;
            break;
        case Q4DR_SOLVER_SA:
            opts.selection = q4dr::SolverSelection::kForced;
            s.kind = q4dr::SolverKind::kSa;
            break;
        case Q4DR_SOLVER_PORTFOLIO:
            opts.selection = q4dr::SolverSelection::kForced;
            s.kind = q4dr::SolverKind::kPortfolio;
            break;
        default: throw q4dr::InvalidArgument("unknown solver kind");
    }
}

void require(const void* p, const char* what) {
    if (!p) throw q4dr::InvalidArgument(std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* q4dr_version(void) { return "1.0.0"; }

const char* q4dr_last_error(void) { return last_error_.c_str(); }

const char* q4dr_status_name(q4dr_status status) {
    switch (status) {
        case Q4DR_OK: return "ok";
        case Q4DR_ERR_INVALID_ARGUMENT: return "invalid argument";
        case Q4DR_ERR_IO: return "i/o error";
        case Q4DR_ERR_SCHEMA: return "schema error";
        case Q4DR_ERR_RANGE: return "range error";
        case Q4DR_ERR_MISSING_FIELD: return "missing field";
        case Q4DR_ERR_INFEASIBLE_INSTANCE: return "infeasible instance";
        case Q4DR_ERR_ALL_TRIVIAL_PARTITIONS: return "all partitions trivial";
        case Q4DR_ERR_INFEASIBLE_ASSIGNMENT: return "infeasible assignment";
        case Q4DR_ERR_NO_FEASIBLE_SOLUTION: return "no feasible solution";
        case Q4DR_ERR_SIZE_GUARD: return "size guard exceeded";
        case Q4DR_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void q4dr_generate_options_default(q4dr_generate_options* options) {
    if (!options) return;
    const q4dr::BoundingBox box;
    const q4dr::CostOptions costs;
    options->lat_min = box.lat_min;
    options->lat_max = box.lat_max;
    options->lon_min = box.lon_min;
    options->lon_max = box.lon_max;
    options->asymmetry = costs.asymmetry;
    options->forbidden_fraction = costs.forbidden_fraction;
}

void q4dr_qaoa_config_default(q4dr_qaoa_config* config) {
    if (!config) return;
    const q4dr::QaoaConfig cfg;
    config->depth = static_cast<uint32_t>(cfg.depth);
    config->max_iter = static_cast<uint32_t>(cfg.max_iter);
    config->seed = cfg.seed;
    config->shots = 0;
    config->optimizer = Q4DR_OPTIMIZER_COBYLA;
}

void q4dr_solver_config_default(q4dr_solver_config* config) {
    if (!config) return;
    const q4dr::PipelineOptions opts;
    config->kind = Q4DR_SOLVER_AUTO;
    config->threads = static_cast<uint32_t>(opts.solver.threads);
    config->sweeps = static_cast<uint32_t>(opts.solver.sweeps);
    config->restarts = static_cast<uint32_t>(opts.solver.restarts);
    config->seed = opts.solver.seed;
    config->guided = opts.solver.guided ? 1 : 0;
    config->exact_threshold = static_cast<uint32_t>(opts.exact_threshold);
}

void q4dr_bench_options_default(q4dr_bench_options* options) {
    if (!options) return;
    const q4dr::BenchOptions opts;
    options->instance_seed = opts.instance_seed;
    options->asymmetry = opts.costs.asymmetry;
    options->forbidden_fraction = opts.costs.forbidden_fraction;
    options->parallel_cells = static_cast<uint32_t>(opts.parallel_cells);
    options->use_case_mask = 0x7;
    options->sizes = nullptr;
    options->size_count = 0;
    options->out_dir = nullptr;
}

q4dr_status q4dr_instance_generate(q4dr_use_case use_case, size_t n, uint64_t seed,
                                   const q4dr_generate_options* options, q4dr_instance** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        q4dr::BoundingBox box;
        q4dr::CostOptions costs;
        if (options) {
            box = {options->lat_min, options->lat_max, options->lon_min, options->lon_max};
            costs = {options->asymmetry, options->forbidden_fraction};
        }
        auto handle = std::make_unique<q4dr_instance>();
        handle->inst = q4dr::generate_instance(to_use_case(use_case), n, seed, box, costs);
        handle->name = handle->inst.name();
        *out = handle.release();
    });
}

q4dr_status q4dr_instance_load(const char* path, q4dr_instance** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto handle = std::make_unique<q4dr_instance>();
        handle->inst = q4dr::load_instance(path);
        handle->name = handle->inst.name();
        *out = handle.release();
    });
}

q4dr_status q4dr_instance_save(const q4dr_instance* inst, const char* path) {
    return guarded([&] {
        require(inst, "instance");
        require(path, "path");
        q4dr::save_instance(inst->inst, path);
    });
}

q4dr_status q4dr_instance_get_info(const q4dr_instance* inst, q4dr_instance_info* info) {
    return guarded([&] {
        require(inst, "instance");
        require(info, "info");
        const auto& i = inst->inst;
        info->use_case = from_use_case(i.use_case);
        info->seed = i.seed;
        info->n = i.n();
        info->depots = i.depots.size();
        info->charging = i.charging.size();
        info->forbidden_arcs = i.costs.forbidden().size();
        info->big_m = i.costs.big_m();
    });
}

const char* q4dr_instance_name(const q4dr_instance* inst) {
    return inst ? inst->name.c_str() : "";
}

void q4dr_instance_free(q4dr_instance* inst) { delete inst; }

q4dr_status q4dr_solve(const q4dr_instance* inst, const char* instance_path,
                       const q4dr_qaoa_config* qaoa, const q4dr_solver_config* solver,
                       q4dr_solution** out) {
    return guarded([&] {
        require(inst, "instance");
        require(out, "out");
        *out = nullptr;
        q4dr::PipelineOptions opts;
        opts.qaoa = to_qaoa(qaoa);
        apply_solver(solver, opts, q4dr::SolverSelection::kAuto);
        auto handle = std::make_unique<q4dr_solution>();
        handle->sol = q4dr::solve_pipeline(inst->inst, opts, instance_path ? instance_path : "");
        *out = handle.release();
    });
}

q4dr_status q4dr_solution_load(const char* path, q4dr_solution** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto handle = std::make_unique<q4dr_solution>();
        handle->sol = q4dr::load_solution(path);
        *out = handle.release();
    });
}

q4dr_status q4dr_solution_save(const q4dr_solution* sol, const char* path, int include_timings) {
    return guarded([&] {
        require(sol, "solution");
        require(path, "path");
        q4dr::save_solution(sol->sol, path, include_timings != 0);
    });
}

q4dr_status q4dr_solution_save_geojson(const q4dr_solution* sol, const char* path) {
    return guarded([&] {
        require(sol, "solution");
        require(path, "path");
        q4dr::write_text_file(path, q4dr::solution_to_geojson(sol->sol));
    });
}

double q4dr_solution_total_cost(const q4dr_solution* sol) {
    return sol ? sol->sol.total_cost : 0.0;
}

q4dr_status q4dr_solution_route(const q4dr_solution* sol, size_t route, const size_t** sequence,
                                size_t* length, double* cost) {
    return guarded([&] {
        require(sol, "solution");
        if (route >= sol->sol.routes.size()) {
            throw q4dr::RangeError("route index " + std::to_string(route) + " out of range");
        }
        const auto& r = sol->sol.routes[route];
        if (sequence) *sequence = r.sequence.data();
        if (length) *length = r.sequence.size();
        if (cost) *cost = r.cost;
    });
}

q4dr_status q4dr_solution_instance(const q4dr_solution* sol, q4dr_instance** out) {
    return guarded([&] {
        require(sol, "solution");
        require(out, "out");
        *out = nullptr;
        auto handle = std::make_unique<q4dr_instance>();
        handle->inst = sol->sol.instance;
        handle->name = handle->inst.name();
        *out = handle.release();
    });
}

q4dr_status q4dr_solution_verify(q4dr_solution* sol, const q4dr_instance* inst,
                                 size_t* violation_count) {
    return guarded([&] {
        require(sol, "solution");
        const auto found = q4dr::verify_solution(sol->sol, inst ? inst->inst : sol->sol.instance);
        sol->violations.clear();
        for (const auto& v : found) sol->violations.push_back(v.to_string());
        if (violation_count) *violation_count = found.size();
    });
}

const char* q4dr_solution_violation(const q4dr_solution* sol, size_t index) {
    if (!sol || index >= sol->violations.size()) return nullptr;
    return sol->violations[index].c_str();
}

void q4dr_solution_free(q4dr_solution* sol) { delete sol; }

q4dr_status q4dr_bench_run(const q4dr_bench_options* options, const q4dr_qaoa_config* qaoa,
                           const q4dr_solver_config* solver, q4dr_bench_report** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        q4dr::BenchOptions opts;
        if (options) {
            opts.instance_seed = options->instance_seed;
            opts.costs = {options->asymmetry, options->forbidden_fraction};
            opts.parallel_cells = options->parallel_cells;
            opts.use_cases.clear();
            if (options->use_case_mask & 0x1u) opts.use_cases.push_back(q4dr::UseCase::kUC1);
            if (options->use_case_mask & 0x2u) opts.use_cases.push_back(q4dr::UseCase::kUC2);
            if (options->use_case_mask & 0x4u) opts.use_cases.push_back(q4dr::UseCase::kUC3);
            if (opts.use_cases.empty()) throw q4dr::InvalidArgument("use_case_mask selects nothing");
            if (options->sizes) {
                opts.sizes.assign(options->sizes, options->sizes + options->size_count);
                if (opts.sizes.empty()) throw q4dr::InvalidArgument("size list is empty");
            }
            if (options->out_dir) opts.out_dir = options->out_dir;
        }
        if (qaoa) opts.pipeline.qaoa = to_qaoa(qaoa);
        apply_solver(solver, opts.pipeline, q4dr::SolverSelection::kForced);
        auto handle = std::make_unique<q4dr_bench_report>();
        handle->report = q4dr::run_bench(opts);
        handle->csv = handle->report.to_csv();
        handle->table = handle->report.to_table();
        *out = handle.release();
    });
}

size_t q4dr_bench_report_rows(const q4dr_bench_report* report) {
    return report ? report->report.rows.size() : 0;
}

size_t q4dr_bench_report_failures(const q4dr_bench_report* report) {
    if (!report) return 0;
    size_t failures = 0;
    for (const auto& row : report->report.rows) {
        if (!row.ok || row.violations > 0) ++failures;
    }
    return failures;
}

const char* q4dr_bench_report_csv(const q4dr_bench_report* report) {
    return report ? report->csv.c_str() : "";
}

const char* q4dr_bench_report_table(const q4dr_bench_report* report) {
    return report ? report->table.c_str() : "";
}

void q4dr_bench_report_free(q4dr_bench_report* report) { delete report; }

}  // extern "C"
