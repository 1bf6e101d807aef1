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

// q4dr command-line front end. Talks to the library only through q4dr.h.
//
// Exit codes: 0 success, 1 verification found violations, 2 bad input,
// 3 solver failure.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "q4dr/q4dr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitSolverFailure = 3;

int exit_code_for(q4dr_status status) {
    switch (status) {
        case Q4DR_OK: return kExitOk;
        case Q4DR_ERR_ALL_TRIVIAL_PARTITIONS:
        case Q4DR_ERR_INFEASIBLE_ASSIGNMENT:
        case Q4DR_ERR_NO_FEASIBLE_SOLUTION:
        case Q4DR_ERR_INTERNAL: return kExitSolverFailure;
        default: return kExitBadInput;
    }
}

/// Prints the library error and returns the matching exit code.
int report(q4dr_status status, const std::string& context) {
    std::cerr << "q4dr: " << context << ": " << q4dr_status_name(status) << ": "
              << q4dr_last_error() << "\n";
    return exit_code_for(status);
}

struct InstanceHandle {
    q4dr_instance* p = nullptr;
    ~InstanceHandle() { q4dr_instance_free(p); }
};

struct SolutionHandle {
    q4dr_solution* p = nullptr;
    ~SolutionHandle() { q4dr_solution_free(p); }
};

struct BenchHandle {
    q4dr_bench_report* p = nullptr;
    ~BenchHandle() { q4dr_bench_report_free(p); }
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("Q4DR_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "q4dr: ignoring unparsable Q4DR_SEED='" << env << "'\n";
        }
    }
    return 0;
}

const std::map<std::string, q4dr_use_case> kUseCases{
    {"UC1", Q4DR_UC1}, {"UC2", Q4DR_UC2}, {"UC3", Q4DR_UC3}};

const std::map<std::string, q4dr_solver_kind> kSolvers{{"auto", Q4DR_SOLVER_AUTO},
                                                       {"exact", Q4DR_SOLVER_EXACT},
                                                       {"sa", Q4DR_SOLVER_SA},
                                                       {"portfolio", Q4DR_SOLVER_PORTFOLIO}};

const std::map<std::string, q4dr_optimizer> kOptimizers{
    {"cobyla", Q4DR_OPTIMIZER_COBYLA}, {"nelder-mead", Q4DR_OPTIMIZER_NELDER_MEAD}};

struct SolveFlags {
    std::uint32_t depth = 3;
    std::uint32_t max_iter = 50;
    std::uint32_t shots = 0;
    q4dr_optimizer optimizer = Q4DR_OPTIMIZER_COBYLA;
    q4dr_solver_kind solver = Q4DR_SOLVER_AUTO;
    std::uint32_t threads = 4;
    std::uint32_t sweeps = 10000;
    std::uint32_t restarts = 8;
    std::uint32_t exact_threshold = 13;
    bool no_guided = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--depth", depth, "QAOA layers p")->check(CLI::Range(1u, 16u))
            ->capture_default_str();
        cmd.add_option("--max-iter", max_iter, "Optimizer evaluation budget")
            ->check(CLI::Range(1u, 100000u))->capture_default_str();
        cmd.add_option("--shots", shots, "Sampled expectation with this many shots (0 = exact)")
            ->capture_default_str();
        cmd.add_option("--optimizer", optimizer, "cobyla | nelder-mead")
            ->transform(CLI::CheckedTransformer(kOptimizers, CLI::ignore_case));
        cmd.add_option("--solver", solver, "auto | exact | sa | portfolio")
            ->transform(CLI::CheckedTransformer(kSolvers, CLI::ignore_case));
        cmd.add_option("--threads", threads, "Portfolio worker threads")
            ->check(CLI::Range(1u, 256u))->capture_default_str();
        cmd.add_option("--sweeps", sweeps, "Annealing sweeps per restart")
            ->check(CLI::PositiveNumber)->capture_default_str();
        cmd.add_option("--restarts", restarts, "Annealing restarts per thread")
            ->check(CLI::PositiveNumber)->capture_default_str();
        cmd.add_option("--exact-threshold", exact_threshold,
                       "auto: largest closed cluster solved exactly")
            ->capture_default_str();
        cmd.add_flag("--no-guided", no_guided, "Disable the guided re-anneal");
    }

    q4dr_qaoa_config qaoa(std::uint64_t seed) const {
        q4dr_qaoa_config c;
        q4dr_qaoa_config_default(&c);
        c.depth = depth;
        c.max_iter = max_iter;
        c.seed = seed;
        c.shots = shots;
        c.optimizer = optimizer;
        return c;
    }

    q4dr_solver_config solver_config(std::uint64_t seed) const {
        q4dr_solver_config c;
        q4dr_solver_config_default(&c);
        c.kind = solver;
        c.threads = threads;
        c.sweeps = sweeps;
        c.restarts = restarts;
        c.seed = seed;
        c.guided = no_guided ? 0 : 1;
        c.exact_threshold = exact_threshold;
        return c;
    }
};

void print_solution(const q4dr_solution* sol) {
    for (size_t k = 0; k < 2; ++k) {
        const size_t* seq = nullptr;
        size_t len = 0;
        double cost = 0.0;
        if (q4dr_solution_route(sol, k, &seq, &len, &cost) != Q4DR_OK) continue;
        std::cout << "route " << k << ":";
        for (size_t i = 0; i < len; ++i) std::cout << ' ' << seq[i];
        std::printf("  (cost %.3f m)\n", cost);
    }
    std::printf("total cost: %.3f m\n", q4dr_solution_total_cost(sol));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q4dr: two-phase drone routing (QAOA clustering + QUBO routing)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(q4dr_version()));

    std::uint64_t seed = default_seed();

    // generate
    auto* gen = app.add_subcommand("generate", "Create a synthetic instance");
    q4dr_use_case gen_uc = Q4DR_UC1;
    std::size_t gen_n = 12;
    std::string gen_out;
    q4dr_generate_options gen_opts;
    q4dr_generate_options_default(&gen_opts);
    gen->add_option("--use-case", gen_uc, "UC1 | UC2 | UC3")
        ->transform(CLI::CheckedTransformer(kUseCases, CLI::ignore_case))->required();
    gen->add_option("--n", gen_n, "Number of visiting points")->required();
    gen->add_option("--seed", seed, "Master seed (default $Q4DR_SEED or 0)");
    gen->add_option("--asymmetry", gen_opts.asymmetry, "Cost perturbation bound")
        ->capture_default_str();
    gen->add_option("--forbidden-fraction", gen_opts.forbidden_fraction,
                    "Fraction of forbidden arcs")->capture_default_str();
    gen->add_option("--out", gen_out, "Instance JSON path")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "Run clustering and routing");
    std::string solve_instance;
    std::string solve_out;
    std::string solve_plot;
    bool deterministic = false;
    SolveFlags solve_flags;
    solve->add_option("--instance", solve_instance, "Instance JSON path")->required();
    solve->add_option("--seed", seed, "Master seed (default $Q4DR_SEED or 0)");
    solve_flags.attach(*solve);
    solve->add_option("--out", solve_out, "Solution JSON path");
    solve->add_option("--plot-out", solve_plot, "GeoJSON path");
    solve->add_flag("--deterministic,--no-timings", deterministic,
                    "Omit wall-clock timings so output is reproducible");

    // verify
    auto* verify = app.add_subcommand("verify", "Check a solution");
    std::string verify_solution;
    std::string verify_instance;
    verify->add_option("--solution", verify_solution, "Solution JSON path")->required();
    verify->add_option("--instance", verify_instance,
                       "Instance JSON path (default: the embedded instance)");

    // plot
    auto* plot = app.add_subcommand("plot", "Export a solution as GeoJSON");
    std::string plot_solution;
    std::string plot_out;
    plot->add_option("--solution", plot_solution, "Solution JSON path")->required();
    plot->add_option("--plot-out,--out", plot_out, "GeoJSON path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run the use-case x size benchmark matrix");
    q4dr_bench_options bench_opts;
    q4dr_bench_options_default(&bench_opts);
    std::vector<std::string> bench_use_cases{"UC1", "UC2", "UC3"};
    std::vector<std::uint32_t> bench_sizes{12, 16, 22};
    std::string bench_out_dir;
    std::string bench_csv;
    std::uint64_t bench_instance_seed = bench_opts.instance_seed;
    std::uint32_t bench_parallel = bench_opts.parallel_cells;
    SolveFlags bench_flags;
    bench_flags.solver = Q4DR_SOLVER_PORTFOLIO;
    bench->add_option("--use-cases", bench_use_cases, "Use cases to run")
        ->delimiter(',')
        ->check(CLI::IsMember({"UC1", "UC2", "UC3"}, CLI::ignore_case));
    bench->add_option("--sizes", bench_sizes, "Instance sizes")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    bench->add_option("--instance-seed", bench_instance_seed, "Seed for generated instances")
        ->capture_default_str();
    bench->add_option("--seed", seed, "Master solver seed (default $Q4DR_SEED or 0)");
    bench->add_option("--parallel", bench_parallel, "Cells run concurrently")
        ->check(CLI::PositiveNumber);
    bench_flags.attach(*bench);
    bench->add_option("--out-dir", bench_out_dir, "Write per-cell instance and solution files");
    bench->add_option("--csv", bench_csv, "CSV report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    }

    if (gen->parsed()) {
        InstanceHandle inst;
        if (auto st = q4dr_instance_generate(gen_uc, gen_n, seed, &gen_opts, &inst.p); st) {
            return report(st, "generate");
        }
        if (auto st = q4dr_instance_save(inst.p, gen_out.c_str()); st) {
            return report(st, "save instance");
        }
        q4dr_instance_info info;
        q4dr_instance_get_info(inst.p, &info);
        std::cout << q4dr_instance_name(inst.p) << ": " << info.n << " visiting, " << info.depots
                  << " depot(s), " << info.charging << " charging, " << info.forbidden_arcs
                  << " forbidden arcs -> " << gen_out << "\n";
        return kExitOk;
    }

    if (solve->parsed()) {
        InstanceHandle inst;
        if (auto st = q4dr_instance_load(solve_instance.c_str(), &inst.p); st) {
            return report(st, "load instance");
        }
        const q4dr_qaoa_config qcfg = solve_flags.qaoa(seed);
        const q4dr_solver_config scfg = solve_flags.solver_config(seed);
        SolutionHandle sol;
        if (auto st = q4dr_solve(inst.p, solve_instance.c_str(), &qcfg, &scfg, &sol.p); st) {
            return report(st, "solve");
        }
        print_solution(sol.p);
        if (!solve_out.empty()) {
            if (auto st = q4dr_solution_save(sol.p, solve_out.c_str(), deterministic ? 0 : 1); st) {
                return report(st, "save solution");
            }
        }
        if (!solve_plot.empty()) {
            if (auto st = q4dr_solution_save_geojson(sol.p, solve_plot.c_str()); st) {
                return report(st, "save geojson");
            }
        }
        return kExitOk;
    }

    if (verify->parsed()) {
        SolutionHandle sol;
        if (auto st = q4dr_solution_load(verify_solution.c_str(), &sol.p); st) {
            return report(st, "load solution");
        }
        InstanceHandle inst;
        if (!verify_instance.empty()) {
            if (auto st = q4dr_instance_load(verify_instance.c_str(), &inst.p); st) {
                return report(st, "load instance");
            }
        }
        size_t count = 0;
        if (auto st = q4dr_solution_verify(sol.p, inst.p, &count); st) {
            return report(st, "verify");
        }
        if (count == 0) {
            std::cout << "OK: solution is valid\n";
            return kExitOk;
        }
        for (size_t i = 0; i < count; ++i) {
            std::cout << "violation: " << q4dr_solution_violation(sol.p, i) << "\n";
        }
        return kExitViolations;
    }

    if (plot->parsed()) {
        SolutionHandle sol;
        if (auto st = q4dr_solution_load(plot_solution.c_str(), &sol.p); st) {
            return report(st, "load solution");
        }
        if (auto st = q4dr_solution_save_geojson(sol.p, plot_out.c_str()); st) {
            return report(st, "save geojson");
        }
        std::cout << "wrote " << plot_out << "\n";
        return kExitOk;
    }

    if (bench->parsed()) {
        bench_opts.instance_seed = bench_instance_seed;
        bench_opts.parallel_cells = bench_parallel;
        bench_opts.use_case_mask = 0;
        for (auto uc : bench_use_cases) {
            for (auto& c : uc) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            bench_opts.use_case_mask |= 1u << (kUseCases.at(uc) - 1);
        }
        bench_opts.sizes = bench_sizes.data();
        bench_opts.size_count = bench_sizes.size();
        bench_opts.out_dir = bench_out_dir.empty() ? nullptr : bench_out_dir.c_str();
        const q4dr_qaoa_config qcfg = bench_flags.qaoa(seed);
        const q4dr_solver_config scfg = bench_flags.solver_config(seed);
        BenchHandle rep;
        if (auto st = q4dr_bench_run(&bench_opts, &qcfg, &scfg, &rep.p); st) {
            return report(st, "bench");
        }
        std::cout << q4dr_bench_report_table(rep.p);
        if (!bench_csv.empty()) {
            std::ofstream out(bench_csv, std::ios::binary);
            out << q4dr_bench_report_csv(rep.p);
            if (!out) {
                std::cerr << "q4dr: cannot write " << bench_csv << "\n";
                return kExitBadInput;
            }
        }
        return q4dr_bench_report_failures(rep.p) == 0 ? kExitOk : kExitViolations;
    }
    return kExitOk;
}
