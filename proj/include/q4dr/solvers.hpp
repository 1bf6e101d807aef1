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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "q4dr/route_model.hpp"

namespace q4dr {

enum class SolverKind { kExact, kSa, kPortfolio };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view text);

inline constexpr std::size_t kBruteForceMaxNodes = 9;
inline constexpr std::size_t kHeldKarpMaxNodes = 20;

struct SolverConfig {
    SolverKind kind = SolverKind::kPortfolio;
    std::size_t threads = 4;
    std::size_t sweeps = 10'000;
    std::size_t restarts = 8;
    /// Defaults: t_hi = penalty weight, t_lo = 0.01 * smallest |coefficient|.
    std::optional<double> t_hi;
    std::optional<double> t_lo;
    std::uint64_t seed = 0;
    /// Low-temperature re-anneal from the thread's best-so-far after each
    /// restart, using moves that keep every one-hot constraint satisfied.
    bool guided = true;
};

/// Throws InvalidArgument unless threads, sweeps, restarts >= 1 and any
/// explicit temperatures satisfy t_hi > t_lo > 0.
void validate(const SolverConfig& cfg);

struct TraceEntry {
    std::size_t thread = 0;
    std::size_t restart = 0;
    /// Cost of this restart's route after repair/refinement.
    double energy = 0.0;
    /// Thread best-so-far after this restart.
    double best = 0.0;
    bool feasible = false;

    bool operator==(const TraceEntry&) const = default;
};

struct SolveResult {
    Route route;
    double energy = 0.0;
    bool feasible = false;
    std::size_t thread_id = 0;
    std::size_t restart_id = 0;
    std::string method;
    double wall_time_ms = 0.0;
    std::vector<TraceEntry> trace;

    /// Everything except the wall time.
    bool same_outcome(const SolveResult& other) const;
};

/// One line per restart: "thread=T restart=R energy=E best=B feasible=0|1".
std::string format_trace(const std::vector<TraceEntry>& trace);

/// True if any consecutive pair of the route is a forbidden arc.
bool contains_forbidden_arc(const Route& route, const CostMatrix& costs);
bool contains_forbidden_arc(const RouteModel& model, const Route& route);

/// Exact optimum by permutation enumeration (n <= 9).
SolveResult brute_force(const RouteModel& model);

/// Exact closed-tour optimum by subset dynamic programming (n <= 20).
SolveResult held_karp(const RouteModel& model);

struct AnnealResult {
    Assignment assignment;
    double energy = 0.0;
};

struct Temperatures {
    double hot = 1.0;
    double cold = 0.01;
};

Temperatures default_temperatures(const QuboForm& qubo);

/// Single-flip Metropolis annealing over a geometric schedule, sweeps x
/// |vars| proposals, returning the best assignment seen. The random stream
/// is derived from (cfg.seed, thread_id, restart_id).
AnnealResult anneal(const QuboForm& qubo, const SolverConfig& cfg,
                    std::size_t thread_id = 0, std::size_t restart_id = 0);

/// Greedy repair of a sampler output into a constraint-satisfying route.
/// Per position the cheapest unused candidate (from the sample if present,
/// otherwise any unused node) is chosen; the terminal station likewise.
Route repair(const RouteModel& model, const Assignment& a);

/// Metropolis search on the QUBO energy using swap, relocation, reversal and
/// station-switch moves, so every visited state is feasible.
Route guided_refine(const RouteModel& model, const QuboForm& qubo, const Route& start,
                    const SolverConfig& cfg, std::size_t thread_id, std::size_t restart_id);

/// Parallel independent workers, restarts x anneal each, best feasible
/// result returned. Throws NoFeasibleSolution.
SolveResult portfolio_solve(const RouteModel& model, const SolverConfig& cfg);

/// Dispatches on cfg.kind.
SolveResult solve(const RouteModel& model, const SolverConfig& cfg);

}  // namespace q4dr
