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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "q4dr/assignment.hpp"
#include "q4dr/instance.hpp"
#include "q4dr/qaoa.hpp"
#include "q4dr/route_model.hpp"
#include "q4dr/solvers.hpp"

namespace q4dr {

/// How each cluster's routing solver is chosen.
enum class SolverSelection {
    /// Exact for closed clusters up to `exact_threshold` nodes and open
    /// clusters within the brute-force guard, the configured sampler otherwise.
    kAuto,
    /// Always the configured SolverConfig::kind.
    kForced,
};

struct PipelineOptions {
    QaoaConfig qaoa;
    SolverConfig solver;
    SolverSelection selection = SolverSelection::kAuto;
    std::size_t exact_threshold = 13;
    /// Reseeded QAOA retries after a trivial partition.
    std::size_t clustering_retries = 3;
};

struct RouteMetadata {
    std::string method;
    std::size_t thread_id = 0;
    std::size_t restart_id = 0;
    double energy = 0.0;

    bool operator==(const RouteMetadata&) const = default;
};

struct Timings {
    double clustering_ms = 0.0;
    double assignment_ms = 0.0;
    std::array<double, 2> routing_ms{};
    double total_ms = 0.0;
};

struct Solution {
    std::string instance_path;
    Instance instance;
    Partition partition;
    std::array<Route, 2> routes;
    double total_cost = 0.0;
    Timings timings;

    // Solver metadata.
    QaoaConfig qaoa;
    SolverConfig solver;
    std::uint64_t qaoa_seed_used = 0;
    std::size_t clustering_attempts = 1;
    std::array<RouteMetadata, 2> route_meta;
};

Solution solve_pipeline(const Instance& inst, const PipelineOptions& options,
                        const std::string& instance_path = "");

enum class ViolationKind {
    kRouteCount,
    kEmptyRoute,
    kBadStart,
    kBadEndpoint,
    kDepotConflict,
    kUnknownLocation,
    kDuplicateVisit,
    kMissingVisit,
    kForbiddenArc,
    kCostMismatch,
    kTotalCostMismatch,
};

struct Violation {
    ViolationKind kind;
    /// Node index for visit violations, route index otherwise.
    std::size_t subject = 0;
    std::string detail;

    /// e.g. "DuplicateVisit(3)" or "BadEndpoint(route 1)".
    std::string to_string() const;
    bool operator==(const Violation&) const = default;
};

/// Empty when the solution is valid for `inst`.
std::vector<Violation> verify_solution(const Solution& sol, const Instance& inst);

/// `include_timings = false` writes an empty timings object so repeated runs
/// produce byte-identical files.
std::string solution_to_json(const Solution& sol, bool include_timings = true);
Solution solution_from_json(std::string_view text);
Solution load_solution(const std::string& path);
void save_solution(const Solution& sol, const std::string& path, bool include_timings = true);

/// FeatureCollection with one LineString per route and a Point per location.
std::string solution_to_geojson(const Solution& sol);

}  // namespace q4dr
