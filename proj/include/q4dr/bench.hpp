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
#include <optional>
#include <string>
#include <vector>

#include "q4dr/pipeline.hpp"

namespace q4dr {

struct BenchOptions {
    std::vector<UseCase> use_cases{UseCase::kUC1, UseCase::kUC2, UseCase::kUC3};
    std::vector<std::size_t> sizes{12, 16, 22};
    std::uint64_t instance_seed = 7;
    CostOptions costs;
    PipelineOptions pipeline;
    /// When non-empty, each cell writes UCX_Y.json and UCX_Y.solution.json here.
    std::string out_dir;
    /// Cells run concurrently on this many workers.
    std::size_t parallel_cells = 1;

    BenchOptions() {
        pipeline.selection = SolverSelection::kForced;
        pipeline.solver.kind = SolverKind::kPortfolio;
    }
};

struct BenchRouteCell {
    std::size_t cluster_size = 0;
    double cost = 0.0;
    /// Exact reference when an oracle applies (Held-Karp for closed tours up
    /// to 20 nodes, enumeration for open routes up to 9).
    std::optional<double> oracle_cost;
    std::string oracle_method;
    std::optional<double> gap() const {
        if (!oracle_cost) return std::nullopt;
        return cost - *oracle_cost;
    }
};

struct BenchRow {
    std::string name;
    UseCase use_case = UseCase::kUC1;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double cut_weight = 0.0;
    std::optional<double> max_cut;
    std::array<BenchRouteCell, 2> routes;
    double total_cost = 0.0;
    std::size_t violations = 0;
    std::size_t forbidden_arcs_used = 0;
    double clustering_ms = 0.0;
    double routing_ms = 0.0;
    double total_ms = 0.0;
    /// Deterministic solution JSON for the cell (empty on failure).
    std::string solution_json;

    std::optional<double> cut_ratio() const {
        if (!max_cut || *max_cut <= 0.0) return std::nullopt;
        return cut_weight / *max_cut;
    }
};

struct BenchReport {
    std::vector<BenchRow> rows;

    std::string to_csv() const;
    std::string to_table() const;
};

/// Largest instance for which the exhaustive cut reference is computed.
inline constexpr std::size_t kBenchMaxCutNodes = 22;

BenchRow run_bench_cell(UseCase use_case, std::size_t n, const BenchOptions& options);
BenchReport run_bench(const BenchOptions& options);

}  // namespace q4dr
