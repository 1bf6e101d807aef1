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

#include "q4dr/bench.hpp"

#include <atomic>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json_io.hpp"

namespace q4dr {

namespace {

std::string opt_number(const std::optional<double>& v, int precision = 3) {
    if (!v) return "";
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << *v;
    return out.str();
}

std::string fixed(double v, int precision = 3) { return opt_number(v, precision); }

}  // namespace

BenchRow run_bench_cell(UseCase use_case, std::size_t n, const BenchOptions& options) {
    BenchRow row;
    row.use_case = use_case;
    row.n = n;
    row.seed = options.instance_seed;
    try {
        const Instance inst = generate_instance(use_case, n, options.instance_seed, {}, options.costs);
        row.name = inst.name();
        std::string inst_path;
        if (!options.out_dir.empty()) {
            std::filesystem::create_directories(options.out_dir);
            inst_path = (std::filesystem::path(options.out_dir) / (row.name + ".json")).string();
            save_instance(inst, inst_path);
        }

        const Solution sol = solve_pipeline(inst, options.pipeline, inst_path);
        row.cut_weight = sol.partition.cut_weight;
        const WeightedGraph graph = WeightedGraph::from_instance(inst);
        if (n <= kBenchMaxCutNodes) row.max_cut = brute_force_maxcut(graph).cut_weight;

        const auto [sub_a, sub_b] = assign_depots(sol.partition, inst);
        const std::array<Subproblem, 2> subs{sub_a, sub_b};
        for (std::size_t k = 0; k < 2; ++k) {
            auto& cell = row.routes[k];
            cell.cluster_size = subs[k].cluster.size();
            cell.cost = sol.routes[k].cost;
            const RouteModel model = build_model(subs[k], inst);
            if (model.kind() == RouteKind::kClosedTour && model.n() <= kHeldKarpMaxNodes) {
                cell.oracle_cost = held_karp(model).route.cost;
                cell.oracle_method = "held_karp";
            } else if (model.n() <= kBruteForceMaxNodes) {
                cell.oracle_cost = brute_force(model).route.cost;
                cell.oracle_method = "brute_force";
            }
            if (contains_forbidden_arc(sol.routes[k], inst.costs)) ++row.forbidden_arcs_used;
        }
        row.total_cost = sol.total_cost;
        row.violations = verify_solution(sol, inst).size();
        row.clustering_ms = sol.timings.clustering_ms;
        row.routing_ms = sol.timings.routing_ms[0] + sol.timings.routing_ms[1];
        row.total_ms = sol.timings.total_ms;
        row.solution_json = solution_to_json(sol, false);
        if (!options.out_dir.empty()) {
            write_text_file(
                (std::filesystem::path(options.out_dir) / (row.name + ".solution.json")).string(),
                row.solution_json);
        }
        row.ok = true;
    } catch (const std::exception& e) {
        if (row.name.empty()) {
            Instance stub;
            stub.use_case = use_case;
            stub.visiting.resize(n);
            row.name = stub.name();
        }
        row.error = e.what();
    }
    return row;
}

BenchReport run_bench(const BenchOptions& options) {
    std::vector<std::pair<UseCase, std::size_t>> cells;
    for (auto uc : options.use_cases) {
        for (auto n : options.sizes) cells.emplace_back(uc, n);
    }
    BenchReport report;
    report.rows.resize(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            report.rows[i] = run_bench_cell(cells[i].first, cells[i].second, options);
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.parallel_cells, cells.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return report;
}

std::string BenchReport::to_csv() const {
    std::ostringstream out;
    out << "instance,use_case,n,seed,status,cluster_a,cluster_b,cut_weight,max_cut,cut_ratio,"
           "route0_cost,route0_oracle,route0_gap,route1_cost,route1_oracle,route1_gap,"
           "total_cost,violations,forbidden_arcs,clustering_ms,routing_ms,total_ms\n";
    for (const auto& r : rows) {
        out << r.name << ',' << to_string(r.use_case) << ',' << r.n << ',' << r.seed << ','
            << (r.ok ? "ok" : "error") << ',' << r.routes[0].cluster_size << ','
            << r.routes[1].cluster_size << ',' << fixed(r.cut_weight) << ','
            << opt_number(r.max_cut) << ',' << opt_number(r.cut_ratio(), 4) << ',';
        for (const auto& c : r.routes) {
            out << fixed(c.cost) << ',' << opt_number(c.oracle_cost) << ',' << opt_number(c.gap())
                << ',';
        }
        out << fixed(r.total_cost) << ',' << r.violations << ',' << r.forbidden_arcs_used << ','
            << fixed(r.clustering_ms, 1) << ',' << fixed(r.routing_ms, 1) << ','
            << fixed(r.total_ms, 1) << "\n";
    }
    return out.str();
}

std::string BenchReport::to_table() const {
    std::ostringstream out;
    out << std::left << std::setw(8) << "cell" << std::right << std::setw(8) << "sizes"
        << std::setw(10) << "cut/max" << std::setw(14) << "route0" << std::setw(10) << "gap0"
        << std::setw(14) << "route1" << std::setw(10) << "gap1" << std::setw(6) << "viol"
        << std::setw(11) << "time[s]" << "\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(8) << r.name << std::right;
        if (!r.ok) {
            out << "  error: " << r.error << "\n";
            continue;
        }
        const std::string sizes =
            std::to_string(r.routes[0].cluster_size) + "/" + std::to_string(r.routes[1].cluster_size);
        auto gap = [](const BenchRouteCell& c) {
            return c.gap() ? opt_number(c.gap(), 1) : std::string("-");
        };
        out << std::setw(8) << sizes << std::setw(10)
            << (r.cut_ratio() ? opt_number(r.cut_ratio(), 3) : std::string("-")) << std::setw(14)
            << fixed(r.routes[0].cost, 1) << std::setw(10) << gap(r.routes[0]) << std::setw(14)
            << fixed(r.routes[1].cost, 1) << std::setw(10) << gap(r.routes[1]) << std::setw(6)
            << r.violations << std::setw(11) << fixed(r.total_ms / 1000.0, 2) << "\n";
    }
    return out.str();
}

}  // namespace q4dr
