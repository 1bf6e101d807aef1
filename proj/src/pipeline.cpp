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

#include "q4dr/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "json_io.hpp"
#include "q4dr/random.hpp"

namespace q4dr {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

bool use_exact(const RouteModel& model, const PipelineOptions& options) {
    if (options.selection == SolverSelection::kForced) return false;
    if (model.kind() == RouteKind::kClosedTour) {
        return model.n() <= std::min(options.exact_threshold, kHeldKarpMaxNodes);
    }
    return model.n() <= std::min(options.exact_threshold, kBruteForceMaxNodes);
}

SolveResult solve_cluster(const RouteModel& model, const PipelineOptions& options) {
    if (use_exact(model, options)) {
        SolverConfig exact = options.solver;
        exact.kind = SolverKind::kExact;
        return solve(model, exact);
    }
    SolveResult r = solve(model, options.solver);
    if (!r.feasible) throw NoFeasibleSolution("routing produced no feasible route");
    return r;
}

}  // namespace

Solution solve_pipeline(const Instance& inst, const PipelineOptions& options,
                        const std::string& instance_path) {
    validate(inst);
    validate(options.solver);
    const auto start = std::chrono::steady_clock::now();

    Solution sol;
    sol.instance_path = instance_path;
    sol.instance = inst;
    sol.qaoa = options.qaoa;
    sol.solver = options.solver;

    // Clustering over visiting nodes only.
    const WeightedGraph graph = WeightedGraph::from_instance(inst);
    QaoaConfig qcfg = options.qaoa;
    for (std::size_t attempt = 0;; ++attempt) {
        qcfg.seed = attempt == 0 ? options.qaoa.seed : derive_seed(options.qaoa.seed, attempt);
        try {
            sol.partition = optimize(graph, qcfg).partition;
            sol.qaoa_seed_used = qcfg.seed;
            sol.clustering_attempts = attempt + 1;
            break;
        } catch (const AllTrivialPartitions&) {
            if (attempt >= options.clustering_retries) throw;
        }
    }
    sol.timings.clustering_ms = ms_since(start);

    const auto assign_start = std::chrono::steady_clock::now();
    const auto [sub_a, sub_b] = assign_depots(sol.partition, inst);
    const std::array<RouteModel, 2> models{build_model(sub_a, inst), build_model(sub_b, inst)};
    sol.timings.assignment_ms = ms_since(assign_start);

    std::array<std::future<SolveResult>, 2> pending;
    for (std::size_t k = 0; k < 2; ++k) {
        pending[k] = std::async(std::launch::async,
                                [&models, &options, k] { return solve_cluster(models[k], options); });
    }
    std::array<SolveResult, 2> results;
    for (std::size_t k = 0; k < 2; ++k) results[k] = pending[k].get();

    sol.total_cost = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        sol.routes[k] = results[k].route;
        sol.total_cost += results[k].route.cost;
        sol.timings.routing_ms[k] = results[k].wall_time_ms;
        sol.route_meta[k] = {results[k].method, results[k].thread_id, results[k].restart_id,
                             results[k].energy};
    }
    sol.timings.total_ms = ms_since(start);

    const auto violations = verify_solution(sol, inst);
    if (!violations.empty()) {
        throw NoFeasibleSolution("assembled solution is invalid: " + violations.front().to_string());
    }
    return sol;
}

// ---------------------------------------------------------------------------

std::string Violation::to_string() const {
    auto route = [this](const char* name) {
        return std::string(name) + "(route " + std::to_string(subject) + ")";
    };
    switch (kind) {
        case ViolationKind::kRouteCount: return "RouteCount(" + detail + ")";
        case ViolationKind::kEmptyRoute: return route("EmptyRoute");
        case ViolationKind::kBadStart: return route("BadStart");
        case ViolationKind::kBadEndpoint: return route("BadEndpoint");
        case ViolationKind::kDepotConflict: return "DepotConflict(" + detail + ")";
        case ViolationKind::kUnknownLocation: return route("UnknownLocation") + " " + detail;
        case ViolationKind::kDuplicateVisit: return "DuplicateVisit(" + std::to_string(subject) + ")";
        case ViolationKind::kMissingVisit: return "MissingVisit(" + std::to_string(subject) + ")";
        case ViolationKind::kForbiddenArc: return route("ForbiddenArc") + " " + detail;
        case ViolationKind::kCostMismatch: return route("CostMismatch") + " " + detail;
        case ViolationKind::kTotalCostMismatch: return "TotalCostMismatch(" + detail + ")";
    }
    return "Unknown";
}

std::vector<Violation> verify_solution(const Solution& sol, const Instance& inst) {
    std::vector<Violation> out;
    const std::size_t n = inst.n();
    const std::size_t first_depot = inst.depot_index(0);
    const std::size_t first_charging = inst.charging_index(0);
    const std::size_t total = inst.location_count();
    const bool closed = inst.use_case != UseCase::kUC3;
    auto close_enough = [](double a, double b) {
        return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
    };

    std::vector<std::size_t> visits(n, 0);
    double cost_sum = 0.0;
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        const auto& seq = sol.routes[r].sequence;
        cost_sum += sol.routes[r].cost;
        if (seq.size() < 3) {
            out.push_back({ViolationKind::kEmptyRoute, r, ""});
            continue;
        }
        bool indices_ok = true;
        for (std::size_t v : seq) {
            if (v >= total) {
                out.push_back({ViolationKind::kUnknownLocation, r, "location " + std::to_string(v)});
                indices_ok = false;
            }
        }
        if (!indices_ok) continue;

        const std::size_t head = seq.front();
        if (head < first_depot || head >= first_charging) {
            out.push_back({ViolationKind::kBadStart, r, ""});
        }
        const std::size_t tail = seq.back();
        const bool good_end = closed ? tail == head : (tail >= first_charging && tail < total);
        if (!good_end) out.push_back({ViolationKind::kBadEndpoint, r, ""});

        for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
            if (seq[k] < n) {
                ++visits[seq[k]];
            } else {
                out.push_back({ViolationKind::kUnknownLocation, r,
                               "non-visiting location " + std::to_string(seq[k]) + " inside route"});
            }
        }
        for (std::size_t k = 1; k < seq.size(); ++k) {
            if (inst.costs.is_forbidden(seq[k - 1], seq[k])) {
                out.push_back({ViolationKind::kForbiddenArc, r,
                               std::to_string(seq[k - 1]) + "->" + std::to_string(seq[k])});
            }
        }
        const double recomputed = route_cost(seq, inst.costs);
        if (!close_enough(recomputed, sol.routes[r].cost)) {
            out.push_back({ViolationKind::kCostMismatch, r,
                           "stored " + std::to_string(sol.routes[r].cost) + " recomputed " +
                               std::to_string(recomputed)});
        }
    }
    if (sol.routes.size() == 2 && sol.routes[0].sequence.size() >= 3 &&
        sol.routes[1].sequence.size() >= 3) {
        const auto d0 = sol.routes[0].sequence.front();
        const auto d1 = sol.routes[1].sequence.front();
        if (inst.use_case == UseCase::kUC1 && d0 != d1) {
            out.push_back({ViolationKind::kDepotConflict, 0, "UC1 routes must share the depot"});
        }
        if (inst.use_case != UseCase::kUC1 && d0 == d1) {
            out.push_back({ViolationKind::kDepotConflict, 0, "each drone needs its own depot"});
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (visits[v] > 1) out.push_back({ViolationKind::kDuplicateVisit, v, ""});
        if (visits[v] == 0) out.push_back({ViolationKind::kMissingVisit, v, ""});
    }
    if (!close_enough(cost_sum, sol.total_cost)) {
        out.push_back({ViolationKind::kTotalCostMismatch, 0,
                       "stored " + std::to_string(sol.total_cost) + " sum " + std::to_string(cost_sum)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string end_label(const Route& route, const Instance& inst) {
    const std::size_t tail = route.sequence.empty() ? 0 : route.sequence.back();
    if (tail >= inst.charging_index(0) && tail < inst.location_count()) {
        return "charging:" + std::to_string(tail);
    }
    return "depot";
}

std::vector<std::size_t> index_list(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + " must be an array");
    std::vector<std::size_t> out;
    for (const auto& x : v) {
        if (!x.is_number_unsigned()) throw SchemaError(where + " must hold location indices");
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw MissingFieldError("missing field '" + std::string(key) + "' in " + where);
    }
    return *it;
}

double number(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + " must be a number");
    return v.get<double>();
}

}  // namespace

std::string solution_to_json(const Solution& sol, bool include_timings) {
    nlohmann::json doc;
    auto inst = instance_to_json_value(sol.instance);
    inst["path"] = sol.instance_path;
    inst["name"] = sol.instance.name();
    doc["instance"] = std::move(inst);
    doc["partition"] = {{"a", sol.partition.cluster_a},
                        {"b", sol.partition.cluster_b},
                        {"cut_weight", sol.partition.cut_weight},
                        {"assignment", sol.partition.assignment}};
    auto routes = nlohmann::json::array();
    for (const auto& r : sol.routes) {
        routes.push_back({{"sequence", r.sequence},
                          {"cost", r.cost},
                          {"end", end_label(r, sol.instance)}});
    }
    doc["routes"] = std::move(routes);
    doc["total_cost"] = sol.total_cost;
    if (include_timings) {
        doc["timings_ms"] = {{"clustering", sol.timings.clustering_ms},
                             {"assignment", sol.timings.assignment_ms},
                             {"routing", sol.timings.routing_ms},
                             {"total", sol.timings.total_ms}};
    } else {
        doc["timings_ms"] = nlohmann::json::object();
    }
    auto meta = nlohmann::json::array();
    for (const auto& m : sol.route_meta) {
        meta.push_back({{"method", m.method},
                        {"thread", m.thread_id},
                        {"restart", m.restart_id},
                        {"energy", m.energy}});
    }
    doc["solver"] = {
        {"qaoa",
         {{"depth", sol.qaoa.depth},
          {"max_iter", sol.qaoa.max_iter},
          {"seed", sol.qaoa.seed},
          {"seed_used", sol.qaoa_seed_used},
          {"attempts", sol.clustering_attempts},
          {"eval_mode", sol.qaoa.eval_mode == EvalMode::kExact ? "exact" : "sampled"},
          {"shots", sol.qaoa.shots},
          {"optimizer", sol.qaoa.optimizer == OptimizerKind::kCobyla ? "cobyla" : "nelder_mead"}}},
        {"routing",
         {{"kind", to_string(sol.solver.kind)},
          {"threads", sol.solver.threads},
          {"sweeps", sol.solver.sweeps},
          {"restarts", sol.solver.restarts},
          {"seed", sol.solver.seed},
          {"guided", sol.solver.guided}}},
        {"routes", std::move(meta)}};
    return doc.dump(2) + "\n";
}

Solution solution_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    Solution sol;
    const auto& inst = field(doc, "instance", "solution");
    sol.instance = instance_from_json_value(inst);
    if (auto it = inst.find("path"); it != inst.end() && it->is_string()) {
        sol.instance_path = it->get<std::string>();
    }

    const auto& part = field(doc, "partition", "solution");
    sol.partition.cluster_a = index_list(field(part, "a", "partition"), "partition.a");
    sol.partition.cluster_b = index_list(field(part, "b", "partition"), "partition.b");
    sol.partition.cut_weight = number(field(part, "cut_weight", "partition"), "partition.cut_weight");
    if (auto it = part.find("assignment"); it != part.end() && it->is_string()) {
        sol.partition.assignment = it->get<std::string>();
    }

    const auto& routes = field(doc, "routes", "solution");
    if (!routes.is_array() || routes.size() != 2) {
        throw SchemaError("solution must contain exactly two routes");
    }
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string where = "routes[" + std::to_string(k) + "]";
        sol.routes[k].sequence = index_list(field(routes[k], "sequence", where), where + ".sequence");
        sol.routes[k].cost = number(field(routes[k], "cost", where), where + ".cost");
    }
    sol.total_cost = number(field(doc, "total_cost", "solution"), "total_cost");

    if (auto it = doc.find("solver"); it != doc.end() && it->is_object()) {
        if (auto q = it->find("qaoa"); q != it->end() && q->is_object()) {
            sol.qaoa.depth = q->value("depth", sol.qaoa.depth);
            sol.qaoa.max_iter = q->value("max_iter", sol.qaoa.max_iter);
            sol.qaoa.seed = q->value("seed", sol.qaoa.seed);
            sol.qaoa_seed_used = q->value("seed_used", sol.qaoa.seed);
            sol.clustering_attempts = q->value("attempts", std::size_t{1});
        }
        if (auto r = it->find("routing"); r != it->end() && r->is_object()) {
            sol.solver.kind = parse_solver_kind(r->value("kind", std::string("portfolio")));
            sol.solver.threads = r->value("threads", sol.solver.threads);
            sol.solver.sweeps = r->value("sweeps", sol.solver.sweeps);
            sol.solver.restarts = r->value("restarts", sol.solver.restarts);
            sol.solver.seed = r->value("seed", sol.solver.seed);
            sol.solver.guided = r->value("guided", sol.solver.guided);
        }
        if (auto m = it->find("routes"); m != it->end() && m->is_array() && m->size() == 2) {
            for (std::size_t k = 0; k < 2; ++k) {
                sol.route_meta[k].method = (*m)[k].value("method", std::string());
                sol.route_meta[k].thread_id = (*m)[k].value("thread", std::size_t{0});
                sol.route_meta[k].restart_id = (*m)[k].value("restart", std::size_t{0});
                sol.route_meta[k].energy = (*m)[k].value("energy", 0.0);
            }
        }
    }
    if (auto t = doc.find("timings_ms"); t != doc.end() && t->is_object() && !t->empty()) {
        sol.timings.clustering_ms = t->value("clustering", 0.0);
        sol.timings.assignment_ms = t->value("assignment", 0.0);
        sol.timings.total_ms = t->value("total", 0.0);
        if (auto r = t->find("routing"); r != t->end() && r->is_array() && r->size() == 2) {
            sol.timings.routing_ms = {(*r)[0].get<double>(), (*r)[1].get<double>()};
        }
    }
    return sol;
}

Solution load_solution(const std::string& path) {
    return solution_from_json(read_text_file(path));
}

void save_solution(const Solution& sol, const std::string& path, bool include_timings) {
    write_text_file(path, solution_to_json(sol, include_timings));
}

std::string solution_to_geojson(const Solution& sol) {
    const Instance& inst = sol.instance;
    auto features = nlohmann::json::array();
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        auto coords = nlohmann::json::array();
        for (std::size_t v : sol.routes[r].sequence) {
            const GeoPoint& p = inst.location(v);
            coords.push_back({p.lon, p.lat});
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                            {"properties",
                             {{"route", r},
                              {"cost", sol.routes[r].cost},
                              {"end", end_label(sol.routes[r], inst)},
                              {"stroke", r == 0 ? "#1f77b4" : "#d62728"}}}});
    }
    for (std::size_t v = 0; v < inst.location_count(); ++v) {
        const GeoPoint& p = inst.location(v);
        std::string role = "visiting";
        std::string color = "#7f7f7f";
        if (v >= inst.charging_index(0)) {
            role = "charging";
            color = "#2ca02c";
        } else if (v >= inst.depot_index(0)) {
            role = "depot";
            color = "black";
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}},
                            {"properties", {{"index", v}, {"role", role}, {"marker-color", color}}}});
    }
    nlohmann::json doc = {{"type", "FeatureCollection"},
                          {"properties", {{"instance", inst.name()}, {"total_cost", sol.total_cost}}},
                          {"features", std::move(features)}};
    return doc.dump(2) + "\n";
}

}  // namespace q4dr
