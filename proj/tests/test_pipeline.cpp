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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <json.hpp>

#include "q4dr/errors.hpp"
#include "q4dr/pipeline.hpp"

using namespace q4dr;

namespace {

PipelineOptions fast_options(std::uint64_t seed) {
    PipelineOptions o;
    o.qaoa.seed = seed;
    o.qaoa.depth = 2;
    o.qaoa.max_iter = 30;
    o.solver.seed = seed;
    o.solver.threads = 2;
    o.solver.restarts = 4;
    o.solver.sweeps = 2000;
    return o;
}

bool has_kind(const std::vector<Violation>& vs, ViolationKind kind) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

/// Solutions are computed once and shared across cases.
const Solution& uc1_solution() {
    static const Solution sol = solve_pipeline(generate_instance(UseCase::kUC1, 12, 7), fast_options(7));
    return sol;
}

const Solution& uc3_solution() {
    static const Solution sol = solve_pipeline(generate_instance(UseCase::kUC3, 12, 7), fast_options(7));
    return sol;
}

}  // namespace

TEST_CASE("UC1 routes start and end at the shared depot") {
    const Solution& sol = uc1_solution();
    for (const Route& r : sol.routes) {
        CHECK(r.sequence.front() == 12);
        CHECK(r.sequence.back() == 12);
        CHECK(r.sequence.size() >= 3);
    }
    CHECK(verify_solution(sol, sol.instance).empty());
    CHECK(sol.total_cost == doctest::Approx(sol.routes[0].cost + sol.routes[1].cost));
}

TEST_CASE("UC3 routes end at a charging station") {
    const Solution& sol = uc3_solution();
    const Instance& inst = sol.instance;
    std::vector<std::size_t> stations;
    for (std::size_t j = 0; j < charging_count(UseCase::kUC3, 12); ++j) stations.push_back(inst.charging_index(j));
    CHECK(stations == std::vector<std::size_t>{14, 15, 16, 17});
    std::vector<std::size_t> starts{sol.routes[0].sequence.front(), sol.routes[1].sequence.front()};
    std::sort(starts.begin(), starts.end());
    CHECK(starts == std::vector<std::size_t>{inst.depot_index(0), inst.depot_index(1)});
    for (const Route& r : sol.routes) {
        CHECK(std::find(stations.begin(), stations.end(), r.sequence.back()) != stations.end());
    }
    CHECK(verify_solution(sol, inst).empty());
}

TEST_CASE("routes cover every visiting node exactly once") {
    for (const Solution* sol : {&uc1_solution(), &uc3_solution()}) {
        std::vector<std::size_t> seen;
        for (const Route& r : sol->routes)
            for (std::size_t k = 1; k + 1 < r.sequence.size(); ++k) seen.push_back(r.sequence[k]);
        std::sort(seen.begin(), seen.end());
        REQUIRE(seen.size() == 12);
        for (std::size_t i = 0; i < 12; ++i) CHECK(seen[i] == i);
        CHECK(sol->partition.cluster_a.size() == sol->routes[0].sequence.size() - 2);
    }
}

TEST_CASE("verification detects tampering") {
    const Solution& good = uc1_solution();
    const Instance& inst = good.instance;

    Solution dup = good;
    const std::size_t stolen = dup.routes[1].sequence[1];
    dup.routes[0].sequence[1] = stolen;
    const auto dv = verify_solution(dup, inst);
    CHECK(has_kind(dv, ViolationKind::kDuplicateVisit));
    CHECK(has_kind(dv, ViolationKind::kMissingVisit));
    const auto it = std::find_if(dv.begin(), dv.end(),
                                 [](const Violation& v) { return v.kind == ViolationKind::kDuplicateVisit; });
    CHECK(it->to_string() == "DuplicateVisit(" + std::to_string(stolen) + ")");

    Solution end = good;
    end.routes[1].sequence.back() = end.routes[1].sequence[1];
    const auto ev = verify_solution(end, inst);
    CHECK(has_kind(ev, ViolationKind::kBadEndpoint));
    CHECK(std::any_of(ev.begin(), ev.end(),
                      [](const Violation& v) { return v.to_string() == "BadEndpoint(route 1)"; }));

    Solution cost = good;
    cost.total_cost += 1.0;
    CHECK(has_kind(verify_solution(cost, inst), ViolationKind::kTotalCostMismatch));

    Solution one = good;
    one.routes[0].sequence.clear();
    CHECK_FALSE(verify_solution(one, inst).empty());
}

TEST_CASE("solution JSON round trip") {
    const Solution& sol = uc3_solution();
    const std::string text = solution_to_json(sol);
    const Solution back = solution_from_json(text);
    CHECK(back.routes == sol.routes);
    CHECK(back.partition == sol.partition);
    CHECK(back.instance.costs == sol.instance.costs);
    CHECK(back.total_cost == sol.total_cost);
    CHECK(back.route_meta == sol.route_meta);
    CHECK(solution_to_json(back, false) == solution_to_json(sol, false));
    CHECK(verify_solution(back, back.instance).empty());
    CHECK_THROWS_AS(solution_from_json("{\"routes\": 3}"), Error);
    CHECK_THROWS_AS(load_solution("/nonexistent/solution.json"), IoError);
}

TEST_CASE("same seed yields a byte-identical deterministic document") {
    const Instance inst = generate_instance(UseCase::kUC2, 10, 4);
    const Solution a = solve_pipeline(inst, fast_options(3));
    const Solution b = solve_pipeline(inst, fast_options(3));
    CHECK(solution_to_json(a, false) == solution_to_json(b, false));
    const auto doc = nlohmann::json::parse(solution_to_json(a, false));
    CHECK(doc.at("timings_ms").empty());
    CHECK(nlohmann::json::parse(solution_to_json(a)).at("timings_ms").size() == 4);
}

TEST_CASE("GeoJSON export") {
    const Solution& sol = uc3_solution();
    const auto doc = nlohmann::json::parse(solution_to_geojson(sol));
    CHECK(doc.at("type") == "FeatureCollection");
    std::size_t lines = 0, points = 0, black = 0;
    for (const auto& f : doc.at("features")) {
        const std::string type = f.at("geometry").at("type");
        if (type == "LineString") {
            ++lines;
        } else if (type == "Point") {
            ++points;
            if (f.at("properties").at("role") == "depot") {
                CHECK(f.at("properties").at("marker-color") == "black");
                ++black;
            }
        }
    }
    CHECK(lines == 2);
    CHECK(points == 12 + 2 + 4);
    CHECK(black == 2);
}

TEST_CASE("forced solver selection and option errors") {
    const Instance inst = generate_instance(UseCase::kUC2, 8, 5);
    PipelineOptions o = fast_options(1);
    o.selection = SolverSelection::kForced;
    o.solver.kind = SolverKind::kPortfolio;
    const Solution s = solve_pipeline(inst, o);
    for (const auto& m : s.route_meta) CHECK(m.method == "portfolio");
    CHECK(verify_solution(s, inst).empty());

    o.solver.threads = 0;
    CHECK_THROWS_AS(solve_pipeline(inst, o), InvalidArgument);
}
