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

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "q4dr/errors.hpp"
#include "q4dr/route_model.hpp"

using namespace q4dr;

namespace {

/// Locations 0..2 visit, 3 is the depot. Optimal tour 3 2 1 0 3 costs 13.
const std::vector<double> kHandEntries{
    0, 7, 9, 4,   //
    6, 0, 5, 3,   //
    8, 2, 0, 10,  //
    5, 11, 1, 0,
};

CostMatrix hand_costs(std::set<CostMatrix::Arc> forbidden = {}) {
    return CostMatrix(4, kHandEntries, std::move(forbidden));
}

RouteModel hand_model(const CostMatrix& costs) {
    return RouteModel(RouteKind::kClosedTour, {0, 1, 2}, 3, {}, costs);
}

Assignment from_route(const RouteModel& model, const std::vector<std::size_t>& local_order) {
    Assignment a(model.num_variables(), 0);
    for (std::size_t p = 0; p < local_order.size(); ++p) a[model.x(local_order[p], p + 1)] = 1;
    return a;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("variable and constraint counts") {
    const CostMatrix c = hand_costs();
    const RouteModel closed = hand_model(c);
    CHECK(closed.num_variables() == 9);
    CHECK(closed.constraints().size() == 6);
    CHECK(closed.x(2, 3) == 5);

    const Instance inst = generate_instance(UseCase::kUC3, 6, 4);
    const RouteModel open(RouteKind::kOpenCharging, {0, 1, 2}, inst.depot_index(0),
                          {inst.charging_index(0), inst.charging_index(1)}, inst.costs);
    CHECK(open.num_variables() == 11);
    CHECK(open.constraints().size() == 7);
    CHECK(open.y(2) == 10);
    CHECK(open.constraints().back().kind == ConstraintKind::kOneStation);
}

TEST_CASE("constructor validation") {
    const CostMatrix c = hand_costs();
    CHECK_THROWS_AS(RouteModel(RouteKind::kClosedTour, {}, 3, {}, c), InvalidArgument);
    CHECK_THROWS_AS(RouteModel(RouteKind::kClosedTour, {0}, 3, {1}, c), InvalidArgument);
    CHECK_THROWS_AS(RouteModel(RouteKind::kOpenCharging, {0}, 3, {}, c), InvalidArgument);
    CHECK_THROWS_AS(RouteModel(RouteKind::kClosedTour, {0, 7}, 3, {}, c), InvalidArgument);
}

TEST_CASE("forbidden arc carries BIG_M on every consecutive position pair") {
    const CostMatrix c = hand_costs({{0, 1}});
    CHECK(c.big_m() == doctest::Approx(10.0 * 64.0 + 1.0));
    const RouteModel model = hand_model(c);
    CHECK(model.big_m() == c.big_m());
    for (std::size_t p = 1; p < 3; ++p) {
        const auto key = std::make_pair(model.x(1, p), model.x(2, p + 1));
        CHECK(model.quadratic().at(key) == c.big_m());
    }
    CHECK(model.forbidden(1, 2));
    CHECK_FALSE(model.forbidden(2, 1));
    CHECK(model.max_finite_cost() == 11.0);
}

TEST_CASE("golden model dump") {
    const CostMatrix c = hand_costs();
    CHECK(hand_model(c).debug_dump() == read_file(std::string(Q4DR_GOLDEN_DIR) + "/closed_n3.txt"));
}

TEST_CASE("route cost") {
    const CostMatrix c = hand_costs();
    CHECK(route_cost({3, 2, 1, 0, 3}, c) == 13.0);
    CHECK(route_cost({3, 0, 1, 2, 3}, c) == 5.0 + 7.0 + 5.0 + 10.0);
    CHECK(route_cost({3, 0}, c) == 5.0);
    const CostMatrix f = hand_costs({{2, 1}});
    CHECK(route_cost({3, 2, 1, 0, 3}, f) >= f.big_m());
}

TEST_CASE("QUBO ground state is the optimal tour") {
    const CostMatrix c = hand_costs();
    const RouteModel model = hand_model(c);
    const QuboForm q = to_qubo(model);
    CHECK(q.penalty_weight == doctest::Approx(2.0 * 4.0 * 11.0));
    const auto ground = oracle::qubo_ground_state(q);
    CHECK(ground.energy == doctest::Approx(13.0));
    const Route r = decode(model, ground.assignment);
    CHECK(r.sequence == std::vector<std::size_t>{3, 2, 1, 0, 3});
    CHECK(r.cost == 13.0);

    const auto oracle_best = oracle::best_route({0, 1, 2}, 3, {}, c);
    CHECK(oracle_best.cost == 13.0);
}

TEST_CASE("forbidden arc moves the ground state") {
    const CostMatrix c = hand_costs({{2, 1}});
    const RouteModel model = hand_model(c);
    const auto ground = oracle::qubo_ground_state(to_qubo(model));
    CHECK(decode(model, ground.assignment).sequence == std::vector<std::size_t>{3, 2, 0, 1, 3});
    CHECK(ground.energy == doctest::Approx(19.0));
}

TEST_CASE("two-node closed model") {
    const CostMatrix c = hand_costs();
    const RouteModel model(RouteKind::kClosedTour, {0, 1}, 3, {}, c);
    const auto ground = oracle::qubo_ground_state(to_qubo(model));
    const auto best = oracle::best_route({0, 1}, 3, {}, c);
    CHECK(ground.energy == doctest::Approx(best.cost));
    CHECK(decode(model, ground.assignment).sequence == best.sequence);
}

TEST_CASE("penalties: feasible assignments pay nothing, infeasible ones pay at least lambda") {
    const CostMatrix c = hand_costs();
    const RouteModel model = hand_model(c);
    const QuboForm q = to_qubo(model);
    double optimum = 1e300;
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        Assignment a(9);
        for (std::size_t k = 0; k < 9; ++k) a[k] = (bits >> k) & 1u;
        if (!model.first_violation(a)) {
            CHECK(q.energy(a) == doctest::Approx(model.objective(a)));
            optimum = std::min(optimum, q.energy(a));
        }
    }
    CHECK(optimum == doctest::Approx(13.0));
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        Assignment a(9);
        for (std::size_t k = 0; k < 9; ++k) a[k] = (bits >> k) & 1u;
        if (model.first_violation(a)) CHECK(q.energy(a) >= optimum + q.penalty_weight - 1e-9);
    }
}

TEST_CASE("QUBO energy equals objective plus squared residuals") {
    const Instance inst = generate_instance(UseCase::kUC3, 6, 11);
    const RouteModel model(RouteKind::kOpenCharging, {1, 3, 4}, inst.depot_index(1),
                           {inst.charging_index(0), inst.charging_index(1)}, inst.costs);
    const QuboForm q = to_qubo(model, 50.0);
    for (std::uint32_t bits = 0; bits < 2048; bits += 13) {
        Assignment a(11);
        for (std::size_t k = 0; k < 11; ++k) a[k] = (bits >> k) & 1u;
        double penalty = 0.0;
        for (const auto& con : model.constraints()) {
            double s = -1.0;
            for (auto v : con.vars) s += a[v];
            penalty += s * s;
        }
        CHECK(q.energy(a) == doctest::Approx(model.objective(a) + 50.0 * penalty));
    }
}

TEST_CASE("open model ground state matches the route oracle") {
    const Instance inst = generate_instance(UseCase::kUC3, 6, 2);
    const std::vector<std::size_t> nodes{0, 2, 5};
    const std::vector<std::size_t> stations{inst.charging_index(0), inst.charging_index(1)};
    const RouteModel model(RouteKind::kOpenCharging, nodes, inst.depot_index(0), stations,
                           inst.costs);
    const auto ground = oracle::qubo_ground_state(to_qubo(model));
    const auto best = oracle::best_route(nodes, inst.depot_index(0), stations, inst.costs);
    const Route r = decode(model, ground.assignment);
    CHECK(r.cost == doctest::Approx(best.cost).epsilon(1e-9));
    CHECK(r.sequence == best.sequence);
}

TEST_CASE("single-node open route") {
    const Instance inst = generate_instance(UseCase::kUC3, 6, 5);
    const std::size_t s = inst.charging_index(0);
    const RouteModel model(RouteKind::kOpenCharging, {1}, inst.depot_index(0), {s}, inst.costs);
    Assignment a{1, 1};
    const Route r = decode(model, a);
    CHECK(r.sequence == std::vector<std::size_t>{inst.depot_index(0), 1, s});
    CHECK(r.cost == doctest::Approx(inst.costs.cost(inst.depot_index(0), 1) + inst.costs.cost(1, s)));
}

TEST_CASE("decode reports the first violated constraint") {
    const CostMatrix c = hand_costs();
    const RouteModel model = hand_model(c);
    CHECK(decode(model, from_route(model, {1, 2, 3})).sequence ==
          std::vector<std::size_t>{3, 0, 1, 2, 3});

    Assignment missing = from_route(model, {1, 3, 3});
    try {
        decode(model, missing);
        FAIL("expected InfeasibleAssignment");
    } catch (const InfeasibleAssignment& e) {
        CHECK(e.kind() == ConstraintKind::kVisitOnce);
        CHECK(e.index() == 2);
    }

    const Instance inst = generate_instance(UseCase::kUC3, 6, 3);
    const RouteModel open(RouteKind::kOpenCharging, {0, 1}, inst.depot_index(0),
                          {inst.charging_index(0), inst.charging_index(1)}, inst.costs);
    Assignment two_stations(open.num_variables(), 0);
    two_stations[open.x(1, 1)] = 1;
    two_stations[open.x(2, 2)] = 1;
    two_stations[open.y(1)] = 1;
    two_stations[open.y(2)] = 1;
    try {
        decode(open, two_stations);
        FAIL("expected InfeasibleAssignment");
    } catch (const InfeasibleAssignment& e) {
        CHECK(e.kind() == ConstraintKind::kOneStation);
    }
}

TEST_CASE("encode and decode are inverse") {
    const Instance inst = generate_instance(UseCase::kUC3, 7, 8);
    const std::vector<std::size_t> stations{inst.charging_index(0), inst.charging_index(1)};
    const RouteModel model(RouteKind::kOpenCharging, {6, 2, 4, 0}, inst.depot_index(1), stations,
                           inst.costs);
    Route r;
    r.sequence = {inst.depot_index(1), 4, 0, 6, 2, stations[1]};
    r.cost = route_cost(r, inst.costs);
    const Assignment a = encode(model, r);
    CHECK(decode(model, a) == r);
    CHECK(model.objective(a) == doctest::Approx(r.cost));
    CHECK_FALSE(model.first_violation(a));

    Route bad = r;
    bad.sequence.pop_back();
    CHECK_THROWS_AS(encode(model, bad), InvalidArgument);
}

TEST_CASE("reversed tours on a symmetric matrix cost the same") {
    const Instance inst = generate_instance(UseCase::kUC1, 6, 3, BoundingBox{}, CostOptions{0.0, 0.0});
    const std::size_t d = inst.depot_index(0);
    const std::vector<std::size_t> fwd{d, 0, 3, 5, 1, d};
    std::vector<std::size_t> rev(fwd.rbegin(), fwd.rend());
    CHECK(route_cost(fwd, inst.costs) == doctest::Approx(route_cost(rev, inst.costs)));
}

TEST_CASE("build_model from a subproblem") {
    const Instance inst = generate_instance(UseCase::kUC2, 8, 1);
    Subproblem sub;
    sub.cluster = {1, 4, 6};
    sub.depot = inst.depot_index(1);
    const RouteModel model = build_model(sub, inst);
    CHECK(model.kind() == RouteKind::kClosedTour);
    CHECK(model.global(0) == sub.depot);
    CHECK(model.global(2) == 4);
    sub.depot = 2;
    CHECK_THROWS_AS(build_model(sub, inst), InvalidArgument);
}
