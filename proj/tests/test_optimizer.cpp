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

#include "q4dr/optimizer.hpp"

using namespace q4dr;

namespace {

double quadratic(std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5) + 3.0;
}

double rosenbrock(std::span<const double> x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
}

}  // namespace

TEST_CASE("both methods find the minimum of a convex quadratic") {
    for (auto kind : {OptimizerKind::kCobyla, OptimizerKind::kNelderMead}) {
        OptimizerOptions opts;
        opts.kind = kind;
        opts.max_evaluations = 400;
        opts.final_step = 1e-6;
        const auto r = minimize(quadratic, {4.0, 3.0}, opts);
        CHECK(r.value == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-2));
        CHECK(r.x[1] == doctest::Approx(-0.5).epsilon(1e-2));
        CHECK(r.initial_value == doctest::Approx(quadratic(std::vector<double>{4.0, 3.0})));
    }
}

TEST_CASE("evaluation budget is respected and the best point is returned") {
    for (auto kind : {OptimizerKind::kCobyla, OptimizerKind::kNelderMead}) {
        std::size_t calls = 0;
        double best_seen = 1e300;
        const Objective counted = [&](std::span<const double> x) {
            ++calls;
            const double v = rosenbrock(x);
            best_seen = std::min(best_seen, v);
            return v;
        };
        OptimizerOptions opts;
        opts.kind = kind;
        opts.max_evaluations = 37;
        const auto r = minimize(counted, {-1.2, 1.0}, opts);
        CHECK(calls <= 37);
        CHECK(r.evaluations == calls);
        CHECK(r.value == best_seen);
        CHECK(r.value == doctest::Approx(rosenbrock(r.x)));
        CHECK(r.value <= r.initial_value);
    }
}

TEST_CASE("optimizers are deterministic") {
    OptimizerOptions opts;
    opts.max_evaluations = 60;
    const auto a = minimize(rosenbrock, {-1.2, 1.0}, opts);
    const auto b = minimize(rosenbrock, {-1.2, 1.0}, opts);
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
}

TEST_CASE("one-dimensional problems") {
    const Objective f = [](std::span<const double> x) { return std::cos(x[0]); };
    for (auto kind : {OptimizerKind::kCobyla, OptimizerKind::kNelderMead}) {
        OptimizerOptions opts;
        opts.kind = kind;
        opts.max_evaluations = 200;
        const auto r = minimize(f, {2.5}, opts);
        CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-6));
    }
}
