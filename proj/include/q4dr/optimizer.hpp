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
#include <functional>
#include <span>
#include <vector>

namespace q4dr {

enum class OptimizerKind {
    /// Linear interpolation on a simplex with a shrinking trust radius.
    kCobyla,
    kNelderMead,
};

struct OptimizerOptions {
    OptimizerKind kind = OptimizerKind::kCobyla;
    double initial_step = 0.5;
    double final_step = 1e-4;
    std::size_t max_evaluations = 50;
};

struct OptimizeResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    /// Objective value at the starting point.
    double initial_value = 0.0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `f` without derivatives. Never evaluates more than
/// `max_evaluations` times and returns the best point seen.
OptimizeResult minimize(const Objective& f, std::vector<double> x0,
                        const OptimizerOptions& options);

OptimizeResult minimize_cobyla(const Objective& f, std::vector<double> x0,
                               const OptimizerOptions& options);
OptimizeResult minimize_nelder_mead(const Objective& f, std::vector<double> x0,
                                    const OptimizerOptions& options);

}  // namespace q4dr
