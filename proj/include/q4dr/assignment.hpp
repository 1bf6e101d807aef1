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
#include <span>
#include <utility>
#include <vector>

#include "q4dr/instance.hpp"
#include "q4dr/qaoa.hpp"

namespace q4dr {

/// One drone's routing problem, in global location indices.
struct Subproblem {
    std::vector<std::size_t> cluster;
    std::size_t depot = 0;
    std::vector<std::size_t> charging_allowed;
    /// Closed tours return to the depot (UC1/UC2); open routes end at a
    /// charging station (UC3).
    bool closed = true;

    bool operator==(const Subproblem&) const = default;
};

/// Arithmetic mean of latitudes and longitudes.
GeoPoint centroid(std::span<const GeoPoint> points);

/// Pairs the two clusters with depots. With two depots the matching with
/// the smaller summed depot-to-centroid distance wins (ties keep depot 0 on
/// cluster a); with one depot both subproblems share it.
std::pair<Subproblem, Subproblem> assign_depots(const Partition& partition,
                                                std::span<const GeoPoint> depots,
                                                const Instance& inst);

/// Convenience overload using the instance's own depots.
std::pair<Subproblem, Subproblem> assign_depots(const Partition& partition,
                                                const Instance& inst);

}  // namespace q4dr
