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

#include "q4dr/assignment.hpp"

#include "q4dr/errors.hpp"

namespace q4dr {

GeoPoint centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw InvalidArgument("centroid of an empty point set");
    double lat = 0.0, lon = 0.0;
    for (const auto& p : points) {
        lat += p.lat;
        lon += p.lon;
    }
    const auto n = static_cast<double>(points.size());
    return {lat / n, lon / n};
}

namespace {

GeoPoint cluster_centroid(const std::vector<std::size_t>& cluster, const Instance& inst) {
    std::vector<GeoPoint> pts;
    pts.reserve(cluster.size());
    for (std::size_t i : cluster) pts.push_back(inst.visiting.at(i));
    return centroid(pts);
}

}  // namespace

std::pair<Subproblem, Subproblem> assign_depots(const Partition& partition,
                                                std::span<const GeoPoint> depots,
                                                const Instance& inst) {
    if (partition.cluster_a.empty() || partition.cluster_b.empty()) {
        throw InvalidArgument("both clusters must be non-empty");
    }
    if (depots.empty() || depots.size() > 2) {
        throw InvalidArgument("depot assignment supports one or two depots");
    }

    Subproblem a, b;
    a.cluster = partition.cluster_a;
    b.cluster = partition.cluster_b;
    a.closed = b.closed = inst.use_case != UseCase::kUC3;
    if (!a.closed) {
        for (std::size_t k = 0; k < inst.charging.size(); ++k) {
            a.charging_allowed.push_back(inst.charging_index(k));
        }
        b.charging_allowed = a.charging_allowed;
    }

    if (depots.size() == 1) {
        a.depot = b.depot = inst.depot_index(0);
        return {a, b};
    }

    const GeoPoint ca = cluster_centroid(a.cluster, inst);
    const GeoPoint cb = cluster_centroid(b.cluster, inst);
    const double identity = geo_distance(depots[0], ca) + geo_distance(depots[1], cb);
    const double swapped = geo_distance(depots[0], cb) + geo_distance(depots[1], ca);
    if (swapped < identity) {
        a.depot = inst.depot_index(1);
        b.depot = inst.depot_index(0);
    } else {
        a.depot = inst.depot_index(0);
        b.depot = inst.depot_index(1);
    }
    return {a, b};
}

std::pair<Subproblem, Subproblem> assign_depots(const Partition& partition,
                                                const Instance& inst) {
    return assign_depots(partition, inst.depots, inst);
}

}  // namespace q4dr
