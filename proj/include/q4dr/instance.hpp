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
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "q4dr/errors.hpp"

namespace q4dr {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

enum class UseCase { kUC1, kUC2, kUC3 };

std::string_view to_string(UseCase uc);
/// Accepts "uc1".."uc3" (case-insensitive). Throws SchemaError otherwise.
UseCase parse_use_case(std::string_view text);

/// Number of depots required by a use case.
std::size_t depot_count(UseCase uc);
/// Number of charging stations for a use case with `n` visiting points.
std::size_t charging_count(UseCase uc, std::size_t n);

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p);
/// Throws RangeError when the point is non-finite or out of range.
void validate(const GeoPoint& p);

/// Great-circle distance in meters (haversine, spherical Earth).
double geo_distance(const GeoPoint& a, const GeoPoint& b);

/// Dense directed cost matrix over all locations of an instance.
///
/// Forbidden arcs keep their underlying entry but `cost(i, j)` reports
/// `big_m()` for them. `big_m()` is derived from the finite entries so it is
/// always strictly above ten times their total.
class CostMatrix {
 public:
    using Arc = std::pair<std::size_t, std::size_t>;

    CostMatrix() = default;
    CostMatrix(std::size_t size, std::vector<double> entries,
               std::set<Arc> forbidden = {});

    std::size_t size() const { return size_; }
    double entry(std::size_t i, std::size_t j) const {
        return entries_[i * size_ + j];
    }
    double cost(std::size_t i, std::size_t j) const;
    bool is_forbidden(std::size_t i, std::size_t j) const {
        return forbidden_mask_[i * size_ + j] != 0;
    }
    double big_m() const { return big_m_; }
    double finite_total() const { return finite_total_; }

    const std::vector<double>& entries() const { return entries_; }
    const std::set<Arc>& forbidden() const { return forbidden_; }

    /// True if every location can reach every other using finite arcs only.
    bool strongly_connected() const;

    bool operator==(const CostMatrix& other) const {
        return size_ == other.size_ && entries_ == other.entries_ &&
               forbidden_ == other.forbidden_;
    }

 private:
    void refresh();

    std::size_t size_ = 0;
    std::vector<double> entries_;
    std::set<Arc> forbidden_;
    std::vector<std::uint8_t> forbidden_mask_;
    double finite_total_ = 0.0;
    double big_m_ = 1.0;
};

struct BoundingBox {
    double lat_min = 43.20;
    double lat_max = 43.32;
    double lon_min = -3.02;
    double lon_max = -2.86;

    bool operator==(const BoundingBox&) const = default;
};

struct CostOptions {
    double asymmetry = 0.2;
    double forbidden_fraction = 0.05;
};

/// Builds the perturbed asymmetric matrix.
///
/// entry(i,j) = geo_distance(i,j) * (1 + u_ij), u_ij ~ U[0, asymmetry] drawn per
/// ordered pair in row-major order. Forbidden arcs are drawn among ordered
/// pairs whose endpoints are both outside `depots`; an arc is skipped if it
/// would break strong connectivity or if its reverse is already forbidden.
/// Throws InfeasibleInstance when the requested count cannot be placed.
CostMatrix build_cost_matrix(std::span<const GeoPoint> points,
                             const CostOptions& options, std::uint64_t seed,
                             const std::set<std::size_t>& depots = {});

struct Instance {
    UseCase use_case = UseCase::kUC1;
    std::uint64_t seed = 0;
    std::vector<GeoPoint> visiting;
    std::vector<GeoPoint> depots;
    std::vector<GeoPoint> charging;
    CostMatrix costs;

    std::size_t n() const { return visiting.size(); }
    std::size_t location_count() const {
        return visiting.size() + depots.size() + charging.size();
    }
    std::size_t depot_index(std::size_t k) const { return visiting.size() + k; }
    std::size_t charging_index(std::size_t k) const {
        return visiting.size() + depots.size() + k;
    }
    /// Location by global index (visiting, then depots, then charging).
    const GeoPoint& location(std::size_t index) const;
    std::vector<GeoPoint> locations() const;

    /// Benchmark name, e.g. "UC1_12".
    std::string name() const;

    bool operator==(const Instance&) const = default;
};

/// Checks every structural invariant; throws SchemaError, RangeError or
/// InfeasibleInstance.
void validate(const Instance& inst);

Instance generate_instance(UseCase use_case, std::size_t n, std::uint64_t seed,
                           const BoundingBox& bbox = {},
                           const CostOptions& options = {});

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(std::string_view text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace q4dr
