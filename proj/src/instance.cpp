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

#include "q4dr/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <queue>
#include <sstream>

#include "json_io.hpp"
#include "q4dr/random.hpp"

namespace q4dr {

std::string_view to_string(UseCase uc) {
    switch (uc) {
        case UseCase::kUC1: return "uc1";
        case UseCase::kUC2: return "uc2";
        case UseCase::kUC3: return "uc3";
    }
    return "uc1";
}

UseCase parse_use_case(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "uc1") return UseCase::kUC1;
    if (lower == "uc2") return UseCase::kUC2;
    if (lower == "uc3") return UseCase::kUC3;
    throw SchemaError("unknown use case '" + std::string(text) + "'");
}

std::size_t depot_count(UseCase uc) { return uc == UseCase::kUC1 ? 1 : 2; }

std::size_t charging_count(UseCase uc, std::size_t n) {
    return uc == UseCase::kUC3 ? n / 3 : 0;
}

bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
           p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

void validate(const GeoPoint& p) {
    if (!is_valid(p)) {
        std::ostringstream msg;
        msg << "coordinate out of range: lat=" << p.lat << " lon=" << p.lon;
        throw RangeError(msg.str());
    }
}

double geo_distance(const GeoPoint& a, const GeoPoint& b) {
    constexpr double kDeg = std::numbers::pi / 180.0;
    // Absolute differences keep the result exactly symmetric in (a, b).
    const double dlat = std::fabs(b.lat - a.lat) * kDeg;
    const double dlon = std::fabs(b.lon - a.lon) * kDeg;
    const double s_lat = std::sin(dlat / 2.0);
    const double s_lon = std::sin(dlon / 2.0);
    double h = s_lat * s_lat +
               std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * s_lon * s_lon;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusMeters * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

// ---------------------------------------------------------------------------
// CostMatrix

CostMatrix::CostMatrix(std::size_t size, std::vector<double> entries,
                       std::set<Arc> forbidden)
    : size_(size), entries_(std::move(entries)), forbidden_(std::move(forbidden)) {
    if (entries_.size() != size_ * size_) {
        throw SchemaError("cost matrix has " + std::to_string(entries_.size()) +
                          " entries, expected " + std::to_string(size_ * size_));
    }
    for (std::size_t i = 0; i < size_; ++i) {
        for (std::size_t j = 0; j < size_; ++j) {
            const double v = entries_[i * size_ + j];
            if (!std::isfinite(v) || v < 0.0) {
                throw RangeError("cost entry (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") is negative or non-finite");
            }
            if (i == j && v != 0.0) {
                throw RangeError("cost diagonal entry " + std::to_string(i) +
                                 " is not zero");
            }
        }
    }
    for (const auto& [i, j] : forbidden_) {
        if (i >= size_ || j >= size_ || i == j) {
            throw SchemaError("forbidden arc (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is not a valid arc");
        }
    }
    refresh();
}

void CostMatrix::refresh() {
    forbidden_mask_.assign(size_ * size_, 0);
    for (const auto& [i, j] : forbidden_) forbidden_mask_[i * size_ + j] = 1;
    finite_total_ = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (!forbidden_mask_[k]) finite_total_ += entries_[k];
    }
    big_m_ = 10.0 * finite_total_ + 1.0;
}

double CostMatrix::cost(std::size_t i, std::size_t j) const {
    return is_forbidden(i, j) ? big_m_ : entries_[i * size_ + j];
}

bool CostMatrix::strongly_connected() const {
    if (size_ <= 1) return true;
    auto reaches_all = [this](bool reverse) {
        std::vector<std::uint8_t> seen(size_, 0);
        std::queue<std::size_t> frontier;
        frontier.push(0);
        seen[0] = 1;
        std::size_t count = 1;
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (std::size_t v = 0; v < size_; ++v) {
                if (seen[v] || u == v) continue;
                const bool blocked = reverse ? is_forbidden(v, u) : is_forbidden(u, v);
                if (blocked) continue;
                seen[v] = 1;
                ++count;
                frontier.push(v);
            }
        }
        return count == size_;
    };
    return reaches_all(false) && reaches_all(true);
}

CostMatrix build_cost_matrix(std::span<const GeoPoint> points,
                             const CostOptions& options, std::uint64_t seed,
                             const std::set<std::size_t>& depots) {
    if (!std::isfinite(options.asymmetry) || options.asymmetry < 0.0) {
        throw InvalidArgument("asymmetry must be finite and non-negative");
    }
    if (!(options.forbidden_fraction >= 0.0 && options.forbidden_fraction <= 0.1)) {
        throw InvalidArgument("forbidden_fraction must lie in [0, 0.1]");
    }
    for (const auto& p : points) validate(p);

    const std::size_t size = points.size();
    Rng rng(derive_seed(seed, 0xC057));
    std::vector<double> entries(size * size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            if (i == j) continue;
            const double u = options.asymmetry * rng.uniform();
            entries[i * size + j] = geo_distance(points[i], points[j]) * (1.0 + u);
        }
    }

    std::vector<CostMatrix::Arc> candidates;
    for (std::size_t i = 0; i < size; ++i) {
        if (depots.count(i)) continue;
        for (std::size_t j = 0; j < size; ++j) {
            if (i != j && !depots.count(j)) candidates.emplace_back(i, j);
        }
    }
    const auto target = static_cast<std::size_t>(
        std::llround(options.forbidden_fraction * static_cast<double>(candidates.size())));
    if (target == 0) return CostMatrix(size, std::move(entries));

    Rng pick(derive_seed(seed, 0xF0B1D));
    pick.shuffle(candidates);

    std::set<CostMatrix::Arc> forbidden;
    for (const auto& arc : candidates) {
        if (forbidden.size() == target) break;
        if (forbidden.count({arc.second, arc.first})) continue;
        forbidden.insert(arc);
        if (!CostMatrix(size, entries, forbidden).strongly_connected()) {
            forbidden.erase(arc);
        }
    }
    if (forbidden.size() < target) {
        throw InfeasibleInstance("cannot forbid " + std::to_string(target) +
                                 " arcs without disconnecting the instance");
    }
    return CostMatrix(size, std::move(entries), std::move(forbidden));
}

// ---------------------------------------------------------------------------
// Instance

const GeoPoint& Instance::location(std::size_t index) const {
    if (index < visiting.size()) return visiting[index];
    index -= visiting.size();
    if (index < depots.size()) return depots[index];
    index -= depots.size();
    if (index < charging.size()) return charging[index];
    throw InvalidArgument("location index out of range");
}

std::vector<GeoPoint> Instance::locations() const {
    std::vector<GeoPoint> all(visiting);
    all.insert(all.end(), depots.begin(), depots.end());
    all.insert(all.end(), charging.begin(), charging.end());
    return all;
}

std::string Instance::name() const {
    std::string uc(to_string(use_case));
    uc[0] = 'U';
    uc[1] = 'C';
    return uc + "_" + std::to_string(visiting.size());
}

void validate(const Instance& inst) {
    if (inst.n() < 4) {
        throw SchemaError("instance needs at least 4 visiting points, got " +
                          std::to_string(inst.n()));
    }
    const auto uc = std::string(to_string(inst.use_case));
    if (inst.depots.size() != depot_count(inst.use_case)) {
        throw SchemaError(uc + " requires " + std::to_string(depot_count(inst.use_case)) +
                          " depot(s), got " + std::to_string(inst.depots.size()));
    }
    const std::size_t m = charging_count(inst.use_case, inst.n());
    if (inst.charging.size() != m) {
        throw SchemaError(uc + " with " + std::to_string(inst.n()) +
                          " visiting points requires " + std::to_string(m) +
                          " charging stations, got " + std::to_string(inst.charging.size()));
    }
    for (const auto& p : inst.visiting) validate(p);
    for (const auto& p : inst.depots) validate(p);
    for (const auto& p : inst.charging) validate(p);
    if (inst.costs.size() != inst.location_count()) {
        throw SchemaError("cost matrix size " + std::to_string(inst.costs.size()) +
                          " does not match " + std::to_string(inst.location_count()) +
                          " locations");
    }
    if (!inst.costs.strongly_connected()) {
        throw InfeasibleInstance("forbidden arcs disconnect the instance");
    }
}

namespace {

void validate_bbox(const BoundingBox& b) {
    const bool ok = std::isfinite(b.lat_min) && std::isfinite(b.lat_max) &&
                    std::isfinite(b.lon_min) && std::isfinite(b.lon_max) &&
                    b.lat_min < b.lat_max && b.lon_min < b.lon_max &&
                    b.lat_min >= -90.0 && b.lat_max <= 90.0 &&
                    b.lon_min >= -180.0 && b.lon_max <= 180.0;
    if (!ok) throw InvalidArgument("invalid bounding box");
}

constexpr double kPeripheryMargin = 0.15;

GeoPoint uniform_point(Rng& rng, double lat_lo, double lat_hi, double lon_lo,
                       double lon_hi) {
    GeoPoint p;
    p.lat = rng.uniform(lat_lo, lat_hi);
    p.lon = rng.uniform(lon_lo, lon_hi);
    return p;
}

}  // namespace

Instance generate_instance(UseCase use_case, std::size_t n, std::uint64_t seed,
                           const BoundingBox& bbox, const CostOptions& options) {
    validate_bbox(bbox);
    if (n < 4) throw InvalidArgument("n must be at least 4");

    Instance inst;
    inst.use_case = use_case;
    inst.seed = seed;

    const double dlat = bbox.lat_max - bbox.lat_min;
    const double dlon = bbox.lon_max - bbox.lon_min;
    const double in_lat_lo = bbox.lat_min + kPeripheryMargin * dlat;
    const double in_lat_hi = bbox.lat_max - kPeripheryMargin * dlat;
    const double in_lon_lo = bbox.lon_min + kPeripheryMargin * dlon;
    const double in_lon_hi = bbox.lon_max - kPeripheryMargin * dlon;

    Rng rng(derive_seed(seed, 0x1E57));
    for (std::size_t i = 0; i < n; ++i) {
        inst.visiting.push_back(
            uniform_point(rng, bbox.lat_min, bbox.lat_max, bbox.lon_min, bbox.lon_max));
    }

    if (use_case == UseCase::kUC1) {
        inst.depots.push_back(uniform_point(rng, in_lat_lo, in_lat_hi, in_lon_lo, in_lon_hi));
    } else {
        // West and east halves of the inner box keep the two depots apart.
        const double mid = 0.5 * (in_lon_lo + in_lon_hi);
        inst.depots.push_back(uniform_point(rng, in_lat_lo, in_lat_hi, in_lon_lo, mid));
        inst.depots.push_back(uniform_point(rng, in_lat_lo, in_lat_hi, mid, in_lon_hi));
    }

    const std::size_t m = charging_count(use_case, n);
    while (inst.charging.size() < m) {
        const GeoPoint p =
            uniform_point(rng, bbox.lat_min, bbox.lat_max, bbox.lon_min, bbox.lon_max);
        const bool inner = p.lat > in_lat_lo && p.lat < in_lat_hi &&
                           p.lon > in_lon_lo && p.lon < in_lon_hi;
        if (!inner) inst.charging.push_back(p);
    }

    std::set<std::size_t> depot_indices;
    for (std::size_t k = 0; k < inst.depots.size(); ++k) {
        depot_indices.insert(inst.depot_index(k));
    }
    const auto all = inst.locations();
    inst.costs = build_cost_matrix(all, options, seed, depot_indices);
    validate(inst);
    return inst;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                              const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw MissingFieldError("missing field '" + std::string(key) + "' in " + where);
    }
    return *it;
}

double as_number(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + " must be a number");
    return v.get<double>();
}

std::vector<GeoPoint> points_from_json(const nlohmann::json& arr,
                                       const std::string& where) {
    if (!arr.is_array()) throw SchemaError(where + " must be an array");
    std::vector<GeoPoint> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const auto& pair = arr[k];
        const std::string at = where + "[" + std::to_string(k) + "]";
        if (!pair.is_array() || pair.size() != 2) {
            throw SchemaError(at + " must be a [lat, lon] pair");
        }
        GeoPoint p{as_number(pair[0], at), as_number(pair[1], at)};
        validate(p);
        out.push_back(p);
    }
    return out;
}

nlohmann::json points_to_json(const std::vector<GeoPoint>& points) {
    auto arr = nlohmann::json::array();
    for (const auto& p : points) arr.push_back({p.lat, p.lon});
    return arr;
}

}  // namespace

nlohmann::json instance_to_json_value(const Instance& inst) {
    nlohmann::json doc;
    doc["use_case"] = to_string(inst.use_case);
    doc["seed"] = inst.seed;
    doc["visiting"] = points_to_json(inst.visiting);
    doc["depots"] = points_to_json(inst.depots);
    doc["charging"] = points_to_json(inst.charging);

    const std::size_t size = inst.costs.size();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < size; ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < size; ++j) row.push_back(inst.costs.entry(i, j));
        rows.push_back(std::move(row));
    }
    auto forbidden = nlohmann::json::array();
    for (const auto& [i, j] : inst.costs.forbidden()) forbidden.push_back({i, j});
    doc["cost_matrix"] = {{"size", size}, {"entries", rows}, {"forbidden", forbidden}};
    return doc;
}

Instance instance_from_json_value(const nlohmann::json& doc) {
    const std::string where = "instance";
    Instance inst;

    const auto& uc = require(doc, "use_case", where);
    if (!uc.is_string()) throw SchemaError("use_case must be a string");
    inst.use_case = parse_use_case(uc.get<std::string>());

    const auto& seed = require(doc, "seed", where);
    if (!seed.is_number_integer()) throw SchemaError("seed must be an integer");
    inst.seed = seed.get<std::uint64_t>();

    inst.visiting = points_from_json(require(doc, "visiting", where), "visiting");
    inst.depots = points_from_json(require(doc, "depots", where), "depots");
    inst.charging = points_from_json(require(doc, "charging", where), "charging");

    const auto& cm = require(doc, "cost_matrix", where);
    const auto& size_v = require(cm, "size", "cost_matrix");
    if (!size_v.is_number_unsigned()) {
        throw SchemaError("cost_matrix.size must be a non-negative integer");
    }
    const auto size = size_v.get<std::size_t>();
    const auto& rows = require(cm, "entries", "cost_matrix");
    if (!rows.is_array() || rows.size() != size) {
        throw SchemaError("cost_matrix.entries must have `size` rows");
    }
    std::vector<double> entries;
    entries.reserve(size * size);
    for (std::size_t i = 0; i < size; ++i) {
        if (!rows[i].is_array() || rows[i].size() != size) {
            throw SchemaError("cost_matrix.entries row " + std::to_string(i) +
                              " must have `size` columns");
        }
        for (std::size_t j = 0; j < size; ++j) {
            entries.push_back(as_number(rows[i][j], "cost_matrix.entries"));
        }
    }
    const auto& forb = require(cm, "forbidden", "cost_matrix");
    if (!forb.is_array()) throw SchemaError("cost_matrix.forbidden must be an array");
    std::set<CostMatrix::Arc> forbidden;
    for (const auto& arc : forb) {
        if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_unsigned() ||
            !arc[1].is_number_unsigned()) {
            throw SchemaError("cost_matrix.forbidden entries must be [i, j] index pairs");
        }
        forbidden.emplace(arc[0].get<std::size_t>(), arc[1].get<std::size_t>());
    }
    inst.costs = CostMatrix(size, std::move(entries), std::move(forbidden));
    validate(inst);
    return inst;
}

std::string instance_to_json(const Instance& inst) {
    return instance_to_json_value(inst).dump();
}

Instance instance_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    return instance_from_json_value(doc);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

Instance load_instance(const std::string& path) {
    return instance_from_json(read_text_file(path));
}

void save_instance(const Instance& inst, const std::string& path) {
    write_text_file(path, instance_to_json(inst) + "\n");
}

}  // namespace q4dr
