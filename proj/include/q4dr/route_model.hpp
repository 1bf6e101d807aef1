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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "q4dr/assignment.hpp"
#include "q4dr/errors.hpp"
#include "q4dr/instance.hpp"

namespace q4dr {

enum class RouteKind { kClosedTour, kOpenCharging };

std::string_view to_string(RouteKind kind);

/// Binary assignment over a model's variables (0 or 1 per entry).
using Assignment = std::vector<std::uint8_t>;

enum class ConstraintKind {
    kVisitOnce,     // each visiting node occupies exactly one position
    kPositionOnce,  // each position holds exactly one node
    kOneStation,    // exactly one terminal charging station
};

std::string_view to_string(ConstraintKind kind);

/// sum(vars) == 1
struct LinearConstraint {
    ConstraintKind kind;
    /// Node, position or 0 for the station constraint (1-based).
    std::size_t index = 0;
    std::vector<std::size_t> vars;
};

class InfeasibleAssignment : public Error {
 public:
    InfeasibleAssignment(ConstraintKind kind, std::size_t index);

    ConstraintKind kind() const { return kind_; }
    std::size_t index() const { return index_; }

 private:
    ConstraintKind kind_;
    std::size_t index_;
};

/// A route in global location indices: depot, the visiting nodes in order,
/// then the depot again (closed) or one charging station (open).
struct Route {
    std::vector<std::size_t> sequence;
    double cost = 0.0;

    bool operator==(const Route&) const = default;
};

/// Sum of arc costs along the sequence (forbidden arcs count as BIG_M).
double route_cost(const std::vector<std::size_t>& sequence, const CostMatrix& costs);
double route_cost(const Route& route, const CostMatrix& costs);

/// Node-based position encoding of one subproblem.
///
/// Local numbering: 0 is the depot, 1..n the cluster's visiting nodes and
/// n+1..n+m the allowed charging stations, so station j sits at local index
/// j+n. Variables are x[i][p] for i, p in 1..n and y[j] for j in 1..m; the
/// depot is pinned to position 0 and carries no variables.
class RouteModel {
 public:
    RouteModel(RouteKind kind, std::vector<std::size_t> nodes, std::size_t depot,
               std::vector<std::size_t> stations, const CostMatrix& costs);

    RouteKind kind() const { return kind_; }
    std::size_t n() const { return nodes_.size(); }
    std::size_t m() const { return stations_.size(); }
    std::size_t num_variables() const { return n() * n() + m(); }

    std::size_t x(std::size_t node, std::size_t position) const {
        return (node - 1) * n() + (position - 1);
    }
    std::size_t y(std::size_t station) const { return n() * n() + station - 1; }
    std::string variable_name(std::size_t var) const;

    /// Global location index of a local index.
    std::size_t global(std::size_t local) const;
    std::size_t depot() const { return depot_; }
    const std::vector<std::size_t>& nodes() const { return nodes_; }
    const std::vector<std::size_t>& stations() const { return stations_; }

    /// Cost between local indices.
    double cost(std::size_t i, std::size_t j) const { return local_costs_[i * local_size_ + j]; }
    bool forbidden(std::size_t i, std::size_t j) const {
        return local_forbidden_[i * local_size_ + j] != 0;
    }
    /// Largest non-forbidden arc cost among the model's arcs.
    double max_finite_cost() const;
    double big_m() const { return big_m_; }

    const std::vector<double>& linear() const { return linear_; }
    const std::map<std::pair<std::size_t, std::size_t>, double>& quadratic() const {
        return quadratic_;
    }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }

    double objective(const Assignment& a) const;
    /// First violated constraint in declaration order, if any.
    std::optional<std::pair<ConstraintKind, std::size_t>> first_violation(
        const Assignment& a) const;

    /// Deterministic text listing of variables, objective terms and constraints.
    std::string debug_dump() const;

 private:
    void add_quadratic(std::size_t a, std::size_t b, double coef);

    RouteKind kind_;
    std::vector<std::size_t> nodes_;
    std::size_t depot_;
    std::vector<std::size_t> stations_;
    std::size_t local_size_;
    std::vector<double> local_costs_;
    std::vector<std::uint8_t> local_forbidden_;
    double big_m_;

    std::vector<double> linear_;
    std::map<std::pair<std::size_t, std::size_t>, double> quadratic_;
    std::vector<LinearConstraint> constraints_;
};

RouteModel build_model(const Subproblem& sub, const Instance& inst);

struct QuboForm {
    std::size_t num_variables = 0;
    std::vector<double> linear;
    /// Keys have first < second.
    std::map<std::pair<std::size_t, std::size_t>, double> quadratic;
    double offset = 0.0;
    double penalty_weight = 0.0;

    double energy(const Assignment& a) const;
};

/// Default penalty weight 2 (n + 1) max_finite_cost.
double default_penalty_weight(const RouteModel& model);

/// objective + lambda * sum over constraints of (sum(vars) - 1)^2.
QuboForm to_qubo(const RouteModel& model, std::optional<double> penalty_weight = {});

/// Reads the one-hot position matrix into a route. Throws
/// InfeasibleAssignment naming the first violated constraint.
Route decode(const RouteModel& model, const Assignment& a);

/// Inverse of decode for a valid route of this model.
Assignment encode(const RouteModel& model, const Route& route);

}  // namespace q4dr
