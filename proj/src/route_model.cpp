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

#include "q4dr/route_model.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace q4dr {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string violation_message(ConstraintKind kind, std::size_t index) {
    switch (kind) {
        case ConstraintKind::kVisitOnce:
            return "infeasible assignment: node " + std::to_string(index) +
                   " is not visited exactly once";
        case ConstraintKind::kPositionOnce:
            return "infeasible assignment: position " + std::to_string(index) +
                   " does not hold exactly one node";
        case ConstraintKind::kOneStation:
            return "infeasible assignment: route does not end at exactly one charging station";
    }
    return "infeasible assignment";
}

}  // namespace

std::string_view to_string(RouteKind kind) {
    return kind == RouteKind::kClosedTour ? "closed_tour" : "open_charging";
}

std::string_view to_string(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::kVisitOnce: return "visit_once";
        case ConstraintKind::kPositionOnce: return "position_once";
        case ConstraintKind::kOneStation: return "one_station";
    }
    return "unknown";
}

InfeasibleAssignment::InfeasibleAssignment(ConstraintKind kind, std::size_t index)
    : Error(ErrorCode::kInfeasibleAssignment, violation_message(kind, index)),
      kind_(kind),
      index_(index) {}

double route_cost(const std::vector<std::size_t>& sequence, const CostMatrix& costs) {
    double total = 0.0;
    for (std::size_t k = 1; k < sequence.size(); ++k) {
        total += costs.cost(sequence[k - 1], sequence[k]);
    }
    return total;
}

double route_cost(const Route& route, const CostMatrix& costs) {
    return route_cost(route.sequence, costs);
}

// ---------------------------------------------------------------------------

RouteModel::RouteModel(RouteKind kind, std::vector<std::size_t> nodes, std::size_t depot,
                       std::vector<std::size_t> stations, const CostMatrix& costs)
    : kind_(kind),
      nodes_(std::move(nodes)),
      depot_(depot),
      stations_(std::move(stations)),
      big_m_(costs.big_m()) {
    if (nodes_.empty()) throw InvalidArgument("route model needs at least one visiting node");
    if (kind_ == RouteKind::kClosedTour && !stations_.empty()) {
        throw InvalidArgument("closed tours take no charging stations");
    }
    if (kind_ == RouteKind::kOpenCharging && stations_.empty()) {
        throw InvalidArgument("open routes need at least one charging station");
    }
    local_size_ = 1 + n() + m();
    for (std::size_t i = 0; i < local_size_; ++i) {
        if (global(i) >= costs.size()) throw InvalidArgument("location index out of range");
    }
    local_costs_.resize(local_size_ * local_size_);
    local_forbidden_.resize(local_size_ * local_size_);
    for (std::size_t i = 0; i < local_size_; ++i) {
        for (std::size_t j = 0; j < local_size_; ++j) {
            local_costs_[i * local_size_ + j] = costs.cost(global(i), global(j));
            local_forbidden_[i * local_size_ + j] = costs.is_forbidden(global(i), global(j));
        }
    }

    const std::size_t nn = n();
    linear_.assign(num_variables(), 0.0);
    // Depot to the first position.
    for (std::size_t i = 1; i <= nn; ++i) linear_[x(i, 1)] += cost(0, i);
    // Consecutive positions.
    for (std::size_t p = 1; p < nn; ++p) {
        for (std::size_t i = 1; i <= nn; ++i) {
            for (std::size_t j = 1; j <= nn; ++j) {
                if (i != j) add_quadratic(x(i, p), x(j, p + 1), cost(i, j));
            }
        }
    }
    // Terminal arc.
    if (kind_ == RouteKind::kClosedTour) {
        for (std::size_t i = 1; i <= nn; ++i) linear_[x(i, nn)] += cost(i, 0);
    } else {
        for (std::size_t i = 1; i <= nn; ++i) {
            for (std::size_t j = 1; j <= m(); ++j) add_quadratic(x(i, nn), y(j), cost(i, j + nn));
        }
    }

    for (std::size_t i = 1; i <= nn; ++i) {
        LinearConstraint c{ConstraintKind::kVisitOnce, i, {}};
        for (std::size_t p = 1; p <= nn; ++p) c.vars.push_back(x(i, p));
        constraints_.push_back(std::move(c));
    }
    for (std::size_t p = 1; p <= nn; ++p) {
        LinearConstraint c{ConstraintKind::kPositionOnce, p, {}};
        for (std::size_t i = 1; i <= nn; ++i) c.vars.push_back(x(i, p));
        constraints_.push_back(std::move(c));
    }
    if (kind_ == RouteKind::kOpenCharging) {
        LinearConstraint c{ConstraintKind::kOneStation, 0, {}};
        for (std::size_t j = 1; j <= m(); ++j) c.vars.push_back(y(j));
        constraints_.push_back(std::move(c));
    }
}

void RouteModel::add_quadratic(std::size_t a, std::size_t b, double coef) {
    if (a > b) std::swap(a, b);
    quadratic_[{a, b}] += coef;
}

std::size_t RouteModel::global(std::size_t local) const {
    if (local == 0) return depot_;
    if (local <= n()) return nodes_[local - 1];
    if (local <= n() + m()) return stations_[local - n() - 1];
    throw InvalidArgument("local index out of range");
}

std::string RouteModel::variable_name(std::size_t var) const {
    if (var < n() * n()) {
        return "x[" + std::to_string(var / n() + 1) + "][" + std::to_string(var % n() + 1) + "]";
    }
    if (var < num_variables()) return "y[" + std::to_string(var - n() * n() + 1) + "]";
    throw InvalidArgument("variable index out of range");
}

double RouteModel::max_finite_cost() const {
    double best = 0.0;
    for (std::size_t k = 0; k < local_costs_.size(); ++k) {
        if (!local_forbidden_[k]) best = std::max(best, local_costs_[k]);
    }
    return best;
}

double RouteModel::objective(const Assignment& a) const {
    if (a.size() != num_variables()) throw InvalidArgument("assignment size mismatch");
    double total = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (a[v]) total += linear_[v];
    }
    for (const auto& [key, coef] : quadratic_) {
        if (a[key.first] && a[key.second]) total += coef;
    }
    return total;
}

std::optional<std::pair<ConstraintKind, std::size_t>> RouteModel::first_violation(
    const Assignment& a) const {
    if (a.size() != num_variables()) throw InvalidArgument("assignment size mismatch");
    for (const auto& c : constraints_) {
        std::size_t ones = 0;
        for (std::size_t v : c.vars) ones += a[v] ? 1 : 0;
        if (ones != 1) return std::make_pair(c.kind, c.index);
    }
    return std::nullopt;
}

std::string RouteModel::debug_dump() const {
    std::ostringstream out;
    out << "model " << to_string(kind_) << " n=" << n() << " m=" << m() << "\n";
    out << "depot " << depot_ << "\n";
    out << "nodes";
    for (auto v : nodes_) out << ' ' << v;
    out << "\nstations";
    for (auto v : stations_) out << ' ' << v;
    out << "\nfixed x[0][0]=1";
    for (std::size_t p = 1; p <= n(); ++p) out << " x[0][" << p << "]=0";
    out << "\nvariables " << num_variables() << "\n";
    for (std::size_t v = 0; v < num_variables(); ++v) out << "  " << variable_name(v) << "\n";
    out << "linear\n";
    for (std::size_t v = 0; v < num_variables(); ++v) {
        if (linear_[v] != 0.0) out << "  " << variable_name(v) << ' ' << format_double(linear_[v]) << "\n";
    }
    out << "quadratic\n";
    for (const auto& [key, coef] : quadratic_) {
        out << "  " << variable_name(key.first) << ' ' << variable_name(key.second) << ' '
            << format_double(coef) << "\n";
    }
    out << "constraints " << constraints_.size() << "\n";
    for (const auto& c : constraints_) {
        out << "  " << to_string(c.kind) << '[' << c.index << "]:";
        for (std::size_t k = 0; k < c.vars.size(); ++k) {
            out << (k == 0 ? " " : " + ") << variable_name(c.vars[k]);
        }
        out << " = 1\n";
    }
    return out.str();
}

RouteModel build_model(const Subproblem& sub, const Instance& inst) {
    if (sub.cluster.empty()) throw InvalidArgument("subproblem cluster is empty");
    for (std::size_t v : sub.cluster) {
        if (v >= inst.n()) throw InvalidArgument("cluster holds a non-visiting location");
    }
    if (sub.depot < inst.n() || sub.depot >= inst.n() + inst.depots.size()) {
        throw InvalidArgument("subproblem depot is not a depot location");
    }
    const RouteKind kind = sub.closed ? RouteKind::kClosedTour : RouteKind::kOpenCharging;
    return RouteModel(kind, sub.cluster, sub.depot,
                      sub.closed ? std::vector<std::size_t>{} : sub.charging_allowed,
                      inst.costs);
}

// ---------------------------------------------------------------------------

double QuboForm::energy(const Assignment& a) const {
    if (a.size() != num_variables) throw InvalidArgument("assignment size mismatch");
    double total = offset;
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (a[v]) total += linear[v];
    }
    for (const auto& [key, coef] : quadratic) {
        if (a[key.first] && a[key.second]) total += coef;
    }
    return total;
}

double default_penalty_weight(const RouteModel& model) {
    return 2.0 * static_cast<double>(model.n() + 1) * model.max_finite_cost();
}

QuboForm to_qubo(const RouteModel& model, std::optional<double> penalty_weight) {
    QuboForm q;
    q.num_variables = model.num_variables();
    q.linear = model.linear();
    q.quadratic = model.quadratic();
    q.penalty_weight = penalty_weight.value_or(default_penalty_weight(model));
    if (!(q.penalty_weight > 0.0)) {
        // Degenerate zero-cost instances still need a positive penalty.
        q.penalty_weight = 1.0;
    }
    const double lambda = q.penalty_weight;
    // (sum x - 1)^2 = 1 - sum x + 2 sum_{k<l} x_k x_l for binary x.
    for (const auto& c : model.constraints()) {
        q.offset += lambda;
        for (std::size_t k = 0; k < c.vars.size(); ++k) {
            q.linear[c.vars[k]] -= lambda;
            for (std::size_t l = k + 1; l < c.vars.size(); ++l) {
                auto a = c.vars[k], b = c.vars[l];
                if (a > b) std::swap(a, b);
                q.quadratic[{a, b}] += 2.0 * lambda;
            }
        }
    }
    return q;
}

Route decode(const RouteModel& model, const Assignment& a) {
    if (auto v = model.first_violation(a)) throw InfeasibleAssignment(v->first, v->second);
    const std::size_t n = model.n();
    Route r;
    r.sequence.push_back(model.depot());
    double cost = 0.0;
    std::size_t prev = 0;
    for (std::size_t p = 1; p <= n; ++p) {
        for (std::size_t i = 1; i <= n; ++i) {
            if (a[model.x(i, p)]) {
                r.sequence.push_back(model.global(i));
                cost += model.cost(prev, i);
                prev = i;
                break;
            }
        }
    }
    if (model.kind() == RouteKind::kClosedTour) {
        cost += model.cost(prev, 0);
        r.sequence.push_back(model.depot());
    } else {
        for (std::size_t j = 1; j <= model.m(); ++j) {
            if (a[model.y(j)]) {
                cost += model.cost(prev, n + j);
                r.sequence.push_back(model.global(n + j));
            }
        }
    }
    r.cost = cost;
    return r;
}

Assignment encode(const RouteModel& model, const Route& route) {
    const std::size_t n = model.n();
    if (route.sequence.size() != n + 2 || route.sequence.front() != model.depot()) {
        throw InvalidArgument("route does not match the model's shape");
    }
    auto local_of = [&](std::size_t global, std::size_t first, std::size_t last) {
        for (std::size_t k = first; k <= last; ++k) {
            if (model.global(k) == global) return k;
        }
        throw InvalidArgument("route visits location " + std::to_string(global) +
                              " outside the model");
    };
    Assignment a(model.num_variables(), 0);
    for (std::size_t p = 1; p <= n; ++p) a[model.x(local_of(route.sequence[p], 1, n), p)] = 1;
    if (model.kind() == RouteKind::kClosedTour) {
        if (route.sequence.back() != model.depot()) {
            throw InvalidArgument("closed route must end at its depot");
        }
    } else {
        a[model.y(local_of(route.sequence.back(), n + 1, n + model.m()) - n)] = 1;
    }
    return a;
}

}  // namespace q4dr
