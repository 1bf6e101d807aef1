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

#include "q4dr/solvers.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "q4dr/random.hpp"

namespace q4dr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

/// Sparse and dense views of a QUBO, shared read-only by all workers.
struct CompiledQubo {
    explicit CompiledQubo(const QuboForm& q) : qubo(q), size(q.num_variables) {
        neighbors.resize(size);
        dense.assign(size * size, 0.0);
        for (const auto& [key, coef] : q.quadratic) {
            if (coef == 0.0) continue;
            neighbors[key.first].emplace_back(key.second, coef);
            neighbors[key.second].emplace_back(key.first, coef);
            dense[key.first * size + key.second] += coef;
            dense[key.second * size + key.first] += coef;
        }
    }

    double pair(std::size_t a, std::size_t b) const { return dense[a * size + b]; }

    const QuboForm& qubo;
    std::size_t size;
    std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;
    std::vector<double> dense;
};

/// Assignment plus local fields h_k = linear_k + sum_l Q_kl x_l.
class QuboState {
 public:
    QuboState(const CompiledQubo& c, Assignment x) : c_(c), x_(std::move(x)) {
        field_ = c_.qubo.linear;
        for (std::size_t k = 0; k < c_.size; ++k) {
            if (!x_[k]) continue;
            for (const auto& [l, coef] : c_.neighbors[k]) field_[l] += coef;
        }
        energy_ = c_.qubo.energy(x_);
    }

    double flip_delta(std::size_t k) const { return x_[k] ? -field_[k] : field_[k]; }

    void flip(std::size_t k) {
        const double d = x_[k] ? -1.0 : 1.0;
        energy_ += d * field_[k];
        x_[k] ^= 1U;
        for (const auto& [l, coef] : c_.neighbors[k]) field_[l] += d * coef;
    }

    /// Energy change of flipping every variable in `vars` (distinct).
    double multi_delta(const std::vector<std::size_t>& vars) const {
        double delta = 0.0;
        for (std::size_t a = 0; a < vars.size(); ++a) {
            const double da = x_[vars[a]] ? -1.0 : 1.0;
            delta += da * field_[vars[a]];
            for (std::size_t b = a + 1; b < vars.size(); ++b) {
                const double db = x_[vars[b]] ? -1.0 : 1.0;
                delta += c_.pair(vars[a], vars[b]) * da * db;
            }
        }
        return delta;
    }

    const Assignment& assignment() const { return x_; }
    double energy() const { return energy_; }

 private:
    const CompiledQubo& c_;
    Assignment x_;
    std::vector<double> field_;
    double energy_ = 0.0;
};

double geometric(double hot, double cold, std::size_t step, std::size_t steps) {
    if (steps <= 1) return cold;
    const double t = static_cast<double>(step) / static_cast<double>(steps - 1);
    return hot * std::pow(cold / hot, t);
}

bool metropolis(double delta, double temperature, Rng& rng) {
    if (delta <= 0.0) return true;
    return rng.uniform() < std::exp(-delta / temperature);
}

Temperatures resolve_temperatures(const QuboForm& qubo, const SolverConfig& cfg) {
    Temperatures t = default_temperatures(qubo);
    if (cfg.t_hi) t.hot = *cfg.t_hi;
    if (cfg.t_lo) t.cold = *cfg.t_lo;
    return t;
}

AnnealResult anneal_compiled(const CompiledQubo& c, const SolverConfig& cfg,
                             const Temperatures& temps, std::size_t thread_id,
                             std::size_t restart_id) {
    Rng rng(derive_seed(cfg.seed, thread_id, restart_id));
    Assignment start(c.size, 0);
    for (auto& bit : start) bit = static_cast<std::uint8_t>(rng.next() >> 63);

    QuboState state(c, std::move(start));
    Assignment best = state.assignment();
    double best_energy = state.energy();

    for (std::size_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
        const double temperature = geometric(temps.hot, temps.cold, sweep, cfg.sweeps);
        for (std::size_t k = 0; k < c.size; ++k) {
            if (metropolis(state.flip_delta(k), temperature, rng)) {
                state.flip(k);
                if (state.energy() < best_energy) {
                    best_energy = state.energy();
                    best = state.assignment();
                }
            }
        }
    }
    return {best, c.qubo.energy(best)};
}

/// Permutation of local nodes (perm[p] for p in 1..n, perm[0] unused) plus
/// the local station number (1..m, 0 for closed tours).
struct Tour {
    std::vector<std::size_t> perm;
    std::size_t station = 0;
};

Tour tour_from_route(const RouteModel& model, const Route& route) {
    const Assignment a = encode(model, route);
    Tour t;
    t.perm.assign(model.n() + 1, 0);
    for (std::size_t i = 1; i <= model.n(); ++i) {
        for (std::size_t p = 1; p <= model.n(); ++p) {
            if (a[model.x(i, p)]) t.perm[p] = i;
        }
    }
    for (std::size_t j = 1; j <= model.m(); ++j) {
        if (a[model.y(j)]) t.station = j;
    }
    return t;
}

Route route_from_tour(const RouteModel& model, const Tour& t) {
    Route r;
    r.sequence.push_back(model.depot());
    std::size_t prev = 0;
    double cost = 0.0;
    for (std::size_t p = 1; p <= model.n(); ++p) {
        r.sequence.push_back(model.global(t.perm[p]));
        cost += model.cost(prev, t.perm[p]);
        prev = t.perm[p];
    }
    if (model.kind() == RouteKind::kClosedTour) {
        r.sequence.push_back(model.depot());
        cost += model.cost(prev, 0);
    } else {
        r.sequence.push_back(model.global(model.n() + t.station));
        cost += model.cost(prev, model.n() + t.station);
    }
    r.cost = cost;
    return r;
}

Route guided_compiled(const RouteModel& model, const CompiledQubo& c, const Route& start,
                      const SolverConfig& cfg, const Temperatures& temps,
                      std::size_t thread_id, std::size_t restart_id) {
    const std::size_t n = model.n();
    const std::size_t m = model.m();
    Tour tour = tour_from_route(model, start);
    QuboState state(c, encode(model, start));
    Tour best = tour;
    double best_energy = state.energy();
    if (n < 2 && m < 2) return route_from_tour(model, best);

    const double cold = temps.cold;
    const double hot = std::max(model.max_finite_cost(), 10.0 * cold);
    Rng rng(derive_seed(cfg.seed ^ 0x6D1DEDULL, thread_id, restart_id));

    std::vector<std::size_t> flips;
    std::vector<std::size_t> next(n + 1);
    const std::size_t kinds = (n >= 2 ? 3 : 0) + (m >= 2 ? 1 : 0);
    const std::size_t steps = cfg.sweeps * std::max<std::size_t>(n, 1);

    for (std::size_t step = 0; step < steps; ++step) {
        const double temperature = geometric(hot, cold, step, steps);
        std::size_t move = rng.below(kinds);
        if (n < 2) move = 3;
        flips.clear();
        std::size_t new_station = tour.station;
        std::size_t lo = 0, hi = 0;

        if (move == 3) {
            new_station = 1 + rng.below(m - 1);
            if (new_station >= tour.station) ++new_station;
            flips.push_back(model.y(tour.station));
            flips.push_back(model.y(new_station));
        } else {
            std::size_t p = 1 + rng.below(n);
            std::size_t q = 1 + rng.below(n - 1);
            if (q >= p) ++q;
            next = tour.perm;
            if (move == 0) {
                std::swap(next[p], next[q]);
            } else if (move == 1) {
                const std::size_t node = next[p];
                if (p < q) {
                    std::rotate(next.begin() + p, next.begin() + p + 1, next.begin() + q + 1);
                } else {
                    std::rotate(next.begin() + q, next.begin() + p, next.begin() + p + 1);
                }
                next[q] = node;
            } else {
                std::reverse(next.begin() + std::min(p, q), next.begin() + std::max(p, q) + 1);
            }
            lo = std::min(p, q);
            hi = std::max(p, q);
            for (std::size_t pos = lo; pos <= hi; ++pos) {
                if (next[pos] == tour.perm[pos]) continue;
                flips.push_back(model.x(tour.perm[pos], pos));
                flips.push_back(model.x(next[pos], pos));
            }
            if (flips.empty()) continue;
        }

        if (!metropolis(state.multi_delta(flips), temperature, rng)) continue;
        for (std::size_t v : flips) state.flip(v);
        if (move == 3) {
            tour.station = new_station;
        } else {
            for (std::size_t pos = lo; pos <= hi; ++pos) tour.perm[pos] = next[pos];
        }
        if (state.energy() < best_energy) {
            best_energy = state.energy();
            best = tour;
        }
    }
    return route_from_tour(model, best);
}

struct WorkerOutcome {
    std::optional<Route> best;
    std::size_t restart = 0;
    std::vector<TraceEntry> trace;
};

WorkerOutcome run_worker(const RouteModel& model, const CompiledQubo& c,
                         const SolverConfig& cfg, const Temperatures& temps,
                         std::size_t thread_id) {
    WorkerOutcome out;
    double best_cost = kInf;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        const AnnealResult sample = anneal_compiled(c, cfg, temps, thread_id, r);
        Route route = model.first_violation(sample.assignment) ? repair(model, sample.assignment)
                                                               : decode(model, sample.assignment);
        if (cfg.guided) {
            const Route& seed_route = (out.best && best_cost < route.cost) ? *out.best : route;
            Route refined = guided_compiled(model, c, seed_route, cfg, temps, thread_id, r);
            if (refined.cost < route.cost) route = std::move(refined);
        }
        if (route.cost < best_cost) {
            best_cost = route.cost;
            out.best = route;
            out.restart = r;
        }
        out.trace.push_back({thread_id, r, route.cost, best_cost,
                             !contains_forbidden_arc(model, route)});
    }
    return out;
}

SolveResult make_result(const RouteModel& model, Route route, std::string method) {
    SolveResult r;
    r.energy = model.objective(encode(model, route));
    r.feasible = !contains_forbidden_arc(model, route);
    r.route = std::move(route);
    r.method = std::move(method);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::kExact: return "exact";
        case SolverKind::kSa: return "sa";
        case SolverKind::kPortfolio: return "portfolio";
    }
    return "portfolio";
}

SolverKind parse_solver_kind(std::string_view text) {
    if (text == "exact") return SolverKind::kExact;
    if (text == "sa") return SolverKind::kSa;
    if (text == "portfolio") return SolverKind::kPortfolio;
    throw InvalidArgument("unknown solver '" + std::string(text) + "'");
}

void validate(const SolverConfig& cfg) {
    if (cfg.threads < 1) throw InvalidArgument("threads must be at least 1");
    if (cfg.sweeps < 1) throw InvalidArgument("sweeps must be at least 1");
    if (cfg.restarts < 1) throw InvalidArgument("restarts must be at least 1");
    if (cfg.t_lo && !(*cfg.t_lo > 0.0)) throw InvalidArgument("t_lo must be positive");
    if (cfg.t_hi && cfg.t_lo && !(*cfg.t_hi > *cfg.t_lo)) {
        throw InvalidArgument("t_hi must exceed t_lo");
    }
}

bool SolveResult::same_outcome(const SolveResult& other) const {
    return route == other.route && energy == other.energy && feasible == other.feasible &&
           thread_id == other.thread_id && restart_id == other.restart_id &&
           method == other.method && trace == other.trace;
}

std::string format_trace(const std::vector<TraceEntry>& trace) {
    std::ostringstream out;
    for (const auto& t : trace) {
        out << "thread=" << t.thread << " restart=" << t.restart
            << " energy=" << format_double(t.energy) << " best=" << format_double(t.best)
            << " feasible=" << (t.feasible ? 1 : 0) << "\n";
    }
    return out.str();
}

bool contains_forbidden_arc(const Route& route, const CostMatrix& costs) {
    for (std::size_t k = 1; k < route.sequence.size(); ++k) {
        if (costs.is_forbidden(route.sequence[k - 1], route.sequence[k])) return true;
    }
    return false;
}

bool contains_forbidden_arc(const RouteModel& model, const Route& route) {
    // Map globals back to local indices through a linear scan; routes are short.
    auto local = [&](std::size_t g) {
        for (std::size_t k = 0; k <= model.n() + model.m(); ++k) {
            if (model.global(k) == g) return k;
        }
        throw InvalidArgument("route leaves the model");
    };
    for (std::size_t k = 1; k < route.sequence.size(); ++k) {
        if (model.forbidden(local(route.sequence[k - 1]), local(route.sequence[k]))) return true;
    }
    return false;
}

SolveResult brute_force(const RouteModel& model) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = model.n();
    if (n > kBruteForceMaxNodes) {
        throw SizeGuardExceeded("brute force limited to " + std::to_string(kBruteForceMaxNodes) +
                                " nodes, got " + std::to_string(n));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    Tour best;
    double best_cost = kInf;
    do {
        double cost = model.cost(0, perm[0]);
        for (std::size_t k = 1; k < n; ++k) cost += model.cost(perm[k - 1], perm[k]);
        std::size_t station = 0;
        if (model.kind() == RouteKind::kClosedTour) {
            cost += model.cost(perm[n - 1], 0);
        } else {
            double tail = kInf;
            for (std::size_t j = 1; j <= model.m(); ++j) {
                const double c = model.cost(perm[n - 1], n + j);
                if (c < tail) {
                    tail = c;
                    station = j;
                }
            }
            cost += tail;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best.perm.assign(1, 0);
            best.perm.insert(best.perm.end(), perm.begin(), perm.end());
            best.station = station;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    SolveResult r = make_result(model, route_from_tour(model, best), "brute_force");
    r.wall_time_ms = elapsed_ms(start);
    return r;
}

SolveResult held_karp(const RouteModel& model) {
    const auto start = std::chrono::steady_clock::now();
    if (model.kind() != RouteKind::kClosedTour) {
        throw InvalidArgument("Held-Karp handles closed tours only");
    }
    const std::size_t n = model.n();
    if (n > kHeldKarpMaxNodes) {
        throw SizeGuardExceeded("Held-Karp limited to " + std::to_string(kHeldKarpMaxNodes) +
                                " nodes, got " + std::to_string(n));
    }
    const std::size_t full = (std::size_t{1} << n) - 1;
    // dp[mask * n + j]: cheapest depot-start path covering mask, ending at node j+1.
    std::vector<double> dp((full + 1) * n, kInf);
    std::vector<std::uint8_t> parent((full + 1) * n, 0xFF);
    for (std::size_t j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = model.cost(0, j + 1);

    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double here = dp[mask * n + j];
            if (here == kInf) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t next = mask | (std::size_t{1} << k);
                const double cand = here + model.cost(j + 1, k + 1);
                if (cand < dp[next * n + k]) {
                    dp[next * n + k] = cand;
                    parent[next * n + k] = static_cast<std::uint8_t>(j);
                }
            }
        }
    }
    std::size_t last = 0;
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j) {
        const double cand = dp[full * n + j] + model.cost(j + 1, 0);
        if (cand < best) {
            best = cand;
            last = j;
        }
    }
    Tour tour;
    tour.perm.assign(n + 1, 0);
    std::size_t mask = full;
    for (std::size_t p = n; p >= 1; --p) {
        tour.perm[p] = last + 1;
        const std::size_t prev = parent[mask * n + last];
        mask &= ~(std::size_t{1} << last);
        last = prev;
    }
    SolveResult r = make_result(model, route_from_tour(model, tour), "held_karp");
    r.wall_time_ms = elapsed_ms(start);
    return r;
}

Temperatures default_temperatures(const QuboForm& qubo) {
    double min_abs = kInf;
    auto consider = [&](double v) {
        if (v != 0.0) min_abs = std::min(min_abs, std::fabs(v));
    };
    for (double v : qubo.linear) consider(v);
    for (const auto& [key, v] : qubo.quadratic) consider(v);
    Temperatures t;
    t.cold = (min_abs == kInf) ? 0.01 : 0.01 * min_abs;
    t.hot = qubo.penalty_weight > t.cold ? qubo.penalty_weight : 100.0 * t.cold;
    return t;
}

AnnealResult anneal(const QuboForm& qubo, const SolverConfig& cfg, std::size_t thread_id,
                    std::size_t restart_id) {
    validate(cfg);
    const CompiledQubo c(qubo);
    return anneal_compiled(c, cfg, resolve_temperatures(qubo, cfg), thread_id, restart_id);
}

Route repair(const RouteModel& model, const Assignment& a) {
    if (a.size() != model.num_variables()) throw InvalidArgument("assignment size mismatch");
    const std::size_t n = model.n();
    std::vector<std::size_t> appearances(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t p = 1; p <= n; ++p) appearances[i] += a[model.x(i, p)];
    }
    std::vector<std::uint8_t> used(n + 1, 0);
    Tour tour;
    tour.perm.assign(n + 1, 0);
    std::size_t prev = 0;
    for (std::size_t p = 1; p <= n; ++p) {
        auto pick = [&](auto&& allowed) {
            std::size_t choice = 0;
            double best = kInf;
            for (std::size_t i = 1; i <= n; ++i) {
                if (used[i] || !allowed(i)) continue;
                if (choice == 0 || model.cost(prev, i) < best) {
                    best = model.cost(prev, i);
                    choice = i;
                }
            }
            return choice;
        };
        std::size_t choice = pick([&](std::size_t i) { return a[model.x(i, p)] != 0; });
        // Holes go to nodes the sample never placed before any placed node.
        if (choice == 0) choice = pick([&](std::size_t i) { return appearances[i] == 0; });
        if (choice == 0) choice = pick([](std::size_t) { return true; });
        used[choice] = 1;
        tour.perm[p] = choice;
        prev = choice;
    }
    if (model.kind() == RouteKind::kOpenCharging) {
        std::size_t set_count = 0;
        for (std::size_t j = 1; j <= model.m(); ++j) set_count += a[model.y(j)];
        double best = kInf;
        for (std::size_t j = 1; j <= model.m(); ++j) {
            if (set_count > 0 && !a[model.y(j)]) continue;
            if (model.cost(prev, n + j) < best) {
                best = model.cost(prev, n + j);
                tour.station = j;
            }
        }
    }
    return route_from_tour(model, tour);
}

Route guided_refine(const RouteModel& model, const QuboForm& qubo, const Route& start,
                    const SolverConfig& cfg, std::size_t thread_id, std::size_t restart_id) {
    validate(cfg);
    const CompiledQubo c(qubo);
    return guided_compiled(model, c, start, cfg, resolve_temperatures(qubo, cfg), thread_id,
                           restart_id);
}

SolveResult portfolio_solve(const RouteModel& model, const SolverConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const QuboForm qubo = to_qubo(model);
    const CompiledQubo compiled(qubo);
    const Temperatures temps = resolve_temperatures(qubo, cfg);
    if (!(temps.hot > temps.cold && temps.cold > 0.0)) {
        throw InvalidArgument("temperature schedule needs t_hi > t_lo > 0");
    }

    std::vector<WorkerOutcome> outcomes(cfg.threads);
    {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(cfg.threads);
        for (std::size_t t = 0; t < cfg.threads; ++t) {
            workers.emplace_back([&, t] {
                try {
                    outcomes[t] = run_worker(model, compiled, cfg, temps, t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    SolveResult result;
    bool found = false;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        auto& o = outcomes[t];
        result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
        if (!o.best || contains_forbidden_arc(model, *o.best)) continue;
        if (!found || o.best->cost < result.route.cost) {
            const auto trace = std::move(result.trace);
            result = make_result(model, *o.best, std::string(to_string(cfg.kind)));
            result.trace = trace;
            result.thread_id = t;
            result.restart_id = o.restart;
            found = true;
        }
    }

    if (!found) {
        std::optional<SolveResult> exact;
        if (model.kind() == RouteKind::kClosedTour && model.n() <= kHeldKarpMaxNodes) {
            exact = held_karp(model);
        } else if (model.n() <= kBruteForceMaxNodes) {
            exact = brute_force(model);
        }
        if (!exact || !exact->feasible) {
            throw NoFeasibleSolution("no route avoids the forbidden arcs");
        }
        exact->trace = std::move(result.trace);
        result = std::move(*exact);
    }
    result.wall_time_ms = elapsed_ms(start);
    return result;
}

SolveResult solve(const RouteModel& model, const SolverConfig& cfg) {
    switch (cfg.kind) {
        case SolverKind::kExact: {
            if (model.kind() == RouteKind::kClosedTour && model.n() <= kHeldKarpMaxNodes) {
                return held_karp(model);
            }
            return brute_force(model);
        }
        case SolverKind::kSa: {
            SolverConfig single = cfg;
            single.threads = 1;
            single.guided = false;
            return portfolio_solve(model, single);
        }
        case SolverKind::kPortfolio:
            return portfolio_solve(model, cfg);
    }
    throw InvalidArgument("unknown solver kind");
}

}  // namespace q4dr
