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

#include "q4dr/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "q4dr/errors.hpp"
#include "q4dr/random.hpp"

namespace q4dr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Total evolution time of the initial ramp, in units of the normalized weights.
constexpr double kRampTime = 1.25;
constexpr std::size_t kSimBlockQubits = 13;
constexpr std::size_t kSimChunk = 64;

using Amplitude = std::complex<double>;

/// RX on the pair (a, b): [[c, -i s], [-i s, c]].
inline void rotate_pair(Amplitude& a, Amplitude& b, double c, double s) {
    const double ar = a.real(), ai = a.imag();
    const double br = b.real(), bi = b.imag();
    a = {c * ar + s * bi, c * ai - s * br};
    b = {c * br + s * ai, c * bi - s * ar};
}

void rotate_stride(Amplitude* data, std::size_t len, std::size_t stride, double c, double s) {
    for (std::size_t base = 0; base < len; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) rotate_pair(data[k], data[k + stride], c, s);
    }
}

bool is_trivial(BasisState state, std::size_t n) {
    const BasisState all = (n >= 64) ? ~BasisState{0} : ((BasisState{1} << n) - 1);
    return state == 0 || state == all;
}

/// Maps unconstrained optimizer coordinates onto valid angles.
QaoaParams params_from_vector(std::span<const double> x, std::size_t depth) {
    QaoaParams p;
    for (std::size_t k = 0; k < depth; ++k) {
        p.gammas.push_back(std::clamp(x[k], 0.0, kTwoPi));
        // RX(2(beta + pi)) differs from RX(2 beta) by a global phase only.
        double beta = std::fmod(x[depth + k], std::numbers::pi);
        if (beta < 0.0) beta += std::numbers::pi;
        p.betas.push_back(beta);
    }
    return p;
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n, std::vector<WeightedEdge> edges)
    : n_(n), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.v >= n_ || e.u == e.v) throw InvalidArgument("graph edge has invalid endpoints");
        if (!std::isfinite(e.weight) || e.weight <= 0.0) {
            throw InvalidArgument("graph edge weights must be positive and finite");
        }
    }
}

WeightedGraph WeightedGraph::from_instance(const Instance& inst) {
    const auto& c = inst.costs;
    std::vector<WeightedEdge> edges;
    for (std::size_t u = 0; u < inst.n(); ++u) {
        for (std::size_t v = u + 1; v < inst.n(); ++v) {
            const bool fwd = !c.is_forbidden(u, v);
            const bool bwd = !c.is_forbidden(v, u);
            double w;
            if (fwd && !bwd) {
                w = c.entry(u, v);
            } else if (bwd && !fwd) {
                w = c.entry(v, u);
            } else {
                w = 0.5 * (c.entry(u, v) + c.entry(v, u));
            }
            if (w > 0.0) edges.push_back({u, v, w});
        }
    }
    return WeightedGraph(inst.n(), std::move(edges));
}

double WeightedGraph::total_weight() const {
    double total = 0.0;
    for (const auto& e : edges_) total += e.weight;
    return total;
}

double WeightedGraph::max_weight() const {
    double m = 0.0;
    for (const auto& e : edges_) m = std::max(m, e.weight);
    return m;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
    if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
    auto edges = edges_;
    for (auto& e : edges) e.weight /= factor;
    return WeightedGraph(n_, std::move(edges));
}

std::vector<double> cut_table(const WeightedGraph& g) {
    const std::size_t n = g.n();
    if (n > kMaxQubits) throw SizeGuardExceeded("cut table limited to 24 nodes");
    // lower[k][v] = w(k, v) for v < k
    std::vector<std::vector<double>> lower(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) lower[e.v][e.u] += e.weight;

    std::vector<double> cuts(std::size_t{1} << n, 0.0);
    // After step k, cuts[z] for z < 2^(k+1) covers every edge among nodes 0..k.
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t half = std::size_t{1} << k;
        for (std::size_t z = 0; z < half; ++z) {
            double to_ones = 0.0;
            double to_zeros = 0.0;
            for (std::size_t v = 0; v < k; ++v) {
                (((z >> v) & 1U) ? to_ones : to_zeros) += lower[k][v];
            }
            cuts[z | half] = cuts[z] + to_zeros;
            cuts[z] += to_ones;
        }
    }
    return cuts;
}

double maxcut_obj(const std::string& assignment, const WeightedGraph& g) {
    if (assignment.size() != g.n()) {
        throw InvalidArgument("assignment length " + std::to_string(assignment.size()) +
                              " does not match graph size " + std::to_string(g.n()));
    }
    double cut = 0.0;
    for (const auto& e : g.edges()) {
        if (assignment[e.u] != assignment[e.v]) cut -= e.weight;
    }
    return cut;
}

double maxcut_obj(BasisState assignment, const WeightedGraph& g) {
    double cut = 0.0;
    for (const auto& e : g.edges()) {
        if (((assignment >> e.u) ^ (assignment >> e.v)) & 1U) cut -= e.weight;
    }
    return cut;
}

namespace {

void check_normalized(double total) {
    if (std::fabs(total - 1.0) > 1e-6) {
        throw InvalidArgument("measurement probabilities sum to " + std::to_string(total) +
                              ", expected 1");
    }
}

}  // namespace

double maxcut_cost(const std::map<std::string, double>& measurement,
                   const WeightedGraph& g) {
    double total = 0.0;
    for (const auto& [bits, p] : measurement) total += p;
    check_normalized(total);
    double energy = 0.0;
    for (const auto& [bits, p] : measurement) energy += maxcut_obj(bits, g) * p;
    return energy;
}

double maxcut_cost(const Distribution& measurement, const WeightedGraph& g) {
    double total = 0.0;
    for (const auto& [state, p] : measurement) total += p;
    check_normalized(total);
    double energy = 0.0;
    for (const auto& [state, p] : measurement) energy += maxcut_obj(state, g) * p;
    return energy;
}

Partition Partition::from_assignment(const std::string& assignment,
                                     const WeightedGraph& g) {
    Partition p;
    p.assignment = assignment;
    p.cut_weight = -maxcut_obj(assignment, g);
    for (std::size_t k = 0; k < assignment.size(); ++k) {
        (assignment[k] == '1' ? p.cluster_b : p.cluster_a).push_back(k);
    }
    return p;
}

StateVector build_ansatz(const WeightedGraph& g, const QaoaParams& params) {
    if (params.depth() < 1) throw InvalidArgument("QAOA depth must be at least 1");
    if (params.betas.size() != params.gammas.size()) {
        throw InvalidArgument("gamma and beta counts differ");
    }
    StateVector s(g.n());
    for (std::size_t q = 0; q < g.n(); ++q) s.apply_h(q);
    for (std::size_t k = 0; k < params.depth(); ++k) {
        for (const auto& e : g.edges()) {
            s.apply_cx(e.u, e.v);
            s.apply_rz(e.v, 2.0 * params.gammas[k] * e.weight);
            s.apply_cx(e.u, e.v);
        }
        for (std::size_t q = 0; q < g.n(); ++q) s.apply_rx(q, 2.0 * params.betas[k]);
    }
    return s;
}

QaoaSimulator::QaoaSimulator(const WeightedGraph& g)
    : graph_(g), cuts_(cut_table(g)), total_(g.total_weight()) {}

std::vector<std::complex<double>> QaoaSimulator::half_state(const QaoaParams& params) const {
    if (params.depth() < 1) throw InvalidArgument("QAOA depth must be at least 1");
    if (params.betas.size() != params.gammas.size()) {
        throw InvalidArgument("gamma and beta counts differ");
    }
    const std::size_t n = graph_.n();
    const std::size_t half = std::size_t{1} << (n - 1);
    std::vector<Amplitude> h(half, Amplitude{1.0 / std::sqrt(2.0 * static_cast<double>(half)), 0.0});

    // Qubits 0..low-1 are rotated block by block right after the phase.
    const std::size_t low = std::min(n - 1, kSimBlockQubits);
    const std::size_t block = std::size_t{1} << low;
    const std::size_t high = n - 1 - low;
    const std::size_t rows = std::size_t{1} << high;
    const std::size_t chunk = std::min(kSimChunk, block);
    std::vector<Amplitude> buffer(high > 0 ? rows * chunk : 0);

    for (std::size_t k = 0; k < params.depth(); ++k) {
        const double gamma = params.gammas[k];
        const double c = std::cos(params.betas[k]);
        const double s = std::sin(params.betas[k]);
        for (std::size_t start = 0; start < half; start += block) {
            for (std::size_t z = start; z < start + block; ++z) {
                const double angle = -gamma * (total_ - 2.0 * cuts_[z]);
                h[z] *= Amplitude{std::cos(angle), std::sin(angle)};
            }
            for (std::size_t q = 0; q < low; ++q) {
                rotate_stride(h.data() + start, block, std::size_t{1} << q, c, s);
            }
        }
        // Remaining qubits below the top one, gathered column chunk by chunk.
        for (std::size_t col = 0; col < block && high > 0; col += chunk) {
            for (std::size_t r = 0; r < rows; ++r) {
                std::copy_n(h.data() + r * block + col, chunk, buffer.data() + r * chunk);
            }
            for (std::size_t q = 0; q < high; ++q) {
                rotate_stride(buffer.data(), buffer.size(), chunk << q, c, s);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                std::copy_n(buffer.data() + r * chunk, chunk, h.data() + r * block + col);
            }
        }
        // Top qubit: the partner of z is the complement of z within the half.
        const std::size_t mask = half - 1;
        for (std::size_t z = 0; z < half / 2; ++z) rotate_pair(h[z], h[mask ^ z], c, s);
    }
    return h;
}

StateVector QaoaSimulator::state(const QaoaParams& params) const {
    const auto h = half_state(params);
    StateVector s(graph_.n());
    auto amps = s.amplitudes();
    const std::size_t last = amps.size() - 1;
    for (std::size_t z = 0; z < h.size(); ++z) {
        amps[z] = h[z];
        amps[last ^ z] = h[z];
    }
    return s;
}

double QaoaSimulator::expectation(const StateVector& s) const {
    const auto amps = s.amplitudes();
    double energy = 0.0;
    for (std::size_t z = 0; z < amps.size(); ++z) energy -= std::norm(amps[z]) * cuts_[z];
    return energy;
}

double QaoaSimulator::expectation(const QaoaParams& params) const {
    const auto h = half_state(params);
    double energy = 0.0;
    for (std::size_t z = 0; z < h.size(); ++z) energy -= std::norm(h[z]) * cuts_[z];
    return 2.0 * energy;
}

QaoaResult optimize(const WeightedGraph& g, const QaoaConfig& cfg) {
    if (cfg.depth < 1) throw InvalidArgument("QAOA depth must be at least 1");
    if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (g.n() < 2) throw InvalidArgument("MaxCut needs at least two nodes");
    if (g.n() > kMaxQubits) throw SizeGuardExceeded("QAOA register limited to 24 qubits");
    if (cfg.eval_mode == EvalMode::kSampled && cfg.shots < 1) {
        throw InvalidArgument("sampled evaluation needs shots >= 1");
    }

    const double scale = g.max_weight() > 0.0 ? g.max_weight() : 1.0;
    const WeightedGraph normalized = g.scaled(scale);
    const QaoaSimulator sim(normalized);
    const std::size_t depth = cfg.depth;

    // Linear ramp (gamma rising, beta falling) stretched by a seeded factor.
    Rng rng(derive_seed(cfg.seed, 0x0A0A));
    const double stretch = kRampTime * rng.uniform(0.6, 1.4);
    std::vector<double> x0(2 * depth);
    for (std::size_t k = 0; k < depth; ++k) {
        const double f = (static_cast<double>(k) + 0.5) / static_cast<double>(depth);
        x0[k] = f * stretch;
        x0[depth + k] = (1.0 - f) * stretch;
    }

    std::uint64_t evaluation = 0;
    auto sampled_energy = [&](const StateVector& s) {
        const auto shots = sample(s, cfg.shots, derive_seed(cfg.seed, 0x5407, evaluation));
        double e = 0.0;
        for (BasisState z : shots) e -= sim.cuts()[z];
        return e / static_cast<double>(shots.size());
    };
    const Objective objective = [&](std::span<const double> x) {
        const QaoaParams params = params_from_vector(x, depth);
        const double e = cfg.eval_mode == EvalMode::kExact ? sim.expectation(params)
                                                           : sampled_energy(sim.state(params));
        ++evaluation;
        return e;
    };

    OptimizerOptions opts;
    opts.kind = cfg.optimizer;
    opts.max_evaluations = cfg.max_iter;
    const OptimizeResult opt = minimize(objective, x0, opts);

    QaoaResult result;
    result.params = params_from_vector(opt.x, depth);
    result.initial_energy = opt.initial_value * scale;
    result.final_energy = opt.value * scale;
    result.evaluations = opt.evaluations;

    const StateVector final_state = sim.state(result.params);
    std::size_t best = 0;
    double best_weight = -1.0;
    if (cfg.eval_mode == EvalMode::kExact) {
        const auto amps = final_state.amplitudes();
        for (std::size_t z = 0; z < amps.size(); ++z) {
            const double p = std::norm(amps[z]);
            if (p < kProbabilityPruneThreshold || is_trivial(z, g.n())) continue;
            if (p > best_weight) {
                best_weight = p;
                best = z;
            }
        }
    } else {
        const auto shots = sample(final_state, cfg.shots, derive_seed(cfg.seed, 0xF1A1));
        for (std::size_t i = 0; i < shots.size();) {
            std::size_t j = i;
            while (j < shots.size() && shots[j] == shots[i]) ++j;
            const auto count = static_cast<double>(j - i);
            if (!is_trivial(shots[i], g.n()) && count > best_weight) {
                best_weight = count;
                best = shots[i];
            }
            i = j;
        }
    }
    if (best_weight < 0.0) {
        throw AllTrivialPartitions("QAOA produced only trivial partitions");
    }
    result.partition = Partition::from_assignment(to_bitstring(best, g.n()), g);
    return result;
}

Partition brute_force_maxcut(const WeightedGraph& g) {
    if (g.n() < 2) throw InvalidArgument("MaxCut needs at least two nodes");
    const auto cuts = cut_table(g);
    // Node 0 stays in cluster a; states with bit 0 set are complements.
    std::size_t best = 0;
    double best_cut = -1.0;
    for (std::size_t z = 2; z < cuts.size(); z += 2) {
        if (cuts[z] > best_cut) {
            best_cut = cuts[z];
            best = z;
        }
    }
    return Partition::from_assignment(to_bitstring(best, g.n()), g);
}

}  // namespace q4dr
