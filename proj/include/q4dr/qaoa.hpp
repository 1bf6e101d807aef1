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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "q4dr/instance.hpp"
#include "q4dr/optimizer.hpp"
#include "q4dr/statevector.hpp"

namespace q4dr {

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 0.0;
};

/// Undirected graph with positive edge weights, u < v on every edge.
class WeightedGraph {
 public:
    WeightedGraph() = default;
    WeightedGraph(std::size_t n, std::vector<WeightedEdge> edges);

    /// Complete graph over the visiting nodes. Each edge weight is the mean of
    /// the two directed entries, or the single finite direction when the
    /// other one is forbidden.
    static WeightedGraph from_instance(const Instance& inst);

    std::size_t n() const { return n_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    double total_weight() const;
    double max_weight() const;

    /// Copy with every weight divided by `factor`.
    WeightedGraph scaled(double factor) const;

 private:
    std::size_t n_ = 0;
    std::vector<WeightedEdge> edges_;
};

/// Cut weight of every basis state, indexed by state (size 2^n).
std::vector<double> cut_table(const WeightedGraph& g);

/// Negated cut weight of the assignment; lower is better.
double maxcut_obj(const std::string& assignment, const WeightedGraph& g);
double maxcut_obj(BasisState assignment, const WeightedGraph& g);

/// Expected maxcut_obj under a measurement distribution.
double maxcut_cost(const std::map<std::string, double>& measurement,
                   const WeightedGraph& g);
double maxcut_cost(const Distribution& measurement, const WeightedGraph& g);

enum class EvalMode { kExact, kSampled };

struct QaoaConfig {
    std::size_t depth = 3;
    std::size_t max_iter = 50;
    std::uint64_t seed = 0;
    EvalMode eval_mode = EvalMode::kExact;
    std::size_t shots = 1024;
    OptimizerKind optimizer = OptimizerKind::kCobyla;
};

struct QaoaParams {
    std::vector<double> gammas;
    std::vector<double> betas;

    std::size_t depth() const { return gammas.size(); }
};

struct Partition {
    /// Character k is the cluster bit of node k.
    std::string assignment;
    std::vector<std::size_t> cluster_a;  // bit 0
    std::vector<std::size_t> cluster_b;  // bit 1
    double cut_weight = 0.0;

    static Partition from_assignment(const std::string& assignment,
                                     const WeightedGraph& g);

    bool operator==(const Partition&) const = default;
};

/// Gate-by-gate circuit: H on all qubits, then per layer CX/RZ/CX for every
/// edge followed by RX(2 beta) on every qubit.
StateVector build_ansatz(const WeightedGraph& g, const QaoaParams& params);

/// Fast evaluator: the cost layer is applied as one diagonal phase
/// exp(-i gamma (W - 2 cut(z))), which equals the CX/RZ/CX product exactly.
class QaoaSimulator {
 public:
    explicit QaoaSimulator(const WeightedGraph& g);

    StateVector state(const QaoaParams& params) const;
    /// Exact expectation of maxcut_obj for the ansatz state.
    double expectation(const QaoaParams& params) const;
    double expectation(const StateVector& state) const;

    /// Amplitudes of the basis states whose highest bit is 0. The ansatz
    /// is invariant under flipping every bit, so these fix the full state.
    std::vector<std::complex<double>> half_state(const QaoaParams& params) const;

    const std::vector<double>& cuts() const { return cuts_; }

 private:
    WeightedGraph graph_;
    std::vector<double> cuts_;
    double total_ = 0.0;
};

struct QaoaResult {
    QaoaParams params;
    Partition partition;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    std::size_t evaluations = 0;
};

/// Tunes the depth-p ansatz and extracts the most probable non-trivial cut.
/// Throws AllTrivialPartitions when only all-0 / all-1 strings remain.
QaoaResult optimize(const WeightedGraph& g, const QaoaConfig& cfg);

/// Exhaustive maximum cut (reference for small graphs).
Partition brute_force_maxcut(const WeightedGraph& g);

}  // namespace q4dr
