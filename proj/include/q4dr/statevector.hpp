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
#include <span>
#include <string>
#include <vector>

namespace q4dr {

inline constexpr std::size_t kMaxQubits = 24;

/// Basis-state index. Bit k of the index is qubit k; in text form qubit k is
/// character k, so "10" means qubit 0 = 1, qubit 1 = 0.
using BasisState = std::uint64_t;

std::string to_bitstring(BasisState state, std::size_t n_qubits);
BasisState from_bitstring(const std::string& bits);

/// Sparse probability distribution over basis states, sorted by state.
using Distribution = std::vector<std::pair<BasisState, double>>;

inline constexpr double kProbabilityPruneThreshold = 1e-12;

class StateVector {
 public:
    using Amplitude = std::complex<double>;

    /// |0...0>.
    explicit StateVector(std::size_t n_qubits);

    /// Uniform superposition over all 2^n basis states.
    static StateVector uniform(std::size_t n_qubits);
    static StateVector basis(std::size_t n_qubits, BasisState state);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    std::span<Amplitude> amplitudes() { return amplitudes_; }

    void apply_h(std::size_t q);
    /// exp(-i theta X / 2)
    void apply_rx(std::size_t q, double theta);
    /// diag(exp(-i theta/2), exp(+i theta/2))
    void apply_rz(std::size_t q, double theta);
    void apply_cx(std::size_t control, std::size_t target);

    /// RX(theta) on every qubit; equivalent to n apply_rx calls.
    void apply_rx_all(double theta);
    /// Multiplies amplitude z by exp(-i * scale * diagonal[z]).
    void apply_diagonal_phase(std::span<const double> diagonal, double scale);

    double norm_squared() const;

    /// |amplitude|^2 per basis state, entries below 1e-12 dropped.
    Distribution probabilities() const;
    /// Dense |amplitude|^2 without pruning.
    std::vector<double> dense_probabilities() const;

    bool approx_equal_up_to_phase(const StateVector& other, double tol) const;

 private:
    void check_qubit(std::size_t q) const;

    std::size_t n_qubits_;
    std::vector<Amplitude> amplitudes_;
};

/// String-keyed view of a distribution, for small registers and tests.
std::map<std::string, double> probabilities_by_bitstring(const StateVector& s);

/// `shots` i.i.d. draws from the state's distribution; sorted by state.
std::vector<BasisState> sample(const StateVector& s, std::size_t shots,
                               std::uint64_t seed);

}  // namespace q4dr
