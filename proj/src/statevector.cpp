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

#include "q4dr/statevector.hpp"

#include <algorithm>
#include <cmath>

#include "q4dr/errors.hpp"
#include "q4dr/random.hpp"

namespace q4dr {

namespace {

// Amplitudes per cache block for the fused all-qubit rotation.
constexpr std::size_t kBlockQubits = 14;

inline void rotate_pair(std::complex<double>& a, std::complex<double>& b,
                        double c, double s) {
    // [[c, -i s], [-i s, c]]
    const double ar = a.real(), ai = a.imag();
    const double br = b.real(), bi = b.imag();
    a = {c * ar + s * bi, c * ai - s * br};
    b = {c * br + s * ai, c * bi - s * ar};
}

void rx_stride(std::complex<double>* data, std::size_t len, std::size_t stride,
               double c, double s) {
    for (std::size_t base = 0; base < len; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            rotate_pair(data[k], data[k + stride], c, s);
        }
    }
}

}  // namespace

std::string to_bitstring(BasisState state, std::size_t n_qubits) {
    std::string bits(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if ((state >> q) & 1U) bits[q] = '1';
    }
    return bits;
}

BasisState from_bitstring(const std::string& bits) {
    if (bits.size() > 64) throw InvalidArgument("bitstring longer than 64 bits");
    BasisState state = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            state |= BasisState{1} << q;
        } else if (bits[q] != '0') {
            throw InvalidArgument("bitstring may only contain '0' and '1'");
        }
    }
    return state;
}

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw InvalidArgument("a state needs at least one qubit");
    if (n_qubits > kMaxQubits) {
        throw SizeGuardExceeded("qubit count " + std::to_string(n_qubits) + " exceeds " +
                                std::to_string(kMaxQubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::uniform(std::size_t n_qubits) {
    StateVector s(n_qubits);
    const double a = std::pow(2.0, -0.5 * static_cast<double>(n_qubits));
    std::fill(s.amplitudes_.begin(), s.amplitudes_.end(), Amplitude{a, 0.0});
    return s;
}

StateVector StateVector::basis(std::size_t n_qubits, BasisState state) {
    StateVector s(n_qubits);
    if (state >= s.dimension()) throw InvalidArgument("basis state out of range");
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[state] = 1.0;
    return s;
}

void StateVector::check_qubit(std::size_t q) const {
    if (q >= n_qubits_) {
        throw InvalidArgument("qubit index " + std::to_string(q) + " out of range for " +
                              std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::apply_h(std::size_t q) {
    check_qubit(q);
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dimension(); base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const Amplitude a = amplitudes_[k];
            const Amplitude b = amplitudes_[k + stride];
            amplitudes_[k] = r * (a + b);
            amplitudes_[k + stride] = r * (a - b);
        }
    }
}

void StateVector::apply_rx(std::size_t q, double theta) {
    check_qubit(q);
    if (!std::isfinite(theta)) throw InvalidArgument("rotation angle must be finite");
    rx_stride(amplitudes_.data(), dimension(), std::size_t{1} << q,
              std::cos(theta / 2.0), std::sin(theta / 2.0));
}

void StateVector::apply_rz(std::size_t q, double theta) {
    check_qubit(q);
    if (!std::isfinite(theta)) throw InvalidArgument("rotation angle must be finite");
    const Amplitude phase0 = std::polar(1.0, -theta / 2.0);
    const Amplitude phase1 = std::polar(1.0, theta / 2.0);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t k = 0; k < dimension(); ++k) {
        amplitudes_[k] *= (k & bit) ? phase1 : phase0;
    }
}

void StateVector::apply_cx(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw InvalidArgument("CX control equals target");
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t k = 0; k < dimension(); ++k) {
        if ((k & cbit) && !(k & tbit)) std::swap(amplitudes_[k], amplitudes_[k | tbit]);
    }
}

void StateVector::apply_rx_all(double theta) {
    if (!std::isfinite(theta)) throw InvalidArgument("rotation angle must be finite");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::size_t dim = dimension();
    // Low qubits are applied block by block so the block stays in cache.
    const std::size_t low = std::min(n_qubits_, kBlockQubits);
    const std::size_t block = std::size_t{1} << low;
    for (std::size_t start = 0; start < dim; start += block) {
        for (std::size_t q = 0; q < low; ++q) {
            rx_stride(amplitudes_.data() + start, block, std::size_t{1} << q, c, s);
        }
    }
    for (std::size_t q = low; q < n_qubits_; ++q) {
        rx_stride(amplitudes_.data(), dim, std::size_t{1} << q, c, s);
    }
}

void StateVector::apply_diagonal_phase(std::span<const double> diagonal, double scale) {
    if (diagonal.size() != dimension()) {
        throw InvalidArgument("diagonal length does not match state dimension");
    }
    for (std::size_t k = 0; k < dimension(); ++k) {
        const double angle = -scale * diagonal[k];
        amplitudes_[k] *= Amplitude{std::cos(angle), std::sin(angle)};
    }
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes_) total += std::norm(a);
    return total;
}

Distribution StateVector::probabilities() const {
    Distribution out;
    for (std::size_t k = 0; k < dimension(); ++k) {
        const double p = std::norm(amplitudes_[k]);
        if (p >= kProbabilityPruneThreshold) out.emplace_back(k, p);
    }
    return out;
}

std::vector<double> StateVector::dense_probabilities() const {
    std::vector<double> out(dimension());
    for (std::size_t k = 0; k < dimension(); ++k) out[k] = std::norm(amplitudes_[k]);
    return out;
}

bool StateVector::approx_equal_up_to_phase(const StateVector& other, double tol) const {
    if (other.n_qubits_ != n_qubits_) return false;
    // Align phases on the largest amplitude of this state.
    std::size_t pivot = 0;
    for (std::size_t k = 1; k < dimension(); ++k) {
        if (std::abs(amplitudes_[k]) > std::abs(amplitudes_[pivot])) pivot = k;
    }
    const Amplitude a = amplitudes_[pivot];
    const Amplitude b = other.amplitudes_[pivot];
    if (std::abs(b) < 1e-300) return false;
    const Amplitude phase = (a / std::abs(a)) / (b / std::abs(b));
    for (std::size_t k = 0; k < dimension(); ++k) {
        if (std::abs(amplitudes_[k] - phase * other.amplitudes_[k]) > tol) return false;
    }
    return true;
}

std::map<std::string, double> probabilities_by_bitstring(const StateVector& s) {
    std::map<std::string, double> out;
    for (const auto& [state, p] : s.probabilities()) {
        out.emplace(to_bitstring(state, s.n_qubits()), p);
    }
    return out;
}

std::vector<BasisState> sample(const StateVector& s, std::size_t shots,
                               std::uint64_t seed) {
    if (shots < 1) throw InvalidArgument("shots must be at least 1");
    const auto probs = s.dense_probabilities();
    std::vector<double> cumulative(probs.size());
    double running = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        running += probs[k];
        cumulative[k] = running;
    }
    Rng rng(seed);
    std::vector<BasisState> out;
    out.reserve(shots);
    for (std::size_t i = 0; i < shots; ++i) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
        if (k >= probs.size()) k = probs.size() - 1;
        // Never report a state with zero probability.
        while (probs[k] == 0.0 && k > 0) --k;
        out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace q4dr
