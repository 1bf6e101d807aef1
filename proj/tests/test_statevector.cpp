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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "q4dr/errors.hpp"
#include "q4dr/random.hpp"
#include "q4dr/statevector.hpp"

using namespace q4dr;

namespace {

constexpr double kTol = 1e-10;

StateVector random_state(std::size_t n, std::uint64_t seed) {
    StateVector s = StateVector::uniform(n);
    Rng rng(seed);
    for (int k = 0; k < 20; ++k) {
        const std::size_t q = rng.below(n);
        switch (rng.below(4)) {
            case 0: s.apply_h(q); break;
            case 1: s.apply_rx(q, rng.uniform(0, 6.3)); break;
            case 2: s.apply_rz(q, rng.uniform(0, 6.3)); break;
            default:
                if (n > 1) s.apply_cx(q, (q + 1 + rng.below(n - 1)) % n);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("bitstring convention: qubit 0 is character 0 and the low bit") {
    CHECK(to_bitstring(1, 3) == "100");
    CHECK(to_bitstring(6, 3) == "011");
    CHECK(from_bitstring("100") == 1);
    CHECK(from_bitstring("011") == 6);
    CHECK_THROWS_AS(from_bitstring("01x"), InvalidArgument);
}

TEST_CASE("uniform superposition") {
    const StateVector one = StateVector::uniform(1);
    CHECK(one.amplitudes()[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(one.amplitudes()[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    const StateVector three = StateVector::uniform(3);
    for (const auto& a : three.amplitudes()) {
        CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(8.0)));
        CHECK(a.imag() == 0.0);
    }
    CHECK(std::fabs(StateVector::uniform(10).norm_squared() - 1.0) < kTol);
}

TEST_CASE("size guard") {
    CHECK_THROWS_AS(StateVector(25), SizeGuardExceeded);
    CHECK_THROWS_AS(StateVector(0), InvalidArgument);
}

TEST_CASE("CX truth table") {
    // |10>: qubit 0 (leftmost character) is 1 and controls qubit 1.
    StateVector s = StateVector::basis(2, from_bitstring("10"));
    s.apply_cx(0, 1);
    const auto probs = probabilities_by_bitstring(s);
    REQUIRE(probs.size() == 1);
    CHECK(probs.begin()->first == "11");
    CHECK(probs.begin()->second == doctest::Approx(1.0));

    StateVector idle = StateVector::basis(2, from_bitstring("01"));
    idle.apply_cx(0, 1);
    CHECK(probabilities_by_bitstring(idle).begin()->first == "01");
    CHECK_THROWS_AS(idle.apply_cx(1, 1), InvalidArgument);
}

TEST_CASE("RZ only changes the phase") {
    StateVector s(1);
    s.apply_rz(0, 1.234);
    const auto probs = probabilities_by_bitstring(s);
    CHECK(probs.at("0") == doctest::Approx(1.0));
    CHECK(probs.count("1") == 0);
}

TEST_CASE("RX(pi) maps |0> to |1> up to phase") {
    StateVector s(1);
    s.apply_rx(0, std::numbers::pi);
    const auto probs = probabilities_by_bitstring(s);
    REQUIRE(probs.size() == 1);
    CHECK(probs.count("1") == 1);
    CHECK(std::fabs(probs.at("1") - 1.0) < 1e-12);
    CHECK(s.approx_equal_up_to_phase(StateVector::basis(1, 1), kTol));
}

TEST_CASE("probabilities of uniform n=2 and pruning") {
    const auto probs = probabilities_by_bitstring(StateVector::uniform(2));
    CHECK(probs.size() == 4);
    for (const auto& [bits, p] : probs) CHECK(p == doctest::Approx(0.25));
    StateVector s = StateVector::basis(3, 5);
    CHECK(s.probabilities().size() == 1);
}

TEST_CASE("gate identities") {
    SUBCASE("CX twice is the identity") {
        const StateVector s = random_state(4, 1);
        StateVector t = s;
        t.apply_cx(2, 0);
        t.apply_cx(2, 0);
        CHECK(t.approx_equal_up_to_phase(s, kTol));
    }
    SUBCASE("RZ angles add") {
        StateVector a = random_state(3, 2);
        StateVector b = a;
        a.apply_rz(1, 0.4);
        a.apply_rz(1, 1.1);
        b.apply_rz(1, 1.5);
        a.apply_h(1);
        b.apply_h(1);
        CHECK(a.approx_equal_up_to_phase(b, kTol));
    }
    SUBCASE("H twice is the identity") {
        const StateVector s = random_state(3, 3);
        StateVector t = s;
        t.apply_h(2);
        t.apply_h(2);
        CHECK(t.approx_equal_up_to_phase(s, kTol));
    }
    SUBCASE("apply_rx_all equals per-qubit RX, including blocked sizes") {
        for (std::size_t n : {1, 5, 15, 16}) {
            StateVector a = random_state(n, 40 + n);
            StateVector b = a;
            a.apply_rx_all(0.77);
            for (std::size_t q = 0; q < n; ++q) b.apply_rx(q, 0.77);
            CHECK(a.approx_equal_up_to_phase(b, kTol));
        }
    }
    SUBCASE("diagonal phase") {
        StateVector a = random_state(3, 4);
        StateVector b = a;
        std::vector<double> diag(8);
        for (std::size_t z = 0; z < 8; ++z) diag[z] = 0.3 * static_cast<double>(z);
        a.apply_diagonal_phase(diag, 2.0);
        for (std::size_t z = 0; z < 8; ++z) {
            const auto expect = b.amplitudes()[z] * std::polar(1.0, -0.6 * static_cast<double>(z));
            CHECK(std::abs(a.amplitudes()[z] - expect) < kTol);
        }
        CHECK_THROWS_AS(a.apply_diagonal_phase(std::vector<double>(4), 1.0), InvalidArgument);
    }
}

TEST_CASE("norm preserved after random circuits") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const StateVector s = random_state(6, seed);
        CHECK(std::fabs(s.norm_squared() - 1.0) < kTol);
    }
}

TEST_CASE("gate argument validation") {
    StateVector s(2);
    CHECK_THROWS_AS(s.apply_h(2), InvalidArgument);
    CHECK_THROWS_AS(s.apply_rx(0, std::nan("")), InvalidArgument);
}

TEST_CASE("sampling") {
    const auto shots = sample(StateVector::basis(1, 1), 100, 3);
    CHECK(shots.size() == 100);
    for (auto z : shots) CHECK(z == 1);

    const StateVector u = StateVector::uniform(2);
    CHECK(sample(u, 500, 9) == sample(u, 500, 9));

    const auto many = sample(u, 100'000, 17);
    std::map<BasisState, double> freq;
    for (auto z : many) freq[z] += 1.0 / 100'000.0;
    CHECK(freq.size() == 4);
    for (const auto& [z, f] : freq) CHECK(std::fabs(f - 0.25) <= 0.02);
}
