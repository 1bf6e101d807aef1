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

// Independent reference computations for the tests. These deliberately avoid
// the library's own kernels (cut tables, statevector gates, QUBO energies) so
// a shared bug cannot make both sides agree.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "q4dr/instance.hpp"
#include "q4dr/qaoa.hpp"
#include "q4dr/route_model.hpp"

namespace oracle {

/// Maximum cut weight by enumerating every assignment and every edge.
inline double max_cut(const q4dr::WeightedGraph& g) {
    double best = 0.0;
    const std::uint64_t count = std::uint64_t{1} << g.n();
    for (std::uint64_t z = 0; z < count; ++z) {
        double cut = 0.0;
        for (const auto& e : g.edges()) {
            if (((z >> e.u) & 1U) != ((z >> e.v) & 1U)) cut += e.weight;
        }
        best = std::max(best, cut);
    }
    return best;
}

using C = std::complex<double>;
using Mat4 = std::array<std::array<C, 4>, 4>;
using Vec4 = std::array<C, 4>;

inline Mat4 matmul(const Mat4& a, const Mat4& b) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Vec4 mat_vec(const Mat4& m, const Vec4& v) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) r[i] += m[i][k] * v[k];
    return r;
}

/// Kronecker product with qubit 1 as the high bit: index = 2*b1 + b0.
inline Mat4 kron(const std::array<std::array<C, 2>, 2>& high,
                 const std::array<std::array<C, 2>, 2>& low) {
    Mat4 r{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) r[2 * a + c][2 * b + d] = high[a][b] * low[c][d];
    return r;
}

/// Depth-1 QAOA on the single edge (0, 1) with weight w, built from dense
/// 4x4 gate matrices: H x H, CX(0 -> 1), RZ(2 gamma w) on qubit 1, CX,
/// RX(2 beta) x RX(2 beta). Returns the expectation of -w [b0 != b1].
inline double one_edge_expectation(double w, double gamma, double beta) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<std::array<C, 2>, 2> h{{{r, r}, {r, -r}}};
    const std::array<std::array<C, 2>, 2> id{{{1.0, 0.0}, {0.0, 1.0}}};
    const double t = 2.0 * gamma * w;
    const std::array<std::array<C, 2>, 2> rz{
        {{std::polar(1.0, -t / 2.0), 0.0}, {0.0, std::polar(1.0, t / 2.0)}}};
    const double cb = std::cos(beta), sb = std::sin(beta);
    const std::array<std::array<C, 2>, 2> rx{{{cb, C(0.0, -sb)}, {C(0.0, -sb), cb}}};
    // CX with control qubit 0 (low bit) and target qubit 1 (high bit).
    Mat4 cx{};
    for (int z = 0; z < 4; ++z) {
        const int out = (z & 1) ? (z ^ 2) : z;
        cx[out][z] = 1.0;
    }
    Mat4 circuit = kron(h, h);
    circuit = matmul(cx, circuit);
    circuit = matmul(kron(rz, id), circuit);
    circuit = matmul(cx, circuit);
    circuit = matmul(kron(rx, rx), circuit);
    const Vec4 psi = mat_vec(circuit, Vec4{1.0, 0.0, 0.0, 0.0});
    // States 01 and 10 cut the edge.
    return -w * (std::norm(psi[1]) + std::norm(psi[2]));
}

struct RouteOptimum {
    std::vector<std::size_t> sequence;
    double cost = std::numeric_limits<double>::infinity();
};

/// Exhaustive permutation search in global indices, with the cheapest
/// terminal station when `stations` is non-empty (open route).
inline RouteOptimum best_route(const std::vector<std::size_t>& nodes, std::size_t depot,
                               const std::vector<std::size_t>& stations,
                               const q4dr::CostMatrix& costs) {
    RouteOptimum best;
    std::vector<std::size_t> perm = nodes;
    std::sort(perm.begin(), perm.end());
    do {
        std::vector<std::size_t> seq{depot};
        seq.insert(seq.end(), perm.begin(), perm.end());
        std::vector<std::size_t> ends = stations.empty() ? std::vector<std::size_t>{depot}
                                                         : stations;
        for (std::size_t end : ends) {
            std::vector<std::size_t> full = seq;
            full.push_back(end);
            double c = 0.0;
            for (std::size_t k = 0; k + 1 < full.size(); ++k) c += costs.cost(full[k], full[k + 1]);
            if (c < best.cost) {
                best.cost = c;
                best.sequence = full;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

struct QuboMinimum {
    q4dr::Assignment assignment;
    double energy = std::numeric_limits<double>::infinity();
};

/// Ground state of a QUBO by Gray-code enumeration over a dense matrix
/// assembled directly from the linear and quadratic term lists.
inline QuboMinimum qubo_ground_state(const q4dr::QuboForm& q) {
    const std::size_t n = q.num_variables;
    std::vector<double> dense(n * n, 0.0);
    for (const auto& [key, coef] : q.quadratic) {
        dense[key.first * n + key.second] += coef;
        dense[key.second * n + key.first] += coef;
    }
    q4dr::Assignment x(n, 0);
    double energy = q.offset;
    QuboMinimum best{x, energy};
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < count; ++step) {
        const std::size_t flip = static_cast<std::size_t>(__builtin_ctzll(step));
        double field = q.linear[flip];
        const double* row = dense.data() + flip * n;
        for (std::size_t j = 0; j < n; ++j) {
            if (x[j]) field += row[j];
        }
        if (x[flip]) {
            energy -= field;
            x[flip] = 0;
        } else {
            energy += field;
            x[flip] = 1;
        }
        if (energy < best.energy) {
            best.energy = energy;
            best.assignment = x;
        }
    }
    return best;
}

}  // namespace oracle
