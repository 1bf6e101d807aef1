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

#include "q4dr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "q4dr/errors.hpp"

namespace q4dr {

namespace {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Gauss-Jordan inverse with partial pivoting; nullopt when singular.
std::optional<Mat> invert(Mat a) {
    const std::size_t n = a.size();
    Mat inv(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    double scale = 0.0;
    for (const auto& row : a) {
        for (double v : row) scale = std::max(scale, std::fabs(v));
    }
    if (scale == 0.0) return std::nullopt;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        if (std::fabs(a[piv][col]) < 1e-12 * scale) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double factor = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
                inv[r][c] -= factor * inv[col][c];
            }
        }
    }
    return inv;
}

/// Wraps the objective with an evaluation budget and best-point tracking.
class Budget {
 public:
    Budget(const Objective& f, std::size_t limit) : f_(f), limit_(limit) {}

    bool exhausted() const { return used_ >= limit_; }

    double operator()(const Vec& x) {
        const double v = f_(std::span<const double>(x));
        ++used_;
        if (used_ == 1) initial_ = v;
        if (!best_ || v < best_value_) {
            best_ = x;
            best_value_ = v;
        }
        return v;
    }

    OptimizeResult result() const {
        OptimizeResult r;
        r.x = best_.value_or(Vec{});
        r.value = best_value_;
        r.evaluations = used_;
        r.initial_value = initial_;
        return r;
    }

 private:
    const Objective& f_;
    std::size_t limit_;
    std::size_t used_ = 0;
    std::optional<Vec> best_;
    double best_value_ = 0.0;
    double initial_ = 0.0;
};

}  // namespace

OptimizeResult minimize_cobyla(const Objective& f, Vec x0,
                               const OptimizerOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw InvalidArgument("optimizer needs at least one variable");
    if (options.max_evaluations < 1) throw InvalidArgument("max_evaluations must be >= 1");

    Budget eval(f, options.max_evaluations);
    double rho = options.initial_step;
    const double rho_end = std::min(options.final_step, rho);

    // vertices[0] is the pivot (best point); vertices[1..n] span the simplex.
    Mat vertices(n + 1, x0);
    Vec values(n + 1, 0.0);
    values[0] = eval(x0);
    for (std::size_t j = 1; j <= n && !eval.exhausted(); ++j) {
        vertices[j][j - 1] += rho;
        values[j] = eval(vertices[j]);
        if (values[j] < values[0]) {
            std::swap(vertices[0], vertices[j]);
            std::swap(values[0], values[j]);
        }
    }

    constexpr double kAlpha = 0.25;  // minimum vertex-to-face distance / rho
    constexpr double kBeta = 2.1;    // maximum vertex-to-pivot distance / rho
    constexpr double kGamma = 0.5;   // distance of a repaired vertex / rho

    auto reset_simplex = [&]() {
        for (std::size_t j = 1; j <= n && !eval.exhausted(); ++j) {
            vertices[j] = vertices[0];
            vertices[j][j - 1] += rho;
            values[j] = eval(vertices[j]);
        }
    };

    while (!eval.exhausted()) {
        // Keep the best vertex as pivot.
        const auto best = static_cast<std::size_t>(
            std::min_element(values.begin(), values.end()) - values.begin());
        if (best != 0) {
            std::swap(vertices[0], vertices[best]);
            std::swap(values[0], values[best]);
        }

        Mat directions(n, Vec(n));
        Vec diffs(n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                directions[j][i] = vertices[j + 1][i] - vertices[0][i];
            }
            diffs[j] = values[j + 1] - values[0];
        }
        auto inverse = invert(directions);
        if (!inverse) {
            reset_simplex();
            continue;
        }
        // Gradient of the linear interpolant: directions * g = diffs.
        Vec grad(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) grad[i] += (*inverse)[i][j] * diffs[j];
        }

        // Simplex geometry: column j of the inverse is normal to the face
        // opposite vertex j + 1.
        std::size_t worst = n;
        double worst_score = 0.0;
        bool too_far = false;
        for (std::size_t j = 0; j < n; ++j) {
            const double eta = norm(directions[j]);
            if (eta > kBeta * rho && eta > worst_score) {
                worst = j;
                worst_score = eta;
                too_far = true;
            }
        }
        if (!too_far) {
            double min_sigma = kAlpha * rho;
            for (std::size_t j = 0; j < n; ++j) {
                double col = 0.0;
                for (std::size_t i = 0; i < n; ++i) col += (*inverse)[i][j] * (*inverse)[i][j];
                const double sigma = 1.0 / std::sqrt(col);
                if (sigma < min_sigma) {
                    min_sigma = sigma;
                    worst = j;
                }
            }
        }
        if (worst < n) {
            // Geometry step: move the offending vertex to distance gamma*rho
            // along the face normal, on the side the model predicts is downhill.
            Vec normal(n);
            for (std::size_t i = 0; i < n; ++i) normal[i] = (*inverse)[i][worst];
            const double len = norm(normal);
            const double sign = dot(grad, normal) > 0.0 ? -1.0 : 1.0;
            Vec x = vertices[0];
            for (std::size_t i = 0; i < n; ++i) x[i] += sign * kGamma * rho * normal[i] / len;
            vertices[worst + 1] = x;
            values[worst + 1] = eval(x);
            continue;
        }

        const double gnorm = norm(grad);
        bool reduce = gnorm == 0.0;
        if (!reduce) {
            Vec step(n);
            for (std::size_t i = 0; i < n; ++i) step[i] = -rho * grad[i] / gnorm;
            Vec x = vertices[0];
            for (std::size_t i = 0; i < n; ++i) x[i] += step[i];
            const double fx = eval(x);
            const double predicted = rho * gnorm;
            const double actual = values[0] - fx;

            // Replace the vertex whose removal keeps the simplex best
            // conditioned, weighted by how far it sits from the new point.
            std::size_t replace = 0;
            double score = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                double sigma = 0.0;
                for (std::size_t i = 0; i < n; ++i) sigma += (*inverse)[i][j] * step[i];
                double dist = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = vertices[j + 1][i] - x[i];
                    dist += d * d;
                }
                const double weight = std::max(1.0, std::sqrt(dist) / rho);
                const double s = std::fabs(sigma) * weight * weight;
                if (s > score) {
                    score = s;
                    replace = j;
                }
            }
            vertices[replace + 1] = x;
            values[replace + 1] = fx;
            reduce = actual < 0.1 * predicted;
        }
        if (reduce) {
            if (rho <= rho_end) break;
            rho = rho > 3.0 * rho_end ? 0.5 * rho : rho_end;
        }
    }
    return eval.result();
}

OptimizeResult minimize_nelder_mead(const Objective& f, Vec x0,
                                    const OptimizerOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw InvalidArgument("optimizer needs at least one variable");
    if (options.max_evaluations < 1) throw InvalidArgument("max_evaluations must be >= 1");

    Budget eval(f, options.max_evaluations);
    Mat simplex(n + 1, x0);
    Vec values(n + 1);
    values[0] = eval(x0);
    for (std::size_t j = 1; j <= n && !eval.exhausted(); ++j) {
        simplex[j][j - 1] += options.initial_step;
        values[j] = eval(simplex[j]);
    }

    std::vector<std::size_t> order(n + 1);
    while (!eval.exhausted()) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t lo = order.front(), hi = order.back(), second = order[n - 1];

        double spread = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                spread = std::max(spread, std::fabs(simplex[j][i] - simplex[lo][i]));
            }
        }
        if (spread < options.final_step) break;

        Vec centroid(n, 0.0);
        for (std::size_t j = 0; j <= n; ++j) {
            if (j == hi) continue;
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[j][i] / static_cast<double>(n);
        }
        auto along = [&](double t) {
            Vec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex[hi][i] - centroid[i]);
            return x;
        };

        Vec xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < values[lo]) {
            if (eval.exhausted()) break;
            Vec xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[hi] = xe;
                values[hi] = fe;
            } else {
                simplex[hi] = xr;
                values[hi] = fr;
            }
        } else if (fr < values[second]) {
            simplex[hi] = xr;
            values[hi] = fr;
        } else {
            if (eval.exhausted()) break;
            const bool outside = fr < values[hi];
            Vec xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, values[hi])) {
                simplex[hi] = xc;
                values[hi] = fc;
            } else {
                for (std::size_t j = 0; j <= n && !eval.exhausted(); ++j) {
                    if (j == lo) continue;
                    for (std::size_t i = 0; i < n; ++i) {
                        simplex[j][i] = simplex[lo][i] + 0.5 * (simplex[j][i] - simplex[lo][i]);
                    }
                    values[j] = eval(simplex[j]);
                }
            }
        }
    }
    return eval.result();
}

OptimizeResult minimize(const Objective& f, Vec x0, const OptimizerOptions& options) {
    switch (options.kind) {
        case OptimizerKind::kCobyla: return minimize_cobyla(f, std::move(x0), options);
        case OptimizerKind::kNelderMead: return minimize_nelder_mead(f, std::move(x0), options);
    }
    throw InvalidArgument("unknown optimizer");
}

}  // namespace q4dr
