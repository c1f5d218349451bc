// Copyright 2026 The chsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Independent reference computations used by the tests. Nothing here calls into the
// library's probability code.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

namespace oracle {

struct TwoQubit {
    double joint = 0.0;  // P(A and B transmit)
    double alice = 0.0;
    double bob = 0.0;
};

inline Eigen::Matrix2d polarizer(double theta) {
    Eigen::Vector2d v(std::cos(theta), std::sin(theta));
    return v * v.transpose();
}

inline Eigen::Matrix4d kron(const Eigen::Matrix2d &x, const Eigen::Matrix2d &y) {
    Eigen::Matrix4d k;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            k.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
        }
    }
    return k;
}

/// Brute-force state-vector evaluation for cos r|HH> + sin r|VV> (basis HH, HV, VH, VV).
inline TwoQubit projector_probs(double r, double a, double b) {
    Eigen::Vector4d psi(std::cos(r), 0.0, 0.0, std::sin(r));
    Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    TwoQubit out;
    out.joint = psi.dot(kron(polarizer(a), polarizer(b)) * psi);
    out.alice = psi.dot(kron(polarizer(a), id) * psi);
    out.bob = psi.dot(kron(id, polarizer(b)) * psi);
    return out;
}

/// Exact six-term value for probabilities given in hundredths: numerator over 10000.
inline std::int64_t tautology_numerator(std::int64_t x, std::int64_t x2, std::int64_t y, std::int64_t y2) {
    return x * y - x * y2 + x2 * y + x2 * y2 - 100 * x2 - 100 * y;
}

struct LocalTable {
    std::array<double, 4> joint{};  // by 2*alice + bob
    std::array<double, 2> alice{};
    std::array<double, 2> bob{};
    std::array<double, 4> fair_correlation{};
};

/// Midpoint quadrature over lambda uniform on [0, pi) for a model whose plus-port
/// probability is plus(angle, lambda) and minus-port probability minus(angle, lambda),
/// with the two sides conditionally independent given lambda.
inline LocalTable local_table(const std::function<double(double, double)> &plus,
                              const std::function<double(double, double)> &minus, std::array<double, 2> alice,
                              std::array<double, 2> bob, int steps = 200000) {
    LocalTable t;
    std::array<double, 4> both_click{};
    for (int s = 0; s < steps; ++s) {
        double lambda = std::numbers::pi * (s + 0.5) / steps;
        for (int i = 0; i < 2; ++i) {
            t.alice[i] += plus(alice[i], lambda) / steps;
            t.bob[i] += plus(bob[i], lambda) / steps;
            for (int j = 0; j < 2; ++j) {
                double ap = plus(alice[i], lambda), am = minus(alice[i], lambda);
                double bp = plus(bob[j], lambda), bm = minus(bob[j], lambda);
                t.joint[2 * i + j] += ap * bp / steps;
                t.fair_correlation[2 * i + j] += (ap * bp + am * bm - ap * bm - am * bp) / steps;
                both_click[2 * i + j] += (ap + am) * (bp + bm) / steps;
            }
        }
    }
    for (int p = 0; p < 4; ++p) {
        t.fair_correlation[p] /= both_click[p];
    }
    return t;
}

/// Plus / minus port probabilities of the setting-biased detection model.
inline double biased_plus(double exponent, double angle, double lambda) {
    double c = std::cos(2.0 * (angle - lambda));
    return c > 0.0 ? std::pow(c, exponent) : 0.0;
}
inline double biased_minus(double exponent, double angle, double lambda) {
    double c = std::cos(2.0 * (angle - lambda));
    return c < 0.0 ? std::pow(-c, exponent) : 0.0;
}

/// CH variant values straight from the inequality's definition.
inline std::array<double, 4> ch_from(const std::array<double, 4> &j, const std::array<double, 2> &a,
                                     const std::array<double, 2> &b) {
    // Pairs: 0 = (a, b), 1 = (a, b'), 2 = (a', b), 3 = (a', b').
    return {j[0] - j[1] + j[2] + j[3] - a[1] - b[0], -j[0] + j[1] + j[2] + j[3] - a[1] - b[1],
            j[0] + j[1] - j[2] + j[3] - a[0] - b[1], j[0] + j[1] + j[2] - j[3] - a[0] - b[0]};
}

}  // namespace oracle
