// Copyright 2026-present the depthedge project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Seeded test inputs and the finite-difference gradient checker.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "depthedge/tensor.hpp"
#include "depthedge/weights.hpp"

namespace support {

using depthedge::Dims;
using depthedge::Tensor;

inline Tensor random_tensor(const Dims& dims, std::mt19937_64& rng, float lo = -1.0f, float hi = 1.0f) {
    std::uniform_real_distribution<float> dist(lo, hi);
    Tensor t(dims);
    for (float& v : t.data()) v = dist(rng);
    return t;
}

/// Relative error with a floor on the denominator.
inline double rel_error(double got, double want, double floor = 1e-12) {
    return std::abs(got - want) / std::max({std::abs(want), std::abs(got), floor});
}

struct FdReport {
    double worst = 0.0;        // worst relative error over accepted directions
    int accepted = 0;
    int rejected = 0;          // directions that straddled a kink
};

/// Checks `grad` against central differences of `loss` along `directions`
/// random unit vectors. The parameters are a flat float vector; `loss`
/// evaluates it. A direction is rejected (and redrawn) when its forward and
/// backward one-sided differences disagree by more than `kink_tol`
/// relative, which happens only when a non-differentiable point lies within
/// h of x along that direction.
inline FdReport fd_check(const std::vector<float>& x, const std::vector<double>& grad,
                         const std::function<double(const std::vector<float>&)>& loss, std::uint64_t seed,
                         int directions = 5, double h = 1e-3, double kink_tol = 5e-3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    FdReport report;
    const double f0 = loss(x);
    while (report.accepted < directions && report.rejected < 200) {
        std::vector<double> v(x.size());
        double norm = 0.0;
        for (auto& e : v) {
            e = normal(rng);
            norm += e * e;
        }
        norm = std::sqrt(norm);
        std::vector<float> xp(x), xm(x);
        double g_dot = 0.0;
        double span = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            xp[i] = static_cast<float>(x[i] + h * v[i] / norm);
            xm[i] = static_cast<float>(x[i] - h * v[i] / norm);
            // Realized displacement after float rounding.
            const double d = static_cast<double>(xp[i]) - xm[i];
            g_dot += grad[i] * d;
            span += d * d;
        }
        const double fp = loss(xp);
        const double fm = loss(xm);
        const double fwd = fp - f0;
        const double bwd = f0 - fm;
        if (std::abs(fwd - bwd) > kink_tol * (std::abs(fwd) + std::abs(bwd)) + 1e-15) {
            ++report.rejected;
            continue;
        }
        report.worst = std::max(report.worst, rel_error(fp - fm, g_dot, 1e-9 * std::sqrt(span)));
        ++report.accepted;
    }
    if (report.accepted < directions) report.worst = INFINITY;
    return report;
}

/// Store with fuzzed names (including multi-byte UTF-8), ranks 1-4 and
/// dims up to `max_dim`.
inline depthedge::weights::WeightStore random_store(std::mt19937_64& rng, std::size_t max_entries = 6,
                                                    std::uint32_t max_dim = 64) {
    static const char* const kPieces[] = {"enc", "dec", ".", "_", "w", "b", "\xc3\xa9", "\xe2\x82\xac", "7", "Z"};
    depthedge::weights::WeightStore store;
    const std::size_t entries = rng() % (max_entries + 1);
    std::uniform_real_distribution<float> value(-1e3f, 1e3f);
    while (store.size() < entries) {
        std::string name;
        const std::size_t parts = 1 + rng() % 6;
        for (std::size_t i = 0; i < parts; ++i) name += kPieces[rng() % std::size(kPieces)];
        depthedge::weights::WeightTensor t;
        const std::size_t rank = 1 + rng() % 4;
        std::size_t count = 1;
        for (std::size_t i = 0; i < rank; ++i) {
            // Keep total size modest: later dims shrink when the product grows.
            const std::uint32_t cap = count > 4096 ? 2 : max_dim;
            t.dims.push_back(1 + static_cast<std::uint32_t>(rng() % cap));
            count *= t.dims.back();
        }
        t.values.resize(count);
        for (auto& v : t.values) v = value(rng);
        store.insert(name, std::move(t));
    }
    return store;
}

}  // namespace support
