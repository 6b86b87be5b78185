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

#include <cmath>
#include <string>
#include <vector>

#include "depthedge/errors.hpp"
#include "depthedge/losses.hpp"

namespace depthedge::losses {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Edge weights exp(-mean_c |d I|) for one sample; the last column (x) and
// last row (y) carry no difference term.
struct EdgeWeights {
    std::vector<double> x;
    std::vector<double> y;
};

EdgeWeights edge_weights(const Tensor& image, std::size_t n) {
    const std::size_t h = image.h();
    const std::size_t w = image.w();
    EdgeWeights e{std::vector<double>(h * w, 0.0), std::vector<double>(h * w, 0.0)};
    for (std::size_t c = 0; c < image.c(); ++c) {
        const float* p = image.plane(n, c);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const std::size_t i = y * w + x;
                if (x + 1 < w) e.x[i] += std::abs(static_cast<double>(p[i + 1]) - p[i]);
                if (y + 1 < h) e.y[i] += std::abs(static_cast<double>(p[i + w]) - p[i]);
            }
        }
    }
    const auto channels = static_cast<double>(image.c());
    for (auto& v : e.x) v = std::exp(-v / channels);
    for (auto& v : e.y) v = std::exp(-v / channels);
    return e;
}

void check_inputs(const Tensor& depth, const Tensor& image) {
    if (depth.empty() || image.empty()) throw ShapeError("smoothness_loss: empty tensor");
    if (depth.c() != 1 || depth.n() != image.n() || depth.h() != image.h() || depth.w() != image.w()) {
        throw ShapeError("smoothness_loss: depth " + to_string(depth.dims()) + " does not match image " +
                         to_string(image.dims()));
    }
}

double sample_mean(const Tensor& depth, std::size_t n) {
    const float* d = depth.plane(n, 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < depth.dims().plane(); ++i) sum += d[i];
    const double mean = sum / static_cast<double>(depth.dims().plane());
    if (!(mean > 0.0)) throw DomainError("smoothness_loss: mean depth must be positive for mean normalization");
    return mean;
}

}  // namespace

double smoothness_loss(const Tensor& depth, const Tensor& image) {
    check_inputs(depth, image);
    const std::size_t h = depth.h();
    const std::size_t w = depth.w();
    double total = 0.0;
    for (std::size_t n = 0; n < depth.n(); ++n) {
        const double mean = sample_mean(depth, n);
        const EdgeWeights e = edge_weights(image, n);
        const float* d = depth.plane(n, 0);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const std::size_t i = y * w + x;
                if (x + 1 < w) total += std::abs((static_cast<double>(d[i + 1]) - d[i]) / mean) * e.x[i];
                if (y + 1 < h) total += std::abs((static_cast<double>(d[i + w]) - d[i]) / mean) * e.y[i];
            }
        }
    }
    return total / static_cast<double>(depth.size());
}

Tensor smoothness_loss_grad(const Tensor& depth, const Tensor& image) {
    check_inputs(depth, image);
    const std::size_t h = depth.h();
    const std::size_t w = depth.w();
    const std::size_t plane = h * w;
    const double count = static_cast<double>(depth.size());
    Tensor grad(depth.dims());
    std::vector<double> g_norm(plane);
    for (std::size_t n = 0; n < depth.n(); ++n) {
        const double mean = sample_mean(depth, n);
        const EdgeWeights e = edge_weights(image, n);
        const float* d = depth.plane(n, 0);
        std::fill(g_norm.begin(), g_norm.end(), 0.0);
        // Gradient with respect to the normalized depth D* = D / mean.
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const std::size_t i = y * w + x;
                if (x + 1 < w) {
                    const double s = sign(static_cast<double>(d[i + 1]) - d[i]) * e.x[i] / count;
                    g_norm[i + 1] += s;
                    g_norm[i] -= s;
                }
                if (y + 1 < h) {
                    const double s = sign(static_cast<double>(d[i + w]) - d[i]) * e.y[i] / count;
                    g_norm[i + w] += s;
                    g_norm[i] -= s;
                }
            }
        }
        // Chain through the normalization: dD*_i/dD_j = delta_ij / m - D_i / (m^2 P).
        double coupling = 0.0;
        for (std::size_t i = 0; i < plane; ++i) coupling += g_norm[i] * d[i];
        coupling /= mean * mean * static_cast<double>(plane);
        float* g = grad.plane(n, 0);
        for (std::size_t i = 0; i < plane; ++i) g[i] = static_cast<float>(g_norm[i] / mean - coupling);
    }
    return grad;
}

}  // namespace depthedge::losses
