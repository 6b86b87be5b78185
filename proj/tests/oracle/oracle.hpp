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


// Brute-force reference evaluations for tests. Written from the operation
// definitions, in double precision, sharing no code with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "depthedge/graph.hpp"
#include "depthedge/tensor.hpp"
#include "depthedge/weights.hpp"

namespace oracle {

using depthedge::Dims;
using depthedge::Tensor;

/// Plain double-precision 4-D array.
struct Array {
    std::size_t n = 0, c = 0, h = 0, w = 0;
    std::vector<double> v;

    Array() = default;
    Array(std::size_t n_, std::size_t c_, std::size_t h_, std::size_t w_) : n(n_), c(c_), h(h_), w(w_), v(n_ * c_ * h_ * w_) {}
    explicit Array(const Tensor& t) : Array(t.n(), t.c(), t.h(), t.w()) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.data()[i];
    }
    double& at(std::size_t in, std::size_t ic, std::size_t y, std::size_t x) { return v[((in * c + ic) * h + y) * w + x]; }
    double at(std::size_t in, std::size_t ic, std::size_t y, std::size_t x) const {
        return v[((in * c + ic) * h + y) * w + x];
    }
};

struct ConvResult {
    Array value;
    /// Sum of |w * x| + |b| per output: the natural scale of rounding error.
    Array magnitude;
};

inline ConvResult conv2d(const Array& x, const Array& k, const std::vector<double>& bias, std::size_t stride,
                         std::size_t pad) {
    const std::size_t oh = (x.h + 2 * pad - k.h) / stride + 1;
    const std::size_t ow = (x.w + 2 * pad - k.w) / stride + 1;
    ConvResult r{Array(x.n, k.n, oh, ow), Array(x.n, k.n, oh, ow)};
    for (std::size_t n = 0; n < x.n; ++n)
        for (std::size_t o = 0; o < k.n; ++o)
            for (std::size_t y = 0; y < oh; ++y)
                for (std::size_t xo = 0; xo < ow; ++xo) {
                    double sum = bias[o];
                    double mag = std::abs(bias[o]);
                    for (std::size_t i = 0; i < x.c; ++i)
                        for (std::size_t ky = 0; ky < k.h; ++ky)
                            for (std::size_t kx = 0; kx < k.w; ++kx) {
                                const long sy = static_cast<long>(y * stride + ky) - static_cast<long>(pad);
                                const long sx = static_cast<long>(xo * stride + kx) - static_cast<long>(pad);
                                if (sy < 0 || sx < 0 || sy >= static_cast<long>(x.h) || sx >= static_cast<long>(x.w)) continue;
                                const double t = k.at(o, i, ky, kx) * x.at(n, i, sy, sx);
                                sum += t;
                                mag += std::abs(t);
                            }
                    r.value.at(n, o, y, xo) = sum;
                    r.magnitude.at(n, o, y, xo) = mag;
                }
    return r;
}

/// Bilinear lookup at continuous (sx, sy), both clamped to the image.
inline double bilinear_at(const Array& a, std::size_t n, std::size_t c, double sx, double sy) {
    sx = std::clamp(sx, 0.0, static_cast<double>(a.w - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(a.h - 1));
    const auto x0 = static_cast<std::size_t>(std::floor(sx));
    const auto y0 = static_cast<std::size_t>(std::floor(sy));
    const std::size_t x1 = std::min(x0 + 1, a.w - 1);
    const std::size_t y1 = std::min(y0 + 1, a.h - 1);
    const double fx = sx - static_cast<double>(x0);
    const double fy = sy - static_cast<double>(y0);
    return (1 - fy) * ((1 - fx) * a.at(n, c, y0, x0) + fx * a.at(n, c, y0, x1)) +
           fy * ((1 - fx) * a.at(n, c, y1, x0) + fx * a.at(n, c, y1, x1));
}

/// Half-pixel-center resize with border clamp.
inline Array resize(const Array& a, std::size_t oh, std::size_t ow) {
    Array r(a.n, a.c, oh, ow);
    for (std::size_t n = 0; n < a.n; ++n)
        for (std::size_t c = 0; c < a.c; ++c)
            for (std::size_t y = 0; y < oh; ++y)
                for (std::size_t x = 0; x < ow; ++x) {
                    const double sx = (x + 0.5) * static_cast<double>(a.w) / static_cast<double>(ow) - 0.5;
                    const double sy = (y + 0.5) * static_cast<double>(a.h) / static_cast<double>(oh) - 0.5;
                    r.at(n, c, y, x) = bilinear_at(a, n, c, sx, sy);
                }
    return r;
}

/// grid channel 0 holds x, channel 1 holds y.
inline Array sample(const Array& image, const Array& grid) {
    Array r(image.n, image.c, grid.h, grid.w);
    for (std::size_t n = 0; n < image.n; ++n)
        for (std::size_t c = 0; c < image.c; ++c)
            for (std::size_t y = 0; y < grid.h; ++y)
                for (std::size_t x = 0; x < grid.w; ++x)
                    r.at(n, c, y, x) = bilinear_at(image, n, c, grid.at(n, 0, y, x), grid.at(n, 1, y, x));
    return r;
}

inline double leaky(double x, double slope) { return x >= 0 ? x : slope * x; }
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Array concat(const Array& a, const Array& b) {
    Array r(a.n, a.c + b.c, a.h, a.w);
    for (std::size_t n = 0; n < a.n; ++n) {
        for (std::size_t c = 0; c < a.c; ++c)
            for (std::size_t i = 0; i < a.h * a.w; ++i) r.v[(n * r.c + c) * a.h * a.w + i] = a.v[(n * a.c + c) * a.h * a.w + i];
        for (std::size_t c = 0; c < b.c; ++c)
            for (std::size_t i = 0; i < a.h * a.w; ++i)
                r.v[(n * r.c + a.c + c) * a.h * a.w + i] = b.v[(n * b.c + c) * a.h * a.w + i];
    }
    return r;
}

inline Array from_weights(const depthedge::weights::WeightTensor& t) {
    std::vector<std::size_t> d(4, 1);
    for (std::size_t i = 0; i < t.dims.size(); ++i) d[4 - t.dims.size() + i] = t.dims[i];
    Array a(d[0], d[1], d[2], d[3]);
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] = t.values[i];
    return a;
}

/// Sequential interpretation of a GraphSpec: every layer evaluated in
/// order, every intermediate kept. Returns the full-resolution depth.
inline Array evaluate_graph(const depthedge::graph::GraphSpec& spec, const depthedge::weights::WeightStore& store,
                            const Array& input) {
    using depthedge::graph::LayerOp;
    std::map<std::string, Array> values;
    values[depthedge::graph::kInputId] = input;
    for (const auto& layer : spec.layers) {
        const Array& x = values.at(layer.inputs[0]);
        Array y;
        switch (layer.op) {
            case LayerOp::conv: {
                const Array k = from_weights(*store.find(layer.conv.weight_key));
                const auto& b = store.find(layer.conv.bias_key)->values;
                y = conv2d(x, k, std::vector<double>(b.begin(), b.end()), layer.conv.stride, layer.conv.pad).value;
                break;
            }
            case LayerOp::activation:
                y = x;
                for (auto& v : y.v) v = leaky(v, layer.slope);
                break;
            case LayerOp::upsample:
                y = resize(x, x.h * layer.factor, x.w * layer.factor);
                break;
            case LayerOp::concat:
                y = concat(x, values.at(layer.inputs[1]));
                break;
            case LayerOp::sigmoid_head:
                y = x;
                for (auto& v : y.v) v = sigmoid(v);
                break;
        }
        values[layer.id] = std::move(y);
    }
    const Array& raw = values.at(spec.output);
    return resize(raw, raw.h * spec.output_scale, raw.w * spec.output_scale);
}

// Pinhole projection of reference pixel (x, y) at depth z into the source view.
inline void project(double x, double y, double z, const double k_ref[4], const double r[9], const double t[3],
                    const double k_src[4], double& u, double& v) {
    const double px = (x - k_ref[2]) * z / k_ref[0];
    const double py = (y - k_ref[3]) * z / k_ref[1];
    const double qx = r[0] * px + r[1] * py + r[2] * z + t[0];
    const double qy = r[3] * px + r[4] * py + r[5] * z + t[1];
    const double qz = r[6] * px + r[7] * py + r[8] * z + t[2];
    u = k_src[0] * qx / qz + k_src[2];
    v = k_src[1] * qy / qz + k_src[3];
}

}  // namespace oracle
