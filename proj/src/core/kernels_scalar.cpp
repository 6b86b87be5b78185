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

// Scalar reference kernels. The vector variants must reproduce these
// results bit for bit, so nothing here may be reordered or contracted.

#include <algorithm>
#include <cstddef>

#include "backend.hpp"

namespace depthedge::backend {
namespace {

void conv2d_scalar(const ConvProblem& p) {
    const std::size_t in_plane = p.in_h * p.in_w;
    const std::size_t out_plane = p.out_h * p.out_w;
    const std::size_t kernel_size = p.in_ch * p.kh * p.kw;

    parallel_for(p.out_ch, [&](std::size_t oc_begin, std::size_t oc_end) {
        for (std::size_t oc = oc_begin; oc < oc_end; ++oc) {
            const float* wk = p.weights + oc * kernel_size;
            float* out = p.output + oc * out_plane;
            for (std::size_t oy = 0; oy < p.out_h; ++oy) {
                for (std::size_t ox = 0; ox < p.out_w; ++ox) {
                    float acc = 0.0f;
                    for (std::size_t ic = 0; ic < p.in_ch; ++ic) {
                        const float* src = p.input + ic * in_plane;
                        const float* w = wk + ic * p.kh * p.kw;
                        for (std::size_t ky = 0; ky < p.kh; ++ky) {
                            // Signed arithmetic: padding may put the tap outside the image.
                            const auto iy = static_cast<std::ptrdiff_t>(oy * p.stride + ky) -
                                            static_cast<std::ptrdiff_t>(p.pad);
                            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(p.in_h)) continue;
                            for (std::size_t kx = 0; kx < p.kw; ++kx) {
                                const auto ix = static_cast<std::ptrdiff_t>(ox * p.stride + kx) -
                                                static_cast<std::ptrdiff_t>(p.pad);
                                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(p.in_w)) continue;
                                const float prod = w[ky * p.kw + kx] * src[iy * p.in_w + ix];
                                acc = acc + prod;
                            }
                        }
                    }
                    out[oy * p.out_w + ox] = acc + p.bias[oc];
                }
            }
        }
    });
}

void leaky_relu_scalar(const float* in, float* out, std::size_t count, float slope) {
    for (std::size_t i = 0; i < count; ++i) {
        const float x = in[i];
        out[i] = x >= 0.0f ? x : slope * x;
    }
}

void blur_rows_scalar(const float* in, float* out, std::size_t h, std::size_t w, const float* taps,
                      std::size_t radius) {
    const auto last = static_cast<std::ptrdiff_t>(w) - 1;
    for (std::size_t y = 0; y < h; ++y) {
        const float* row = in + y * w;
        for (std::size_t x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (std::size_t t = 0; t <= 2 * radius; ++t) {
                const auto sx = std::clamp(static_cast<std::ptrdiff_t>(x + t) - static_cast<std::ptrdiff_t>(radius),
                                           std::ptrdiff_t{0}, last);
                const float prod = taps[t] * row[sx];
                acc = acc + prod;
            }
            out[y * w + x] = acc;
        }
    }
}

void blur_cols_scalar(const float* in, float* out, std::size_t h, std::size_t w, const float* taps,
                      std::size_t radius) {
    const auto last = static_cast<std::ptrdiff_t>(h) - 1;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (std::size_t t = 0; t <= 2 * radius; ++t) {
                const auto sy = std::clamp(static_cast<std::ptrdiff_t>(y + t) - static_cast<std::ptrdiff_t>(radius),
                                           std::ptrdiff_t{0}, last);
                const float prod = taps[t] * in[sy * w + x];
                acc = acc + prod;
            }
            out[y * w + x] = acc;
        }
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{conv2d_scalar, leaky_relu_scalar, blur_rows_scalar, blur_cols_scalar};
    return table;
}

}  // namespace depthedge::backend
