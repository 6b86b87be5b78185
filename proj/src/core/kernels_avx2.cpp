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

// AVX2 variants. Compiled with -mavx2 only (no FMA): lanes hold adjacent
// output pixels and every lane performs the scalar mul-then-add sequence.

#include <immintrin.h>

#include <algorithm>
#include <cstddef>
#include <vector>

#include "backend.hpp"

namespace depthedge::backend {
namespace {

constexpr std::size_t kLanes = 8;

// Zero-padded input split into `stride` column phases so that strided taps
// become contiguous loads: phase r holds padded columns r, r + s, r + 2s, ...
struct PhasedInput {
    std::vector<float> data;
    std::size_t rows = 0;   // padded height
    std::size_t width = 0;  // columns per phase row, including tail slack
    std::size_t stride = 1;

    const float* row(std::size_t ic, std::size_t phase, std::size_t y) const {
        return data.data() + ((ic * stride + phase) * rows + y) * width;
    }
};

PhasedInput make_phased(const ConvProblem& p, std::size_t vector_span) {
    PhasedInput in;
    in.stride = p.stride;
    in.rows = p.in_h + 2 * p.pad;
    const std::size_t padded_w = p.in_w + 2 * p.pad;
    const std::size_t blocks = (p.out_w + vector_span - 1) / vector_span;
    in.width = std::max(blocks * vector_span + (p.kw - 1) / p.stride + 1, (padded_w + p.stride - 1) / p.stride);
    in.data.assign(p.in_ch * p.stride * in.rows * in.width, 0.0f);
    for (std::size_t ic = 0; ic < p.in_ch; ++ic) {
        const float* src = p.input + ic * p.in_h * p.in_w;
        for (std::size_t y = 0; y < p.in_h; ++y) {
            for (std::size_t x = 0; x < p.in_w; ++x) {
                const std::size_t px = x + p.pad;
                float* dst = in.data.data() + ((ic * p.stride + px % p.stride) * in.rows + y + p.pad) * in.width;
                dst[px / p.stride] = src[y * p.in_w + x];
            }
        }
    }
    return in;
}

// Weights reordered to [oc_block][ic][ky][kx][o] so each tap broadcasts
// from consecutive memory.
std::vector<float> pack_weights(const ConvProblem& p, std::size_t oc_begin, std::size_t block) {
    const std::size_t taps = p.kh * p.kw;
    std::vector<float> packed(p.in_ch * taps * block);
    for (std::size_t o = 0; o < block; ++o) {
        const float* w = p.weights + (oc_begin + o) * p.in_ch * taps;
        for (std::size_t i = 0; i < p.in_ch * taps; ++i) packed[i * block + o] = w[i];
    }
    return packed;
}

template <std::size_t OCB, std::size_t NV>
void conv_row_block(const ConvProblem& p, const PhasedInput& in, const float* packed, std::size_t oc0,
                    std::size_t oy) {
    const std::size_t out_plane = p.out_h * p.out_w;
    const std::size_t span = NV * kLanes;
    for (std::size_t x0 = 0; x0 < p.out_w; x0 += span) {
        __m256 acc[OCB][NV];
        for (std::size_t o = 0; o < OCB; ++o)
            for (std::size_t v = 0; v < NV; ++v) acc[o][v] = _mm256_setzero_ps();

        const float* w = packed;
        for (std::size_t ic = 0; ic < p.in_ch; ++ic) {
            for (std::size_t ky = 0; ky < p.kh; ++ky) {
                const std::size_t iy = oy * p.stride + ky;
                for (std::size_t kx = 0; kx < p.kw; ++kx, w += OCB) {
                    const float* src = in.row(ic, kx % p.stride, iy) + x0 + kx / p.stride;
                    __m256 x[NV];
                    for (std::size_t v = 0; v < NV; ++v) x[v] = _mm256_loadu_ps(src + v * kLanes);
                    for (std::size_t o = 0; o < OCB; ++o) {
                        const __m256 wv = _mm256_broadcast_ss(w + o);
                        for (std::size_t v = 0; v < NV; ++v) {
                            acc[o][v] = _mm256_add_ps(acc[o][v], _mm256_mul_ps(wv, x[v]));
                        }
                    }
                }
            }
        }

        const std::size_t valid = std::min(span, p.out_w - x0);
        for (std::size_t o = 0; o < OCB; ++o) {
            const __m256 b = _mm256_set1_ps(p.bias[oc0 + o]);
            float* dst = p.output + (oc0 + o) * out_plane + oy * p.out_w + x0;
            if (valid == span) {
                for (std::size_t v = 0; v < NV; ++v) _mm256_storeu_ps(dst + v * kLanes, _mm256_add_ps(acc[o][v], b));
            } else {
                alignas(32) float tmp[NV * kLanes];
                for (std::size_t v = 0; v < NV; ++v) _mm256_store_ps(tmp + v * kLanes, _mm256_add_ps(acc[o][v], b));
                std::copy(tmp, tmp + valid, dst);
            }
        }
    }
}

template <std::size_t NV>
void conv2d_with_span(const ConvProblem& p) {
    constexpr std::size_t kBlock = 4;
    const PhasedInput in = make_phased(p, NV * kLanes);

    // Output-channel groups: full blocks of four, then single channels.
    struct Group {
        std::size_t oc;
        std::size_t size;
        std::vector<float> packed;
    };
    std::vector<Group> groups;
    std::size_t oc = 0;
    for (; oc + kBlock <= p.out_ch; oc += kBlock) groups.push_back({oc, kBlock, pack_weights(p, oc, kBlock)});
    for (; oc < p.out_ch; ++oc) groups.push_back({oc, 1, pack_weights(p, oc, 1)});

    parallel_for(groups.size() * p.out_h, [&](std::size_t begin, std::size_t end) {
        for (std::size_t task = begin; task < end; ++task) {
            const Group& g = groups[task / p.out_h];
            const std::size_t oy = task % p.out_h;
            if (g.size == kBlock) {
                conv_row_block<kBlock, NV>(p, in, g.packed.data(), g.oc, oy);
            } else {
                conv_row_block<1, NV>(p, in, g.packed.data(), g.oc, oy);
            }
        }
    });
}

void conv2d_avx2(const ConvProblem& p) {
    // Twelve accumulators plus three inputs and a broadcast fill the 16 ymm registers.
    if (p.out_w <= kLanes) {
        conv2d_with_span<1>(p);
    } else if (p.out_w <= 2 * kLanes) {
        conv2d_with_span<2>(p);
    } else {
        conv2d_with_span<3>(p);
    }
}

void leaky_relu_avx2(const float* in, float* out, std::size_t count, float slope) {
    const __m256 s = _mm256_set1_ps(slope);
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + kLanes <= count; i += kLanes) {
        const __m256 x = _mm256_loadu_ps(in + i);
        const __m256 keep = _mm256_cmp_ps(x, zero, _CMP_GE_OQ);
        _mm256_storeu_ps(out + i, _mm256_blendv_ps(_mm256_mul_ps(s, x), x, keep));
    }
    for (; i < count; ++i) out[i] = in[i] >= 0.0f ? in[i] : slope * in[i];
}

void blur_rows_avx2(const float* in, float* out, std::size_t h, std::size_t w, const float* taps,
                    std::size_t radius) {
    const std::size_t taps_n = 2 * radius + 1;
    parallel_for(h, [&](std::size_t y0, std::size_t y1) {
        std::vector<float> ext(w + 2 * radius);
        for (std::size_t y = y0; y < y1; ++y) {
            const float* row = in + y * w;
            std::fill(ext.begin(), ext.begin() + radius, row[0]);
            std::copy(row, row + w, ext.begin() + radius);
            std::fill(ext.begin() + radius + w, ext.end(), row[w - 1]);
            float* dst = out + y * w;
            std::size_t x = 0;
            for (; x + kLanes <= w; x += kLanes) {
                __m256 acc = _mm256_setzero_ps();
                for (std::size_t t = 0; t < taps_n; ++t) {
                    acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(taps[t]), _mm256_loadu_ps(&ext[x + t])));
                }
                _mm256_storeu_ps(dst + x, acc);
            }
            for (; x < w; ++x) {
                float acc = 0.0f;
                for (std::size_t t = 0; t < taps_n; ++t) {
                    const float prod = taps[t] * ext[x + t];
                    acc = acc + prod;
                }
                dst[x] = acc;
            }
        }
    });
}

void blur_cols_avx2(const float* in, float* out, std::size_t h, std::size_t w, const float* taps,
                    std::size_t radius) {
    const std::size_t taps_n = 2 * radius + 1;
    const auto last = static_cast<std::ptrdiff_t>(h) - 1;
    parallel_for(h, [&](std::size_t y0, std::size_t y1) {
        std::vector<const float*> rows(taps_n);
        for (std::size_t y = y0; y < y1; ++y) {
            for (std::size_t t = 0; t < taps_n; ++t) {
                const auto sy = std::clamp(static_cast<std::ptrdiff_t>(y + t) - static_cast<std::ptrdiff_t>(radius),
                                           std::ptrdiff_t{0}, last);
                rows[t] = in + sy * w;
            }
            float* dst = out + y * w;
            std::size_t x = 0;
            for (; x + kLanes <= w; x += kLanes) {
                __m256 acc = _mm256_setzero_ps();
                for (std::size_t t = 0; t < taps_n; ++t) {
                    acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(taps[t]), _mm256_loadu_ps(rows[t] + x)));
                }
                _mm256_storeu_ps(dst + x, acc);
            }
            for (; x < w; ++x) {
                float acc = 0.0f;
                for (std::size_t t = 0; t < taps_n; ++t) {
                    const float prod = taps[t] * rows[t][x];
                    acc = acc + prod;
                }
                dst[x] = acc;
            }
        }
    });
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{conv2d_avx2, leaky_relu_avx2, blur_rows_avx2, blur_cols_avx2};
    return table;
}

}  // namespace depthedge::backend
