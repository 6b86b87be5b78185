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

// Per-ISA kernel table. Internal to the library.

#pragma once

#include <cstddef>
#include <functional>

#include "depthedge/simd.hpp"

namespace depthedge::backend {

/// One image of a convolution, NCHW planes.
struct ConvProblem {
    const float* input = nullptr;  // in_ch * in_h * in_w
    std::size_t in_ch = 0, in_h = 0, in_w = 0;
    const float* weights = nullptr;  // out_ch * in_ch * kh * kw
    const float* bias = nullptr;     // out_ch
    std::size_t out_ch = 0, kh = 0, kw = 0;
    std::size_t stride = 1, pad = 0;
    float* output = nullptr;  // out_ch * out_h * out_w
    std::size_t out_h = 0, out_w = 0;
};

struct KernelTable {
    void (*conv2d)(const ConvProblem& problem);
    void (*leaky_relu)(const float* in, float* out, std::size_t count, float slope);
    /// Horizontal blur pass over one plane, edge replication.
    void (*blur_rows)(const float* in, float* out, std::size_t h, std::size_t w, const float* taps,
                      std::size_t radius);
    /// Vertical blur pass over one plane, edge replication.
    void (*blur_cols)(const float* in, float* out, std::size_t h, std::size_t w, const float* taps,
                      std::size_t radius);
};

const KernelTable& table_for(Isa isa);
const KernelTable& active_table();

const KernelTable& scalar_table();
#if defined(DEPTHEDGE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(DEPTHEDGE_HAVE_NEON)
const KernelTable& neon_table();
#endif

/// Splits [0, count) into contiguous chunks over num_threads() workers.
/// `body(begin, end)` must only write state owned by its range.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace depthedge::backend
