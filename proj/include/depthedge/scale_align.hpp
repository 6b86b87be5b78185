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


// Metric scale recovery from sparse depth anchors and occlusion masks for
// compositing virtual content against the recovered depth.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "depthedge/graph.hpp"
#include "depthedge/tensor.hpp"

namespace depthedge::align {

struct SparseAnchor {
    std::size_t u = 0;  // column
    std::size_t v = 0;  // row
    double z = 1.0;     // metric depth, > 0
};

enum class FitMode { scale_only, scale_shift };

/// Maps relative inverse depth d to metric inverse depth s * d + b.
struct ScaleModel {
    double scale = 1.0;
    double shift = 0.0;
    std::size_t inlier_count = 0;
    double inlier_ratio = 0.0;
};

struct RansacOptions {
    std::size_t iterations = 100;
    /// Inlier when |s * d + b - 1/z| <= inlier_tol / z.
    double inlier_tol = 0.05;
    FitMode mode = FitMode::scale_only;
    std::uint64_t seed = 0;
};

/// Hypotheses come from minimal samples drawn with std::mt19937_64(seed),
/// index = (rng() * n) >> 64 on 128-bit products. The hypothesis with the
/// most inliers wins (earliest on ties) and is refit by least squares on
/// its inliers. Throws ConfigError when there are no anchors or too few
/// for the mode, DomainError on an anchor outside the map or with z <= 0,
/// DegenerateError when no sample yields a positive scale.
ScaleModel ransac_scale(const graph::DepthMap& pred_inv, std::span<const SparseAnchor> anchors,
                        const RansacOptions& options = {});

struct MetricDepth {
    /// (1, 1, h, w); 0 where invalid.
    Tensor depth;
    /// 1 where s * d + b > 0.
    std::vector<std::uint8_t> valid;
};

MetricDepth metricize(const graph::DepthMap& pred_inv, const ScaleModel& model);

/// 1 where the virtual surface is in front of the real one or the real
/// depth is invalid, 0 where the real surface occludes it. `virtual_depth`
/// is (1, 1, h, w) and may hold +inf where nothing is rendered.
std::vector<std::uint8_t> occlusion_mask(const MetricDepth& real, const Tensor& virtual_depth);

}  // namespace depthedge::align
