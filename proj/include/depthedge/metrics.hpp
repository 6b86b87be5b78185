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


// Depth evaluation metrics and the two alignment steps used before scoring
// scale-free predictions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace depthedge::metrics {

inline constexpr double kPredictionFloor = 1e-3;
inline constexpr double kOutdoorCap = 80.0;
inline constexpr double kIndoorCap = 10.0;

struct MetricsReport {
    double abs_rel = 0.0;
    double sq_rel = 0.0;
    double rmse = 0.0;
    double rmse_log = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    std::size_t valid_pixels = 0;
};

/// Scores `pred` against `gt` over pixels where `valid` is non-zero. An
/// empty `valid` span means every pixel counts. Predictions are clamped to
/// [kPredictionFloor, cap] and ground truth to at most `cap`.
/// Throws ShapeError on size mismatch, DomainError on an empty mask or
/// non-positive values on valid pixels.
MetricsReport compute_metrics(std::span<const float> pred, std::span<const float> gt,
                              std::span<const std::uint8_t> valid, double cap = kOutdoorCap);

/// Median of a non-empty list (mean of the two middle values for even sizes).
double median(std::vector<double> values);

/// pred * median(gt) / median(pred) over valid pixels; invalid pixels are
/// scaled too.
std::vector<float> median_align(std::span<const float> pred, std::span<const float> gt,
                                std::span<const std::uint8_t> valid);

struct AffineFit {
    double scale = 1.0;
    double shift = 0.0;
};

/// Least-squares (s, b) minimizing sum (s * pred_inv + b - 1 / gt)^2 over
/// valid pixels. Throws DegenerateError when pred_inv is constant there.
AffineFit lsq_align_inverse(std::span<const float> pred_inv, std::span<const float> gt_depth,
                            std::span<const std::uint8_t> valid);

}  // namespace depthedge::metrics
