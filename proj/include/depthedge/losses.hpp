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

// Training signals as forward functions: view-synthesis warping,
// photometric error, edge-aware smoothness, per-pixel minimum with
// automasking and the proxy-distillation objective. Each scalar loss also
// has a hand-derived gradient (the `_grad` functions) so it can be checked
// against finite differences.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "depthedge/tensor.hpp"

namespace depthedge::losses {

struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    /// Throws DomainError unless fx, fy > 0.
    void validate() const;
};

struct RelativePose {
    /// Row-major 3x3 rotation taking reference-camera points to the source camera.
    std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
    std::array<double, 3> translation{0, 0, 0};

    static RelativePose identity() { return {}; }
    /// Throws DomainError unless the rotation is orthonormal with det +1 (within 1e-6).
    void validate() const;
};

/// Source coordinates (n, 2, h, w) of every reference pixel: back-project
/// with `depth` and K_ref, apply (R, T), project with K_src.
Tensor warp_grid(const CameraIntrinsics& k_src, const RelativePose& pose, const CameraIntrinsics& k_ref,
                 const Tensor& depth);

/// Reconstruction of the reference view by bilinear sampling of `source`
/// at warp_grid(). `depth` is metric depth, (n, 1, h, w), strictly positive.
Tensor warp(const Tensor& source, const CameraIntrinsics& k_src, const RelativePose& pose,
            const CameraIntrinsics& k_ref, const Tensor& depth);

inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;
inline constexpr float kDefaultPhotometricAlpha = 0.85f;

/// Per-pixel, per-channel SSIM over 3x3 mean-pooled statistics with
/// reflection padding of one pixel.
Tensor ssim(const Tensor& a, const Tensor& b);

/// alpha * (1 - SSIM) / 2 + (1 - alpha) * |I - I_hat|, both terms averaged
/// over channels. Returns (n, 1, h, w). The SSIM term is clamped to [0, 1].
Tensor photometric_error(const Tensor& target, const Tensor& reconstructed, float alpha = kDefaultPhotometricAlpha);
double photometric_error_mean(const Tensor& target, const Tensor& reconstructed,
                              float alpha = kDefaultPhotometricAlpha);
/// d photometric_error_mean / d reconstructed.
Tensor photometric_error_mean_grad(const Tensor& target, const Tensor& reconstructed,
                                   float alpha = kDefaultPhotometricAlpha);

/// Edge-aware smoothness of mean-normalized inverse depth. `depth` is
/// (n, 1, h, w); `image` is (n, c, h, w). Throws DomainError when a
/// sample's mean depth is not positive.
double smoothness_loss(const Tensor& depth, const Tensor& image);
/// d smoothness_loss / d depth.
Tensor smoothness_loss_grad(const Tensor& depth, const Tensor& image);

struct AutomaskResult {
    Tensor pe_min;
    /// 1 where the best warped error beats the best identity error, else 0.
    Tensor mask;
};

/// Throws ConfigError on empty lists, ShapeError on mismatched maps.
AutomaskResult per_pixel_min_with_automask(std::span<const Tensor> pe_warped, std::span<const Tensor> pe_identity);

inline constexpr std::size_t kDefaultGradientScales = 4;

/// Multi-scale gradient matching on the residual R = pred - proxy:
/// sum over k < scales of mean(|dx R_k| + |dy R_k|), R_k = R average-pooled
/// by 2^k. Throws ConfigError when dims are not divisible by 2^(scales-1).
double gradient_loss(const Tensor& pred, const Tensor& proxy, std::size_t scales = kDefaultGradientScales);
/// d gradient_loss / d pred.
Tensor gradient_loss_grad(const Tensor& pred, const Tensor& proxy, std::size_t scales = kDefaultGradientScales);

struct DistillWeights {
    float alpha_l = 1.0f;
    /// Weight of the gradient term at the finest scale, halved per coarser scale.
    float alpha_s0 = 0.5f;
    std::size_t gradient_scales = kDefaultGradientScales;
};

/// Sum over prediction scales s (0 = finest) of
/// alpha_l * mean|up(D_s) - D_gt| + alpha_s0 / 2^s * gradient_loss(up(D_s), D_gt),
/// where up() is bilinear upsampling to the proxy resolution.
double distill_loss(std::span<const Tensor> preds, const Tensor& proxy, const DistillWeights& weights = {});
/// Gradient with respect to each prediction, same dims as `preds`.
std::vector<Tensor> distill_loss_grad(std::span<const Tensor> preds, const Tensor& proxy,
                                      const DistillWeights& weights = {});

}  // namespace depthedge::losses
