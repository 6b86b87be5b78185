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

#pragma once

#include <cstddef>
#include <vector>

#include "depthedge/tensor.hpp"

namespace depthedge {

/// Convolution weights. `kernel` has dims (out_ch, in_ch, kh, kw).
struct ConvParams {
    Tensor kernel;
    std::vector<float> bias;
    std::size_t stride = 1;
    std::size_t padding = 0;

    std::size_t out_channels() const { return kernel.n(); }
    std::size_t in_channels() const { return kernel.c(); }
    std::size_t kernel_h() const { return kernel.h(); }
    std::size_t kernel_w() const { return kernel.w(); }
};

/// floor((in + 2*pad - k) / stride) + 1. Throws ConfigError when the
/// kernel does not fit the padded input or stride is zero.
std::size_t conv_output_size(std::size_t in, std::size_t k, std::size_t stride, std::size_t pad);

/// Zero-padded cross-correlation plus bias. Each output pixel accumulates in
/// float32 over input channels, then kernel rows, then kernel columns, and the
/// bias is added last; this order is the same for every Isa and thread count.
Tensor conv2d(const Tensor& input, const ConvParams& params);

enum class ActivationKind { leaky_relu, sigmoid };

struct Activation {
    ActivationKind kind = ActivationKind::leaky_relu;
    float slope = 0.2f;

    static Activation leaky_relu(float slope = 0.2f) { return {ActivationKind::leaky_relu, slope}; }
    static Activation sigmoid() { return {ActivationKind::sigmoid, 0.0f}; }
};

Tensor activation(const Tensor& input, Activation kind);

/// Half-pixel-center bilinear resize with border clamp:
/// src = (dst + 0.5) * in / out - 0.5, clamped to [0, in - 1].
Tensor resize_bilinear(const Tensor& input, std::size_t out_h, std::size_t out_w);

/// resize_bilinear to (h * factor, w * factor). Factor 1 returns a copy.
Tensor upsample_bilinear(const Tensor& input, std::size_t factor);

/// Mean over non-overlapping factor x factor blocks. Spatial dims must be
/// divisible by `factor`.
Tensor avg_pool(const Tensor& input, std::size_t factor);

/// Channel concatenation, `a` first. n, h and w must agree.
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// Border-clamped bilinear lookup. `grid` has dims (n, 2, h, w) holding the
/// continuous source x (channel 0) and y (channel 1) of every output pixel,
/// with pixel centers at integer coordinates. The grid's n, h and w must
/// equal the image's (ShapeError otherwise).
Tensor bilinear_sample(const Tensor& image, const Tensor& grid);

struct ImageGradients {
    Tensor dx;
    Tensor dy;
};

/// Forward differences; the last column of dx and last row of dy are zero.
ImageGradients image_gradients(const Tensor& input);

/// sigma used when none is given: kernel_size / 6.
float default_blur_sigma(std::size_t kernel_size);

/// Normalized 1-D Gaussian weights of length kernel_size.
std::vector<float> gaussian_taps(std::size_t kernel_size, float sigma);

/// Separable Gaussian blur with edge replication (rows first, then columns).
Tensor gaussian_blur(const Tensor& image, std::size_t kernel_size, float sigma);

}  // namespace depthedge
