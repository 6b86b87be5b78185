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
#include <cstdint>
#include <string>
#include <vector>

#include "depthedge/image.hpp"
#include "depthedge/kernels.hpp"
#include "depthedge/tensor.hpp"
#include "depthedge/weights.hpp"

namespace depthedge::graph {

/// Id of the implicit network input.
inline constexpr const char* kInputId = "input";

enum class LayerOp { conv, activation, upsample, concat, sigmoid_head };

struct ConvSpec {
    std::size_t in_ch = 0;
    std::size_t out_ch = 0;
    std::size_t kernel = 3;
    std::size_t stride = 1;
    std::size_t pad = 1;
    std::string weight_key;
    std::string bias_key;
};

struct LayerSpec {
    std::string id;
    LayerOp op = LayerOp::conv;
    std::vector<std::string> inputs;
    ConvSpec conv;         // conv only
    float slope = 0.2f;    // activation only (leaky ReLU)
    std::size_t factor = 2;  // upsample only
    int level = 0;         // sigmoid_head: pyramid level, 1 = half resolution
};

struct GraphSpec {
    std::vector<LayerSpec> layers;
    std::size_t input_h = 0;
    std::size_t input_w = 0;
    std::size_t input_channels = 3;
    /// Input resolution divided by the resolution of `output`.
    std::size_t output_scale = 2;
    /// Input extents must be divisible by 2^pyramid_levels.
    std::size_t pyramid_levels = 0;
    std::string output;

    /// Structural checks: unique ids, topological order, known inputs, a
    /// designated output, divisible input extents, consistent shapes.
    /// Throws ConfigError or ShapeError.
    void validate() const;
};

/// Spatial/channel extents of one layer's output.
struct LayerShape {
    std::size_t c = 0;
    std::size_t h = 0;
    std::size_t w = 0;
};

/// Propagates shapes through the graph for the given input extents.
std::vector<LayerShape> infer_shapes(const GraphSpec& spec, std::size_t input_h, std::size_t input_w);

struct PydnetConfig {
    std::vector<std::size_t> encoder_channels{16, 32, 64, 96, 128, 192};
    std::vector<std::size_t> decoder_channels{96, 64, 32, 8};
    float slope = 0.2f;

    /// Every channel count divided by `divisor` (rounded up, at least 1).
    PydnetConfig scaled_down(std::size_t divisor) const;
};

/// The pyramidal encoder-decoder: per level a stride-2 and a stride-1 3x3
/// conv; per level a decoder of 3x3 convs (96, 64, 32, 8) and a 1-channel
/// head. Below the coarsest level the 8-channel decoder features are
/// upsampled x2, refined by a 3x3 conv and concatenated with the encoder
/// features. The level-1 head (half resolution) is the output.
/// Throws ConfigError unless width and height are divisible by 2^levels.
GraphSpec pydnet_preset(std::size_t input_w, std::size_t input_h, const PydnetConfig& config = {});

/// Sum over conv layers of out*in*k*k + out.
std::uint64_t count_params(const GraphSpec& spec);

/// Sum over conv layers of out_h*out_w*out*in*k*k. Resampling, concat and
/// activations count as zero.
std::uint64_t count_macs(const GraphSpec& spec, std::size_t input_w, std::size_t input_h);
std::uint64_t count_macs(const GraphSpec& spec);

/// Relative inverse depth in the open interval (0, 1).
class DepthMap {
public:
    DepthMap() = default;
    /// `values` must have dims (1, 1, h, w).
    explicit DepthMap(Tensor values);

    std::size_t width() const { return values_.w(); }
    std::size_t height() const { return values_.h(); }
    float at(std::size_t x, std::size_t y) const { return values_.at(0, 0, y, x); }
    const Tensor& tensor() const { return values_; }
    std::span<const float> values() const { return values_.data(); }

    friend bool operator==(const DepthMap&, const DepthMap&) = default;

private:
    Tensor values_;
};

/// A GraphSpec bound to validated weights. Immutable; infer() may be called
/// concurrently.
class Network {
public:
    const GraphSpec& spec() const { return spec_; }
    /// Bound parameters of conv layer `layer` (index into spec().layers).
    const ConvParams& conv_params(std::size_t layer) const { return conv_params_.at(layer); }

private:
    friend Network build(GraphSpec spec, const weights::WeightStore& store);

    GraphSpec spec_;
    std::vector<ConvParams> conv_params_;  // indexed like spec_.layers; empty for non-conv layers
};

/// Binds weights. Throws ConfigError naming layer and key for a missing
/// entry, ShapeError naming expected and found dims for a mismatch.
Network build(GraphSpec spec, const weights::WeightStore& store);

struct Prediction {
    /// Full input resolution.
    DepthMap depth;
    /// Sigmoid heads ordered by level: heads[0] is level 1 (half resolution).
    std::vector<Tensor> heads;
};

/// Runs the graph on a (1, C, H, W) input matching the spec.
DepthMap infer(const Network& net, const Tensor& input);
Prediction infer_pyramid(const Network& net, const Tensor& input);

/// Bilinear resize to (target_w, target_h) and scaling to [0, 1]; layout (1, 3, h, w).
Tensor preprocess(const RgbImage& image, std::size_t target_w, std::size_t target_h);

/// Random weights with the preset's shapes: He-style uniform kernels, small
/// biases. Deterministic for a seed.
weights::WeightStore random_weights(const GraphSpec& spec, std::uint64_t seed, float bias_scale = 0.01f);

/// All-zero weights for every conv of `spec`.
weights::WeightStore zero_weights(const GraphSpec& spec);

}  // namespace depthedge::graph
