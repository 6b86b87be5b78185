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
#include <random>
#include <string>

#include "depthedge/errors.hpp"
#include "depthedge/graph.hpp"

namespace depthedge::graph {

namespace {

class Builder {
public:
    explicit Builder(GraphSpec& spec, float slope) : spec_(spec), slope_(slope) {}

    // conv followed by leaky ReLU; returns the activation id.
    std::string conv_act(const std::string& id, const std::string& input, std::size_t in_ch, std::size_t out_ch,
                         std::size_t stride) {
        conv(id, input, in_ch, out_ch, stride);
        LayerSpec act;
        act.id = id + "_act";
        act.op = LayerOp::activation;
        act.inputs = {id};
        act.slope = slope_;
        spec_.layers.push_back(act);
        return act.id;
    }

    std::string conv(const std::string& id, const std::string& input, std::size_t in_ch, std::size_t out_ch,
                     std::size_t stride) {
        LayerSpec layer;
        layer.id = id;
        layer.op = LayerOp::conv;
        layer.inputs = {input};
        layer.conv = ConvSpec{in_ch, out_ch, 3, stride, 1, id + ".weight", id + ".bias"};
        spec_.layers.push_back(layer);
        return id;
    }

    std::string upsample(const std::string& id, const std::string& input) {
        LayerSpec layer;
        layer.id = id;
        layer.op = LayerOp::upsample;
        layer.inputs = {input};
        layer.factor = 2;
        spec_.layers.push_back(layer);
        return id;
    }

    std::string concat(const std::string& id, const std::string& a, const std::string& b) {
        LayerSpec layer;
        layer.id = id;
        layer.op = LayerOp::concat;
        layer.inputs = {a, b};
        spec_.layers.push_back(layer);
        return id;
    }

    std::string head(const std::string& id, const std::string& input, int level) {
        LayerSpec layer;
        layer.id = id;
        layer.op = LayerOp::sigmoid_head;
        layer.inputs = {input};
        layer.level = level;
        spec_.layers.push_back(layer);
        return id;
    }

private:
    GraphSpec& spec_;
    float slope_;
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Portable uniform in [-1, 1): 24 high bits of a 64-bit Mersenne Twister draw.
float symmetric_unit(std::mt19937_64& rng) {
    const auto bits = static_cast<float>(rng() >> 40);
    return bits * (2.0f / 16777216.0f) - 1.0f;
}

}  // namespace

PydnetConfig PydnetConfig::scaled_down(std::size_t divisor) const {
    if (divisor == 0) throw ConfigError("channel divisor must be positive");
    PydnetConfig out = *this;
    for (auto& c : out.encoder_channels) c = std::max<std::size_t>(1, ceil_div(c, divisor));
    for (auto& c : out.decoder_channels) c = std::max<std::size_t>(1, ceil_div(c, divisor));
    return out;
}

GraphSpec pydnet_preset(std::size_t input_w, std::size_t input_h, const PydnetConfig& config) {
    const std::size_t levels = config.encoder_channels.size();
    if (levels == 0 || config.decoder_channels.empty()) throw ConfigError("preset needs encoder and decoder channels");
    const std::size_t divisor = std::size_t{1} << levels;
    if (input_w == 0 || input_h == 0 || input_w % divisor != 0 || input_h % divisor != 0) {
        throw ConfigError("input " + std::to_string(input_w) + "x" + std::to_string(input_h) +
                          " must be divisible by " + std::to_string(divisor));
    }

    GraphSpec spec;
    spec.input_w = input_w;
    spec.input_h = input_h;
    spec.input_channels = 3;
    spec.output_scale = 2;
    spec.pyramid_levels = levels;
    Builder b(spec, config.slope);

    // Encoder: level l halves the resolution, 1/2^l of the input.
    std::vector<std::string> features(levels + 1);
    std::string x = kInputId;
    std::size_t ch = spec.input_channels;
    for (std::size_t l = 1; l <= levels; ++l) {
        const std::string tag = "enc" + std::to_string(l);
        const std::size_t out = config.encoder_channels[l - 1];
        x = b.conv_act(tag + "_down", x, ch, out, 2);
        x = b.conv_act(tag + "_conv", x, out, out, 1);
        features[l] = x;
        ch = out;
    }

    // Decoder, coarsest level first.
    const std::size_t feat_ch = config.decoder_channels.back();
    std::string carried;
    for (std::size_t l = levels; l >= 1; --l) {
        const std::string tag = "dec" + std::to_string(l);
        std::string in = features[l];
        std::size_t in_ch = config.encoder_channels[l - 1];
        if (!carried.empty()) {
            // Transposed convolution realized as bilinear upsample + 3x3 conv.
            const std::string up = b.upsample(tag + "_up", carried);
            const std::string refined = b.conv_act(tag + "_upconv", up, feat_ch, feat_ch, 1);
            in = b.concat(tag + "_concat", in, refined);
            in_ch += feat_ch;
        }
        for (std::size_t i = 0; i < config.decoder_channels.size(); ++i) {
            const std::size_t out = config.decoder_channels[i];
            in = b.conv_act(tag + "_est" + std::to_string(i + 1), in, in_ch, out, 1);
            in_ch = out;
        }
        carried = in;
        const std::string logits = b.conv(tag + "_head", in, in_ch, 1, 1);
        const std::string pred = b.head(tag + "_pred", logits, static_cast<int>(l));
        if (l == 1) spec.output = pred;
    }

    spec.validate();
    return spec;
}

weights::WeightStore random_weights(const GraphSpec& spec, std::uint64_t seed, float bias_scale) {
    std::mt19937_64 rng(seed);
    weights::WeightStore store;
    for (const auto& layer : spec.layers) {
        if (layer.op != LayerOp::conv) continue;
        const auto& c = layer.conv;
        const std::size_t fan_in = c.in_ch * c.kernel * c.kernel;
        const float bound = std::sqrt(6.0f / static_cast<float>(fan_in));
        weights::WeightTensor kernel;
        kernel.dims = {static_cast<std::uint32_t>(c.out_ch), static_cast<std::uint32_t>(c.in_ch),
                       static_cast<std::uint32_t>(c.kernel), static_cast<std::uint32_t>(c.kernel)};
        kernel.values.resize(kernel.element_count());
        for (auto& v : kernel.values) v = bound * symmetric_unit(rng);
        weights::WeightTensor bias;
        bias.dims = {static_cast<std::uint32_t>(c.out_ch)};
        bias.values.resize(c.out_ch);
        for (auto& v : bias.values) v = bias_scale * symmetric_unit(rng);
        store.insert(c.weight_key, std::move(kernel));
        store.insert(c.bias_key, std::move(bias));
    }
    return store;
}

weights::WeightStore zero_weights(const GraphSpec& spec) {
    weights::WeightStore store;
    for (const auto& layer : spec.layers) {
        if (layer.op != LayerOp::conv) continue;
        const auto& c = layer.conv;
        weights::WeightTensor kernel;
        kernel.dims = {static_cast<std::uint32_t>(c.out_ch), static_cast<std::uint32_t>(c.in_ch),
                       static_cast<std::uint32_t>(c.kernel), static_cast<std::uint32_t>(c.kernel)};
        kernel.values.assign(kernel.element_count(), 0.0f);
        store.insert(c.weight_key, std::move(kernel));
        store.insert(c.bias_key, weights::WeightTensor{{static_cast<std::uint32_t>(c.out_ch)},
                                                       std::vector<float>(c.out_ch, 0.0f)});
    }
    return store;
}

}  // namespace depthedge::graph
