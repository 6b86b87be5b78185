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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "depthedge/errors.hpp"
#include "depthedge/graph.hpp"

namespace depthedge::graph {

namespace {

const weights::WeightTensor& require_entry(const weights::WeightStore& store, const LayerSpec& layer,
                                           const std::string& key, std::vector<std::uint32_t> expected) {
    const weights::WeightTensor* entry = store.find(key);
    if (entry == nullptr) {
        throw ConfigError("layer '" + layer.id + "': weight store has no entry '" + key + "'");
    }
    if (entry->dims != expected) {
        throw ShapeError("layer '" + layer.id + "': entry '" + key + "' has dims " +
                         weights::dims_to_string(entry->dims) + ", expected " + weights::dims_to_string(expected));
    }
    return *entry;
}

// Sigmoid kept strictly inside (0, 1): float sigmoid saturates to exactly
// 1 above ~17 and to 0 below ~-88.
void sigmoid_open_interval(Tensor& t) {
    constexpr float lo = std::numeric_limits<float>::min();
    const float hi = std::nextafter(1.0f, 0.0f);
    for (float& v : t.data()) v = std::clamp(1.0f / (1.0f + std::exp(-v)), lo, hi);
}

}  // namespace

Network build(GraphSpec spec, const weights::WeightStore& store) {
    spec.validate();
    Network net;
    net.conv_params_.resize(spec.layers.size());
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        if (layer.op != LayerOp::conv) continue;
        const ConvSpec& c = layer.conv;
        const auto k32 = static_cast<std::uint32_t>(c.kernel);
        const auto& kernel = require_entry(store, layer, c.weight_key,
                                           {static_cast<std::uint32_t>(c.out_ch), static_cast<std::uint32_t>(c.in_ch), k32, k32});
        const auto& bias = require_entry(store, layer, c.bias_key, {static_cast<std::uint32_t>(c.out_ch)});
        ConvParams& p = net.conv_params_[i];
        p.kernel = kernel.to_tensor();
        p.bias = bias.values;
        p.stride = c.stride;
        p.padding = c.pad;
    }
    net.spec_ = std::move(spec);
    return net;
}

Prediction infer_pyramid(const Network& net, const Tensor& input) {
    const GraphSpec& spec = net.spec();
    const Dims expected{1, spec.input_channels, spec.input_h, spec.input_w};
    if (!(input.dims() == expected)) {
        throw ShapeError("network input must be " + to_string(expected) + ", got " + to_string(input.dims()));
    }

    const std::size_t count = spec.layers.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < count; ++i) index[spec.layers[i].id] = i;

    // Remaining consumers per layer; a value is dropped after its last use.
    std::vector<std::size_t> uses(count, 0);
    for (const auto& layer : spec.layers)
        for (const auto& in : layer.inputs)
            if (in != kInputId) ++uses[index.at(in)];

    std::vector<std::optional<Tensor>> values(count);
    std::vector<std::pair<int, Tensor>> heads;
    const std::size_t output_index = index.at(spec.output);

    auto fetch = [&](const std::string& id) -> const Tensor& {
        return id == kInputId ? input : *values[index.at(id)];
    };
    auto release = [&](const LayerSpec& layer) {
        for (const auto& in : layer.inputs) {
            if (in == kInputId) continue;
            const std::size_t j = index.at(in);
            if (--uses[j] == 0 && j != output_index) values[j].reset();
        }
    };

    for (std::size_t i = 0; i < count; ++i) {
        const LayerSpec& layer = spec.layers[i];
        const Tensor& x = fetch(layer.inputs[0]);
        switch (layer.op) {
            case LayerOp::conv:
                values[i] = conv2d(x, net.conv_params(i));
                break;
            case LayerOp::activation:
                values[i] = activation(x, Activation::leaky_relu(layer.slope));
                break;
            case LayerOp::upsample:
                values[i] = upsample_bilinear(x, layer.factor);
                break;
            case LayerOp::concat:
                values[i] = concat_channels(x, fetch(layer.inputs[1]));
                break;
            case LayerOp::sigmoid_head: {
                Tensor y = x;
                sigmoid_open_interval(y);
                if (i != output_index) heads.emplace_back(layer.level, y);
                values[i] = std::move(y);
                break;
            }
        }
        release(layer);
        if (uses[i] == 0 && i != output_index) values[i].reset();
    }

    Prediction out;
    const Tensor& raw = *values[output_index];
    heads.emplace_back(spec.layers[output_index].level, raw);
    std::sort(heads.begin(), heads.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [level, t] : heads) out.heads.push_back(std::move(t));
    out.depth = DepthMap(upsample_bilinear(raw, spec.output_scale));
    return out;
}

DepthMap infer(const Network& net, const Tensor& input) { return infer_pyramid(net, input).depth; }

Tensor preprocess(const RgbImage& image, std::size_t target_w, std::size_t target_h) {
    if (image.empty()) throw ConfigError("cannot preprocess an empty image");
    if (target_w == 0 || target_h == 0) throw ConfigError("preprocess target must be non-empty");
    Tensor resized = resize_bilinear(to_tensor(image), target_h, target_w);
    for (float& v : resized.data()) v /= 255.0f;
    return resized;
}

}  // namespace depthedge::graph
