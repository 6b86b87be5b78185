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

#include <map>
#include <set>
#include <string>

#include "depthedge/errors.hpp"
#include "depthedge/graph.hpp"

namespace depthedge::graph {

namespace {

std::size_t arity(LayerOp op) {
    switch (op) {
        case LayerOp::concat:
            return 2;
        default:
            return 1;
    }
}

}  // namespace

std::vector<LayerShape> infer_shapes(const GraphSpec& spec, std::size_t input_h, std::size_t input_w) {
    std::map<std::string, std::size_t> index;
    std::vector<LayerShape> shapes;
    shapes.reserve(spec.layers.size());
    const LayerShape input_shape{spec.input_channels, input_h, input_w};

    auto lookup = [&](const LayerSpec& layer, const std::string& id) -> LayerShape {
        if (id == kInputId) return input_shape;
        auto it = index.find(id);
        if (it == index.end()) {
            throw ConfigError("layer '" + layer.id + "' references '" + id + "', which is not defined before it");
        }
        return shapes[it->second];
    };

    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        if (layer.id.empty() || layer.id == kInputId) throw ConfigError("invalid layer id '" + layer.id + "'");
        if (index.count(layer.id)) throw ConfigError("duplicate layer id '" + layer.id + "'");
        if (layer.inputs.size() != arity(layer.op)) {
            throw ConfigError("layer '" + layer.id + "' expects " + std::to_string(arity(layer.op)) + " input(s), has " +
                              std::to_string(layer.inputs.size()));
        }
        const LayerShape in = lookup(layer, layer.inputs[0]);
        LayerShape out = in;
        switch (layer.op) {
            case LayerOp::conv: {
                const ConvSpec& c = layer.conv;
                if (c.in_ch != in.c) {
                    throw ShapeError("layer '" + layer.id + "' declares " + std::to_string(c.in_ch) +
                                     " input channels but receives " + std::to_string(in.c));
                }
                if (c.out_ch == 0 || c.kernel == 0) throw ConfigError("layer '" + layer.id + "' has empty conv");
                try {
                    out = {c.out_ch, conv_output_size(in.h, c.kernel, c.stride, c.pad),
                           conv_output_size(in.w, c.kernel, c.stride, c.pad)};
                } catch (const ConfigError& e) {
                    throw ConfigError("layer '" + layer.id + "': " + e.what());
                }
                break;
            }
            case LayerOp::upsample:
                if (layer.factor == 0) throw ConfigError("layer '" + layer.id + "' has upsample factor 0");
                out.h *= layer.factor;
                out.w *= layer.factor;
                break;
            case LayerOp::concat: {
                const LayerShape other = lookup(layer, layer.inputs[1]);
                if (other.h != in.h || other.w != in.w) {
                    throw ShapeError("layer '" + layer.id + "' concatenates " + std::to_string(in.h) + "x" +
                                     std::to_string(in.w) + " with " + std::to_string(other.h) + "x" +
                                     std::to_string(other.w));
                }
                out.c = in.c + other.c;
                break;
            }
            case LayerOp::activation:
            case LayerOp::sigmoid_head:
                break;
        }
        index[layer.id] = i;
        shapes.push_back(out);
    }
    return shapes;
}

void GraphSpec::validate() const {
    if (pyramid_levels >= 32) throw ConfigError("pyramid depth too large");
    const std::size_t divisor = std::size_t{1} << pyramid_levels;
    if (input_h == 0 || input_w == 0 || input_h % divisor != 0 || input_w % divisor != 0) {
        throw ConfigError("input " + std::to_string(input_w) + "x" + std::to_string(input_h) +
                          " must be divisible by " + std::to_string(divisor));
    }
    if (output_scale == 0) throw ConfigError("output scale must be positive");
    const auto shapes = infer_shapes(*this, input_h, input_w);

    std::size_t out_index = layers.size();
    std::set<std::string> keys;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& layer = layers[i];
        if (layer.id == output) out_index = i;
        if (layer.op == LayerOp::conv) {
            if (layer.conv.weight_key.empty() || layer.conv.bias_key.empty()) {
                throw ConfigError("conv layer '" + layer.id + "' must name a kernel and a bias entry");
            }
            for (const auto& key : {layer.conv.weight_key, layer.conv.bias_key}) {
                if (!keys.insert(key).second) throw ConfigError("weight key '" + key + "' bound twice");
            }
        }
    }
    if (out_index == layers.size()) throw ConfigError("output layer '" + output + "' is not defined");
    const LayerShape& o = shapes[out_index];
    if (o.c != 1 || o.h * output_scale != input_h || o.w * output_scale != input_w) {
        throw ShapeError("output layer '" + output + "' produces " + std::to_string(o.c) + "x" +
                         std::to_string(o.h) + "x" + std::to_string(o.w) + ", expected 1 channel at 1/" +
                         std::to_string(output_scale) + " of the input");
    }
}

std::uint64_t count_params(const GraphSpec& spec) {
    std::uint64_t total = 0;
    for (const auto& layer : spec.layers) {
        if (layer.op != LayerOp::conv) continue;
        const auto& c = layer.conv;
        total += static_cast<std::uint64_t>(c.out_ch) * c.in_ch * c.kernel * c.kernel + c.out_ch;
    }
    return total;
}

std::uint64_t count_macs(const GraphSpec& spec, std::size_t input_w, std::size_t input_h) {
    const auto shapes = infer_shapes(spec, input_h, input_w);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& layer = spec.layers[i];
        if (layer.op != LayerOp::conv) continue;
        const auto& c = layer.conv;
        total += static_cast<std::uint64_t>(shapes[i].h) * shapes[i].w * c.out_ch * c.in_ch * c.kernel * c.kernel;
    }
    return total;
}

std::uint64_t count_macs(const GraphSpec& spec) { return count_macs(spec, spec.input_w, spec.input_h); }

DepthMap::DepthMap(Tensor values) : values_(std::move(values)) {
    if (values_.n() != 1 || values_.c() != 1) {
        throw ShapeError("depth map needs dims (1, 1, h, w), got " + to_string(values_.dims()));
    }
}

}  // namespace depthedge::graph
