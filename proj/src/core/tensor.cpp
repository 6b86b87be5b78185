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

#include "depthedge/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthedge/errors.hpp"
#include "depthedge/image.hpp"

namespace depthedge {

namespace {

void require_positive(const Dims& dims) {
    if (dims.n == 0 || dims.c == 0 || dims.h == 0 || dims.w == 0) {
        throw ShapeError("tensor extents must be >= 1, got " + to_string(dims));
    }
}

}  // namespace

std::string to_string(const Dims& dims) {
    return "(" + std::to_string(dims.n) + ", " + std::to_string(dims.c) + ", " + std::to_string(dims.h) + ", " +
           std::to_string(dims.w) + ")";
}

Tensor::Tensor(Dims dims) : Tensor(dims, 0.0f) {}

Tensor::Tensor(Dims dims, float fill) : dims_(dims) {
    require_positive(dims_);
    data_.assign(dims_.count(), fill);
}

Tensor::Tensor(Dims dims, std::vector<float> values) : dims_(dims), data_(std::move(values)) {
    require_positive(dims_);
    if (data_.size() != dims_.count()) {
        throw ShapeError("tensor " + to_string(dims_) + " needs " + std::to_string(dims_.count()) +
                         " values, got " + std::to_string(data_.size()));
    }
}

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

void require_same_dims(const Dims& a, const Dims& b, const char* what) {
    if (!(a == b)) {
        throw ShapeError(std::string(what) + ": shape mismatch " + to_string(a) + " vs " + to_string(b));
    }
}

Tensor to_tensor(const RgbImage& image) {
    if (image.empty()) throw ShapeError("empty image");
    Tensor out(Dims{1, 3, image.height, image.width});
    for (std::size_t ch = 0; ch < 3; ++ch) {
        float* plane = out.plane(0, ch);
        for (std::size_t i = 0; i < image.width * image.height; ++i) plane[i] = image.pixels[i * 3 + ch];
    }
    return out;
}

RgbImage to_rgb(const Tensor& planar) {
    if (planar.n() != 1 || planar.c() != 3) {
        throw ShapeError("expected a (1, 3, h, w) tensor, got " + to_string(planar.dims()));
    }
    RgbImage image(planar.w(), planar.h());
    for (std::size_t ch = 0; ch < 3; ++ch) {
        const float* plane = planar.plane(0, ch);
        for (std::size_t i = 0; i < image.width * image.height; ++i) {
            const float v = std::nearbyint(std::clamp(plane[i], 0.0f, 255.0f));
            image.pixels[i * 3 + ch] = static_cast<std::uint8_t>(v);
        }
    }
    return image;
}

}  // namespace depthedge
