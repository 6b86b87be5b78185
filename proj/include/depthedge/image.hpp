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
#include <vector>

#include "depthedge/tensor.hpp"

namespace depthedge {

/// Interleaved 8-bit RGB image, rows top to bottom.
struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    RgbImage() = default;
    RgbImage(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), pixels(w * h * 3, fill) {}

    bool empty() const { return width == 0 || height == 0; }
    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t ch) { return pixels[(y * width + x) * 3 + ch]; }
    std::uint8_t at(std::size_t x, std::size_t y, std::size_t ch) const { return pixels[(y * width + x) * 3 + ch]; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Planar (1, 3, h, w) tensor holding the raw 0..255 values.
Tensor to_tensor(const RgbImage& image);

/// Rounds to nearest and saturates to 0..255. Expects a (1, 3, h, w) tensor.
RgbImage to_rgb(const Tensor& planar);

}  // namespace depthedge
