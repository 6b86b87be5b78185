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
#include <span>
#include <string>
#include <vector>

namespace depthedge {

/// Extents of a rank-4 NCHW tensor. All extents are at least 1.
struct Dims {
    std::size_t n = 1;
    std::size_t c = 1;
    std::size_t h = 1;
    std::size_t w = 1;

    std::size_t count() const { return n * c * h * w; }
    std::size_t plane() const { return h * w; }

    friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& dims);

/// Dense float32 tensor in row-major (n, c, h, w) order.
class Tensor {
public:
    Tensor() = default;
    /// Zero-filled tensor. Throws ShapeError when any extent is zero.
    explicit Tensor(Dims dims);
    Tensor(Dims dims, float fill);
    /// Takes ownership of `values`; its length must equal dims.count().
    Tensor(Dims dims, std::vector<float> values);

    const Dims& dims() const { return dims_; }
    std::size_t n() const { return dims_.n; }
    std::size_t c() const { return dims_.c; }
    std::size_t h() const { return dims_.h; }
    std::size_t w() const { return dims_.w; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    float* plane(std::size_t n, std::size_t c) { return data_.data() + (n * dims_.c + c) * dims_.plane(); }
    const float* plane(std::size_t n, std::size_t c) const {
        return data_.data() + (n * dims_.c + c) * dims_.plane();
    }

    float& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) {
        return data_[((n * dims_.c + c) * dims_.h + y) * dims_.w + x];
    }
    float at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
        return data_[((n * dims_.c + c) * dims_.h + y) * dims_.w + x];
    }

    std::vector<float>& storage() { return data_; }
    const std::vector<float>& storage() const { return data_; }

    /// True when every element is finite.
    bool all_finite() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Dims dims_{0, 0, 0, 0};
    std::vector<float> data_;
};

/// Throws ShapeError naming both shapes when `a` and `b` differ.
void require_same_dims(const Dims& a, const Dims& b, const char* what);

}  // namespace depthedge
