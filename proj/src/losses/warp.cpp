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
#include <string>

#include "depthedge/errors.hpp"
#include "depthedge/kernels.hpp"
#include "depthedge/losses.hpp"

namespace depthedge::losses {

namespace {

// Points that land behind the source camera are projected from this depth.
constexpr double kMinProjectedDepth = 1e-6;

}  // namespace

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw DomainError("camera focal lengths must be positive");
}

void RelativePose::validate() const {
    const auto& r = rotation;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += r[k * 3 + i] * r[k * 3 + j];
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-6) throw DomainError("rotation is not orthonormal");
        }
    }
    const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                       r[2] * (r[3] * r[7] - r[4] * r[6]);
    if (std::abs(det - 1.0) > 1e-6) throw DomainError("rotation determinant is not +1");
}

Tensor warp_grid(const CameraIntrinsics& k_src, const RelativePose& pose, const CameraIntrinsics& k_ref,
                 const Tensor& depth) {
    k_src.validate();
    k_ref.validate();
    pose.validate();
    if (depth.empty() || depth.c() != 1) throw ShapeError("warp depth must be (n, 1, h, w), got " + to_string(depth.dims()));
    for (float z : depth.data()) {
        if (!(z > 0.0f)) throw DomainError("warp depth must be strictly positive everywhere");
    }

    const auto& r = pose.rotation;
    const auto& t = pose.translation;
    Tensor grid(Dims{depth.n(), 2, depth.h(), depth.w()});
    for (std::size_t n = 0; n < depth.n(); ++n) {
        const float* z = depth.plane(n, 0);
        float* gx = grid.plane(n, 0);
        float* gy = grid.plane(n, 1);
        for (std::size_t y = 0; y < depth.h(); ++y) {
            for (std::size_t x = 0; x < depth.w(); ++x) {
                const std::size_t i = y * depth.w() + x;
                const double d = z[i];
                const double px = (static_cast<double>(x) - k_ref.cx) / k_ref.fx * d;
                const double py = (static_cast<double>(y) - k_ref.cy) / k_ref.fy * d;
                const double pz = d;
                const double qx = r[0] * px + r[1] * py + r[2] * pz + t[0];
                const double qy = r[3] * px + r[4] * py + r[5] * pz + t[1];
                const double qz = std::max(r[6] * px + r[7] * py + r[8] * pz + t[2], kMinProjectedDepth);
                gx[i] = static_cast<float>(k_src.fx * qx / qz + k_src.cx);
                gy[i] = static_cast<float>(k_src.fy * qy / qz + k_src.cy);
            }
        }
    }
    return grid;
}

Tensor warp(const Tensor& source, const CameraIntrinsics& k_src, const RelativePose& pose,
            const CameraIntrinsics& k_ref, const Tensor& depth) {
    if (source.empty() || source.n() != depth.n() || source.h() != depth.h() || source.w() != depth.w()) {
        throw ShapeError("warp: source " + to_string(source.dims()) + " and depth " + to_string(depth.dims()) +
                         " disagree");
    }
    return bilinear_sample(source, warp_grid(k_src, pose, k_ref, depth));
}

}  // namespace depthedge::losses
