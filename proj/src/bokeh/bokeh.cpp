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


#include "depthedge/bokeh.hpp"

#include "depthedge/errors.hpp"
#include "depthedge/kernels.hpp"

namespace depthedge::bokeh {

RgbImage blur_rgb(const RgbImage& image, std::size_t kernel_size, float sigma) {
    if (image.empty()) throw ShapeError("blur_rgb: empty image");
    if (!(sigma > 0.0f)) sigma = default_blur_sigma(kernel_size);
    return to_rgb(gaussian_blur(to_tensor(image), kernel_size, sigma));
}

RgbImage apply_bokeh(const RgbImage& image, const graph::DepthMap& inv_depth, const BokehOptions& options) {
    if (!(options.tau > 0.0f && options.tau < 1.0f)) throw ConfigError("bokeh tau must lie in (0, 1)");
    if (image.empty()) throw ShapeError("apply_bokeh: empty image");
    if (inv_depth.values().empty()) throw ShapeError("apply_bokeh: empty depth map");

    Tensor depth = inv_depth.tensor();
    if (depth.h() != image.height || depth.w() != image.width) depth = resize_bilinear(depth, image.height, image.width);

    const RgbImage blurred = blur_rgb(image, options.kernel_size, options.sigma);
    RgbImage out = image;
    auto d = depth.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool near = d[i] > options.tau;
        if (near == options.invert_selection) continue;
        for (std::size_t ch = 0; ch < 3; ++ch) out.pixels[i * 3 + ch] = blurred.pixels[i * 3 + ch];
    }
    return out;
}

}  // namespace depthedge::bokeh
