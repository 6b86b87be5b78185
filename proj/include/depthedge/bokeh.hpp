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


// Depth-aware blur: pixels whose relative inverse depth exceeds a threshold
// are replaced by a Gaussian-blurred copy of the image.

#pragma once

#include <cstddef>

#include "depthedge/graph.hpp"
#include "depthedge/image.hpp"

namespace depthedge::bokeh {

struct BokehOptions {
    float tau = 0.7f;
    std::size_t kernel_size = 25;
    /// Non-positive selects default_blur_sigma(kernel_size).
    float sigma = 0.0f;
    /// Blur pixels with inverse depth <= tau instead of > tau.
    bool invert_selection = false;
};

/// The whole image blurred once with gaussian_blur, rounded back to 8 bits.
RgbImage blur_rgb(const RgbImage& image, std::size_t kernel_size, float sigma);

/// Per-pixel choice between `image` and blur_rgb(image). `inv_depth` is
/// bilinearly resized to the image when the sizes differ. Throws
/// ConfigError when tau is outside (0, 1).
RgbImage apply_bokeh(const RgbImage& image, const graph::DepthMap& inv_depth, const BokehOptions& options = {});

}  // namespace depthedge::bokeh
