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

#include "depthedge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "backend.hpp"
#include "depthedge/errors.hpp"

namespace depthedge {

namespace {

void require_nonempty(const Tensor& t, const char* what) {
    if (t.empty()) throw ShapeError(std::string(what) + ": empty tensor");
}

// Bilinear tap positions along one axis for a continuous source coordinate.
struct Tap {
    std::size_t lo;
    std::size_t hi;
    float frac;
};

Tap clamp_tap(double coord, std::size_t extent) {
    const double max_coord = static_cast<double>(extent - 1);
    coord = std::clamp(coord, 0.0, max_coord);
    const auto lo = static_cast<std::size_t>(std::floor(coord));
    const std::size_t hi = std::min(lo + 1, extent - 1);
    return {lo, hi, static_cast<float>(coord - static_cast<double>(lo))};
}

float lerp2(const float* plane, std::size_t w, const Tap& ty, const Tap& tx) {
    const float p00 = plane[ty.lo * w + tx.lo];
    const float p01 = plane[ty.lo * w + tx.hi];
    const float p10 = plane[ty.hi * w + tx.lo];
    const float p11 = plane[ty.hi * w + tx.hi];
    const float top = p00 + tx.frac * (p01 - p00);
    const float bottom = p10 + tx.frac * (p11 - p10);
    return top + ty.frac * (bottom - top);
}

}  // namespace

std::size_t conv_output_size(std::size_t in, std::size_t k, std::size_t stride, std::size_t pad) {
    if (stride == 0) throw ConfigError("convolution stride must be positive");
    const std::size_t padded = in + 2 * pad;
    if (k == 0 || padded < k) {
        throw ConfigError("convolution output size (" + std::to_string(in) + " + 2*" + std::to_string(pad) + " - " +
                          std::to_string(k) + ") / " + std::to_string(stride) + " + 1 is not positive");
    }
    return (padded - k) / stride + 1;
}

Tensor conv2d(const Tensor& input, const ConvParams& params) {
    require_nonempty(input, "conv2d input");
    require_nonempty(params.kernel, "conv2d kernel");
    if (input.c() != params.in_channels()) {
        throw ShapeError("conv2d: input " + to_string(input.dims()) + " does not match kernel " +
                         to_string(params.kernel.dims()) + " (input channels " + std::to_string(input.c()) +
                         " vs " + std::to_string(params.in_channels()) + ")");
    }
    if (params.bias.size() != params.out_channels()) {
        throw ShapeError("conv2d: bias length " + std::to_string(params.bias.size()) + " vs " +
                         std::to_string(params.out_channels()) + " output channels");
    }
    const std::size_t out_h = conv_output_size(input.h(), params.kernel_h(), params.stride, params.padding);
    const std::size_t out_w = conv_output_size(input.w(), params.kernel_w(), params.stride, params.padding);

    Tensor out(Dims{input.n(), params.out_channels(), out_h, out_w});
    const auto& kernels = backend::active_table();
    for (std::size_t n = 0; n < input.n(); ++n) {
        backend::ConvProblem p;
        p.input = input.plane(n, 0);
        p.in_ch = input.c();
        p.in_h = input.h();
        p.in_w = input.w();
        p.weights = params.kernel.data().data();
        p.bias = params.bias.data();
        p.out_ch = params.out_channels();
        p.kh = params.kernel_h();
        p.kw = params.kernel_w();
        p.stride = params.stride;
        p.pad = params.padding;
        p.output = out.plane(n, 0);
        p.out_h = out_h;
        p.out_w = out_w;
        kernels.conv2d(p);
    }
    return out;
}

Tensor activation(const Tensor& input, Activation kind) {
    Tensor out(input.dims());
    if (kind.kind == ActivationKind::leaky_relu) {
        backend::active_table().leaky_relu(input.data().data(), out.data().data(), input.size(), kind.slope);
    } else {
        auto src = input.data();
        auto dst = out.data();
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = 1.0f / (1.0f + std::exp(-src[i]));
    }
    return out;
}

Tensor resize_bilinear(const Tensor& input, std::size_t out_h, std::size_t out_w) {
    require_nonempty(input, "resize_bilinear");
    if (out_h == 0 || out_w == 0) throw ConfigError("resize_bilinear: target extents must be positive");
    if (out_h == input.h() && out_w == input.w()) return input;

    const double sy = static_cast<double>(input.h()) / static_cast<double>(out_h);
    const double sx = static_cast<double>(input.w()) / static_cast<double>(out_w);
    std::vector<Tap> xs(out_w);
    for (std::size_t x = 0; x < out_w; ++x) xs[x] = clamp_tap((static_cast<double>(x) + 0.5) * sx - 0.5, input.w());

    Tensor out(Dims{input.n(), input.c(), out_h, out_w});
    for (std::size_t n = 0; n < input.n(); ++n) {
        for (std::size_t c = 0; c < input.c(); ++c) {
            const float* src = input.plane(n, c);
            float* dst = out.plane(n, c);
            for (std::size_t y = 0; y < out_h; ++y) {
                const Tap ty = clamp_tap((static_cast<double>(y) + 0.5) * sy - 0.5, input.h());
                for (std::size_t x = 0; x < out_w; ++x) dst[y * out_w + x] = lerp2(src, input.w(), ty, xs[x]);
            }
        }
    }
    return out;
}

Tensor upsample_bilinear(const Tensor& input, std::size_t factor) {
    if (factor == 0) throw ConfigError("upsample factor must be >= 1");
    return resize_bilinear(input, input.h() * factor, input.w() * factor);
}

Tensor avg_pool(const Tensor& input, std::size_t factor) {
    require_nonempty(input, "avg_pool");
    if (factor == 0 || input.h() % factor != 0 || input.w() % factor != 0) {
        throw ConfigError("avg_pool: spatial dims " + std::to_string(input.h()) + "x" + std::to_string(input.w()) +
                          " not divisible by " + std::to_string(factor));
    }
    if (factor == 1) return input;
    const std::size_t oh = input.h() / factor;
    const std::size_t ow = input.w() / factor;
    const auto area = static_cast<float>(factor * factor);
    Tensor out(Dims{input.n(), input.c(), oh, ow});
    for (std::size_t n = 0; n < input.n(); ++n) {
        for (std::size_t c = 0; c < input.c(); ++c) {
            const float* src = input.plane(n, c);
            float* dst = out.plane(n, c);
            for (std::size_t y = 0; y < oh; ++y) {
                for (std::size_t x = 0; x < ow; ++x) {
                    float sum = 0.0f;
                    for (std::size_t dy = 0; dy < factor; ++dy)
                        for (std::size_t dx = 0; dx < factor; ++dx)
                            sum += src[(y * factor + dy) * input.w() + x * factor + dx];
                    dst[y * ow + x] = sum / area;
                }
            }
        }
    }
    return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    require_nonempty(a, "concat_channels (first operand)");
    require_nonempty(b, "concat_channels (second operand)");
    if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w()) {
        throw ShapeError("concat_channels: " + to_string(a.dims()) + " and " + to_string(b.dims()) +
                         " disagree on n, h or w");
    }
    Tensor out(Dims{a.n(), a.c() + b.c(), a.h(), a.w()});
    const std::size_t plane = a.dims().plane();
    for (std::size_t n = 0; n < a.n(); ++n) {
        std::copy_n(a.plane(n, 0), a.c() * plane, out.plane(n, 0));
        std::copy_n(b.plane(n, 0), b.c() * plane, out.plane(n, a.c()));
    }
    return out;
}

Tensor bilinear_sample(const Tensor& image, const Tensor& grid) {
    require_nonempty(image, "bilinear_sample");
    if (grid.n() != image.n() || grid.c() != 2 || grid.h() != image.h() || grid.w() != image.w()) {
        throw ShapeError("bilinear_sample: grid " + to_string(grid.dims()) + " does not match image " +
                         to_string(image.dims()));
    }
    Tensor out(image.dims());
    for (std::size_t n = 0; n < image.n(); ++n) {
        const float* gx = grid.plane(n, 0);
        const float* gy = grid.plane(n, 1);
        for (std::size_t i = 0; i < image.dims().plane(); ++i) {
            const Tap tx = clamp_tap(gx[i], image.w());
            const Tap ty = clamp_tap(gy[i], image.h());
            for (std::size_t c = 0; c < image.c(); ++c) out.plane(n, c)[i] = lerp2(image.plane(n, c), image.w(), ty, tx);
        }
    }
    return out;
}

ImageGradients image_gradients(const Tensor& input) {
    require_nonempty(input, "image_gradients");
    if (input.h() < 2 || input.w() < 2) {
        throw ShapeError("image_gradients needs h, w >= 2, got " + to_string(input.dims()));
    }
    ImageGradients g{Tensor(input.dims()), Tensor(input.dims())};
    const std::size_t h = input.h();
    const std::size_t w = input.w();
    for (std::size_t n = 0; n < input.n(); ++n) {
        for (std::size_t c = 0; c < input.c(); ++c) {
            const float* src = input.plane(n, c);
            float* dx = g.dx.plane(n, c);
            float* dy = g.dy.plane(n, c);
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x + 1 < w; ++x) dx[y * w + x] = src[y * w + x + 1] - src[y * w + x];
            }
            for (std::size_t y = 0; y + 1 < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) dy[y * w + x] = src[(y + 1) * w + x] - src[y * w + x];
            }
        }
    }
    return g;
}

float default_blur_sigma(std::size_t kernel_size) { return static_cast<float>(kernel_size) / 6.0f; }

std::vector<float> gaussian_taps(std::size_t kernel_size, float sigma) {
    if (kernel_size % 2 == 0) {
        throw ConfigError("gaussian kernel size must be odd, got " + std::to_string(kernel_size));
    }
    if (!(sigma > 0.0f)) throw ConfigError("gaussian sigma must be positive");
    const auto radius = static_cast<std::ptrdiff_t>(kernel_size / 2);
    std::vector<double> w(kernel_size);
    double sum = 0.0;
    for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const double v = std::exp(-static_cast<double>(i * i) / (2.0 * static_cast<double>(sigma) * sigma));
        w[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    std::vector<float> taps(kernel_size);
    for (std::size_t i = 0; i < kernel_size; ++i) taps[i] = static_cast<float>(w[i] / sum);
    return taps;
}

Tensor gaussian_blur(const Tensor& image, std::size_t kernel_size, float sigma) {
    require_nonempty(image, "gaussian_blur");
    const std::vector<float> taps = gaussian_taps(kernel_size, sigma);
    const std::size_t radius = kernel_size / 2;
    const auto& kernels = backend::active_table();
    Tensor tmp(image.dims());
    Tensor out(image.dims());
    for (std::size_t n = 0; n < image.n(); ++n) {
        for (std::size_t c = 0; c < image.c(); ++c) {
            kernels.blur_rows(image.plane(n, c), tmp.plane(n, c), image.h(), image.w(), taps.data(), radius);
            kernels.blur_cols(tmp.plane(n, c), out.plane(n, c), image.h(), image.w(), taps.data(), radius);
        }
    }
    return out;
}

}  // namespace depthedge
