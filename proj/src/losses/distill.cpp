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
#include <vector>

#include "depthedge/errors.hpp"
#include "depthedge/kernels.hpp"
#include "depthedge/losses.hpp"

namespace depthedge::losses {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_scales(const Tensor& pred, const Tensor& proxy, std::size_t scales) {
    if (pred.empty() || proxy.empty()) throw ShapeError("gradient_loss: empty tensor");
    require_same_dims(pred.dims(), proxy.dims(), "gradient_loss");
    if (scales == 0 || scales > 31) throw ConfigError("gradient_loss: scales must be in [1, 31]");
    const std::size_t div = std::size_t{1} << (scales - 1);
    if (pred.h() % div != 0 || pred.w() % div != 0) {
        throw ConfigError("gradient_loss: " + std::to_string(pred.h()) + "x" + std::to_string(pred.w()) +
                          " is not divisible by " + std::to_string(div) + " for " + std::to_string(scales) +
                          " scales");
    }
}

// Residual plane pooled by `factor`, in double.
std::vector<double> pooled_residual(const float* pred, const float* proxy, std::size_t h, std::size_t w,
                                    std::size_t factor) {
    const std::size_t ph = h / factor;
    const std::size_t pw = w / factor;
    std::vector<double> out(ph * pw, 0.0);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            out[(y / factor) * pw + x / factor] += static_cast<double>(pred[y * w + x]) - proxy[y * w + x];
    const auto area = static_cast<double>(factor * factor);
    for (auto& v : out) v /= area;
    return out;
}

double tv_sum(const std::vector<double>& r, std::size_t h, std::size_t w) {
    double sum = 0.0;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            if (x + 1 < w) sum += std::abs(r[i + 1] - r[i]);
            if (y + 1 < h) sum += std::abs(r[i + w] - r[i]);
        }
    }
    return sum;
}

// Bilinear taps of resize_bilinear along one axis.
struct Tap {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

std::vector<Tap> resize_taps(std::size_t in, std::size_t out) {
    std::vector<Tap> taps(out);
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    for (std::size_t i = 0; i < out; ++i) {
        const double c = std::clamp((static_cast<double>(i) + 0.5) * scale - 0.5, 0.0, static_cast<double>(in - 1));
        const auto lo = static_cast<std::size_t>(std::floor(c));
        // Match the forward kernel, which rounds the fraction to float.
        taps[i] = {lo, std::min(lo + 1, in - 1), static_cast<double>(static_cast<float>(c - static_cast<double>(lo)))};
    }
    return taps;
}

// Transpose of resize_bilinear from (in_h, in_w) to grad's extents.
Tensor resize_bilinear_adjoint(const Tensor& grad, std::size_t in_h, std::size_t in_w) {
    if (grad.h() == in_h && grad.w() == in_w) return grad;
    const auto ty = resize_taps(in_h, grad.h());
    const auto tx = resize_taps(in_w, grad.w());
    Tensor out(Dims{grad.n(), grad.c(), in_h, in_w});
    std::vector<double> acc(in_h * in_w);
    for (std::size_t n = 0; n < grad.n(); ++n) {
        for (std::size_t c = 0; c < grad.c(); ++c) {
            std::fill(acc.begin(), acc.end(), 0.0);
            const float* g = grad.plane(n, c);
            for (std::size_t y = 0; y < grad.h(); ++y) {
                for (std::size_t x = 0; x < grad.w(); ++x) {
                    const double v = g[y * grad.w() + x];
                    const Tap& a = ty[y];
                    const Tap& b = tx[x];
                    acc[a.lo * in_w + b.lo] += v * (1.0 - a.frac) * (1.0 - b.frac);
                    acc[a.lo * in_w + b.hi] += v * (1.0 - a.frac) * b.frac;
                    acc[a.hi * in_w + b.lo] += v * a.frac * (1.0 - b.frac);
                    acc[a.hi * in_w + b.hi] += v * a.frac * b.frac;
                }
            }
            float* dst = out.plane(n, c);
            for (std::size_t i = 0; i < acc.size(); ++i) dst[i] = static_cast<float>(acc[i]);
        }
    }
    return out;
}

void check_distill(std::span<const Tensor> preds, const Tensor& proxy) {
    if (preds.empty()) throw ConfigError("distill_loss needs at least one prediction scale");
    if (proxy.empty()) throw ShapeError("distill_loss: empty proxy");
    for (float v : proxy.data()) {
        if (!(v >= 0.0f && v <= 1.0f)) throw DomainError("distill_loss: proxy values must lie in [0, 1]");
    }
    for (const auto& p : preds) {
        if (p.empty() || p.n() != proxy.n() || p.c() != proxy.c() || proxy.h() % p.h() != 0 ||
            proxy.w() % p.w() != 0 || proxy.h() / p.h() != proxy.w() / p.w()) {
            throw ShapeError("distill_loss: prediction " + to_string(p.dims()) +
                             " is not an integer downscale of proxy " + to_string(proxy.dims()));
        }
    }
}

float scale_weight(float alpha_s0, std::size_t s) { return alpha_s0 / static_cast<float>(std::size_t{1} << s); }

}  // namespace

double gradient_loss(const Tensor& pred, const Tensor& proxy, std::size_t scales) {
    check_scales(pred, proxy, scales);
    double total = 0.0;
    for (std::size_t k = 0; k < scales; ++k) {
        const std::size_t factor = std::size_t{1} << k;
        const std::size_t ph = pred.h() / factor;
        const std::size_t pw = pred.w() / factor;
        double sum = 0.0;
        for (std::size_t n = 0; n < pred.n(); ++n)
            for (std::size_t c = 0; c < pred.c(); ++c)
                sum += tv_sum(pooled_residual(pred.plane(n, c), proxy.plane(n, c), pred.h(), pred.w(), factor), ph, pw);
        total += sum / static_cast<double>(pred.n() * pred.c() * ph * pw);
    }
    return total;
}

Tensor gradient_loss_grad(const Tensor& pred, const Tensor& proxy, std::size_t scales) {
    check_scales(pred, proxy, scales);
    const std::size_t h = pred.h();
    const std::size_t w = pred.w();
    Tensor grad(pred.dims());
    std::vector<double> acc(h * w);
    for (std::size_t n = 0; n < pred.n(); ++n) {
        for (std::size_t c = 0; c < pred.c(); ++c) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t k = 0; k < scales; ++k) {
                const std::size_t factor = std::size_t{1} << k;
                const std::size_t ph = h / factor;
                const std::size_t pw = w / factor;
                const double count = static_cast<double>(pred.n() * pred.c() * ph * pw);
                const auto r = pooled_residual(pred.plane(n, c), proxy.plane(n, c), h, w, factor);
                std::vector<double> g(ph * pw, 0.0);
                for (std::size_t y = 0; y < ph; ++y) {
                    for (std::size_t x = 0; x < pw; ++x) {
                        const std::size_t i = y * pw + x;
                        if (x + 1 < pw) {
                            const double s = sign(r[i + 1] - r[i]) / count;
                            g[i + 1] += s;
                            g[i] -= s;
                        }
                        if (y + 1 < ph) {
                            const double s = sign(r[i + pw] - r[i]) / count;
                            g[i + pw] += s;
                            g[i] -= s;
                        }
                    }
                }
                const auto area = static_cast<double>(factor * factor);
                for (std::size_t y = 0; y < h; ++y)
                    for (std::size_t x = 0; x < w; ++x) acc[y * w + x] += g[(y / factor) * pw + x / factor] / area;
            }
            float* dst = grad.plane(n, c);
            for (std::size_t i = 0; i < h * w; ++i) dst[i] = static_cast<float>(acc[i]);
        }
    }
    return grad;
}

double distill_loss(std::span<const Tensor> preds, const Tensor& proxy, const DistillWeights& weights) {
    check_distill(preds, proxy);
    double total = 0.0;
    for (std::size_t s = 0; s < preds.size(); ++s) {
        const Tensor up = resize_bilinear(preds[s], proxy.h(), proxy.w());
        double l1 = 0.0;
        for (std::size_t i = 0; i < up.size(); ++i) l1 += std::abs(static_cast<double>(up.data()[i]) - proxy.data()[i]);
        total += weights.alpha_l * l1 / static_cast<double>(up.size());
        const float alpha_s = scale_weight(weights.alpha_s0, s);
        if (alpha_s != 0.0f) total += alpha_s * gradient_loss(up, proxy, weights.gradient_scales);
    }
    return total;
}

std::vector<Tensor> distill_loss_grad(std::span<const Tensor> preds, const Tensor& proxy, const DistillWeights& weights) {
    check_distill(preds, proxy);
    std::vector<Tensor> grads;
    grads.reserve(preds.size());
    for (std::size_t s = 0; s < preds.size(); ++s) {
        const Tensor up = resize_bilinear(preds[s], proxy.h(), proxy.w());
        Tensor g_up(up.dims());
        const double l1_scale = weights.alpha_l / static_cast<double>(up.size());
        for (std::size_t i = 0; i < up.size(); ++i) {
            g_up.data()[i] = static_cast<float>(l1_scale * sign(static_cast<double>(up.data()[i]) - proxy.data()[i]));
        }
        const float alpha_s = scale_weight(weights.alpha_s0, s);
        if (alpha_s != 0.0f) {
            const Tensor g_grad = gradient_loss_grad(up, proxy, weights.gradient_scales);
            for (std::size_t i = 0; i < up.size(); ++i) g_up.data()[i] += alpha_s * g_grad.data()[i];
        }
        grads.push_back(resize_bilinear_adjoint(g_up, preds[s].h(), preds[s].w()));
    }
    return grads;
}

}  // namespace depthedge::losses
