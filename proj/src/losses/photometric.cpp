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
#include "depthedge/losses.hpp"

namespace depthedge::losses {

namespace {

std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return static_cast<std::size_t>(-i);
    if (i >= static_cast<std::ptrdiff_t>(n)) return 2 * n - 2 - static_cast<std::size_t>(i);
    return static_cast<std::size_t>(i);
}

// Window statistics of one pixel, 3x3 with reflection padding.
struct WindowStats {
    double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
    std::size_t idx[9]{};
};

WindowStats window_stats(const float* a, const float* b, std::size_t h, std::size_t w, std::size_t y, std::size_t x) {
    WindowStats s;
    int k = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx, ++k) {
            const std::size_t sy = reflect(static_cast<std::ptrdiff_t>(y) + dy, h);
            const std::size_t sx = reflect(static_cast<std::ptrdiff_t>(x) + dx, w);
            const std::size_t i = sy * w + sx;
            s.idx[k] = i;
            const double va = a[i];
            const double vb = b[i];
            s.mu_a += va;
            s.mu_b += vb;
            s.aa += va * va;
            s.bb += vb * vb;
            s.ab += va * vb;
        }
    }
    s.mu_a /= 9.0;
    s.mu_b /= 9.0;
    s.aa /= 9.0;
    s.bb /= 9.0;
    s.ab /= 9.0;
    return s;
}

struct SsimTerms {
    double value;
    double a1, a2, b1, b2;
};

SsimTerms ssim_terms(const WindowStats& s) {
    const double var_a = s.aa - s.mu_a * s.mu_a;
    const double var_b = s.bb - s.mu_b * s.mu_b;
    const double cov = s.ab - s.mu_a * s.mu_b;
    SsimTerms t{};
    t.a1 = 2.0 * s.mu_a * s.mu_b + kSsimC1;
    t.a2 = 2.0 * cov + kSsimC2;
    t.b1 = s.mu_a * s.mu_a + s.mu_b * s.mu_b + kSsimC1;
    t.b2 = var_a + var_b + kSsimC2;
    t.value = (t.a1 * t.a2) / (t.b1 * t.b2);
    return t;
}

void check_pair(const Tensor& a, const Tensor& b, const char* what) {
    if (a.empty() || b.empty()) throw ShapeError(std::string(what) + ": empty tensor");
    require_same_dims(a.dims(), b.dims(), what);
    if (a.h() < 2 || a.w() < 2) throw ShapeError(std::string(what) + " needs h, w >= 2");
}

double ssim_error_term(double s) { return std::clamp((1.0 - s) / 2.0, 0.0, 1.0); }

}  // namespace

Tensor ssim(const Tensor& a, const Tensor& b) {
    check_pair(a, b, "ssim");
    Tensor out(a.dims());
    for (std::size_t n = 0; n < a.n(); ++n) {
        for (std::size_t c = 0; c < a.c(); ++c) {
            const float* pa = a.plane(n, c);
            const float* pb = b.plane(n, c);
            float* dst = out.plane(n, c);
            for (std::size_t y = 0; y < a.h(); ++y)
                for (std::size_t x = 0; x < a.w(); ++x)
                    dst[y * a.w() + x] = static_cast<float>(ssim_terms(window_stats(pa, pb, a.h(), a.w(), y, x)).value);
        }
    }
    return out;
}

Tensor photometric_error(const Tensor& target, const Tensor& reconstructed, float alpha) {
    check_pair(target, reconstructed, "photometric_error");
    if (!(alpha >= 0.0f && alpha <= 1.0f)) throw ConfigError("photometric alpha must be in [0, 1]");
    const std::size_t h = target.h();
    const std::size_t w = target.w();
    const auto channels = static_cast<double>(target.c());
    Tensor out(Dims{target.n(), 1, h, w});
    for (std::size_t n = 0; n < target.n(); ++n) {
        float* dst = out.plane(n, 0);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                double ssim_sum = 0.0;
                double l1_sum = 0.0;
                for (std::size_t c = 0; c < target.c(); ++c) {
                    const float* pa = target.plane(n, c);
                    const float* pb = reconstructed.plane(n, c);
                    if (alpha > 0.0f) ssim_sum += ssim_error_term(ssim_terms(window_stats(pa, pb, h, w, y, x)).value);
                    l1_sum += std::abs(static_cast<double>(pa[y * w + x]) - pb[y * w + x]);
                }
                dst[y * w + x] =
                    static_cast<float>(alpha * ssim_sum / channels + (1.0 - alpha) * l1_sum / channels);
            }
        }
    }
    return out;
}

double photometric_error_mean(const Tensor& target, const Tensor& reconstructed, float alpha) {
    const Tensor pe = photometric_error(target, reconstructed, alpha);
    double sum = 0.0;
    for (float v : pe.data()) sum += v;
    return sum / static_cast<double>(pe.size());
}

Tensor photometric_error_mean_grad(const Tensor& target, const Tensor& reconstructed, float alpha) {
    check_pair(target, reconstructed, "photometric_error");
    const std::size_t h = target.h();
    const std::size_t w = target.w();
    const double pixels = static_cast<double>(target.n() * h * w);
    const double channels = static_cast<double>(target.c());
    const double l1_scale = (1.0 - alpha) / (channels * pixels);
    const double ssim_scale = -alpha / (2.0 * channels * pixels);

    Tensor grad(target.dims());
    std::vector<double> acc(h * w);
    for (std::size_t n = 0; n < target.n(); ++n) {
        for (std::size_t c = 0; c < target.c(); ++c) {
            const float* pa = target.plane(n, c);
            const float* pb = reconstructed.plane(n, c);
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t i = 0; i < h * w; ++i) {
                const double d = static_cast<double>(pb[i]) - pa[i];
                acc[i] += l1_scale * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
            }
            if (alpha > 0.0f) {
                for (std::size_t y = 0; y < h; ++y) {
                    for (std::size_t x = 0; x < w; ++x) {
                        const WindowStats s = window_stats(pa, pb, h, w, y, x);
                        const SsimTerms t = ssim_terms(s);
                        const double e = (1.0 - t.value) / 2.0;
                        if (e <= 0.0 || e >= 1.0) continue;  // clamped
                        const double denom = t.b1 * t.b2;
                        const double d_mu_b = 2.0 * s.mu_a * t.a2 / denom - t.value * 2.0 * s.mu_b / t.b1;
                        const double d_cov = 2.0 * t.a1 / denom;
                        const double d_var_b = -t.value / t.b2;
                        const double d_mean_b = d_mu_b - 2.0 * s.mu_b * d_var_b - s.mu_a * d_cov;
                        const double d_mean_bb = d_var_b;
                        const double d_mean_ab = d_cov;
                        for (std::size_t k = 0; k < 9; ++k) {
                            const std::size_t i = s.idx[k];
                            const double local = (d_mean_b + 2.0 * pb[i] * d_mean_bb + pa[i] * d_mean_ab) / 9.0;
                            acc[i] += ssim_scale * local;
                        }
                    }
                }
            }
            float* g = grad.plane(n, c);
            for (std::size_t i = 0; i < h * w; ++i) g[i] = static_cast<float>(acc[i]);
        }
    }
    return grad;
}

AutomaskResult per_pixel_min_with_automask(std::span<const Tensor> pe_warped, std::span<const Tensor> pe_identity) {
    if (pe_warped.empty() || pe_identity.empty()) {
        throw ConfigError("per-pixel minimum needs at least one warped and one identity error map");
    }
    const Dims dims = pe_warped.front().dims();
    if (pe_warped.front().empty()) throw ShapeError("per-pixel minimum: empty error map");
    for (const auto& t : pe_warped) require_same_dims(dims, t.dims(), "per-pixel minimum (warped)");
    for (const auto& t : pe_identity) require_same_dims(dims, t.dims(), "per-pixel minimum (identity)");

    AutomaskResult r{pe_warped.front(), Tensor(dims)};
    auto best = r.pe_min.data();
    for (std::size_t k = 1; k < pe_warped.size(); ++k) {
        auto v = pe_warped[k].data();
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::min(best[i], v[i]);
    }
    auto mask = r.mask.data();
    for (std::size_t i = 0; i < best.size(); ++i) {
        float id_min = pe_identity.front().data()[i];
        for (std::size_t k = 1; k < pe_identity.size(); ++k) id_min = std::min(id_min, pe_identity[k].data()[i]);
        mask[i] = best[i] < id_min ? 1.0f : 0.0f;
    }
    return r;
}

}  // namespace depthedge::losses
