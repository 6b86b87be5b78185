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


#include "depthedge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthedge/errors.hpp"

namespace depthedge::metrics {

namespace {

void check_sizes(std::size_t a, std::size_t b, std::span<const std::uint8_t> valid, const char* what) {
    if (a != b || (!valid.empty() && valid.size() != a)) {
        throw ShapeError(std::string(what) + ": size mismatch (" + std::to_string(a) + ", " + std::to_string(b) +
                         ", mask " + std::to_string(valid.size()) + ")");
    }
}

bool is_valid(std::span<const std::uint8_t> valid, std::size_t i) { return valid.empty() || valid[i] != 0; }

}  // namespace

MetricsReport compute_metrics(std::span<const float> pred, std::span<const float> gt,
                              std::span<const std::uint8_t> valid, double cap) {
    check_sizes(pred.size(), gt.size(), valid, "compute_metrics");
    if (!(cap > kPredictionFloor)) throw ConfigError("depth cap must exceed the prediction floor");

    double abs_rel = 0, sq_rel = 0, sq = 0, sq_log = 0;
    std::size_t n = 0, a1 = 0, a2 = 0, a3 = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!is_valid(valid, i)) continue;
        if (!(pred[i] > 0.0f) || !(gt[i] > 0.0f)) {
            throw DomainError("compute_metrics: non-positive value at valid pixel " + std::to_string(i));
        }
        const double p = std::clamp(static_cast<double>(pred[i]), kPredictionFloor, cap);
        const double g = std::min(static_cast<double>(gt[i]), cap);
        const double d = p - g;
        abs_rel += std::abs(d) / g;
        sq_rel += d * d / g;
        sq += d * d;
        const double dl = std::log(p) - std::log(g);
        sq_log += dl * dl;
        const double ratio = std::max(p / g, g / p);
        if (ratio < 1.25) ++a1;
        if (ratio < 1.25 * 1.25) ++a2;
        if (ratio < 1.25 * 1.25 * 1.25) ++a3;
        ++n;
    }
    if (n == 0) throw DomainError("compute_metrics: no valid pixels");

    const auto count = static_cast<double>(n);
    MetricsReport r;
    r.abs_rel = abs_rel / count;
    r.sq_rel = sq_rel / count;
    r.rmse = std::sqrt(sq / count);
    r.rmse_log = std::sqrt(sq_log / count);
    r.a1 = static_cast<double>(a1) / count;
    r.a2 = static_cast<double>(a2) / count;
    r.a3 = static_cast<double>(a3) / count;
    r.valid_pixels = n;
    return r;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of an empty list");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + (upper - lower) / 2.0;
}

std::vector<float> median_align(std::span<const float> pred, std::span<const float> gt,
                                std::span<const std::uint8_t> valid) {
    check_sizes(pred.size(), gt.size(), valid, "median_align");
    std::vector<double> p;
    std::vector<double> g;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!is_valid(valid, i)) continue;
        if (!(pred[i] > 0.0f) || !(gt[i] > 0.0f)) {
            throw DomainError("median_align: non-positive value at valid pixel " + std::to_string(i));
        }
        p.push_back(pred[i]);
        g.push_back(gt[i]);
    }
    if (p.empty()) throw DomainError("median_align: no valid pixels");
    const double mp = median(std::move(p));
    const double mg = median(std::move(g));
    if (!(mp > 0.0) || !(mg > 0.0)) throw DomainError("median_align: zero median");
    const double ratio = mg / mp;
    std::vector<float> out(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) out[i] = static_cast<float>(pred[i] * ratio);
    return out;
}

AffineFit lsq_align_inverse(std::span<const float> pred_inv, std::span<const float> gt_depth,
                            std::span<const std::uint8_t> valid) {
    check_sizes(pred_inv.size(), gt_depth.size(), valid, "lsq_align_inverse");
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pred_inv.size(); ++i) {
        if (!is_valid(valid, i)) continue;
        if (!(gt_depth[i] > 0.0f)) throw DomainError("lsq_align_inverse: non-positive ground truth on a valid pixel");
        sx += pred_inv[i];
        sy += 1.0 / gt_depth[i];
        ++n;
    }
    if (n < 2) throw DegenerateError("lsq_align_inverse needs at least two valid pixels");
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    // Centered normal equations.
    double sxx = 0, sxy = 0, xx = 0;
    for (std::size_t i = 0; i < pred_inv.size(); ++i) {
        if (!is_valid(valid, i)) continue;
        const double dx = pred_inv[i] - mx;
        sxx += dx * dx;
        sxy += dx * (1.0 / gt_depth[i] - my);
        xx += static_cast<double>(pred_inv[i]) * pred_inv[i];
    }
    if (!(sxx > 1e-12 * xx) || !(sxx > 0.0)) throw DegenerateError("lsq_align_inverse: prediction is constant");
    const double s = sxy / sxx;
    return {s, my - s * mx};
}

}  // namespace depthedge::metrics
