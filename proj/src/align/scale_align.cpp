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


#include "depthedge/scale_align.hpp"

#include <cmath>
#include <random>
#include <string>

#include "depthedge/errors.hpp"

namespace depthedge::align {

namespace {

struct Sample {
    double d;      // relative inverse depth at the anchor
    double y;      // metric inverse depth 1 / z
};

std::size_t draw(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

bool is_inlier(const Sample& s, double scale, double shift, double tol) {
    return std::abs(scale * s.d + shift - s.y) <= tol * s.y;
}

std::size_t count_inliers(const std::vector<Sample>& samples, double scale, double shift, double tol) {
    std::size_t n = 0;
    for (const auto& s : samples) n += is_inlier(s, scale, shift, tol) ? 1 : 0;
    return n;
}

// Least squares on the consensus set; returns false when it is degenerate.
bool refit(const std::vector<Sample>& set, FitMode mode, double& scale, double& shift) {
    if (mode == FitMode::scale_only) {
        double dy = 0, dd = 0;
        for (const auto& s : set) {
            dy += s.d * s.y;
            dd += s.d * s.d;
        }
        if (!(dd > 0.0) || !(dy / dd > 0.0)) return false;
        scale = dy / dd;
        shift = 0.0;
        return true;
    }
    if (set.size() < 2) return false;
    double md = 0, my = 0;
    for (const auto& s : set) {
        md += s.d;
        my += s.y;
    }
    md /= static_cast<double>(set.size());
    my /= static_cast<double>(set.size());
    double sdd = 0, sdy = 0;
    for (const auto& s : set) {
        sdd += (s.d - md) * (s.d - md);
        sdy += (s.d - md) * (s.y - my);
    }
    if (!(sdd > 0.0) || !(sdy / sdd > 0.0)) return false;
    scale = sdy / sdd;
    shift = my - scale * md;
    return true;
}

}  // namespace

ScaleModel ransac_scale(const graph::DepthMap& pred_inv, std::span<const SparseAnchor> anchors,
                        const RansacOptions& options) {
    if (anchors.empty()) throw ConfigError("ransac_scale: no anchors");
    if (options.iterations == 0) throw ConfigError("ransac_scale: iterations must be positive");
    if (!(options.inlier_tol >= 0.0)) throw ConfigError("ransac_scale: inlier tolerance must be non-negative");
    const std::size_t minimal = options.mode == FitMode::scale_only ? 1 : 2;
    if (anchors.size() < minimal) throw ConfigError("ransac_scale: scale-shift mode needs at least two anchors");

    std::vector<Sample> samples;
    samples.reserve(anchors.size());
    for (const auto& a : anchors) {
        if (a.u >= pred_inv.width() || a.v >= pred_inv.height()) {
            throw DomainError("anchor (" + std::to_string(a.u) + ", " + std::to_string(a.v) + ") lies outside the " +
                              std::to_string(pred_inv.width()) + "x" + std::to_string(pred_inv.height()) + " map");
        }
        if (!(a.z > 0.0) || !std::isfinite(a.z)) throw DomainError("anchor depth must be positive and finite");
        samples.push_back({pred_inv.at(a.u, a.v), 1.0 / a.z});
    }

    std::mt19937_64 rng(options.seed);
    bool found = false;
    double best_scale = 0, best_shift = 0;
    std::size_t best_count = 0;
    const std::size_t n = samples.size();
    for (std::size_t it = 0; it < options.iterations; ++it) {
        double scale = 0, shift = 0;
        if (options.mode == FitMode::scale_only) {
            const Sample& s = samples[draw(rng, n)];
            if (!(s.d > 0.0)) continue;
            scale = s.y / s.d;
        } else {
            const std::size_t i = draw(rng, n);
            std::size_t j = draw(rng, n - 1);
            if (j >= i) ++j;
            const Sample& a = samples[i];
            const Sample& b = samples[j];
            if (a.d == b.d) continue;
            scale = (a.y - b.y) / (a.d - b.d);
            shift = a.y - scale * a.d;
        }
        if (!(scale > 0.0) || !std::isfinite(scale)) continue;
        const std::size_t count = count_inliers(samples, scale, shift, options.inlier_tol);
        if (!found || count > best_count) {
            found = true;
            best_scale = scale;
            best_shift = shift;
            best_count = count;
        }
    }
    if (!found) throw DegenerateError("ransac_scale: no sample produced a positive scale");

    std::vector<Sample> consensus;
    for (const auto& s : samples) {
        if (is_inlier(s, best_scale, best_shift, options.inlier_tol)) consensus.push_back(s);
    }
    double scale = best_scale;
    double shift = best_shift;
    // A minimal consensus set is fit exactly by its own hypothesis.
    if (consensus.size() > minimal && !refit(consensus, options.mode, scale, shift)) {
        scale = best_scale;
        shift = best_shift;
    }
    ScaleModel m;
    m.scale = scale;
    m.shift = shift;
    m.inlier_count = consensus.size();
    m.inlier_ratio = static_cast<double>(consensus.size()) / static_cast<double>(n);
    return m;
}

MetricDepth metricize(const graph::DepthMap& pred_inv, const ScaleModel& model) {
    MetricDepth out{Tensor(Dims{1, 1, pred_inv.height(), pred_inv.width()}, 0.0f),
                    std::vector<std::uint8_t>(pred_inv.values().size(), 0)};
    auto src = pred_inv.values();
    auto dst = out.depth.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double inv = model.scale * src[i] + model.shift;
        if (inv > 0.0 && std::isfinite(inv)) {
            dst[i] = static_cast<float>(1.0 / inv);
            out.valid[i] = 1;
        }
    }
    return out;
}

std::vector<std::uint8_t> occlusion_mask(const MetricDepth& real, const Tensor& virtual_depth) {
    if (real.depth.dims() != virtual_depth.dims() || real.valid.size() != real.depth.size()) {
        throw ShapeError("occlusion_mask: real depth " + to_string(real.depth.dims()) + " vs virtual depth " +
                         to_string(virtual_depth.dims()));
    }
    auto r = real.depth.data();
    auto v = virtual_depth.data();
    std::vector<std::uint8_t> mask(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) mask[i] = (!real.valid[i] || v[i] < r[i]) ? 1 : 0;
    return mask;
}

}  // namespace depthedge::align
