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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "depthedge/errors.hpp"
#include "depthedge/losses.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace depthedge;
using namespace depthedge::losses;

namespace {

std::vector<float> flat(const Tensor& t) { return {t.data().begin(), t.data().end()}; }
std::vector<double> flat_d(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

Tensor with(const Tensor& like, const std::vector<float>& v) { return Tensor(like.dims(), v); }

}  // namespace

// ---------------------------------------------------------------- warping

TEST(Warp, IdentityPoseReproducesSource) {
    std::mt19937_64 rng(1);
    const Tensor src = support::random_tensor(Dims{1, 3, 8, 10}, rng, 0.0f, 1.0f);
    const Tensor depth = support::random_tensor(Dims{1, 1, 8, 10}, rng, 1.0f, 5.0f);
    const CameraIntrinsics k{12.0, 11.0, 4.5, 3.5};
    const Tensor out = warp(src, k, RelativePose::identity(), k, depth);
    for (std::size_t i = 0; i < src.size(); ++i) EXPECT_NEAR(out.data()[i], src.data()[i], 1e-6);
}

TEST(Warp, TranslationMatchesProjectionOracle) {
    const CameraIntrinsics k{20.0, 20.0, 8.0, 6.0};
    RelativePose pose;
    pose.translation = {0.3, 0.0, 0.0};
    const double z = 4.0;
    const Tensor depth(Dims{1, 1, 12, 16}, static_cast<float>(z));
    const Tensor grid = warp_grid(k, pose, k, depth);
    const double kk[4] = {k.fx, k.fy, k.cx, k.cy};
    for (std::size_t y = 0; y < 12; ++y) {
        for (std::size_t x = 0; x < 16; ++x) {
            double u = 0, v = 0;
            oracle::project(x, y, z, kk, pose.rotation.data(), pose.translation.data(), kk, u, v);
            EXPECT_NEAR(grid.at(0, 0, y, x), u, 0.01);
            EXPECT_NEAR(grid.at(0, 1, y, x), v, 0.01);
            EXPECT_NEAR(grid.at(0, 0, y, x) - static_cast<double>(x), k.fx * 0.3 / z, 0.01);
        }
    }
}

TEST(Warp, ScalingDepthAndTranslationTogetherIsInvariant) {
    std::mt19937_64 rng(2);
    const Tensor depth = support::random_tensor(Dims{1, 1, 6, 7}, rng, 1.0f, 3.0f);
    Tensor depth2 = depth;
    for (float& v : depth2.data()) v *= 2.0f;
    const CameraIntrinsics k{10.0, 10.0, 3.0, 3.0};
    const double c = std::cos(0.05), s = std::sin(0.05);
    RelativePose pose;
    pose.rotation = {c, 0, s, 0, 1, 0, -s, 0, c};
    pose.translation = {0.1, -0.05, 0.02};
    RelativePose pose2 = pose;
    for (auto& t : pose2.translation) t *= 2.0;
    const Tensor a = warp_grid(k, pose, k, depth), b = warp_grid(k, pose2, k, depth2);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-6);
}

TEST(Warp, Errors) {
    const Tensor src(Dims{1, 1, 4, 4}, 0.5f);
    Tensor depth(Dims{1, 1, 4, 4}, 1.0f);
    depth.data()[5] = 0.0f;
    const CameraIntrinsics k{1, 1, 0, 0};
    EXPECT_THROW(warp(src, k, RelativePose::identity(), k, depth), DomainError);
    RelativePose bad;
    bad.rotation[0] = 2.0;
    EXPECT_THROW(warp(src, k, bad, k, Tensor(Dims{1, 1, 4, 4}, 1.0f)), DomainError);
    EXPECT_THROW(warp(src, CameraIntrinsics{0, 1, 0, 0}, RelativePose::identity(), k, Tensor(Dims{1, 1, 4, 4}, 1.0f)),
                 DomainError);
}

// ---------------------------------------------------------------- photometric

TEST(Ssim, SelfSimilarityAndSymmetry) {
    std::mt19937_64 rng(3);
    const Tensor a = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
    const Tensor b = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
    {
        const Tensor t = ssim(a, a);
        for (float v : t.data()) EXPECT_NEAR(v, 1.0f, 1e-6);
    }
    EXPECT_EQ(ssim(a, b), ssim(b, a));
}

TEST(Ssim, ConstantsHandValue) {
    const Tensor a(Dims{1, 1, 5, 5}, 0.2f), b(Dims{1, 1, 5, 5}, 0.4f);
    const double ma = static_cast<double>(0.2f), mb = static_cast<double>(0.4f);
    const double want = (2 * ma * mb + kSsimC1) / (ma * ma + mb * mb + kSsimC1);
    {
        const Tensor t = ssim(a, b);
        for (float v : t.data()) EXPECT_NEAR(v, want, 1e-6);
    }
    EXPECT_NEAR(want, (2 * 0.08 + 1e-4) / (0.04 + 0.16 + 1e-4), 1e-6);
}

TEST(Photometric, Identities) {
    std::mt19937_64 rng(4);
    const Tensor a = support::random_tensor(Dims{2, 3, 6, 7}, rng, 0.0f, 1.0f);
    const Tensor b = support::random_tensor(Dims{2, 3, 6, 7}, rng, 0.0f, 1.0f);
    {
        const Tensor t = photometric_error(a, a);
        for (float v : t.data()) EXPECT_NEAR(v, 0.0f, 1e-7);
    }
    const Tensor l1 = photometric_error(a, b, 0.0f);
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t i = 0; i < 42; ++i) {
            double want = 0;
            for (std::size_t c = 0; c < 3; ++c) want += std::abs(a.plane(n, c)[i] - b.plane(n, c)[i]);
            EXPECT_NEAR(l1.plane(n, 0)[i], want / 3.0, 1e-6);
        }
    {
        const Tensor t = photometric_error(a, b);
        for (float v : t.data()) EXPECT_GE(v, 0.0f);
    }
}

TEST(Photometric, ConstantsHandValue) {
    const Tensor a(Dims{1, 1, 5, 5}, 0.2f), b(Dims{1, 1, 5, 5}, 0.4f);
    const double s = (2 * 0.08 + 1e-4) / (0.04 + 0.16 + 1e-4);
    const double want = 0.85 * (1 - s) / 2 + 0.15 * 0.2;
    {
        const Tensor t = photometric_error(a, b, 0.85f);
        for (float v : t.data()) EXPECT_NEAR(v, want, 1e-6);
    }
    EXPECT_THROW(photometric_error(a, b, 1.5f), ConfigError);
    EXPECT_THROW(photometric_error(a, Tensor(Dims{1, 1, 5, 4}, 0.0f)), ShapeError);
}

TEST(Photometric, IdentityWarpGivesZeroError) {
    std::mt19937_64 rng(5);
    const Tensor src = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
    const CameraIntrinsics k{5, 5, 3, 3};
    const Tensor rec = warp(src, k, RelativePose::identity(), k, Tensor(Dims{1, 1, 6, 6}, 2.0f));
    EXPECT_NEAR(photometric_error_mean(src, rec), 0.0, 1e-6);
}

TEST(Automask, Examples) {
    const Tensor w(Dims{1, 1, 1, 2}, std::vector<float>{1, 3});
    const Tensor w2(Dims{1, 1, 1, 2}, std::vector<float>{2, 2});
    const Tensor id_big(Dims{1, 1, 1, 2}, 10.0f);
    std::vector<Tensor> warped{w, w2}, ident{id_big};
    const auto r = per_pixel_min_with_automask(warped, ident);
    EXPECT_EQ(r.pe_min.storage(), (std::vector<float>{1, 2}));
    EXPECT_EQ(r.mask.storage(), (std::vector<float>{1, 1}));

    std::vector<Tensor> same{w};
    EXPECT_EQ(per_pixel_min_with_automask(same, same).mask.storage(), (std::vector<float>{0, 0}));
    EXPECT_THROW(per_pixel_min_with_automask({}, same), ConfigError);
    std::vector<Tensor> wrong{Tensor(Dims{1, 1, 1, 3}, 0.0f)};
    EXPECT_THROW(per_pixel_min_with_automask(same, wrong), ShapeError);
}

// ---------------------------------------------------------------- smoothness

TEST(Smoothness, ConstantDepthIsZero) {
    std::mt19937_64 rng(6);
    const Tensor img = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
    EXPECT_EQ(smoothness_loss(Tensor(Dims{1, 1, 6, 6}, 0.7f), img), 0.0);
}

TEST(Smoothness, RampOnConstantImage) {
    Tensor d(Dims{1, 1, 4, 4});
    for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t x = 0; x < 4; ++x) d.at(0, 0, y, x) = static_cast<float>(x + 1);
    // mean 2.5, so each of the 12 horizontal steps is 0.4; 16 pixels.
    EXPECT_NEAR(smoothness_loss(d, Tensor(Dims{1, 3, 4, 4}, 0.5f)), 12 * 0.4 / 16, 1e-12);
}

TEST(Smoothness, ScaleInvariantAndRejectsZeroDepth) {
    std::mt19937_64 rng(7);
    const Tensor d = support::random_tensor(Dims{1, 1, 6, 6}, rng, 0.1f, 1.0f);
    const Tensor img = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
    Tensor d3 = d;
    for (float& v : d3.data()) v *= 3.0f;
    EXPECT_NEAR(smoothness_loss(d3, img), smoothness_loss(d, img), 1e-6);
    EXPECT_THROW(smoothness_loss(Tensor(Dims{1, 1, 6, 6}, 0.0f), img), DomainError);
}

// ---------------------------------------------------------------- gradient / distillation

TEST(GradientLoss, ZeroCases) {
    std::mt19937_64 rng(8);
    const Tensor p = support::random_tensor(Dims{1, 1, 8, 8}, rng);
    Tensor shifted = p;
    for (float& v : shifted.data()) v += 0.25f;
    EXPECT_EQ(gradient_loss(p, p), 0.0);
    EXPECT_NEAR(gradient_loss(shifted, p), 0.0, 1e-6);
}

TEST(GradientLoss, UnitRampOneScale) {
    Tensor ramp(Dims{1, 1, 4, 4});
    for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t x = 0; x < 4; ++x) ramp.at(0, 0, y, x) = static_cast<float>(x);
    EXPECT_DOUBLE_EQ(gradient_loss(ramp, Tensor(Dims{1, 1, 4, 4}, 0.0f), 1), 12.0 / 16.0);
    EXPECT_THROW(gradient_loss(Tensor(Dims{1, 1, 6, 6}, 0.0f), Tensor(Dims{1, 1, 6, 6}, 0.0f), 3), ConfigError);
}

TEST(Distill, Examples) {
    std::mt19937_64 rng(9);
    const Tensor proxy = support::random_tensor(Dims{1, 1, 8, 8}, rng, 0.2f, 0.8f);
    std::vector<Tensor> same{proxy};
    EXPECT_EQ(distill_loss(same, proxy), 0.0);

    Tensor plus = proxy;
    for (float& v : plus.data()) v += 0.1f;
    std::vector<Tensor> one{plus};
    EXPECT_NEAR(distill_loss(one, proxy), 0.1, 1e-6);

    const Tensor noisy = support::random_tensor(Dims{1, 1, 8, 8}, rng, 0.0f, 1.0f);
    std::vector<Tensor> three{noisy, noisy, noisy};
    DistillWeights w;
    w.alpha_l = 0.0f;
    EXPECT_NEAR(distill_loss(three, proxy, w), (0.5 + 0.25 + 0.125) * gradient_loss(noisy, proxy), 1e-9);
}

TEST(Distill, Errors) {
    const Tensor proxy(Dims{1, 1, 8, 8}, 0.5f);
    EXPECT_THROW(distill_loss({}, proxy), ConfigError);
    std::vector<Tensor> odd{Tensor(Dims{1, 1, 3, 3}, 0.5f)};
    EXPECT_THROW(distill_loss(odd, proxy), ShapeError);
    Tensor bad = proxy;
    bad.data()[0] = 1.5f;
    std::vector<Tensor> ok{proxy};
    EXPECT_THROW(distill_loss(ok, bad), DomainError);
}

TEST(Distill, LowResolutionPredictionsAreUpsampled) {
    const Tensor proxy(Dims{1, 1, 8, 8}, 0.5f);
    std::vector<Tensor> preds{Tensor(Dims{1, 1, 4, 4}, 0.75f), Tensor(Dims{1, 1, 2, 2}, 0.25f)};
    EXPECT_NEAR(distill_loss(preds, proxy), 0.5, 1e-7);
}

// ---------------------------------------------------------------- finite differences

TEST(FiniteDifferences, PhotometricMean) {
    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 3; ++trial) {
        const Tensor target = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
        const Tensor rec = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
        const auto report = support::fd_check(
            flat(rec), flat_d(photometric_error_mean_grad(target, rec)),
            [&](const std::vector<float>& x) { return photometric_error_mean(target, with(rec, x)); }, trial);
        EXPECT_LE(report.worst, 1e-2) << "rejected " << report.rejected;
    }
}

TEST(FiniteDifferences, Smoothness) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 3; ++trial) {
        const Tensor depth = support::random_tensor(Dims{1, 1, 6, 6}, rng, 0.2f, 1.0f);
        const Tensor img = support::random_tensor(Dims{1, 3, 6, 6}, rng, 0.0f, 1.0f);
        const auto report = support::fd_check(
            flat(depth), flat_d(smoothness_loss_grad(depth, img)),
            [&](const std::vector<float>& x) { return smoothness_loss(with(depth, x), img); }, trial);
        EXPECT_LE(report.worst, 1e-2) << "rejected " << report.rejected;
    }
}

TEST(FiniteDifferences, GradientLoss) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 3; ++trial) {
        const Tensor pred = support::random_tensor(Dims{1, 1, 6, 6}, rng, 0.0f, 1.0f);
        const Tensor proxy = support::random_tensor(Dims{1, 1, 6, 6}, rng, 0.0f, 1.0f);
        const auto report = support::fd_check(
            flat(pred), flat_d(gradient_loss_grad(pred, proxy, 2)),
            [&](const std::vector<float>& x) { return gradient_loss(with(pred, x), proxy, 2); }, trial);
        EXPECT_LE(report.worst, 1e-2) << "rejected " << report.rejected;
    }
}

TEST(FiniteDifferences, Distill) {
    std::mt19937_64 rng(23);
    DistillWeights w;
    w.gradient_scales = 2;
    for (int trial = 0; trial < 3; ++trial) {
        const Tensor proxy = support::random_tensor(Dims{1, 1, 6, 6}, rng, 0.0f, 1.0f);
        const std::vector<Tensor> preds{support::random_tensor(Dims{1, 1, 6, 6}, rng, 0.0f, 1.0f),
                                        support::random_tensor(Dims{1, 1, 3, 3}, rng, 0.0f, 1.0f),
                                        support::random_tensor(Dims{1, 1, 2, 2}, rng, 0.0f, 1.0f)};
        std::vector<float> x;
        std::vector<double> g;
        const auto grads = distill_loss_grad(preds, proxy, w);
        for (std::size_t s = 0; s < preds.size(); ++s) {
            const auto px = flat(preds[s]);
            const auto pg = flat_d(grads[s]);
            x.insert(x.end(), px.begin(), px.end());
            g.insert(g.end(), pg.begin(), pg.end());
        }
        const auto unflatten = [&](const std::vector<float>& v) {
            std::vector<Tensor> out;
            std::size_t off = 0;
            for (const auto& p : preds) {
                out.emplace_back(p.dims(), std::vector<float>(v.begin() + off, v.begin() + off + p.size()));
                off += p.size();
            }
            return out;
        };
        const auto report = support::fd_check(
            x, g, [&](const std::vector<float>& v) { return distill_loss(unflatten(v), proxy, w); }, trial);
        EXPECT_LE(report.worst, 1e-2) << "rejected " << report.rejected;
    }
}
