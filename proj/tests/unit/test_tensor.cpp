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
#include <limits>

#include "depthedge/errors.hpp"
#include "depthedge/image.hpp"
#include "depthedge/tensor.hpp"

using namespace depthedge;

TEST(Tensor, ConstructionAndIndexing) {
    Tensor t(Dims{2, 3, 4, 5}, 1.5f);
    EXPECT_EQ(t.size(), 120u);
    EXPECT_EQ(t.at(1, 2, 3, 4), 1.5f);
    t.at(1, 2, 3, 4) = 7.0f;
    EXPECT_EQ(t.data().back(), 7.0f);
    EXPECT_EQ(t.plane(1, 2)[19], 7.0f);
}

TEST(Tensor, RejectsZeroExtentsAndSizeMismatch) {
    EXPECT_THROW(Tensor(Dims{1, 0, 2, 2}), ShapeError);
    EXPECT_THROW(Tensor(Dims{1, 1, 2, 2}, std::vector<float>(3)), ShapeError);
    EXPECT_TRUE(Tensor().empty());
}

TEST(Tensor, FiniteCheck) {
    Tensor t(Dims{1, 1, 1, 2}, 0.0f);
    EXPECT_TRUE(t.all_finite());
    t.data()[1] = std::numeric_limits<float>::quiet_NaN();
    EXPECT_FALSE(t.all_finite());
}

TEST(Image, PlanarRoundTrip) {
    RgbImage img(3, 2);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 11);
    const Tensor t = to_tensor(img);
    EXPECT_EQ(t.dims(), (Dims{1, 3, 2, 3}));
    EXPECT_EQ(t.at(0, 1, 1, 2), img.at(2, 1, 1));
    EXPECT_EQ(to_rgb(t), img);
}

TEST(Image, ToRgbSaturates) {
    Tensor t(Dims{1, 3, 1, 1});
    t.data()[0] = -5.0f;
    t.data()[1] = 300.0f;
    t.data()[2] = 127.6f;
    const RgbImage img = to_rgb(t);
    EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 255, 128}));
}
