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


// Command-line front end and the file formats it reads and writes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "depthedge/graph.hpp"
#include "depthedge/image.hpp"
#include "depthedge/scale_align.hpp"

namespace depthedge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Images -------------------------------------------------------------------

/// Reads an 8-bit PNG (gray, RGB, with or without alpha) or a binary PPM
/// (P6, maxval 255), chosen by the file's magic bytes. Throws IoError.
RgbImage read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

struct Gray16 {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint16_t> values;
};

/// Reads a single-channel 8- or 16-bit PNG.
Gray16 read_png_gray16(const std::filesystem::path& path);
void write_png_gray16(const std::filesystem::path& path, const Gray16& image);

/// round(d * 65535) per pixel, d clamped to [0, 1].
Gray16 quantize_depth(const graph::DepthMap& depth);
graph::DepthMap dequantize_depth(const Gray16& image);

// Raw float maps: "LDRF", u32 width, u32 height, f32 row-major, all little-endian.

void write_raw_map(std::ostream& sink, const Tensor& map);
Tensor read_raw_map(std::istream& source);
void write_raw_map_file(const std::filesystem::path& path, const Tensor& map);
Tensor read_raw_map_file(const std::filesystem::path& path);

// Anchors: one "u,v,z" per line, '#' comments and blank lines skipped.

std::vector<align::SparseAnchor> parse_anchors(std::istream& source);
std::vector<align::SparseAnchor> read_anchors_file(const std::filesystem::path& path);

// Benchmark ------------------------------------------------------------------

struct BenchResult {
    std::size_t iterations = 0;
    double mean_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
    double fps() const { return mean_ms > 0.0 ? 1000.0 / mean_ms : 0.0; }
};

/// Times `iterations` inferences of `net` on `image` after `warmup`
/// untimed runs. Preprocessing is timed only when `include_preprocess`.
BenchResult bench(const graph::Network& net, const RgbImage& image, std::size_t iterations, std::size_t warmup,
                  bool include_preprocess);

}  // namespace depthedge::cli
