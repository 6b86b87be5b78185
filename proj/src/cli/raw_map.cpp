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


#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "depthedge/cli.hpp"
#include "depthedge/errors.hpp"

namespace depthedge::cli {

namespace {

constexpr std::array<char, 4> kMagic{'L', 'D', 'R', 'F'};

void put_u32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

}  // namespace

void write_raw_map(std::ostream& sink, const Tensor& map) {
    if (map.empty() || map.n() != 1 || map.c() != 1) {
        throw ShapeError("raw maps hold one (1, 1, h, w) plane, got " + to_string(map.dims()));
    }
    if (map.h() > UINT32_MAX || map.w() > UINT32_MAX) throw ShapeError("raw map extents exceed 32 bits");
    sink.write(kMagic.data(), 4);
    put_u32(sink, static_cast<std::uint32_t>(map.w()));
    put_u32(sink, static_cast<std::uint32_t>(map.h()));
    for (float v : map.data()) put_u32(sink, std::bit_cast<std::uint32_t>(v));
    if (!sink) throw IoError("raw map write failed");
}

Tensor read_raw_map(std::istream& source) {
    std::array<char, 4> magic{};
    if (!source.read(magic.data(), 4) || magic != kMagic) throw FormatError("not a raw float map (bad magic)");
    std::uint32_t w = 0, h = 0;
    if (!get_u32(source, w) || !get_u32(source, h)) throw FormatError("raw map header is truncated");
    if (w == 0 || h == 0) throw FormatError("raw map has a zero extent");
    const std::size_t count = static_cast<std::size_t>(w) * h;
    std::vector<float> values;
    values.reserve(std::min<std::size_t>(count, std::size_t{1} << 22));
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t bits = 0;
        if (!get_u32(source, bits)) {
            throw FormatError("raw map data is truncated after " + std::to_string(i) + " of " +
                              std::to_string(count) + " values");
        }
        values.push_back(std::bit_cast<float>(bits));
    }
    if (source.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after raw map data");
    return Tensor(Dims{1, 1, h, w}, std::move(values));
}

void write_raw_map_file(const std::filesystem::path& path, const Tensor& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    write_raw_map(out, map);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

Tensor read_raw_map_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return read_raw_map(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace depthedge::cli
