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

// LDWB weight bundles.
//
// Byte layout, all integers little-endian:
//
//   "LDWB"                      4 bytes magic
//   u32 version                 currently 1
//   u32 tensor_count
//   tensor_count times:
//     u16 name_len, name bytes (UTF-8, non-empty)
//     u8  dtype                 0 = f32
//     u8  rank
//     u32 dims[rank]
//     f32 payload[prod(dims)]   row-major
//   u32 crc32                   IEEE, over every byte after magic + version
//
// Entries are written in lexicographic name order, so a store always
// serializes to the same bytes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "depthedge/errors.hpp"
#include "depthedge/tensor.hpp"

namespace depthedge::weights {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint8_t kDtypeF32 = 0;

struct WeightTensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> values;

    std::size_t element_count() const;

    /// Rank-4 tensor view; ranks below 4 are left-padded with 1s.
    Tensor to_tensor() const;
    static WeightTensor from_tensor(const Tensor& t);

    friend bool operator==(const WeightTensor&, const WeightTensor&) = default;
};

std::string dims_to_string(std::span<const std::uint32_t> dims);

class WeightStore {
public:
    using Map = std::map<std::string, WeightTensor>;

    /// Inserts or replaces. Throws FormatError for an empty or non-UTF-8 name,
    /// and ShapeError when values.size() differs from the product of dims.
    void insert(const std::string& name, WeightTensor tensor);
    void erase(const std::string& name) { entries_.erase(name); }

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }
    const WeightTensor* find(const std::string& name) const;
    WeightTensor* find_mutable(const std::string& name);
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    Map::const_iterator begin() const { return entries_.begin(); }
    Map::const_iterator end() const { return entries_.end(); }

    friend bool operator==(const WeightStore&, const WeightStore&) = default;

private:
    Map entries_;
};

class NotABundleError : public FormatError {
public:
    using FormatError::FormatError;
};

class VersionError : public FormatError {
public:
    using FormatError::FormatError;
};

class ChecksumError : public FormatError {
public:
    ChecksumError(std::uint32_t expected, std::uint32_t found);
    std::uint32_t expected() const { return expected_; }
    std::uint32_t found() const { return found_; }

private:
    std::uint32_t expected_;
    std::uint32_t found_;
};

class TruncationError : public FormatError {
public:
    TruncationError(std::size_t offset, std::size_t needed);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// CRC-32 with the IEEE 802.3 polynomial.
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const WeightStore& store);
WeightStore deserialize(std::span<const std::uint8_t> bytes);

/// Returns the number of bytes written. Throws IoError on stream failure.
std::size_t save(const WeightStore& store, std::ostream& sink);
WeightStore load(std::istream& source);

std::size_t save_file(const WeightStore& store, const std::filesystem::path& path);
WeightStore load_file(const std::filesystem::path& path);

}  // namespace depthedge::weights
