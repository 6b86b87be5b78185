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

#include "depthedge/weights.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

namespace depthedge::weights {

namespace {

constexpr char kMagic[4] = {'L', 'D', 'W', 'B'};
constexpr std::size_t kPrefixSize = 8;  // magic + version

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + extra >= s.size()) return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong encodings, surrogates and out-of-range code points.
        if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
            return false;
        }
        i += extra + 1;
    }
    return true;
}

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    std::vector<std::uint8_t>& buffer() { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) throw TruncationError(pos_, n);
    }
    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::string string(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::string hex32(std::uint32_t v) {
    std::ostringstream os;
    os << "0x" << std::hex << std::setw(8) << std::setfill('0') << v;
    return os.str();
}

}  // namespace

std::size_t WeightTensor::element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

Tensor WeightTensor::to_tensor() const {
    if (dims.empty() || dims.size() > 4) {
        throw ShapeError("weight tensor of rank " + std::to_string(dims.size()) + " cannot be viewed as rank 4");
    }
    std::size_t padded[4] = {1, 1, 1, 1};
    std::copy(dims.begin(), dims.end(), padded + (4 - dims.size()));
    return Tensor(Dims{padded[0], padded[1], padded[2], padded[3]}, values);
}

WeightTensor WeightTensor::from_tensor(const Tensor& t) {
    return {{static_cast<std::uint32_t>(t.n()), static_cast<std::uint32_t>(t.c()), static_cast<std::uint32_t>(t.h()),
             static_cast<std::uint32_t>(t.w())},
            t.storage()};
}

std::string dims_to_string(std::span<const std::uint32_t> dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(dims[i]);
    }
    return s + "]";
}

void WeightStore::insert(const std::string& name, WeightTensor tensor) {
    if (name.empty()) throw FormatError("weight name must be non-empty");
    if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw FormatError("weight name longer than 65535 bytes");
    }
    if (!valid_utf8(name)) throw FormatError("weight name is not valid UTF-8");
    if (tensor.dims.empty() || tensor.dims.size() > 255) {
        throw ShapeError("weight '" + name + "' has unsupported rank " + std::to_string(tensor.dims.size()));
    }
    if (tensor.values.size() != tensor.element_count()) {
        throw ShapeError("weight '" + name + "' dims " + dims_to_string(tensor.dims) + " need " +
                         std::to_string(tensor.element_count()) + " values, got " +
                         std::to_string(tensor.values.size()));
    }
    entries_[name] = std::move(tensor);
}

const WeightTensor* WeightStore::find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

WeightTensor* WeightStore::find_mutable(const std::string& name) {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

ChecksumError::ChecksumError(std::uint32_t expected, std::uint32_t found)
    : FormatError("weight bundle is corrupted: checksum expected " + hex32(expected) + ", found " + hex32(found)),
      expected_(expected),
      found_(found) {}

TruncationError::TruncationError(std::size_t offset, std::size_t needed)
    : FormatError("weight bundle is truncated at offset " + std::to_string(offset) + " (needed " +
                  std::to_string(needed) + " more bytes)"),
      offset_(offset) {}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks.
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const std::size_t n = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
        crc = ::crc32(crc, bytes.data() + pos, static_cast<uInt>(n));
        pos += n;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> serialize(const WeightStore& store) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(store.size()));
    for (const auto& [name, tensor] : store) {
        w.u16(static_cast<std::uint16_t>(name.size()));
        w.bytes(name.data(), name.size());
        w.u8(kDtypeF32);
        w.u8(static_cast<std::uint8_t>(tensor.dims.size()));
        for (auto d : tensor.dims) w.u32(d);
        for (float v : tensor.values) w.f32(v);
    }
    auto& buf = w.buffer();
    const std::uint32_t crc = crc32(std::span(buf).subspan(kPrefixSize));
    w.u32(crc);
    return std::move(buf);
}

WeightStore deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw NotABundleError("not a weight bundle (missing LDWB magic)");
    }
    Reader r(bytes);
    r.string(sizeof kMagic);
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        throw VersionError("unsupported weight bundle version " + std::to_string(version) + " (supported: " +
                           std::to_string(kFormatVersion) + ")");
    }
    const std::uint32_t count = r.u32();
    WeightStore store;
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::size_t entry_offset = r.offset();
        const std::uint16_t name_len = r.u16();
        std::string name = r.string(name_len);
        const std::uint8_t dtype = r.u8();
        if (dtype != kDtypeF32) {
            throw FormatError("tensor at offset " + std::to_string(entry_offset) + " has unsupported dtype " +
                              std::to_string(dtype));
        }
        const std::uint8_t rank = r.u8();
        if (rank == 0) throw FormatError("tensor '" + name + "' has rank 0");
        WeightTensor tensor;
        tensor.dims.resize(rank);
        std::uint64_t elements = 1;
        for (auto& d : tensor.dims) {
            d = r.u32();
            elements *= d;
            if (elements > r.remaining()) break;  // caught by the payload length check below
        }
        if (elements * sizeof(float) > r.remaining()) {
            throw TruncationError(r.offset(), static_cast<std::size_t>(std::min<std::uint64_t>(
                                                  elements * sizeof(float), std::numeric_limits<std::size_t>::max())));
        }
        tensor.values.resize(static_cast<std::size_t>(elements));
        for (auto& v : tensor.values) v = r.f32();
        if (store.contains(name)) throw FormatError("duplicate tensor name '" + name + "'");
        store.insert(name, std::move(tensor));
    }
    const std::size_t payload_end = r.offset();
    const std::uint32_t stored = r.u32();
    if (r.remaining() != 0) {
        throw FormatError(std::to_string(r.remaining()) + " trailing bytes after weight bundle checksum");
    }
    const std::uint32_t computed = crc32(bytes.subspan(kPrefixSize, payload_end - kPrefixSize));
    if (stored != computed) throw ChecksumError(stored, computed);
    return store;
}

std::size_t save(const WeightStore& store, std::ostream& sink) {
    const auto bytes = serialize(store);
    sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!sink) throw IoError("failed to write weight bundle (" + std::to_string(bytes.size()) + " bytes)");
    return bytes.size();
}

WeightStore load(std::istream& source) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
    if (source.bad()) throw IoError("failed to read weight bundle");
    return deserialize(bytes);
}

std::size_t save_file(const WeightStore& store, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    try {
        const std::size_t n = save(store, out);
        out.close();
        if (!out) throw IoError("failed to finish writing weight bundle");
        return n;
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

WeightStore load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return load(in);
}

}  // namespace depthedge::weights
