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


#include <charconv>
#include <fstream>
#include <string>
#include <string_view>

#include "depthedge/cli.hpp"
#include "depthedge/errors.hpp"

namespace depthedge::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_field(std::string_view text, T& value) {
    text = trim(text);
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

std::vector<align::SparseAnchor> parse_anchors(std::istream& source) {
    std::vector<align::SparseAnchor> anchors;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto c1 = body.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
        align::SparseAnchor a;
        const bool ok = c2 != std::string_view::npos && body.find(',', c2 + 1) == std::string_view::npos &&
                        parse_field(body.substr(0, c1), a.u) && parse_field(body.substr(c1 + 1, c2 - c1 - 1), a.v) &&
                        parse_field(body.substr(c2 + 1), a.z);
        if (!ok) throw FormatError("anchor line " + std::to_string(line_no) + ": expected u,v,z");
        if (!(a.z > 0.0)) throw FormatError("anchor line " + std::to_string(line_no) + ": depth must be positive");
        anchors.push_back(a);
    }
    return anchors;
}

std::vector<align::SparseAnchor> read_anchors_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_anchors(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace depthedge::cli
