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

#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace depthedge {

/// Instruction-set variants of the hot kernels. Every variant produces
/// bit-identical results: vector lanes map to output pixels and the
/// per-pixel accumulation order matches the scalar reference.
enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// Whether this build contains the variant and the running CPU supports it.
bool isa_supported(Isa isa);
std::vector<Isa> supported_isas();

/// Widest supported variant.
Isa best_isa();

/// Variant used by the public kernels. Defaults to best_isa(), or to the
/// DEPTHEDGE_ISA environment variable (scalar|avx2|neon) when set and supported.
Isa active_isa();
/// Throws ConfigError when `isa` is not supported.
void set_active_isa(Isa isa);

/// Restores the previously active variant on destruction.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa);
    ~ScopedIsa();
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

/// Worker threads used for data-parallel kernels (>= 1). Defaults to the
/// hardware concurrency. Results never depend on this value.
int num_threads();
void set_num_threads(int threads);

}  // namespace depthedge
