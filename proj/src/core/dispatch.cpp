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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "backend.hpp"
#include "depthedge/errors.hpp"
#include "depthedge/simd.hpp"

namespace depthedge {

namespace {

bool cpu_has_avx2() {
#if defined(DEPTHEDGE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("DEPTHEDGE_ISA")) {
        if (auto parsed = parse_isa(env); parsed && isa_supported(*parsed)) {
            return *parsed;
        }
    }
    return best_isa();
}

std::atomic<Isa>& active_slot() {
    static std::atomic<Isa> slot{initial_isa()};
    return slot;
}

std::atomic<int>& thread_slot() {
    static std::atomic<int> slot{static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (isa_name(isa) == name) return isa;
    }
    return std::nullopt;
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2: {
            static const bool has = cpu_has_avx2();
            return has;
        }
        case Isa::neon:
#if defined(DEPTHEDGE_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::vector<Isa> supported_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (isa_supported(isa)) out.push_back(isa);
    }
    return out;
}

Isa best_isa() {
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    if (isa_supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw ConfigError("instruction set '" + std::string(isa_name(isa)) + "' is not supported here");
    }
    active_slot().store(isa, std::memory_order_relaxed);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
ScopedIsa::~ScopedIsa() { active_slot().store(previous_, std::memory_order_relaxed); }

int num_threads() { return thread_slot().load(std::memory_order_relaxed); }

void set_num_threads(int threads) {
    if (threads < 1) throw ConfigError("thread count must be >= 1, got " + std::to_string(threads));
    thread_slot().store(threads, std::memory_order_relaxed);
}

namespace backend {

const KernelTable& table_for(Isa isa) {
    switch (isa) {
#if defined(DEPTHEDGE_HAVE_AVX2)
        case Isa::avx2:
            if (isa_supported(Isa::avx2)) return avx2_table();
            break;
#endif
#if defined(DEPTHEDGE_HAVE_NEON)
        case Isa::neon:
            return neon_table();
#endif
        default:
            break;
    }
    if (isa != Isa::scalar) {
        throw ConfigError("instruction set '" + std::string(isa_name(isa)) + "' is not supported here");
    }
    return scalar_table();
}

const KernelTable& active_table() { return table_for(active_isa()); }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), count);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(0, std::min(count, chunk));
}

}  // namespace backend
}  // namespace depthedge
