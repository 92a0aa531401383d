// parallel.hpp: trial-level parallelism and per-trial seed derivation
//
// Monte-Carlo probes run each trial from a seed derived from (seed, index), so
// the serial and OpenMP paths produce identical per-trial records.

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

namespace nmwit {

enum class Exec { serial, parallel };

// splitmix64 finalizer over (seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Calls body(i) for i in [0, n). Body must only write to slot i of its outputs.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    // Exceptions may not leave an OpenMP region; keep the first and rethrow.
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(nmwit_for_each_index)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

int max_threads();

}  // namespace nmwit
