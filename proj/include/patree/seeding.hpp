#pragma once

#include <cstdint>

namespace patree {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream key of run `index` under master seed `master`:
///   mix64(master + (index + 1) * 0x9E3779B97F4A7C15).
/// Distinct indices give unrelated streams; the mapping never changes.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace patree
