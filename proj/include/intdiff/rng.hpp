#pragma once

#include <cstdint>
#include <string_view>

namespace intdiff {

/// Child seed for a named stage: splitmix64(parent ^ fnv1a(label) ^ index).
/// Every random draw in a run descends from one root seed through this.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index = 0);

}  // namespace intdiff
