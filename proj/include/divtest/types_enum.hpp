#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "divtest/distribution.hpp"

namespace divtest {

inline constexpr std::uint64_t kDefaultEnumCap = 100000000ULL;  // 1e8 types

// Number of compositions of n into k nonnegative parts: C(n+k-1, k-1).
// Saturates at UINT64_MAX instead of overflowing.
std::uint64_t count_types(std::int64_t n, int k);

// Streams every type with denominator n exactly once (lexicographic in the
// first k-1 counts; the last count is the remainder). SizeLimit if the
// enumeration would exceed cap.
void for_each_type(std::int64_t n, int k,
                   const std::function<void(const std::vector<std::int64_t>&)>& fn,
                   std::uint64_t cap = kDefaultEnumCap);

// ln of the exact multinomial mass of the type class under R:
// ln[ n! / prod(counts_i!) * prod R_i^{counts_i} ].
double type_log_prob(const TypeDistribution& t, const Distribution& r);

}  // namespace divtest
