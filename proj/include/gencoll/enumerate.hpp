#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace gencoll::detail {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > kSaturated - a ? kSaturated : a + b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

// Odometer over {0..radix-1}^digits, first digit fastest. Visits radix^digits
// tuples (one empty tuple when digits == 0). fn returns false to stop early.
template <typename Fn>
bool for_each_tuple(std::size_t digits, std::size_t radix, Fn&& fn) {
  std::vector<std::size_t> tuple(digits, 0);
  if (radix == 0 && digits > 0) return true;
  while (true) {
    if (!fn(static_cast<const std::vector<std::size_t>&>(tuple))) return false;
    std::size_t d = 0;
    while (d < digits && ++tuple[d] == radix) tuple[d++] = 0;
    if (d == digits) return true;
  }
}

}  // namespace gencoll::detail
