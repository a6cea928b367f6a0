#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <utility>

#include "ltscm/errors.hpp"

namespace ltscm {

using Action = std::uint8_t;

// Sentinel for "no last action" (root nodes).
inline constexpr int kNoAction = -1;

// Upper bound on the global action alphabet of any domain.
inline constexpr int kMaxActions = 32;

// Subset of the global action alphabet, one bit per action.
class ActionSet {
 public:
  constexpr ActionSet() = default;
  constexpr explicit ActionSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr ActionSet all(int num_actions) {
    return ActionSet(num_actions >= 32 ? ~0u : ((1u << num_actions) - 1u));
  }

  constexpr bool contains(int a) const { return a >= 0 && a < 32 && ((bits_ >> a) & 1u); }
  constexpr void insert(int a) { bits_ |= (1u << a); }
  constexpr void erase(int a) { bits_ &= ~(1u << a); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint32_t bits() const { return bits_; }

  // Iterate set bits in increasing action order.
  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  friend constexpr bool operator==(ActionSet, ActionSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

// Identifies one context: the mutex set it belongs to and the observed pattern
// inside that set. Packed into 64 bits (16 for the mutex set, 48 for the pattern).
class ContextKey {
 public:
  static constexpr int kPatternBits = 48;
  static constexpr std::uint64_t kMaxPattern = (std::uint64_t{1} << kPatternBits) - 1;
  static constexpr std::uint32_t kMaxMutexSet = 0xFFFF;

  constexpr ContextKey() = default;
  constexpr ContextKey(std::uint32_t mutex_set_id, std::uint64_t pattern_code)
      : bits_((std::uint64_t{mutex_set_id} << kPatternBits) | pattern_code) {
    if (mutex_set_id > kMaxMutexSet || pattern_code > kMaxPattern)
      throw ContractViolation("ContextKey: mutex set id or pattern code out of range");
  }

  static constexpr ContextKey from_bits(std::uint64_t bits) {
    ContextKey k;
    k.bits_ = bits;
    return k;
  }

  constexpr std::uint32_t mutex_set_id() const {
    return static_cast<std::uint32_t>(bits_ >> kPatternBits);
  }
  constexpr std::uint64_t pattern_code() const { return bits_ & kMaxPattern; }
  constexpr std::uint64_t bits() const { return bits_; }

  friend constexpr auto operator<=>(ContextKey, ContextKey) = default;

  template <typename H>
  friend H AbslHashValue(H h, ContextKey k) {
    return H::combine(std::move(h), k.bits_);
  }

 private:
  std::uint64_t bits_ = 0;
};

// 128-bit packed state identity used by the pruning table.
struct StateKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend constexpr bool operator==(const StateKey&, const StateKey&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const StateKey& k) {
    return H::combine(std::move(h), k.hi, k.lo);
  }
};

}  // namespace ltscm

template <>
struct std::hash<ltscm::ContextKey> {
  std::size_t operator()(ltscm::ContextKey k) const noexcept {
    return std::hash<std::uint64_t>{}(k.bits());
  }
};
