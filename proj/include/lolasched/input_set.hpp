#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace lola {

/// A set of input streams, as a bitmask over input declaration indices.
/// Tasks are input sets; the 64-input limit is enforced by the analysis.
class InputSet {
 public:
  constexpr InputSet() = default;
  constexpr explicit InputSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr InputSet single(std::size_t index) { return InputSet(std::uint64_t{1} << index); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(std::size_t index) const { return (bits_ >> index) & 1U; }
  constexpr bool subset_of(InputSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr InputSet operator|(InputSet o) const { return InputSet(bits_ | o.bits_); }
  constexpr InputSet& operator|=(InputSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr InputSet operator&(InputSet o) const { return InputSet(bits_ & o.bits_); }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 64; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  friend constexpr bool operator==(InputSet, InputSet) = default;
  friend constexpr bool operator<(InputSet a, InputSet b) { return a.bits_ < b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

inline constexpr std::size_t kMaxInputs = 64;

}  // namespace lola
