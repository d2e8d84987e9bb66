#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

namespace repvote {

inline constexpr std::size_t kMaxParties = 64;

// Index into an election's ordered party list.
struct PartyId {
  std::uint32_t value = 0;

  constexpr PartyId() = default;
  constexpr explicit PartyId(std::uint32_t v) : value(v) {}
  constexpr explicit PartyId(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
  constexpr explicit PartyId(int v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(PartyId, PartyId) = default;
};

// A set of parties stored as a 64-bit mask (bit i = party i).
class PartySet {
 public:
  constexpr PartySet() = default;
  constexpr explicit PartySet(std::uint64_t bits) : bits_(bits) {}

  static constexpr PartySet all(std::size_t party_count) {
    return PartySet(party_count >= 64 ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << party_count) - 1);
  }
  static constexpr PartySet single(PartyId p) { return PartySet(std::uint64_t{1} << p.value); }

  constexpr bool contains(PartyId p) const { return (bits_ >> p.value) & 1U; }
  constexpr void insert(PartyId p) { bits_ |= std::uint64_t{1} << p.value; }
  constexpr void erase(PartyId p) { bits_ &= ~(std::uint64_t{1} << p.value); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool intersects(PartySet o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool subset_of(PartySet o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr PartySet operator|(PartySet o) const { return PartySet(bits_ | o.bits_); }
  constexpr PartySet operator&(PartySet o) const { return PartySet(bits_ & o.bits_); }
  constexpr PartySet without(PartySet o) const { return PartySet(bits_ & ~o.bits_); }

  // Lowest-indexed member; undefined on an empty set.
  constexpr PartyId first() const { return PartyId(static_cast<std::uint32_t>(std::countr_zero(bits_))); }

  std::vector<PartyId> members() const {
    std::vector<PartyId> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.emplace_back(static_cast<std::uint32_t>(std::countr_zero(b)));
    }
    return out;
  }

  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      f(PartyId(static_cast<std::uint32_t>(std::countr_zero(b))));
    }
  }

  friend constexpr auto operator<=>(PartySet, PartySet) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace repvote
