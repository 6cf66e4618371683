// Copyright 2026 The ctssat Authors
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

// Compact triplet structures.
//
// A structure over n variables is a permutation plus n-2 tiers; tier j holds
// the admissible value triplets of the variables at permutation positions
// j, j+1, j+2 (0-based). A triplet is coded 4*b1 + 2*b2 + b3 with b1 the value
// of the lowest-position variable. Lines of adjacent tiers are compatible when
// their two overlapping values coincide; chains of compatible lines spell
// out the n-bit assignments the structure represents.

#ifndef CTS_CTS_HPP_
#define CTS_CTS_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cts/formula.hpp"

namespace cts {

/// Bijection between permutation positions (0-based) and variables.
/// Copies share storage.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `order` is a permutation of 1..n.
  explicit Permutation(std::vector<VarId> order);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return data_ ? data_->order.size() : 0; }
  VarId at(std::size_t position) const { return data_->order[position]; }
  std::size_t position(VarId v) const { return data_->position[v.index - 1]; }
  std::span<const VarId> order() const { return data_->order; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.data_ == b.data_ ||
           (a.data_ && b.data_ && a.data_->order == b.data_->order);
  }

 private:
  struct Data {
    std::vector<VarId> order;
    std::vector<std::size_t> position;
  };
  std::shared_ptr<const Data> data_;
};

/// Code 0..7 of a value triplet.
using TripletLine = std::uint8_t;

/// Value of triplet slot `k` (0 = first/most significant).
constexpr bool triplet_bit(TripletLine t, std::size_t k) {
  return ((t >> (2 - k)) & 1u) != 0;
}

/// Lines at tiers j and j+1 adjoin when their overlapping pair coincides.
constexpr bool compatible(TripletLine t, TripletLine u) {
  return (t & 3u) == (u >> 1);
}

/// Membership set over the 8 triplet codes.
class Tier {
 public:
  constexpr Tier() = default;
  constexpr explicit Tier(std::uint8_t mask) : mask_(mask) {}
  static constexpr Tier full() { return Tier(0xff); }

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool contains(TripletLine t) const { return (mask_ >> t) & 1u; }
  constexpr void insert(TripletLine t) { mask_ |= static_cast<std::uint8_t>(1u << t); }
  constexpr void erase(TripletLine t) { mask_ &= static_cast<std::uint8_t>(~(1u << t)); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool is_subset_of(Tier o) const { return (mask_ & ~o.mask_) == 0; }

  /// Lines in ascending code order.
  std::vector<TripletLine> lines() const;

  friend constexpr Tier operator|(Tier a, Tier b) { return Tier(a.mask_ | b.mask_); }
  friend constexpr Tier operator&(Tier a, Tier b) { return Tier(a.mask_ & b.mask_); }
  friend constexpr bool operator==(Tier, Tier) = default;

 private:
  std::uint8_t mask_ = 0;
};

/// A compact triplet structure. Constructing one from raw tiers does not
/// clear it; the algebra below always returns cleared structures except for
/// `unite`, which preserves clearedness of its operands. An empty structure
/// has every tier empty and `is_empty()` set.
class Cts {
 public:
  Cts() = default;
  /// Raw structure. Throws if the tier count is not n-2.
  Cts(Permutation perm, std::vector<Tier> tiers);

  static Cts complete(Permutation perm);
  static Cts empty(Permutation perm);

  const Permutation& permutation() const { return perm_; }
  std::size_t num_vars() const { return perm_.size(); }
  std::size_t num_tiers() const { return tiers_.size(); }
  std::span<const Tier> tiers() const { return tiers_; }
  Tier tier(std::size_t j) const { return tiers_[j]; }

  bool is_empty() const { return empty_; }
  /// One line per tier (and not empty).
  bool is_elementary() const;
  std::size_t line_count() const;
  /// Tier-wise inclusion; permutations must match.
  bool is_substructure_of(const Cts& other) const;

  friend bool operator==(const Cts&, const Cts&) = default;

 private:
  Permutation perm_;
  std::vector<Tier> tiers_;
  bool empty_ = false;
};

struct ClearResult {
  Cts structure;
  /// First tier found empty, if the structure collapsed.
  std::optional<std::size_t> emptied_tier;
};

/// Fixpoint removal of lines lacking a compatible line in an adjacent tier.
Cts clear(Cts s);
ClearResult clear_with_evidence(Cts s);

/// Tier-wise union; not cleared (the union of cleared operands is cleared).
/// Throws std::invalid_argument on a permutation mismatch.
Cts unite(const Cts& a, const Cts& b);
/// Tier-wise intersection followed by clearing.
Cts intersect(const Cts& a, const Cts& b);
/// Drops lines giving `v` the value !value, then clears.
Cts concretize(const Cts& s, VarId v, bool value);
bool equivalent(const Cts& a, const Cts& b);

/// The elementary structure of one assignment.
Cts from_assignment(const Assignment& a, const Permutation& perm);
/// Linear-time membership test.
bool contains_assignment(const Cts& s, const Assignment& a);

/// Thrown when enumeration is requested above the configured variable bound.
class EnumerationBoundError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultEnumerationBound = 24;

/// Every assignment spelled by a chain of compatible lines, sorted.
std::vector<Assignment> enumerate_assignments(
    const Cts& s, std::size_t max_vars = kDefaultEnumerationBound);
/// Number of chains, by dynamic programming over tiers; saturates at
/// UINT64_MAX.
std::uint64_t count_assignments(const Cts& s);
/// Some chain of a non-empty cleared structure (greedy walk, no search).
std::optional<Assignment> any_assignment(const Cts& s);

/// Variable display names, indexed by VarId - 1.
using VarNames = std::vector<std::string>;
VarNames default_names(std::size_t n);

/// Table dump: a header row with variable names in permutation order, then
/// every line of every tier, blank outside the tier window.
std::string render(const Cts& s, const VarNames& names);
std::string render(const Cts& s);

}  // namespace cts

#endif  // CTS_CTS_HPP_
