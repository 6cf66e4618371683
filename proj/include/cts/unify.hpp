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

// Joint transformation of structures built over different permutations:
// constants found in any structure are imposed on all of them, and every
// variable pair that shares a tier in two or more structures is restricted
// to the value combinations all of those structures allow. Repeated until
// nothing changes. The set of assignments encoded by every structure is
// preserved.

#ifndef CTS_UNIFY_HPP_
#define CTS_UNIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cts/cts.hpp"

namespace cts {

enum class Constancy { Zero, One, Free };

/// Zero/One iff every line of every tier whose window holds `v` gives `v`
/// that value. Free for an empty structure.
Constancy constant_of(const Cts& s, VarId v);

/// Value combinations of an ordered variable pair; bit (2*a + b) set when
/// (a, b) is allowed.
struct PairRelation {
  VarId first;
  VarId second;
  std::uint8_t allowed = 0;

  bool allows(bool a, bool b) const { return (allowed >> (2 * a + b)) & 1u; }
};

/// The pair's combinations, intersected over every tier holding both
/// variables; nullopt when the variables never share a tier.
std::optional<PairRelation> pair_relation(const Cts& s, VarId a, VarId b);

enum class EmptyCause { InputEmpty, TierEmptied, ConstantConflict };
std::string_view to_string(EmptyCause c);

struct UnifyOptions {
  /// Keep a snapshot of the system before every wave and at the end.
  bool record_trace = false;
};

struct UnifyResult {
  /// Unified structures, or all empty when the system collapsed.
  std::vector<Cts> structures;
  std::optional<EmptyCause> empty_cause;
  /// Structure that first emptied (or the second party of a constant
  /// conflict), and the variable involved for conflicts.
  std::optional<std::size_t> culprit;
  std::optional<VarId> conflict_var;
  std::size_t waves = 0;
  std::vector<std::vector<Cts>> trace;

  bool is_empty() const { return empty_cause.has_value(); }
};

/// All structures must share n. Throws std::invalid_argument otherwise.
UnifyResult unify(std::vector<Cts> system, const UnifyOptions& options = {});

}  // namespace cts

#endif  // CTS_UNIFY_HPP_
