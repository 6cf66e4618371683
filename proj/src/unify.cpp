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

#include "cts/unify.hpp"

#include <array>
#include <stdexcept>

namespace cts {

namespace {

// Slot pairs inside a window: (0,1), (1,2), (0,2).
constexpr std::array<std::array<std::size_t, 2>, 3> kSlotPairs{{{0, 1}, {1, 2}, {0, 2}}};

struct ProjectionTables {
  // 2-bit value combination of a line on a slot pair.
  std::array<std::array<std::uint8_t, 8>, 3> combo{};
  // Lines whose combination on a slot pair lies in a 4-bit allowed set.
  std::array<std::array<std::uint8_t, 16>, 3> lines_allowed{};
  // Value mask (bit 0 = value 0 seen, bit 1 = value 1 seen) per slot.
  std::array<std::array<std::uint8_t, 256>, 3> values_of{};
  // Lines giving a slot a fixed value.
  std::array<std::array<std::uint8_t, 2>, 3> with_value{};

  constexpr ProjectionTables() {
    for (std::size_t p = 0; p < 3; ++p) {
      for (unsigned t = 0; t < 8; ++t) {
        combo[p][t] = static_cast<std::uint8_t>(2 * triplet_bit(t, kSlotPairs[p][0]) +
                                                triplet_bit(t, kSlotPairs[p][1]));
      }
      for (unsigned allowed = 0; allowed < 16; ++allowed) {
        for (unsigned t = 0; t < 8; ++t) {
          if ((allowed >> combo[p][t]) & 1u) lines_allowed[p][allowed] |= static_cast<std::uint8_t>(1u << t);
        }
      }
      for (unsigned t = 0; t < 8; ++t) with_value[p][triplet_bit(t, p)] |= static_cast<std::uint8_t>(1u << t);
      for (unsigned mask = 0; mask < 256; ++mask) {
        for (unsigned t = 0; t < 8; ++t) {
          if ((mask >> t) & 1u) values_of[p][mask] |= static_cast<std::uint8_t>(1u << triplet_bit(t, p));
        }
      }
    }
  }
};

constexpr ProjectionTables kProj;

// Exchanges the roles of the two variables in a 4-bit relation.
constexpr std::uint8_t swap_roles(std::uint8_t r) {
  return static_cast<std::uint8_t>((r & 0b1001) | ((r & 0b0010) << 1) | ((r & 0b0100) >> 1));
}

std::uint8_t combos_on(Tier t, std::size_t slot_pair) {
  std::uint8_t r = 0;
  for (TripletLine l = 0; l < 8; ++l) {
    if (t.contains(l)) r |= static_cast<std::uint8_t>(1u << kProj.combo[slot_pair][l]);
  }
  return r;
}

// Values variable v takes across all windows containing it (bit b = value b).
std::uint8_t values_of(const Cts& s, VarId v) {
  const std::size_t p = s.permutation().position(v);
  const std::size_t nt = s.num_tiers();
  std::uint8_t seen = 0;
  for (std::size_t j = p >= 2 ? p - 2 : 0; j <= std::min(p, nt - 1); ++j) {
    seen |= kProj.values_of[p - j][s.tier(j).mask()];
  }
  return seen;
}

// Dense index of an unordered pair, smaller variable first.
struct PairIndex {
  std::size_t n;
  std::size_t operator()(VarId a, VarId b) const {
    return a < b ? (a.index - 1) * n + (b.index - 1) : (b.index - 1) * n + (a.index - 1);
  }
};

}  // namespace

Constancy constant_of(const Cts& s, VarId v) {
  if (s.is_empty()) return Constancy::Free;
  switch (values_of(s, v)) {
    case 0b01: return Constancy::Zero;
    case 0b10: return Constancy::One;
    default: return Constancy::Free;
  }
}

std::optional<PairRelation> pair_relation(const Cts& s, VarId a, VarId b) {
  const Permutation& perm = s.permutation();
  std::size_t pa = perm.position(a), pb = perm.position(b);
  const bool swapped = pb < pa;
  if (swapped) std::swap(pa, pb);
  if (pb - pa > 2 || pa == pb) return std::nullopt;
  std::uint8_t allowed = 0b1111;
  for (std::size_t j = pb >= 2 ? pb - 2 : 0; j <= pa && j < s.num_tiers(); ++j) {
    const std::size_t i0 = pa - j, i1 = pb - j;
    const std::size_t slot_pair = i1 - i0 == 2 ? 2 : i0;
    allowed &= combos_on(s.tier(j), slot_pair);
  }
  if (s.is_empty()) allowed = 0;
  return PairRelation{a, b, swapped ? swap_roles(allowed) : allowed};
}

std::string_view to_string(EmptyCause c) {
  switch (c) {
    case EmptyCause::InputEmpty: return "input-empty";
    case EmptyCause::TierEmptied: return "tier-emptied";
    case EmptyCause::ConstantConflict: return "constant-conflict";
  }
  return "?";
}

UnifyResult unify(std::vector<Cts> system, const UnifyOptions& options) {
  UnifyResult out;
  if (system.empty()) return out;
  const std::size_t n = system.front().num_vars();
  for (const Cts& s : system) {
    if (s.num_vars() != n) throw std::invalid_argument("unify: structures differ in n");
  }

  auto collapse = [&](EmptyCause cause, std::size_t culprit) {
    for (Cts& s : system) s = Cts::empty(s.permutation());
    out.empty_cause = cause;
    out.culprit = culprit;
    out.structures = std::move(system);
    if (options.record_trace) out.trace.push_back(out.structures);
    return out;
  };

  for (std::size_t i = 0; i < system.size(); ++i) {
    if (system[i].is_empty()) return collapse(EmptyCause::InputEmpty, i);
  }

  const PairIndex index{n};
  std::vector<std::uint8_t> relation(n * n);
  std::vector<std::uint8_t> sharing(n * n);
  std::vector<std::uint8_t> forced(n + 1);

  for (;;) {
    if (options.record_trace) out.trace.push_back(system);
    ++out.waves;
    const std::vector<Cts> before = system;

    // Constants.
    std::fill(forced.begin(), forced.end(), 0b11);
    for (std::size_t i = 0; i < system.size(); ++i) {
      for (std::uint32_t v = 1; v <= n; ++v) {
        std::uint8_t vals = values_of(system[i], VarId(v));
        if (vals == 0b11) continue;
        if ((forced[v] & vals) == 0) {
          out.conflict_var = VarId(v);
          return collapse(EmptyCause::ConstantConflict, i);
        }
        forced[v] &= vals;
      }
    }

    // Pair agreement over pairs sharing a tier in two or more structures.
    std::fill(relation.begin(), relation.end(), 0b1111);
    std::fill(sharing.begin(), sharing.end(), 0);
    for (const Cts& s : system) {
      const Permutation& perm = s.permutation();
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n && q <= p + 2; ++q) {
          auto r = pair_relation(s, perm.at(p), perm.at(q));
          VarId a = perm.at(p), b = perm.at(q);
          std::uint8_t canon = a < b ? r->allowed : swap_roles(r->allowed);
          std::size_t key = index(a, b);
          relation[key] &= canon;
          if (sharing[key] < 2) ++sharing[key];
        }
      }
    }

    for (std::size_t i = 0; i < system.size(); ++i) {
      const Cts& s = system[i];
      const Permutation& perm = s.permutation();
      std::vector<Tier> tiers(s.tiers().begin(), s.tiers().end());
      for (std::size_t j = 0; j < tiers.size(); ++j) {
        std::uint8_t keep = tiers[j].mask();
        for (std::size_t slot = 0; slot < 3; ++slot) {
          VarId v = perm.at(j + slot);
          if (forced[v.index] == 0b11) continue;
          keep &= kProj.with_value[slot][forced[v.index] == 0b10];
        }
        for (std::size_t sp = 0; sp < 3; ++sp) {
          VarId a = perm.at(j + kSlotPairs[sp][0]), b = perm.at(j + kSlotPairs[sp][1]);
          std::size_t key = index(a, b);
          if (sharing[key] < 2) continue;
          std::uint8_t allowed = a < b ? relation[key] : swap_roles(relation[key]);
          keep &= kProj.lines_allowed[sp][allowed];
        }
        tiers[j] = Tier(keep);
      }
      ClearResult r = clear_with_evidence(Cts(perm, std::move(tiers)));
      if (r.structure.is_empty()) return collapse(EmptyCause::TierEmptied, i);
      system[i] = std::move(r.structure);
    }

    if (system == before) break;
  }
  out.structures = std::move(system);
  if (options.record_trace) out.trace.push_back(out.structures);
  return out;
}

}  // namespace cts
