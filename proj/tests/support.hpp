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

// Naive reference computations shared by the unit tests. Nothing here uses
// the library's own enumeration or propagation code.

#ifndef CTS_TESTS_SUPPORT_HPP_
#define CTS_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cts/cts.hpp"
#include "cts/formula.hpp"

namespace cts::testing {

inline Assignment from_mask(std::uint32_t mask, std::size_t n) {
  Assignment a(n);
  for (std::size_t i = 0; i < n; ++i) a.set(VarId(static_cast<std::uint32_t>(i + 1)), (mask >> i) & 1u);
  return a;
}

// Straight clause-by-clause check, independent of evaluate().
inline bool satisfies(const TabularFormula& f, const Assignment& a) {
  for (const Clause& c : f.clauses()) {
    bool some_true = false;
    for (const Literal& l : c.literals()) some_true = some_true || (a[l.var] == !l.negated);
    if (!some_true) return false;
  }
  return true;
}

inline std::set<std::string> models(const TabularFormula& f) {
  std::set<std::string> out;
  for (std::uint32_t m = 0; m < (1u << f.num_vars()); ++m) {
    Assignment a = from_mask(m, f.num_vars());
    if (satisfies(f, a)) out.insert(a.to_string());
  }
  return out;
}

// Assignments whose induced line sits in every tier of a raw structure.
// Equals the chain semantics whether or not the structure is cleared.
inline bool encodes(const Cts& s, const Assignment& a) {
  if (s.is_empty()) return false;
  const Permutation& p = s.permutation();
  for (std::size_t j = 0; j < s.num_tiers(); ++j) {
    unsigned code = (a[p.at(j)] ? 4u : 0u) | (a[p.at(j + 1)] ? 2u : 0u) | (a[p.at(j + 2)] ? 1u : 0u);
    if (!s.tier(j).contains(static_cast<TripletLine>(code))) return false;
  }
  return true;
}

inline std::set<std::string> encoded(const Cts& s) {
  std::set<std::string> out;
  const std::size_t n = s.num_vars();
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    Assignment a = from_mask(m, n);
    if (encodes(s, a)) out.insert(a.to_string());
  }
  return out;
}

inline std::set<std::string> as_strings(const std::vector<Assignment>& v) {
  std::set<std::string> out;
  for (const Assignment& a : v) out.insert(a.to_string());
  return out;
}

inline Permutation random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<VarId> order;
  for (std::uint32_t v = 1; v <= n; ++v) order.emplace_back(v);
  std::shuffle(order.begin(), order.end(), rng);
  return Permutation(std::move(order));
}

// Raw structure with each line present with probability `density`.
inline Cts random_raw(std::mt19937_64& rng, const Permutation& p, double density) {
  std::bernoulli_distribution keep(density);
  std::vector<Tier> tiers(p.size() - 2);
  for (Tier& t : tiers) {
    for (TripletLine l = 0; l < 8; ++l) {
      if (keep(rng)) t.insert(l);
    }
  }
  return Cts(p, std::move(tiers));
}

inline TabularFormula random_formula(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_int_distribution<std::uint32_t> var(1, static_cast<std::uint32_t>(n));
  std::bernoulli_distribution neg(0.5);
  std::vector<Clause> cs;
  while (cs.size() < m) {
    VarId a(var(rng)), b(var(rng)), c(var(rng));
    if (a == b || b == c || a == c) continue;
    cs.emplace_back(Literal{a, neg(rng)}, Literal{b, neg(rng)}, Literal{c, neg(rng)});
  }
  return TabularFormula(n, std::move(cs));
}

// Line-by-line fixpoint clearing, one deletion pass at a time.
inline Cts naive_clear(const Cts& s) {
  if (s.is_empty()) return s;
  std::vector<Tier> tiers(s.tiers().begin(), s.tiers().end());
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < tiers.size(); ++j) {
      for (TripletLine t : tiers[j].lines()) {
        bool left = j == 0, right = j + 1 == tiers.size();
        for (TripletLine u = 0; u < 8; ++u) {
          left = left || (tiers[j - 1].contains(u) && compatible(u, t));
          right = right || (tiers[j + 1].contains(u) && compatible(t, u));
        }
        if (!left || !right) {
          tiers[j].erase(t);
          changed = true;
        }
      }
    }
  }
  for (Tier t : tiers) {
    if (t.empty()) return Cts::empty(s.permutation());
  }
  return Cts(s.permutation(), std::move(tiers));
}

inline Cts naive_intersect(const Cts& a, const Cts& b) {
  if (a.is_empty() || b.is_empty()) return Cts::empty(a.permutation());
  std::vector<Tier> tiers;
  for (std::size_t j = 0; j < a.num_tiers(); ++j) tiers.push_back(a.tier(j) & b.tier(j));
  return naive_clear(Cts(a.permutation(), std::move(tiers)));
}

inline Cts naive_union(const Cts& a, const Cts& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  std::vector<Tier> tiers;
  for (std::size_t j = 0; j < a.num_tiers(); ++j) tiers.push_back(a.tier(j) | b.tier(j));
  return Cts(a.permutation(), std::move(tiers));
}

inline Cts naive_concretize(const Cts& s, VarId v, bool value) {
  if (s.is_empty()) return s;
  const std::size_t p = s.permutation().position(v);
  std::vector<Tier> tiers(s.tiers().begin(), s.tiers().end());
  for (std::size_t j = 0; j < tiers.size(); ++j) {
    if (p < j || p > j + 2) continue;
    for (TripletLine t : tiers[j].lines()) {
      bool bit = (t >> (2 - (p - j))) & 1u;
      if (bit != value) tiers[j].erase(t);
    }
  }
  return naive_clear(Cts(s.permutation(), std::move(tiers)));
}

}  // namespace cts::testing

#endif  // CTS_TESTS_SUPPORT_HPP_
