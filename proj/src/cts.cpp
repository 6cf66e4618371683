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

#include "cts/cts.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

namespace cts {

Permutation::Permutation(std::vector<VarId> order) {
  auto d = std::make_shared<Data>();
  d->position.assign(order.size(), order.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    std::uint32_t v = order[p].index;
    if (v == 0 || v > order.size() || d->position[v - 1] != order.size()) {
      throw std::invalid_argument("not a permutation of 1.." +
                                  std::to_string(order.size()));
    }
    d->position[v - 1] = p;
  }
  d->order = std::move(order);
  data_ = std::move(d);
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<VarId> order;
  order.reserve(n);
  for (std::uint32_t v = 1; v <= n; ++v) order.emplace_back(v);
  return Permutation(std::move(order));
}

std::vector<TripletLine> Tier::lines() const {
  std::vector<TripletLine> out;
  for (TripletLine t = 0; t < 8; ++t) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

namespace {

// Precomputed word operations for clearing. A "pair set" is a 4-bit mask
// over the 2-bit values of an overlapping variable pair.
struct PairTables {
  std::array<std::uint8_t, 256> tail_pairs{};  // {t & 3 : t in mask}
  std::array<std::uint8_t, 256> head_pairs{};  // {t >> 1 : t in mask}
  std::array<std::uint8_t, 16> with_head{};    // {t : t >> 1 in pairs}
  std::array<std::uint8_t, 16> with_tail{};    // {t : t & 3 in pairs}
  // lines whose slot k has value b
  std::array<std::array<std::uint8_t, 2>, 3> slot_value{};

  constexpr PairTables() {
    for (unsigned m = 0; m < 256; ++m) {
      for (unsigned t = 0; t < 8; ++t) {
        if ((m >> t) & 1u) {
          tail_pairs[m] |= static_cast<std::uint8_t>(1u << (t & 3u));
          head_pairs[m] |= static_cast<std::uint8_t>(1u << (t >> 1));
        }
      }
    }
    for (unsigned p = 0; p < 16; ++p) {
      for (unsigned t = 0; t < 8; ++t) {
        if ((p >> (t >> 1)) & 1u) with_head[p] |= static_cast<std::uint8_t>(1u << t);
        if ((p >> (t & 3u)) & 1u) with_tail[p] |= static_cast<std::uint8_t>(1u << t);
      }
    }
    for (unsigned k = 0; k < 3; ++k) {
      for (unsigned t = 0; t < 8; ++t) {
        unsigned b = (t >> (2 - k)) & 1u;
        slot_value[k][b] |= static_cast<std::uint8_t>(1u << t);
      }
    }
  }
};

constexpr PairTables kTables{};

std::uint8_t supported(std::span<const Tier> tiers, std::size_t j) {
  std::uint8_t keep = tiers[j].mask();
  if (j > 0) keep &= kTables.with_head[kTables.tail_pairs[tiers[j - 1].mask()]];
  if (j + 1 < tiers.size()) {
    keep &= kTables.with_tail[kTables.head_pairs[tiers[j + 1].mask()]];
  }
  return keep;
}

void require_same_perm(const Cts& a, const Cts& b) {
  if (!(a.permutation() == b.permutation())) {
    throw std::invalid_argument("structures are based on different permutations");
  }
}

}  // namespace

Cts::Cts(Permutation perm, std::vector<Tier> tiers)
    : perm_(std::move(perm)), tiers_(std::move(tiers)) {
  if (perm_.size() < 3 || tiers_.size() != perm_.size() - 2) {
    throw std::invalid_argument("a structure over n variables has n-2 tiers");
  }
}

Cts Cts::complete(Permutation perm) {
  std::size_t n = perm.size();
  return Cts(std::move(perm), std::vector<Tier>(n - 2, Tier::full()));
}

Cts Cts::empty(Permutation perm) {
  std::size_t n = perm.size();
  Cts s(std::move(perm), std::vector<Tier>(n - 2));
  s.empty_ = true;
  return s;
}

bool Cts::is_elementary() const {
  if (empty_) return false;
  return std::all_of(tiers_.begin(), tiers_.end(),
                     [](Tier t) { return t.size() == 1; });
}

std::size_t Cts::line_count() const {
  std::size_t c = 0;
  for (Tier t : tiers_) c += static_cast<std::size_t>(t.size());
  return c;
}

bool Cts::is_substructure_of(const Cts& other) const {
  require_same_perm(*this, other);
  for (std::size_t j = 0; j < tiers_.size(); ++j) {
    if (!tiers_[j].is_subset_of(other.tiers_[j])) return false;
  }
  return true;
}

ClearResult clear_with_evidence(Cts s) {
  if (s.is_empty()) return {std::move(s), std::nullopt};
  std::vector<Tier> tiers(s.tiers().begin(), s.tiers().end());
  const std::size_t nt = tiers.size();
  for (std::size_t j = 0; j < nt; ++j) {
    if (tiers[j].empty()) return {Cts::empty(s.permutation()), j};
  }

  std::vector<std::size_t> work;
  std::vector<char> queued(nt, 1);
  work.reserve(nt);
  for (std::size_t j = nt; j-- > 0;) work.push_back(j);

  while (!work.empty()) {
    std::size_t j = work.back();
    work.pop_back();
    queued[j] = 0;
    std::uint8_t keep = supported(tiers, j);
    if (keep == tiers[j].mask()) continue;
    tiers[j] = Tier(keep);
    if (keep == 0) return {Cts::empty(s.permutation()), j};
    if (j > 0 && !queued[j - 1]) {
      queued[j - 1] = 1;
      work.push_back(j - 1);
    }
    if (j + 1 < nt && !queued[j + 1]) {
      queued[j + 1] = 1;
      work.push_back(j + 1);
    }
  }
  return {Cts(s.permutation(), std::move(tiers)), std::nullopt};
}

Cts clear(Cts s) { return clear_with_evidence(std::move(s)).structure; }

Cts unite(const Cts& a, const Cts& b) {
  require_same_perm(a, b);
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  std::vector<Tier> tiers(a.num_tiers());
  for (std::size_t j = 0; j < tiers.size(); ++j) tiers[j] = a.tier(j) | b.tier(j);
  return Cts(a.permutation(), std::move(tiers));
}

Cts intersect(const Cts& a, const Cts& b) {
  require_same_perm(a, b);
  if (a.is_empty()) return a;
  if (b.is_empty()) return b;
  std::vector<Tier> tiers(a.num_tiers());
  for (std::size_t j = 0; j < tiers.size(); ++j) {
    tiers[j] = a.tier(j) & b.tier(j);
    if (tiers[j].empty()) return Cts::empty(a.permutation());
  }
  return clear(Cts(a.permutation(), std::move(tiers)));
}

Cts concretize(const Cts& s, VarId v, bool value) {
  if (v.index == 0 || v.index > s.num_vars()) {
    throw std::invalid_argument("variable out of range");
  }
  if (s.is_empty()) return s;
  const std::size_t p = s.permutation().position(v);
  const std::size_t lo = p >= 2 ? p - 2 : 0;
  const std::size_t hi = std::min(p, s.num_tiers() - 1);
  std::vector<Tier> tiers(s.tiers().begin(), s.tiers().end());
  bool changed = false;
  for (std::size_t j = lo; j <= hi; ++j) {
    Tier kept(tiers[j].mask() & kTables.slot_value[p - j][value ? 1 : 0]);
    if (kept.empty()) return Cts::empty(s.permutation());
    changed |= kept != tiers[j];
    tiers[j] = kept;
  }
  if (!changed) return clear(s);
  return clear(Cts(s.permutation(), std::move(tiers)));
}

bool equivalent(const Cts& a, const Cts& b) {
  require_same_perm(a, b);
  return a.is_empty() == b.is_empty() &&
         std::equal(a.tiers().begin(), a.tiers().end(), b.tiers().begin());
}

namespace {

TripletLine line_at(const Assignment& a, const Permutation& perm, std::size_t j) {
  return static_cast<TripletLine>((a[perm.at(j)] ? 4 : 0) |
                                  (a[perm.at(j + 1)] ? 2 : 0) |
                                  (a[perm.at(j + 2)] ? 1 : 0));
}

void check_length(const Assignment& a, const Permutation& perm) {
  if (a.size() != perm.size()) {
    throw std::invalid_argument("assignment length does not match structure");
  }
}

}  // namespace

Cts from_assignment(const Assignment& a, const Permutation& perm) {
  check_length(a, perm);
  std::vector<Tier> tiers(perm.size() - 2);
  for (std::size_t j = 0; j < tiers.size(); ++j) tiers[j].insert(line_at(a, perm, j));
  return Cts(perm, std::move(tiers));
}

bool contains_assignment(const Cts& s, const Assignment& a) {
  check_length(a, s.permutation());
  if (s.is_empty()) return false;
  for (std::size_t j = 0; j < s.num_tiers(); ++j) {
    if (!s.tier(j).contains(line_at(a, s.permutation(), j))) return false;
  }
  return true;
}

std::vector<Assignment> enumerate_assignments(const Cts& s, std::size_t max_vars) {
  if (s.num_vars() > max_vars) {
    throw EnumerationBoundError("enumeration refused: n = " +
                                std::to_string(s.num_vars()) + " exceeds bound " +
                                std::to_string(max_vars));
  }
  std::vector<Assignment> out;
  if (s.is_empty()) return out;
  const std::size_t nt = s.num_tiers();
  const Permutation& perm = s.permutation();
  std::vector<TripletLine> chain(nt);

  // Depth-first over chains of compatible lines.
  auto emit = [&] {
    Assignment a(s.num_vars());
    a.set(perm.at(0), triplet_bit(chain[0], 0));
    a.set(perm.at(1), triplet_bit(chain[0], 1));
    for (std::size_t j = 0; j < nt; ++j) a.set(perm.at(j + 2), triplet_bit(chain[j], 2));
    out.push_back(std::move(a));
  };
  auto walk = [&](auto&& self, std::size_t j) -> void {
    for (TripletLine t : s.tier(j).lines()) {
      if (j > 0 && !compatible(chain[j - 1], t)) continue;
      chain[j] = t;
      if (j + 1 == nt) {
        emit();
      } else {
        self(self, j + 1);
      }
    }
  };
  walk(walk, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_assignments(const Cts& s) {
  if (s.is_empty()) return 0;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::array<std::uint64_t, 8> ways{};
  for (TripletLine t : s.tier(0).lines()) ways[t] = 1;
  for (std::size_t j = 1; j < s.num_tiers(); ++j) {
    std::array<std::uint64_t, 8> next{};
    for (TripletLine u : s.tier(j).lines()) {
      for (TripletLine t = 0; t < 8; ++t) {
        if (ways[t] && compatible(t, u)) {
          next[u] = next[u] > kMax - ways[t] ? kMax : next[u] + ways[t];
        }
      }
    }
    ways = next;
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = total > kMax - w ? kMax : total + w;
  return total;
}

std::optional<Assignment> any_assignment(const Cts& s) {
  if (s.is_empty()) return std::nullopt;
  const Permutation& perm = s.permutation();
  Assignment a(s.num_vars());
  std::optional<TripletLine> prev;
  for (std::size_t j = 0; j < s.num_tiers(); ++j) {
    std::optional<TripletLine> pick;
    for (TripletLine t : s.tier(j).lines()) {
      if (!prev || compatible(*prev, t)) {
        pick = t;
        break;
      }
    }
    if (!pick) return std::nullopt;  // not cleared
    if (j == 0) {
      a.set(perm.at(0), triplet_bit(*pick, 0));
      a.set(perm.at(1), triplet_bit(*pick, 1));
    }
    a.set(perm.at(j + 2), triplet_bit(*pick, 2));
    prev = pick;
  }
  return a;
}

VarNames default_names(std::size_t n) {
  VarNames names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::string render(const Cts& s, const VarNames& names) {
  const Permutation& perm = s.permutation();
  std::size_t width = 1;
  for (VarId v : perm.order()) width = std::max(width, names.at(v.index - 1).size());

  std::vector<std::string> cells(perm.size());
  auto flush = [&](std::ostringstream& os) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) row += ' ';
      row += cells[i];
      row.append(width - cells[i].size(), ' ');
    }
    row.erase(row.find_last_not_of(' ') + 1);
    os << row << '\n';
  };

  std::ostringstream os;
  for (std::size_t p = 0; p < perm.size(); ++p) cells[p] = names.at(perm.at(p).index - 1);
  flush(os);
  if (s.is_empty()) {
    os << "(empty)\n";
    return os.str();
  }
  for (std::size_t j = 0; j < s.num_tiers(); ++j) {
    for (TripletLine t : s.tier(j).lines()) {
      std::fill(cells.begin(), cells.end(), std::string());
      for (std::size_t k = 0; k < 3; ++k) cells[j + k] = triplet_bit(t, k) ? "1" : "0";
      flush(os);
    }
  }
  return os.str();
}

std::string render(const Cts& s) { return render(s, default_names(s.num_vars())); }

}  // namespace cts
