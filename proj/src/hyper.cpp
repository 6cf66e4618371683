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

#include "cts/hyper.hpp"

#include <sstream>
#include <stdexcept>

namespace cts {

namespace {

std::uint64_t compatible_pairs(Tier from, Tier to) {
  std::uint64_t m = 0;
  for (TripletLine t : from.lines()) {
    for (TripletLine u : to.lines()) {
      if (compatible(t, u)) m |= std::uint64_t{1} << (8 * t + u);
    }
  }
  return m;
}

}  // namespace

BasicGraph::BasicGraph(const Cts& s) : perm_(s.permutation()) {
  if (s.is_empty()) throw std::invalid_argument("basic graph of an empty structure");
  vertices_.assign(s.tiers().begin(), s.tiers().end());
  for (std::size_t j = 0; j + 1 < vertices_.size(); ++j) {
    edges_.push_back(compatible_pairs(vertices_[j], vertices_[j + 1]));
  }
}

std::size_t BasicGraph::vertex_count() const {
  std::size_t c = 0;
  for (Tier t : vertices_) c += static_cast<std::size_t>(t.size());
  return c;
}

std::size_t BasicGraph::edge_count() const {
  std::size_t c = 0;
  for (std::uint64_t e : edges_) c += static_cast<std::size_t>(std::popcount(e));
  return c;
}

Tier BasicGraph::predecessors(std::size_t gap, TripletLine u) const {
  Tier out;
  for (TripletLine t = 0; t < 8; ++t) {
    if (has_edge(gap, t, u)) out.insert(t);
  }
  return out;
}

Tier BasicGraph::successors(std::size_t gap, TripletLine t) const {
  return Tier(static_cast<std::uint8_t>(edges_[gap] >> (8 * t)));
}

void BasicGraph::remove_vertex(std::size_t j, TripletLine t) {
  vertices_[j].erase(t);
  if (j + 1 < vertices_.size()) edges_[j] &= ~(std::uint64_t{0xff} << (8 * t));
  if (j > 0) {
    for (TripletLine p = 0; p < 8; ++p) remove_edge(j - 1, p, t);
  }
}

void BasicGraph::remove_edge(std::size_t gap, TripletLine t, TripletLine u) {
  edges_[gap] &= ~(std::uint64_t{1} << (8 * t + u));
}

bool BasicGraph::is_subgraph_of(const BasicGraph& other) const {
  if (!(perm_ == other.perm_) || vertices_.size() != other.vertices_.size()) return false;
  for (std::size_t j = 0; j < vertices_.size(); ++j) {
    if (!vertices_[j].is_subset_of(other.vertices_[j])) return false;
  }
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    if (edges_[j] & ~other.edges_[j]) return false;
  }
  return true;
}

Cts BasicGraph::as_structure() const { return Cts(perm_, vertices_); }

Assignment route_assignment(const Permutation& perm, const std::vector<TripletLine>& route) {
  Assignment a(perm.size());
  for (std::size_t j = 0; j < route.size(); ++j) {
    for (std::size_t k = 0; k < 3; ++k) a.set(perm.at(j + k), triplet_bit(route[j], k));
  }
  return a;
}

Hyperstructure::Hyperstructure(Cts basic, Cts second)
    : basic_(std::move(basic)), second_(std::move(second)), skeleton_(basic_) {
  vertex_sub_.resize(skeleton_.num_tiers());
  edge_sub_.resize(skeleton_.num_tiers() > 0 ? skeleton_.num_tiers() - 1 : 0);
}

void Hyperstructure::remove_vertex(std::size_t j, TripletLine t) {
  if (j + 1 < num_tiers()) {
    for (TripletLine u = 0; u < 8; ++u) edge_sub_[j][8 * t + u].reset();
  }
  if (j > 0) {
    for (TripletLine p = 0; p < 8; ++p) edge_sub_[j - 1][8 * p + t].reset();
  }
  vertex_sub_[j][t].reset();
  skeleton_.remove_vertex(j, t);
}

void Hyperstructure::remove_edge(std::size_t gap, TripletLine t, TripletLine u) {
  edge_sub_[gap][8 * t + u].reset();
  skeleton_.remove_edge(gap, t, u);
}

Cts project_tier(const Hyperstructure& h, std::size_t r, const Cts& target) {
  Cts acc = Cts::empty(target.permutation());
  if (target.is_empty()) return acc;
  for (TripletLine t : h.skeleton().vertices(r).lines()) {
    const auto& sub = h.vertex_sub(r, t);
    if (!sub) continue;
    acc = unite(acc, intersect(*sub, target));
  }
  return acc;
}

Cts shift(const Hyperstructure& h, std::size_t gap, TripletLine t, TripletLine u) {
  const auto& from = h.vertex_sub(gap, t);
  if (!from) throw std::logic_error("shift from a vertex without substructure");
  VarId entering = h.skeleton().permutation().at(gap + 3);
  Cts pi = concretize(*from, entering, (u & 1u) != 0);
  for (std::size_t s = 0; s < gap && !pi.is_empty(); ++s) pi = project_tier(h, s, pi);
  return pi;
}

namespace {

void form_first_tier(Hyperstructure& h) {
  const Permutation& perm = h.skeleton().permutation();
  for (TripletLine t : h.skeleton().vertices(0).lines()) {
    Cts s = h.second();
    for (std::size_t k = 0; k < 3 && !s.is_empty(); ++k) s = concretize(s, perm.at(k), triplet_bit(t, k));
    if (s.is_empty()) {
      h.remove_vertex(0, t);
    } else {
      h.set_vertex_sub(0, t, std::move(s));
    }
  }
  h.set_formed(1);
}

// Substructure-edges of gap j, then the substructure-vertices of tier j+1.
void form_gap(Hyperstructure& h, std::size_t j) {
  for (TripletLine u : h.skeleton().vertices(j + 1).lines()) h.set_vertex_sub(j + 1, u, std::nullopt);
  for (TripletLine t : h.skeleton().vertices(j).lines()) {
    for (TripletLine u : h.skeleton().successors(j, t).lines()) {
      Cts pi = shift(h, j, t, u);
      if (pi.is_empty()) {
        h.remove_edge(j, t, u);
      } else {
        h.set_edge_sub(j, t, u, std::move(pi));
      }
    }
  }
  for (TripletLine u : h.skeleton().vertices(j + 1).lines()) {
    std::optional<Cts> acc;
    for (TripletLine t : h.skeleton().predecessors(j, u).lines()) {
      const Cts& e = *h.edge_sub(j, t, u);
      acc = acc ? unite(*acc, e) : e;
    }
    if (acc) {
      h.set_vertex_sub(j + 1, u, std::move(acc));
    } else {
      h.remove_vertex(j + 1, u);
    }
  }
  h.set_formed(j + 2);
}

}  // namespace

std::optional<std::size_t> prune_formed(Hyperstructure& h) {
  const std::size_t formed = h.formed();
  std::optional<std::size_t> lowest;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < formed; ++i) {
      for (TripletLine t : h.skeleton().vertices(i).lines()) {
        bool stranded = (i > 0 && h.skeleton().predecessors(i - 1, t).empty()) ||
                        (i + 1 < formed && h.skeleton().successors(i, t).empty());
        if (!stranded) continue;
        h.remove_vertex(i, t);
        changed = true;
        if (i + 1 < formed && (!lowest || i < *lowest)) lowest = i;
      }
    }
  }
  return lowest;
}

EpResult effective_procedure(const Cts& basic, const Cts& second) {
  if (basic.is_empty() || second.is_empty()) {
    throw std::invalid_argument("effective procedure needs non-empty structures");
  }
  if (basic.num_vars() != second.num_vars()) {
    throw std::invalid_argument("effective procedure: structures differ in n");
  }
  EpResult out;
  Hyperstructure h(basic, second);
  const std::size_t nt = h.num_tiers();
  auto first_empty = [&]() -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < h.formed(); ++i) {
      if (h.skeleton().vertices(i).empty()) return i;
    }
    return std::nullopt;
  };

  form_first_tier(h);
  if (auto e = first_empty()) {
    out.empty_tier = e;
    return out;
  }
  std::size_t gap = 0;
  while (gap + 1 < nt) {
    form_gap(h, gap);
    std::optional<std::size_t> stale = prune_formed(h);
    if (auto e = first_empty()) {
      out.empty_tier = e;
      return out;
    }
    if (stale) {
      // Tiers after the lowest removal were built from substructures that
      // no longer exist.
      ++out.rebuilds;
      gap = *stale;
      h.set_formed(gap + 1);
    } else {
      ++gap;
    }
  }
  out.hyperstructure = std::move(h);
  return out;
}

Extraction extract_jss(const Hyperstructure& h, std::size_t limit, std::size_t step_budget) {
  Extraction out;
  const std::size_t nt = h.num_tiers();
  if (limit == 0 || nt == 0) return out;
  std::vector<TripletLine> route(nt);

  // Returns true to stop the search.
  auto walk = [&](auto& self, std::size_t j, TripletLine t, const Cts& running) -> bool {
    route[j] = t;
    if (j == 0) {
      Assignment a = route_assignment(h.skeleton().permutation(), route);
      if (!contains_assignment(h.basic(), a) || !contains_assignment(h.second(), a)) {
        throw std::logic_error("extracted route is not a joint satisfying set: " + a.to_string());
      }
      out.assignments.push_back(std::move(a));
      return out.assignments.size() >= limit;
    }
    for (TripletLine p : h.skeleton().predecessors(j - 1, t).lines()) {
      if (out.steps >= step_budget) {
        out.budget_exhausted = true;
        return true;
      }
      ++out.steps;
      Cts next = intersect(running, *h.vertex_sub(j - 1, p));
      if (next.is_empty()) {
        ++out.backtracks;
        continue;
      }
      if (self(self, j - 1, p, next)) return true;
    }
    return false;
  };

  for (TripletLine t : h.skeleton().vertices(nt - 1).lines()) {
    if (walk(walk, nt - 1, t, *h.vertex_sub(nt - 1, t))) break;
  }
  return out;
}

namespace {

std::string bits_of(TripletLine t) {
  std::string s(3, '0');
  for (std::size_t k = 0; k < 3; ++k) s[k] = triplet_bit(t, k) ? '1' : '0';
  return s;
}

std::string window_names(const Permutation& perm, std::size_t j, const VarNames& names) {
  std::string s;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k) s += ' ';
    s += names[perm.at(j + k).index - 1];
  }
  return s;
}

}  // namespace

std::string render(const BasicGraph& g, const VarNames& names) {
  std::ostringstream os;
  for (std::size_t j = 0; j < g.num_tiers(); ++j) {
    os << "tier " << j + 1 << " (" << window_names(g.permutation(), j, names) << "):";
    for (TripletLine t : g.vertices(j).lines()) os << ' ' << bits_of(t);
    os << '\n';
    if (j + 1 == g.num_tiers()) break;
    os << "  edges:";
    for (TripletLine t : g.vertices(j).lines()) {
      for (TripletLine u : g.successors(j, t).lines()) os << ' ' << bits_of(t) << '-' << bits_of(u);
    }
    os << '\n';
  }
  os << "vertices " << g.vertex_count() << ", edges " << g.edge_count() << '\n';
  return os.str();
}

std::string render(const Hyperstructure& h, const VarNames& names) {
  std::ostringstream os;
  const Permutation& perm = h.skeleton().permutation();
  for (std::size_t j = 0; j < h.formed(); ++j) {
    for (TripletLine t : h.skeleton().vertices(j).lines()) {
      os << "tier " << j + 1 << " vertex " << bits_of(t) << " (" << window_names(perm, j, names)
         << ")\n";
      const auto& sub = h.vertex_sub(j, t);
      os << (sub ? render(*sub, names) : std::string("(none)\n")) << '\n';
    }
  }
  return os.str();
}

}  // namespace cts
