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

// Hyperstructures over two structures.
//
// The basic graph views the first structure as a layered graph: one vertex
// per line, one edge per compatible pair of lines in adjacent tiers. A
// hyperstructure keeps a copy of that graph (its skeleton) and attaches to
// every vertex and edge a substructure of the second structure. Tier 0
// vertices get the second structure with the vertex's three variables fixed;
// each later tier is formed by shifting the previous tier's substructures
// along the skeleton edges. Routes through a completed hyperstructure whose
// substructures meet in a common assignment are joint satisfying sets.

#ifndef CTS_HYPER_HPP_
#define CTS_HYPER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cts/cts.hpp"

namespace cts {

/// Vertices are (tier, line code); edge (t, u) at gap j joins t at tier j to
/// u at tier j+1.
class BasicGraph {
 public:
  BasicGraph() = default;
  /// Throws std::invalid_argument on an empty structure.
  explicit BasicGraph(const Cts& s);

  const Permutation& permutation() const { return perm_; }
  std::size_t num_tiers() const { return vertices_.size(); }
  Tier vertices(std::size_t j) const { return vertices_[j]; }
  bool has_vertex(std::size_t j, TripletLine t) const { return vertices_[j].contains(t); }
  bool has_edge(std::size_t gap, TripletLine t, TripletLine u) const {
    return (edges_[gap] >> (8 * t + u)) & 1u;
  }
  std::size_t vertex_count() const;
  std::size_t edge_count() const;
  /// Predecessors of u at tier gap+1 / successors of t at tier gap.
  Tier predecessors(std::size_t gap, TripletLine u) const;
  Tier successors(std::size_t gap, TripletLine t) const;

  void remove_vertex(std::size_t j, TripletLine t);
  void remove_edge(std::size_t gap, TripletLine t, TripletLine u);
  bool is_subgraph_of(const BasicGraph& other) const;

  /// The structure whose lines are the surviving vertices (not cleared).
  Cts as_structure() const;

  friend bool operator==(const BasicGraph&, const BasicGraph&) = default;

 private:
  Permutation perm_;
  std::vector<Tier> vertices_;
  std::vector<std::uint64_t> edges_;  // bit 8*t + u per gap
};

/// Assignment spelled by one vertex per tier, through the graph's permutation.
Assignment route_assignment(const Permutation& perm, const std::vector<TripletLine>& route);

class Hyperstructure {
 public:
  Hyperstructure(Cts basic, Cts second);

  const Cts& basic() const { return basic_; }
  const Cts& second() const { return second_; }
  const BasicGraph& skeleton() const { return skeleton_; }
  BasicGraph& skeleton() { return skeleton_; }
  std::size_t num_tiers() const { return skeleton_.num_tiers(); }

  const std::optional<Cts>& vertex_sub(std::size_t j, TripletLine t) const { return vertex_sub_[j][t]; }
  const std::optional<Cts>& edge_sub(std::size_t gap, TripletLine t, TripletLine u) const {
    return edge_sub_[gap][8 * t + u];
  }
  void set_vertex_sub(std::size_t j, TripletLine t, std::optional<Cts> s) { vertex_sub_[j][t] = std::move(s); }
  void set_edge_sub(std::size_t gap, TripletLine t, TripletLine u, std::optional<Cts> s) {
    edge_sub_[gap][8 * t + u] = std::move(s);
  }

  /// Removes a skeleton vertex with its substructure and incident edges.
  void remove_vertex(std::size_t j, TripletLine t);
  void remove_edge(std::size_t gap, TripletLine t, TripletLine u);

  /// Number of tiers formed so far (tier 0 counts once initialised).
  std::size_t formed() const { return formed_; }
  void set_formed(std::size_t f) { formed_ = f; }

 private:
  Cts basic_;
  Cts second_;
  BasicGraph skeleton_;
  std::vector<std::array<std::optional<Cts>, 8>> vertex_sub_;
  std::vector<std::array<std::optional<Cts>, 64>> edge_sub_;
  std::size_t formed_ = 0;
};

/// Union over the substructure-vertices at tier r of their intersections
/// with `target`. Empty if none meets it.
Cts project_tier(const Hyperstructure& h, std::size_t r, const Cts& target);

/// Substructure-edge for skeleton edge (t, u) at gap j: the vertex
/// substructure of t with the variable entering at tier j+1 fixed to u's last
/// value, then projected through tiers 0..j-1 in order.
Cts shift(const Hyperstructure& h, std::size_t gap, TripletLine t, TripletLine u);

struct EpResult {
  std::optional<Hyperstructure> hyperstructure;
  /// First tier (0-based) left without vertices.
  std::optional<std::size_t> empty_tier;
  /// Times a removal forced already formed tiers to be rebuilt.
  std::size_t rebuilds = 0;

  bool is_empty() const { return !hyperstructure.has_value(); }
};

/// Removes formed vertices lacking an incoming edge (or an outgoing one,
/// below the last formed tier) until none is left. Returns the lowest tier
/// below the last formed tier that lost a vertex.
std::optional<std::size_t> prune_formed(Hyperstructure& h);

/// The two structures must be non-empty and share n.
EpResult effective_procedure(const Cts& basic, const Cts& second);

inline constexpr std::size_t kDefaultStepBudget = 1'000'000;

struct Extraction {
  /// Verified joint satisfying sets, in discovery order.
  std::vector<Assignment> assignments;
  /// Extensions abandoned because the running intersection emptied.
  std::size_t backtracks = 0;
  /// Intersections computed.
  std::size_t steps = 0;
  bool budget_exhausted = false;
};

/// Backward walk from the last tier keeping the running intersection of the
/// substructure-vertices met so far. Every returned assignment is checked
/// against both structures; a route failing the check is a logic error and
/// throws std::logic_error.
Extraction extract_jss(const Hyperstructure& h, std::size_t limit,
                       std::size_t step_budget = kDefaultStepBudget);

/// Tier-by-tier text dump of a basic graph.
std::string render(const BasicGraph& g, const VarNames& names);
/// Tier-by-tier dump of every substructure-vertex.
std::string render(const Hyperstructure& h, const VarNames& names);

}  // namespace cts

#endif  // CTS_HYPER_HPP_
