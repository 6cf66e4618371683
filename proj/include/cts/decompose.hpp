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

// Splitting a tabular formula into CT formulas, one per permutation, and
// turning each CT formula into its structure.

#ifndef CTS_DECOMPOSE_HPP_
#define CTS_DECOMPOSE_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cts/cts.hpp"
#include "cts/formula.hpp"

namespace cts {

/// A formula whose clauses are all compact triplets under one permutation.
/// Tier j holds the mark patterns of the clauses over positions j..j+2;
/// empty tiers are allowed.
class Ctf {
 public:
  Ctf(Permutation perm, std::vector<Tier> lines);
  /// Throws std::invalid_argument if a clause is not a compact triplet under
  /// `perm`.
  static Ctf from_clauses(Permutation perm, std::span<const Clause> clauses);

  const Permutation& permutation() const { return perm_; }
  std::size_t num_vars() const { return perm_.size(); }
  std::span<const Tier> tiers() const { return lines_; }
  std::size_t num_lines() const;
  std::vector<Clause> clauses() const;

  friend bool operator==(const Ctf&, const Ctf&) = default;

 private:
  Permutation perm_;
  std::vector<Tier> lines_;
};

/// Clauses sharing one unordered variable triple.
struct TermGroup {
  std::array<VarId, 3> vars;  // ascending
  std::vector<Clause> clauses;
};

/// One group per distinct triple, ordered by triple.
std::vector<TermGroup> group_terms(const TabularFormula& f);

enum class Strategy { Simple, Assemble };
Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy s);

struct DecompositionReport {
  std::size_t k = 0;  // CT formulas produced
  std::size_t w = 0;  // distinct variable triples
  std::vector<std::size_t> group_sizes;
};

struct Decomposition {
  std::vector<Ctf> ctfs;
  DecompositionReport report;
};

/// Simple gives each triple group its own permutation (triple first, in
/// ascending order, then the remaining variables ascending). Assemble
/// greedily chains groups into shared permutations, preferring groups that
/// overlap the tail of the permutation under construction in two variables,
/// and then absorbs every remaining group whose triple already sits in a
/// window. Every clause lands in exactly one CT formula.
Decomposition decompose(const TabularFormula& f, Strategy strategy);

/// Every clause of `f` occurs in some CT formula and no CT formula carries a
/// clause absent from `f`.
bool is_sound_decomposition(const TabularFormula& f, std::span<const Ctf> ctfs);

/// Per-tier complement of the clause lines, then clearing. Empty iff the CT
/// formula is contradictory.
Cts ctf_to_cts(const Ctf& c);
ClearResult ctf_to_cts_with_evidence(const Ctf& c);

/// Table dump of the clause lines in permutation order.
std::string render(const Ctf& c, const VarNames& names);

// Decomposition files: DIMACS-style text holding a sequence of CT formulas.
//
//   c comment
//   p ctf <n> <k>
//   perm <v1> ... <vn> 0
//   <lit> <lit> <lit> 0        clauses of the preceding permutation
//   perm ...
//
// Every clause must be a compact triplet under its permutation.
std::vector<Ctf> parse_decomposition(std::string_view text);
std::string write_decomposition(std::span<const Ctf> ctfs);

}  // namespace cts

#endif  // CTS_DECOMPOSE_HPP_
