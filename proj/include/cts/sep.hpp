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

// Hyperstructure systems over k structures and the classifier.
//
// The first structure provides the shared skeleton; every other structure
// gets its own hyperstructure on it. All members advance in lockstep: each
// concretization and projection step is applied in every member and the
// resulting same-name substructures are unified together. A skeleton element
// that empties in any member is removed from all of them.

#ifndef CTS_SEP_HPP_
#define CTS_SEP_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cts/cts.hpp"
#include "cts/decompose.hpp"
#include "cts/formula.hpp"
#include "cts/hyper.hpp"

namespace cts {

class HsSystem {
 public:
  HsSystem(Cts basic, const std::vector<Cts>& others);

  const BasicGraph& skeleton() const { return members_.front().skeleton(); }
  std::size_t num_tiers() const { return skeleton().num_tiers(); }
  std::size_t num_members() const { return members_.size(); }
  const Hyperstructure& member(std::size_t i) const { return members_[i]; }
  Hyperstructure& member(std::size_t i) { return members_[i]; }
  const Cts& basic() const { return members_.front().basic(); }
  std::size_t formed() const { return members_.front().formed(); }
  void set_formed(std::size_t f);

  void remove_vertex(std::size_t j, TripletLine t);
  void remove_edge(std::size_t gap, TripletLine t, TripletLine u);

 private:
  std::vector<Hyperstructure> members_;
};

enum class Granularity {
  /// Unify after the concretization and after every projection.
  Fine,
  /// Unify only the finished substructure-edges.
  Coarse,
};

/// Substructure-edges of one skeleton edge in every member, or nullopt when
/// any member empties along the way.
std::optional<std::vector<Cts>> concordant_shift(const HsSystem& sys, std::size_t gap, TripletLine t,
                                                 TripletLine u, Granularity g = Granularity::Fine);

/// The assignment of an elementary structure, if it lies in `basic` and
/// satisfies `f`.
std::optional<Assignment> early_elementary_check(const Cts& pi, const Cts& basic, const TabularFormula& f);

struct SepOptions {
  Granularity granularity = Granularity::Fine;
  bool early_check = true;
  /// Candidates from the early check must satisfy this formula; without one
  /// they must lie in every structure.
  const TabularFormula* formula = nullptr;
};

struct SepResult {
  std::optional<HsSystem> system;
  std::optional<std::size_t> empty_tier;
  std::optional<Assignment> early_witness;
  std::optional<std::size_t> early_tier;
  std::size_t rebuilds = 0;
  std::size_t unifications = 0;

  bool is_empty() const { return empty_tier.has_value(); }
};

/// `structures` must be unified, non-empty, k >= 2. Stops early when the
/// early check accepts a candidate (system then holds the partial state).
SepResult sep(const std::vector<Cts>& structures, const SepOptions& options = {});

struct SystemExtraction {
  std::optional<Assignment> assignment;
  std::size_t backtracks = 0;
  std::size_t steps = 0;
  bool budget_exhausted = false;
};

/// Backward walk over the shared skeleton keeping one running intersection
/// per member. The result is checked against every structure and `f` (if
/// given); a failed check throws std::logic_error.
SystemExtraction extract_jss_system(const HsSystem& sys, const std::vector<Cts>& structures,
                                    const TabularFormula* f, std::size_t step_budget = kDefaultStepBudget);

// --- classification -------------------------------------------------------

enum class Stage { Cts, Unify, Sep };
std::string_view to_string(Stage s);

struct Satisfiable {
  Assignment witness;
  /// "single", "early" or "extraction".
  std::string source;
};

struct Unsatisfiable {
  Stage stage;
  /// Empty tier (0-based) for the cts and sep stages.
  std::optional<std::size_t> tier;
  std::string detail;
};

struct ClassificationFailure {
  /// JSON bundle: skeleton, substructures, extraction telemetry.
  std::string diagnostics;
};

struct ClassifyStats {
  std::size_t k = 0;
  std::size_t w = 0;
  std::size_t unify_waves = 0;
  std::size_t sep_rebuilds = 0;
  std::size_t sep_unifications = 0;
  std::size_t backtracks = 0;
  std::size_t extraction_steps = 0;
};

struct Verdict {
  std::variant<Satisfiable, Unsatisfiable, ClassificationFailure> outcome;
  ClassifyStats stats;

  bool satisfiable() const { return std::holds_alternative<Satisfiable>(outcome); }
  bool unsatisfiable() const { return std::holds_alternative<Unsatisfiable>(outcome); }
  bool failed() const { return std::holds_alternative<ClassificationFailure>(outcome); }
  /// 10, 20 or 30.
  int exit_code() const;
  /// One line: "SAT <bits> source=..", "UNSAT stage=.. tier=..", "FAIL".
  std::string record() const;
  /// Structured report as JSON text.
  std::string json() const;
};

struct ClassifyOptions {
  Strategy strategy = Strategy::Assemble;
  /// Use these CT formulas instead of decomposing; they must partition the
  /// canonical formula.
  std::optional<std::vector<Ctf>> decomposition;
  Granularity granularity = Granularity::Fine;
  bool early_check = true;
  std::size_t step_budget = kDefaultStepBudget;
};

/// Never returns an unverified Satisfiable; a witness failing evaluation
/// throws std::logic_error.
Verdict classify(const TabularFormula& f, const ClassifyOptions& options = {});

}  // namespace cts

#endif  // CTS_SEP_HPP_
