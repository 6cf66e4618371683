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

// Ground truth and differential testing of the classifier.

#ifndef CTS_ORACLE_HPP_
#define CTS_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cts/formula.hpp"
#include "cts/sep.hpp"

namespace cts {

struct OracleResult {
  bool satisfiable = false;
  std::optional<Assignment> witness;
  /// Brute force only.
  std::optional<std::uint64_t> model_count;
};

class OracleBoundError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kBruteForceLimit = 24;

/// Scans all 2^n assignments; throws OracleBoundError above the limit.
OracleResult brute_force(const TabularFormula& f, std::size_t max_vars = kBruteForceLimit);
/// Unit propagation plus branching; the witness is checked before return.
OracleResult dpll(const TabularFormula& f);

enum class Engine { Dpll, Brute };
Engine parse_engine(std::string_view name);

class FlakyPredicateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FormulaPredicate = std::function<bool(const TabularFormula&)>;

struct MinimizeResult {
  TabularFormula formula;
  std::size_t predicate_calls = 0;
  /// The call budget ran out before the result became 1-minimal.
  bool truncated = false;
};

/// Delta debugging over clauses, then single-clause removal until no clause
/// can go, then renumbering of the variables still in use. Repeated until
/// stable, so a second call returns its input unchanged. Throws
/// std::invalid_argument if the predicate fails on `f`, FlakyPredicateError
/// if it answers differently for the same formula.
MinimizeResult minimize(const TabularFormula& f, const FormulaPredicate& predicate,
                        std::size_t max_calls = 5000);

// --- differential testing ---------------------------------------------------

struct DifftestParams {
  std::size_t n_min = 5, n_max = 16;
  std::size_t m_min = 15, m_max = 96;
  /// If non-zero, m is drawn from [ceil(m_ratio_min*n), ceil(m_ratio_max*n)]
  /// instead of the fixed range.
  double m_ratio_min = 0, m_ratio_max = 0;
  double negation_fraction = 0.5;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  /// Findings and the report go here when set.
  std::optional<std::filesystem::path> out;
  ClassifyOptions classify;
  /// Replaces the classifier (used to inject faults in self-tests).
  std::function<Verdict(const TabularFormula&)> classifier;
  std::size_t minimize_calls = 2000;
};

enum class Finding { None, SatVsUnsat, UnsatVsSat, Failure, Unsound };
std::string_view to_string(Finding f);

struct InstanceOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0, m = 0;
  GenMode mode = GenMode::Free;
  std::string classifier_record;
  bool oracle_sat = false;
  Finding finding = Finding::None;
  std::size_t backtracks = 0;
  std::size_t minimized_clauses = 0;
  std::string archive;  // relative to the output directory
  double seconds = 0;
};

struct DifftestReport {
  DifftestParams params;
  std::vector<InstanceOutcome> instances;
  /// Rows: classifier SAT, UNSAT, FAIL. Columns: oracle SAT, UNSAT.
  std::size_t matrix[3][2] = {};
  std::size_t soundness_violations = 0;
  std::size_t classification_failures = 0;
  std::size_t disagreements = 0;
  std::size_t with_backtracks = 0;
  std::vector<std::string> archives;
  double wall_seconds = 0;
  double max_instance_seconds = 0;

  /// Deterministic part of the report (no timings).
  std::string results_json() const;
  /// Full report including timings.
  std::string json() const;
};

/// Instance i uses seed + i. Results do not depend on `jobs`.
DifftestReport difftest(const DifftestParams& params);

// --- empirical checks of the two equivalence claims ---------------------------

struct EquivalenceParams {
  std::size_t systems = 2000;
  std::size_t n_min = 5, n_max = 10;
  std::size_t max_k = 4;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
};

struct EquivalenceTally {
  std::size_t checked = 0;
  std::size_t nonempty_with_jss = 0;
  std::size_t empty_without_jss = 0;
  /// Non-empty construction but no joint satisfying set.
  std::size_t nonempty_without_jss = 0;
  /// Empty construction although a joint satisfying set exists.
  std::size_t empty_with_jss = 0;
  std::size_t extractions = 0;
  std::size_t extractions_with_backtracks = 0;
  std::size_t total_backtracks = 0;
  std::size_t max_backtracks = 0;
  std::size_t extraction_misses = 0;  // joint set exists, extraction found none

  std::size_t violations() const { return nonempty_without_jss + empty_with_jss; }
};

struct EquivalenceReport {
  EquivalenceTally pairs;    // two structures, single hyperstructure
  EquivalenceTally systems;  // up to max_k structures, hyperstructure system
  std::size_t formulas_drawn = 0;
  std::vector<std::string> archives;

  std::string json() const;
};

EquivalenceReport equivalence_sweep(const EquivalenceParams& params);

}  // namespace cts

#endif  // CTS_ORACLE_HPP_
