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

#ifndef CTS_FORMULA_HPP_
#define CTS_FORMULA_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cts {

/// 1-based variable index.
struct VarId {
  std::uint32_t index = 0;

  constexpr VarId() = default;
  constexpr explicit VarId(std::uint32_t i) : index(i) {}
  friend constexpr auto operator<=>(VarId, VarId) = default;
};

/// A literal in tabular convention: `negated` is the mark written in the
/// variable's column (0 = plain occurrence, 1 = negated occurrence).
struct Literal {
  VarId var;
  bool negated = false;

  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

/// Exactly three literals over pairwise distinct variables, stored sorted by
/// variable.
class Clause {
 public:
  Clause() = default;
  /// Throws std::invalid_argument when two literals share a variable.
  Clause(Literal a, Literal b, Literal c);

  const std::array<Literal, 3>& literals() const { return lits_; }
  const Literal& operator[](std::size_t i) const { return lits_[i]; }
  std::array<VarId, 3> vars() const {
    return {lits_[0].var, lits_[1].var, lits_[2].var};
  }

  friend auto operator<=>(const Clause&, const Clause&) = default;

 private:
  std::array<Literal, 3> lits_{};
};

/// A 3-CNF instance in tabular form: n columns, one 0/1 line per clause.
class TabularFormula {
 public:
  /// Throws std::invalid_argument if n < 3 or a clause mentions a variable
  /// beyond n.
  explicit TabularFormula(std::size_t n, std::vector<Clause> clauses = {});

  std::size_t num_vars() const { return n_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  friend bool operator==(const TabularFormula&,
                         const TabularFormula&) = default;

 private:
  std::size_t n_;
  std::vector<Clause> clauses_;
};

/// Truth values for x_1..x_n; 1 = true.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n) : bits_(n, 0) {}
  explicit Assignment(std::vector<std::uint8_t> bits);

  /// Parses a 0/1 string such as "01101"; position i is variable i+1.
  static Assignment from_string(std::string_view bits);

  std::size_t size() const { return bits_.size(); }
  bool operator[](VarId v) const { return bits_.at(v.index - 1) != 0; }
  void set(VarId v, bool value) { bits_.at(v.index - 1) = value ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string to_string() const;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Malformed DIMACS input; carries the 1-based position of the offending
/// token.
class DimacsError : public std::runtime_error {
 public:
  DimacsError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

TabularFormula parse_dimacs(std::string_view text);
std::string write_dimacs(const TabularFormula& f,
                         std::string_view comment = {});

/// 1 iff no clause line is matched entry-wise by `a`. Throws
/// std::invalid_argument on a length mismatch.
bool evaluate(const TabularFormula& f, const Assignment& a);

/// Removes duplicate clauses and sorts the rest lexicographically.
TabularFormula canonicalize(const TabularFormula& f);

// ---------------------------------------------------------------------------
// Instance generation

enum class GenMode { Free, PlantedSat, PlantedUnsat };

struct GenParams {
  std::size_t n = 3;
  std::size_t m = 1;
  double negation_fraction = 0.5;
  GenMode mode = GenMode::Free;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  TabularFormula formula;
  /// The hidden assignment of a PlantedSat instance.
  std::optional<Assignment> planted;
};

/// Identifies the generator stream so reports can be replayed.
inline constexpr std::string_view kRngName = "mt19937_64(splitmix64(seed))";

/// Deterministic in `p`. PlantedUnsat embeds all 8 sign patterns over one
/// variable triple; if m < 8 the instance has 8 clauses.
GeneratedInstance generate_instance(const GenParams& p);
TabularFormula generate(const GenParams& p);

GenMode parse_gen_mode(std::string_view name);
std::string_view to_string(GenMode mode);

}  // namespace cts

#endif  // CTS_FORMULA_HPP_
