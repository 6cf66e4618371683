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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cts/formula.hpp"
#include "fixtures/worked_examples.hpp"
#include "support.hpp"

using namespace cts;

namespace {

Literal lit(std::uint32_t v, bool neg) { return {VarId(v), neg}; }

}  // namespace

TEST_CASE("three-clause DIMACS maps negative literals to mark 1") {
  TabularFormula f = parse_dimacs(fixtures::kThreeClauseDimacs);
  REQUIRE(f.num_vars() == 5);
  REQUIRE(f.num_clauses() == 3);
  CHECK(f.clauses()[0] == Clause(lit(1, true), lit(2, false), lit(4, true)));
  CHECK(f.clauses()[1] == Clause(lit(2, false), lit(3, false), lit(5, true)));
  CHECK(f.clauses()[2] == Clause(lit(3, true), lit(4, true), lit(5, false)));
}

TEST_CASE("smallest legal instance") {
  TabularFormula f = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  REQUIRE(f.num_clauses() == 1);
  for (const Literal& l : f.clauses()[0].literals()) CHECK_FALSE(l.negated);
}

TEST_CASE("parser rejects malformed input with a position") {
  auto error_of = [](std::string_view text) -> std::string {
    try {
      parse_dimacs(text);
    } catch (const DimacsError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(error_of("p cnf 3 1\n1 1 2 0\n").find("repeated variable") != std::string::npos);
  CHECK(error_of("p cnf 3 1\n1 2 0\n").find("expected exactly 3") != std::string::npos);
  CHECK(error_of("p cnf 3 1\n1 2 4 0\n").find("out of range") != std::string::npos);
  CHECK(error_of("1 2 3 0\n").find("before") != std::string::npos);
  CHECK(error_of("p cnf 3 1\n1 2 x 0\n").find("dimacs:2:5") != std::string::npos);
  CHECK(error_of("p cnf 3 2\n1 2 3 0\n").find("declares 2") != std::string::npos);
  CHECK(error_of("p cnf 3 1\n1 2 3\n").find("unterminated") != std::string::npos);
  CHECK(error_of("c only\n").find("missing") != std::string::npos);
}

TEST_CASE("comments, blank lines and a trailer are accepted") {
  TabularFormula f = parse_dimacs("c hello\n\np cnf 4 2\n 1 -2 3 0 2 3\n-4 0\n%\n0\n");
  CHECK(f.num_clauses() == 2);
}

TEST_CASE("evaluation on the three-clause formula") {
  TabularFormula f = parse_dimacs(fixtures::kThreeClauseDimacs);
  CHECK(evaluate(f, Assignment::from_string("00000")));
  // Matching every mark of the first line falsifies it.
  CHECK_FALSE(evaluate(f, Assignment::from_string("10010")));
  CHECK_THROWS_AS(evaluate(f, Assignment(4)), std::invalid_argument);
}

TEST_CASE("the five-variable CT formula is satisfied by 01101") {
  std::vector<Clause> cs;
  for (std::size_t j = 0; j < fixtures::kFiveVarCtf.tiers.size(); ++j) {
    for (std::string_view l : fixtures::kFiveVarCtf.tiers[j]) {
      auto v = static_cast<std::uint32_t>(j + 1);
      cs.emplace_back(lit(v, l[0] == '1'), lit(v + 1, l[1] == '1'), lit(v + 2, l[2] == '1'));
    }
  }
  TabularFormula f(5, cs);
  CHECK(evaluate(f, Assignment::from_string("01101")));
  CHECK(evaluate(f, Assignment::from_string("10011")));
}

TEST_CASE("evaluate agrees with a clause-wise reference, exhaustively") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    std::size_t n = 3 + round % 8;
    TabularFormula f = testing::random_formula(rng, n, 1 + round % 12);
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      Assignment a = testing::from_mask(m, n);
      REQUIRE(evaluate(f, a) == testing::satisfies(f, a));
    }
  }
}

TEST_CASE("write then parse round-trips") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    TabularFormula f = testing::random_formula(rng, 3 + round % 20, 1 + round % 30);
    CHECK(parse_dimacs(write_dimacs(f, "seed line\nsecond")) == f);
  }
}

TEST_CASE("canonicalize removes duplicates, sorts, and is idempotent") {
  Clause a(lit(1, false), lit(2, false), lit(3, true));
  Clause b(lit(1, true), lit(2, false), lit(4, false));
  TabularFormula f(4, {b, a, b});
  TabularFormula c = canonicalize(f);
  REQUIRE(c.num_clauses() == 2);
  CHECK(c.clauses()[0] == a);
  CHECK(canonicalize(c) == c);

  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    TabularFormula g = testing::random_formula(rng, 6, 20);
    TabularFormula h = canonicalize(g);
    for (std::uint32_t m = 0; m < 64; ++m) {
      Assignment x = testing::from_mask(m, 6);
      REQUIRE(evaluate(g, x) == evaluate(h, x));
    }
  }
}

TEST_CASE("generation is deterministic") {
  GenParams p{.n = 20, .m = 91, .negation_fraction = 0.5, .mode = GenMode::Free, .seed = 42};
  CHECK(write_dimacs(generate(p)) == write_dimacs(generate(p)));
  GenParams q = p;
  q.seed = 43;
  CHECK(generate(q) != generate(p));
}

TEST_CASE("planted modes honour their guarantees") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenParams p{.n = 8, .m = 30, .negation_fraction = 0.3, .mode = GenMode::PlantedSat, .seed = seed};
    GeneratedInstance g = generate_instance(p);
    REQUIRE(g.planted.has_value());
    CHECK(evaluate(g.formula, *g.planted));

    p.mode = GenMode::PlantedUnsat;
    p.m = 5 + seed % 20;
    TabularFormula u = generate(p);
    CHECK(u.num_clauses() == std::max<std::size_t>(p.m, 8));
    CHECK(testing::models(u).empty());
  }
}

TEST_CASE("free mode honours the negation fraction") {
  GenParams p{.n = 10, .m = 2000, .negation_fraction = 0.0, .mode = GenMode::Free, .seed = 1};
  for (const Clause& c : generate(p).clauses()) {
    for (const Literal& l : c.literals()) REQUIRE_FALSE(l.negated);
  }
  p.negation_fraction = 0.25;
  std::size_t negs = 0;
  for (const Clause& c : generate(p).clauses()) {
    for (const Literal& l : c.literals()) negs += l.negated;
  }
  CHECK(negs > 1300);
  CHECK(negs < 1700);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(generate({.n = 2, .m = 1}));
  CHECK_THROWS(generate({.n = 3, .m = 0}));
  CHECK_THROWS(generate({.n = 3, .m = 1, .negation_fraction = 1.5}));
  CHECK_THROWS(parse_gen_mode("other"));
  CHECK(parse_gen_mode("unsat") == GenMode::PlantedUnsat);
  CHECK_THROWS_AS(Clause(lit(1, false), lit(1, true), lit(2, false)), std::invalid_argument);
  CHECK_THROWS_AS(TabularFormula(2, {}), std::invalid_argument);
}
