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

#include <cmath>
#include <random>

#include "cts/decompose.hpp"
#include "fixtures/worked_examples.hpp"
#include "support.hpp"

using namespace cts;
namespace fx = cts::fixtures;

namespace {

Literal lit(std::uint32_t v, bool neg) { return {VarId(v), neg}; }

void check_bounds(const TabularFormula& f, const Decomposition& d) {
  const std::size_t n = f.num_vars();
  const std::size_t w = d.report.w;
  CHECK(d.report.k == d.ctfs.size());
  if (w > 0) {
    CHECK((w + n - 3) / (n - 2) <= d.report.k);
    CHECK(d.report.k <= w);
    CHECK(d.report.k <= f.num_clauses());
  }
}

}  // namespace

TEST_CASE("grouping the eight-variable formula") {
  TabularFormula f = parse_dimacs(fx::kEightVarDimacs);
  auto groups = group_terms(f);
  std::size_t total = 0;
  for (const TermGroup& g : groups) total += g.clauses.size();
  CHECK(total == f.num_clauses());
  const std::array<VarId, 3> abc{VarId(1), VarId(2), VarId(3)};
  const std::array<VarId, 3> abe{VarId(1), VarId(2), VarId(5)};
  auto size_of = [&](const std::array<VarId, 3>& t) {
    for (const TermGroup& g : groups) {
      if (g.vars == t) return g.clauses.size();
    }
    return std::size_t{0};
  };
  CHECK(size_of(abc) == 5);
  CHECK(size_of(abe) == 1);
}

TEST_CASE("group counts at the extremes") {
  Clause c1(lit(1, false), lit(2, false), lit(3, false));
  Clause c2(lit(1, true), lit(2, false), lit(3, false));
  CHECK(group_terms(TabularFormula(5, {c1, c2})).size() == 1);
  Clause c3(lit(4, true), lit(5, false), lit(6, false));
  TabularFormula disjoint(6, {c1, c3});
  CHECK(group_terms(disjoint).size() == 2);
  Decomposition d = decompose(disjoint, Strategy::Simple);
  CHECK(d.report.k == 2);
  CHECK(d.report.w == 2);
}

TEST_CASE("simple placement puts the triple first") {
  Clause c(lit(2, false), lit(5, true), lit(7, false));
  Decomposition d = decompose(TabularFormula(7, {c}), Strategy::Simple);
  REQUIRE(d.ctfs.size() == 1);
  auto order = d.ctfs[0].permutation().order();
  std::vector<std::uint32_t> got;
  for (VarId v : order) got.push_back(v.index);
  CHECK(got == std::vector<std::uint32_t>{2, 5, 7, 1, 3, 4, 6});
  CHECK(d.ctfs[0].tiers()[0] == Tier(1u << 0b010));
}

TEST_CASE("a formula already compact under the identity needs one CT formula") {
  Ctf given = fx::ctf(fx::kFiveVarCtf);
  TabularFormula f(5, given.clauses());
  Decomposition d = decompose(f, Strategy::Assemble);
  REQUIRE(d.report.k == 1);
  CHECK(d.ctfs[0] == given);
}

TEST_CASE("the five-variable CT formula transforms into Z") {
  ClearResult r = ctf_to_cts_with_evidence(fx::ctf(fx::kFiveVarCtf));
  CHECK(r.structure == fx::structure(fx::kFiveVarZ));
  CHECK_FALSE(r.emptied_tier.has_value());
}

TEST_CASE("the reference CT formulas transform into the reference structures") {
  CHECK(ctf_to_cts(fx::ctf(fx::kEightVarCtf1)) == fx::structure(fx::kEightVarS1));
  CHECK(ctf_to_cts(fx::ctf(fx::kEightVarCtf2)) == fx::structure(fx::kEightVarS2));
  CHECK(ctf_to_cts(fx::ctf(fx::kEightVarCtf3)) == fx::structure(fx::kEightVarS3));
}

TEST_CASE("the reference CT formulas partition the eight-variable formula") {
  TabularFormula f = parse_dimacs(fx::kEightVarDimacs);
  std::vector<Ctf> ctfs{fx::ctf(fx::kEightVarCtf1), fx::ctf(fx::kEightVarCtf2),
                        fx::ctf(fx::kEightVarCtf3)};
  CHECK(is_sound_decomposition(f, ctfs));
  ctfs.pop_back();
  CHECK_FALSE(is_sound_decomposition(f, ctfs));
}

TEST_CASE("all eight patterns in one tier is a contradiction") {
  Ctf c(Permutation::identity(5), {Tier(0), Tier(0xff), Tier(0)});
  ClearResult r = ctf_to_cts_with_evidence(c);
  CHECK(r.structure.is_empty());
  REQUIRE(r.emptied_tier.has_value());
  CHECK(*r.emptied_tier == 1);
}

TEST_CASE("non-compact clauses are rejected") {
  Clause c(lit(1, false), lit(2, false), lit(4, false));
  CHECK_THROWS_AS(Ctf::from_clauses(Permutation::identity(5), std::vector<Clause>{c}),
                  std::invalid_argument);
}

TEST_CASE("decompositions are sound, bounded, and exact under both strategies") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 150; ++round) {
    std::size_t n = 3 + round % 10;  // up to 12
    TabularFormula f = canonicalize(testing::random_formula(rng, n, 1 + round % (4 * n)));
    auto expect = testing::models(f);
    for (Strategy s : {Strategy::Simple, Strategy::Assemble}) {
      Decomposition d = decompose(f, s);
      REQUIRE(is_sound_decomposition(f, d.ctfs));
      check_bounds(f, d);
      // The conjunction of the CT formulas has exactly the models of f.
      std::set<std::string> joint;
      bool first = true;
      for (const Ctf& c : d.ctfs) {
        auto here = testing::models(TabularFormula(n, c.clauses()));
        REQUIRE(testing::encoded(ctf_to_cts(c)) == here);
        if (first) {
          joint = here;
          first = false;
        } else {
          std::set<std::string> next;
          std::set_intersection(joint.begin(), joint.end(), here.begin(), here.end(),
                                std::inserter(next, next.end()));
          joint = next;
        }
      }
      REQUIRE(joint == expect);
    }
  }
}

TEST_CASE("the eight-variable formula assembles within the bounds") {
  TabularFormula f = canonicalize(parse_dimacs(fx::kEightVarDimacs));
  Decomposition d = decompose(f, Strategy::Assemble);
  CHECK(is_sound_decomposition(f, d.ctfs));
  check_bounds(f, d);
  CHECK(d.report.k < decompose(f, Strategy::Simple).report.k);
}

TEST_CASE("decomposition files round-trip") {
  std::vector<Ctf> ctfs{fx::ctf(fx::kEightVarCtf1), fx::ctf(fx::kEightVarCtf2),
                        fx::ctf(fx::kEightVarCtf3)};
  std::string text = write_decomposition(ctfs);
  CHECK(text.rfind("p ctf 8 3\nperm 1 2 3 4 5 6 7 8 0\n", 0) == 0);
  CHECK(parse_decomposition(text) == ctfs);
  CHECK_THROWS_AS(parse_decomposition("p ctf 5 1\nperm 1 2 3 4 5 0\n1 2 4 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_decomposition("p ctf 5 2\nperm 1 2 3 4 5 0\n1 2 3 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_decomposition("p ctf 5 1\nperm 1 2 3 4 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_decomposition("p ctf 5 1\n1 2 3 0\n"), DimacsError);
}

TEST_CASE("decomposition scales with the clause count") {
  // Trend check only: Assemble stays comfortably fast on larger instances.
  GenParams p{.n = 60, .m = 400, .negation_fraction = 0.5, .mode = GenMode::Free, .seed = 4};
  TabularFormula f = canonicalize(generate(p));
  Decomposition d = decompose(f, Strategy::Assemble);
  CHECK(is_sound_decomposition(f, d.ctfs));
  check_bounds(f, d);
}
