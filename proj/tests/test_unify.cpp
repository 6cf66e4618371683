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

#include "cts/decompose.hpp"
#include "cts/unify.hpp"
#include "fixtures/worked_examples.hpp"
#include "support.hpp"

using namespace cts;
namespace fx = cts::fixtures;

namespace {

std::set<std::string> joint(const std::vector<Cts>& system) {
  std::set<std::string> out;
  const std::size_t n = system.front().num_vars();
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    Assignment a = testing::from_mask(m, n);
    bool all = true;
    for (const Cts& s : system) all = all && testing::encodes(s, a);
    if (all) out.insert(a.to_string());
  }
  return out;
}

std::vector<Cts> random_system(std::mt19937_64& rng, std::size_t n, std::size_t k, double density) {
  std::vector<Cts> sys;
  while (sys.size() < k) {
    Cts s = clear(testing::random_raw(rng, testing::random_permutation(rng, n), density));
    if (!s.is_empty()) sys.push_back(s);
  }
  return sys;
}

}  // namespace

TEST_CASE("constants") {
  Cts s4 = fx::structure(fx::kAlgebraIntersection);
  CHECK(constant_of(s4, VarId(2)) == Constancy::One);
  CHECK(constant_of(s4, VarId(1)) == Constancy::Zero);
  Cts full = Cts::complete(Permutation::identity(6));
  for (std::uint32_t v = 1; v <= 6; ++v) CHECK(constant_of(full, VarId(v)) == Constancy::Free);
  Assignment a = Assignment::from_string("100110");
  Cts e = from_assignment(a, fx::perm_from_letters("fcadbe"));
  for (std::uint32_t v = 1; v <= 6; ++v) {
    CHECK(constant_of(e, VarId(v)) == (a[VarId(v)] ? Constancy::One : Constancy::Zero));
  }
  CHECK(constant_of(fx::structure(fx::kFiveVarZ), VarId(3)) == Constancy::Free);
}

TEST_CASE("pair relations") {
  Cts z = fx::structure(fx::kFiveVarZ);
  auto r = pair_relation(z, VarId(1), VarId(2));
  REQUIRE(r.has_value());
  CHECK(r->allowed == 0b0110);  // {01, 10}
  auto flipped = pair_relation(z, VarId(2), VarId(1));
  CHECK(flipped->allowed == 0b0110);
  // x1 and x3 share tier 1 only: lines 011 and 100.
  CHECK(pair_relation(z, VarId(1), VarId(3))->allowed == 0b0110);
  // x2 and x3 share tiers 1 and 2: {11, 00} from both.
  CHECK(pair_relation(z, VarId(3), VarId(2))->allowed == 0b1001);
  CHECK_FALSE(pair_relation(z, VarId(1), VarId(4)).has_value());
  Cts full = Cts::complete(Permutation::identity(6));
  CHECK(pair_relation(full, VarId(3), VarId(5))->allowed == 0b1111);
  // Asymmetric relation: x3 fixed to 1, x5 free.
  auto asym = pair_relation(fx::structure(fx::kUnionX3True), VarId(3), VarId(5));
  REQUIRE(asym.has_value());
  CHECK(asym->allows(true, false));
  CHECK(asym->allows(true, true));
  CHECK_FALSE(asym->allows(false, true));
}

TEST_CASE("unifying the first two reference structures gives the unified pair") {
  UnifyResult r = unify({fx::structure(fx::kEightVarS1), fx::structure(fx::kEightVarS2)});
  REQUIRE_FALSE(r.is_empty());
  CHECK(r.structures[0] == fx::structure(fx::kUnifiedPairS1));
  CHECK(r.structures[1] == fx::structure(fx::kUnifiedPairS2));
  CHECK(r.waves >= 2);
}

TEST_CASE("unifying all three reference structures gives the unified triple") {
  UnifyResult r = unify({fx::structure(fx::kEightVarS1), fx::structure(fx::kEightVarS2),
                         fx::structure(fx::kEightVarS3)},
                        {.record_trace = true});
  REQUIRE_FALSE(r.is_empty());
  CHECK(r.structures[0] == fx::structure(fx::kUnifiedTripleS1));
  CHECK(r.structures[1] == fx::structure(fx::kUnifiedTripleS2));
  CHECK(r.structures[2] == fx::structure(fx::kUnifiedTripleS3));
  CHECK(r.trace.size() == r.waves + 1);
  CHECK(r.trace.back() == r.structures);
}

TEST_CASE("a structure unified with itself is unchanged") {
  Cts s = fx::structure(fx::kEightVarS2);
  UnifyResult r = unify({s, s});
  CHECK(r.structures == std::vector<Cts>{s, s});
  CHECK(r.waves == 1);
}

TEST_CASE("collapse causes") {
  Permutation id = Permutation::identity(5);
  UnifyResult a = unify({Cts::complete(id), Cts::empty(fx::perm_from_letters("edcba"))});
  CHECK(a.empty_cause == EmptyCause::InputEmpty);
  CHECK(a.culprit == 1);
  for (const Cts& s : a.structures) CHECK(s.is_empty());

  Cts zeros = from_assignment(Assignment(5), id);
  Cts ones = from_assignment(Assignment::from_string("11111"), fx::perm_from_letters("edcba"));
  UnifyResult b = unify({zeros, ones});
  CHECK(b.empty_cause == EmptyCause::ConstantConflict);
  CHECK(b.conflict_var.has_value());
}

TEST_CASE("random systems: preservation, monotonicity, fixpoint, simultaneity") {
  std::mt19937_64 rng(31);
  int collapsed = 0, survived = 0;
  for (int round = 0; round < 400; ++round) {
    std::size_t n = 4 + round % 9;  // up to 12
    std::size_t k = 2 + round % 3;
    auto sys = random_system(rng, n, k, 0.55 + 0.05 * (round % 6));
    auto expect = joint(sys);
    UnifyResult r = unify(sys);
    bool any_empty = false, all_empty = true;
    for (const Cts& s : r.structures) {
      any_empty = any_empty || s.is_empty();
      all_empty = all_empty && s.is_empty();
    }
    REQUIRE(any_empty == all_empty);
    REQUIRE(r.is_empty() == all_empty);
    if (r.is_empty()) {
      REQUIRE(expect.empty());
      ++collapsed;
      continue;
    }
    ++survived;
    REQUIRE(joint(r.structures) == expect);
    for (std::size_t i = 0; i < k; ++i) {
      REQUIRE(r.structures[i].is_substructure_of(sys[i]));
    }
    UnifyResult again = unify(r.structures);
    REQUIRE(again.structures == r.structures);

    // Order of the structures does not change the fixpoint.
    std::vector<Cts> reversed(sys.rbegin(), sys.rend());
    UnifyResult rev = unify(reversed);
    for (std::size_t i = 0; i < k; ++i) REQUIRE(rev.structures[k - 1 - i] == r.structures[i]);
  }
  CHECK(collapsed > 0);
  CHECK(survived > 0);
}

TEST_CASE("unifying a decomposition preserves the formula's models") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 200; ++round) {
    std::size_t n = 5 + round % 6;
    TabularFormula f = canonicalize(testing::random_formula(rng, n, 2 * n + round % (3 * n)));
    Decomposition d = decompose(f, Strategy::Assemble);
    std::vector<Cts> sys;
    bool contradictory = false;
    for (const Ctf& c : d.ctfs) {
      sys.push_back(ctf_to_cts(c));
      contradictory = contradictory || sys.back().is_empty();
    }
    auto expect = testing::models(f);
    if (contradictory) {
      REQUIRE(expect.empty());
      continue;
    }
    REQUIRE(joint(sys) == expect);
    UnifyResult r = unify(sys);
    if (r.is_empty()) {
      REQUIRE(expect.empty());
    } else {
      REQUIRE(joint(r.structures) == expect);
    }
  }
}
