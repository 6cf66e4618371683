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

#include "cts/cts.hpp"
#include "fixtures/worked_examples.hpp"
#include "support.hpp"

using namespace cts;
namespace fx = cts::fixtures;

namespace {

Cts cleared(const fx::TierFixture& f) { return clear(fx::structure(f)); }

std::vector<Cts> random_cleared(std::mt19937_64& rng, const Permutation& p, int count) {
  std::vector<Cts> out;
  while (static_cast<int>(out.size()) < count) {
    Cts s = clear(testing::random_raw(rng, p, 0.6));
    if (!s.is_empty()) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("compatibility of adjacent lines") {
  CHECK(compatible(0b011, 0b110));
  CHECK(compatible(0b000, 0b000));
  CHECK_FALSE(compatible(0b011, 0b000));
  for (TripletLine t = 0; t < 8; ++t) {
    int successors = 0;
    for (TripletLine u = 0; u < 8; ++u) successors += compatible(t, u);
    CHECK(successors == 2);
  }
}

TEST_CASE("permutation validates bijectivity") {
  CHECK_THROWS_AS(Permutation({VarId(1), VarId(1), VarId(2)}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({VarId(1), VarId(4), VarId(2)}), std::invalid_argument);
  Permutation p = fx::perm_from_letters("hgbeafcd");
  CHECK(p.position(VarId(8)) == 0);
  CHECK(p.at(4) == VarId(1));
  CHECK(p == fx::perm_from_letters("hgbeafcd"));
  CHECK_FALSE(p == Permutation::identity(8));
}

TEST_CASE("clearing the complemented five-variable formula gives Z") {
  Cts z = clear(fx::structure(fx::kFiveVarUncleared));
  CHECK(z == fx::structure(fx::kFiveVarZ));
  CHECK_FALSE(equivalent(z, fx::structure(fx::kFiveVarUncleared)));
  CHECK(testing::as_strings(enumerate_assignments(z)) == std::set<std::string>{"01101", "10011"});
  CHECK(contains_assignment(z, Assignment::from_string("01101")));
  CHECK_FALSE(contains_assignment(z, Assignment::from_string("00000")));
}

TEST_CASE("clear reports the first emptied tier") {
  Cts s(Permutation::identity(5), {Tier(1u << 0b111), Tier(1u << 0b000), Tier(1u << 0b111)});
  ClearResult r = clear_with_evidence(s);
  CHECK(r.structure.is_empty());
  REQUIRE(r.emptied_tier.has_value());
  for (Tier t : r.structure.tiers()) CHECK(t.empty());
  CHECK(clear(fx::structure(fx::kFiveVarZ)) == fx::structure(fx::kFiveVarZ));
}

TEST_CASE("set algebra worked examples") {
  Cts s1 = cleared(fx::kAlgebraS1);
  Cts s2 = cleared(fx::kAlgebraS2);
  Cts s3 = unite(s1, s2);
  Cts s4 = intersect(s1, s2);
  CHECK(s3 == fx::structure(fx::kAlgebraUnion));
  CHECK(s4 == fx::structure(fx::kAlgebraIntersection));
  CHECK(concretize(s3, VarId(3), true) == fx::structure(fx::kUnionX3True));
  CHECK(concretize(s4, VarId(5), false).is_empty());
  CHECK(unite(s1, Cts::empty(s1.permutation())) == s1);
  CHECK(unite(s1, s1) == s1);
  CHECK(intersect(s1, s1) == s1);
  CHECK(intersect(s1, Cts::empty(s1.permutation())).is_empty());
  CHECK_THROWS_AS(unite(s1, Cts::complete(fx::perm_from_letters("badce"))), std::invalid_argument);
}

TEST_CASE("elementary and complete structures") {
  Cts e = from_assignment(Assignment::from_string("01101"), Permutation::identity(5));
  CHECK(e == fx::structure(fx::kAlgebraIntersection));
  CHECK(e.is_elementary());
  Cts zero = from_assignment(Assignment(6), Permutation::identity(6));
  for (Tier t : zero.tiers()) CHECK(t == Tier(1));
  Cts full = Cts::complete(Permutation::identity(5));
  CHECK(enumerate_assignments(full).size() == 32);
  CHECK(count_assignments(full) == 32);
  CHECK(enumerate_assignments(Cts::empty(Permutation::identity(5))).empty());
  CHECK_THROWS_AS(enumerate_assignments(Cts::complete(Permutation::identity(30))), EnumerationBoundError);
}

TEST_CASE("a single-tier structure has nothing to clear") {
  Cts s(Permutation::identity(3), {Tier(0b00100100)});
  CHECK(clear(s) == s);
  CHECK(enumerate_assignments(s).size() == 2);
  CHECK(concretize(s, VarId(1), true).tier(0) == Tier(1u << 5));
}

TEST_CASE("random structures: enumeration, counting and membership agree with the naive encoder") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 300; ++round) {
    std::size_t n = 3 + round % 8;
    Permutation p = testing::random_permutation(rng, n);
    Cts raw = testing::random_raw(rng, p, 0.3 + 0.1 * (round % 6));
    Cts s = clear(raw);
    auto expect = testing::encoded(raw);
    REQUIRE(testing::as_strings(enumerate_assignments(s)) == expect);
    REQUIRE(count_assignments(s) == expect.size());
    REQUIRE(s.is_empty() == expect.empty());
    if (!s.is_empty()) {
      auto a = any_assignment(s);
      REQUIRE(a.has_value());
      REQUIRE(expect.count(a->to_string()) == 1);
      REQUIRE(clear(s) == s);
    }
    for (const std::string& bits : expect) {
      REQUIRE(contains_assignment(s, Assignment::from_string(bits)));
      REQUIRE(testing::as_strings(enumerate_assignments(from_assignment(Assignment::from_string(bits), p))) ==
              std::set<std::string>{bits});
    }
  }
}

TEST_CASE("clearing is order-independent") {
  // Reference: repeatedly delete one randomly chosen unsupported line.
  std::mt19937_64 rng(5);
  for (int round = 0; round < 200; ++round) {
    std::size_t n = 4 + round % 7;
    Permutation p = testing::random_permutation(rng, n);
    Cts raw = testing::random_raw(rng, p, 0.4);
    std::vector<Tier> tiers(raw.tiers().begin(), raw.tiers().end());
    for (;;) {
      std::vector<std::pair<std::size_t, TripletLine>> doomed;
      for (std::size_t j = 0; j < tiers.size(); ++j) {
        for (TripletLine t : tiers[j].lines()) {
          bool left = j == 0, right = j + 1 == tiers.size();
          for (TripletLine u = 0; u < 8; ++u) {
            if (j > 0 && tiers[j - 1].contains(u) && compatible(u, t)) left = true;
            if (j + 1 < tiers.size() && tiers[j + 1].contains(u) && compatible(t, u)) right = true;
          }
          if (!left || !right) doomed.emplace_back(j, t);
        }
      }
      if (doomed.empty()) break;
      auto [j, t] = doomed[std::uniform_int_distribution<std::size_t>(0, doomed.size() - 1)(rng)];
      tiers[j].erase(t);
    }
    bool any_empty = std::any_of(tiers.begin(), tiers.end(), [](Tier t) { return t.empty(); });
    Cts got = clear(raw);
    REQUIRE(got.is_empty() == any_empty);
    if (!any_empty) REQUIRE(got == Cts(p, tiers));
  }
}

TEST_CASE("intersection and concretization are exact; union over-approximates") {
  std::mt19937_64 rng(77);
  bool strict_union = false;
  for (int round = 0; round < 200; ++round) {
    std::size_t n = 5 + round % 8;  // up to 12
    Permutation p = testing::random_permutation(rng, n);
    auto ops = random_cleared(rng, p, 2);
    auto a = testing::encoded(ops[0]);
    auto b = testing::encoded(ops[1]);

    std::set<std::string> both, either;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(either, either.end()));
    REQUIRE(testing::encoded(intersect(ops[0], ops[1])) == both);
    auto u = testing::encoded(unite(ops[0], ops[1]));
    REQUIRE(std::includes(u.begin(), u.end(), either.begin(), either.end()));
    strict_union = strict_union || u.size() > either.size();

    VarId v(static_cast<std::uint32_t>(1 + round % n));
    bool beta = round % 2;
    std::set<std::string> fixed;
    for (const std::string& s : a) {
      if ((s[v.index - 1] == '1') == beta) fixed.insert(s);
    }
    Cts c = concretize(ops[0], v, beta);
    REQUIRE(testing::encoded(c) == fixed);
    REQUIRE(concretize(c, v, beta) == c);
  }
  CHECK(strict_union);
}

TEST_CASE("lattice laws at tier level") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 100; ++round) {
    Permutation p = testing::random_permutation(rng, 6 + round % 4);
    auto s = random_cleared(rng, p, 3);
    CHECK(unite(s[0], s[1]) == unite(s[1], s[0]));
    CHECK(unite(unite(s[0], s[1]), s[2]) == unite(s[0], unite(s[1], s[2])));
    CHECK(intersect(s[0], s[1]) == intersect(s[1], s[0]));
    CHECK(intersect(intersect(s[0], s[1]), s[2]) == intersect(s[0], intersect(s[1], s[2])));
    CHECK(equivalent(unite(s[0], s[1]), unite(s[1], s[0])));
  }
}

TEST_CASE("the lattice is not distributive") {
  std::mt19937_64 rng(13);
  bool found = false;
  for (int round = 0; round < 5000 && !found; ++round) {
    Permutation p = Permutation::identity(5);
    auto s = random_cleared(rng, p, 3);
    Cts lhs = intersect(s[0], unite(s[1], s[2]));
    Cts rhs = unite(intersect(s[0], s[1]), intersect(s[0], s[2]));
    found = !(lhs == rhs);
  }
  CHECK(found);
}

TEST_CASE("render lays out tiers under a name header") {
  std::string text = render(fx::structure(fx::kFiveVarZ));
  CHECK(text ==
        "x1 x2 x3 x4 x5\n"
        "0  1  1\n"
        "1  0  0\n"
        "   0  0  1\n"
        "   1  1  0\n"
        "      0  1  1\n"
        "      1  0  1\n");
  CHECK(render(Cts::empty(Permutation::identity(4))) == "x1 x2 x3 x4\n(empty)\n");
}
