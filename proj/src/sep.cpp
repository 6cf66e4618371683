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

#include "cts/sep.hpp"

#include <stdexcept>

#include "cts/unify.hpp"
#include "json.hpp"

namespace cts {

HsSystem::HsSystem(Cts basic, const std::vector<Cts>& others) {
  if (others.empty()) throw std::invalid_argument("a hyperstructure system needs a second structure");
  members_.reserve(others.size());
  for (const Cts& s : others) members_.emplace_back(basic, s);
}

void HsSystem::set_formed(std::size_t f) {
  for (Hyperstructure& h : members_) h.set_formed(f);
}

void HsSystem::remove_vertex(std::size_t j, TripletLine t) {
  for (Hyperstructure& h : members_) h.remove_vertex(j, t);
}

void HsSystem::remove_edge(std::size_t gap, TripletLine t, TripletLine u) {
  for (Hyperstructure& h : members_) h.remove_edge(gap, t, u);
}

namespace {

// Unifies same-name substructures in place; false when they collapse.
bool unify_same_name(std::vector<Cts>& subs, std::size_t* count) {
  for (const Cts& s : subs) {
    if (s.is_empty()) return false;
  }
  if (subs.size() == 1) return true;
  if (count) ++*count;
  UnifyResult r = unify(std::move(subs));
  subs = std::move(r.structures);
  return !r.is_empty();
}

std::optional<std::vector<Cts>> shift_all(const HsSystem& sys, std::size_t gap, TripletLine t, TripletLine u,
                                          Granularity g, std::size_t* count) {
  const std::size_t k = sys.num_members();
  VarId entering = sys.skeleton().permutation().at(gap + 3);
  std::vector<Cts> pi;
  pi.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    pi.push_back(concretize(*sys.member(i).vertex_sub(gap, t), entering, (u & 1u) != 0));
  }
  const bool fine = g == Granularity::Fine;
  if (fine && !unify_same_name(pi, count)) return std::nullopt;
  for (std::size_t s = 0; s < gap; ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      pi[i] = project_tier(sys.member(i), s, pi[i]);
      if (pi[i].is_empty()) return std::nullopt;
    }
    if (fine && !unify_same_name(pi, count)) return std::nullopt;
  }
  if (!fine && !unify_same_name(pi, count)) return std::nullopt;
  return pi;
}

class SepRun {
 public:
  SepRun(const std::vector<Cts>& structures, const SepOptions& options)
      : structures_(structures),
        options_(options),
        sys_(structures.front(), std::vector<Cts>(structures.begin() + 1, structures.end())) {}

  SepResult run() {
    const std::size_t nt = sys_.num_tiers();
    form_first_tier();
    if (done()) return finish();
    std::size_t gap = 0;
    while (gap + 1 < nt) {
      form_gap(gap);
      if (result_.early_witness) return finish();
      std::optional<std::size_t> stale = prune();
      if (check_empty()) return finish();
      if (stale) {
        ++result_.rebuilds;
        gap = *stale;
        sys_.set_formed(gap + 1);
      } else {
        ++gap;
      }
    }
    return finish();
  }

 private:
  bool done() { return result_.early_witness.has_value() || check_empty(); }

  bool check_empty() {
    for (std::size_t i = 0; i < sys_.formed(); ++i) {
      if (sys_.skeleton().vertices(i).empty()) {
        result_.empty_tier = i;
        return true;
      }
    }
    return false;
  }

  SepResult finish() {
    if (!result_.empty_tier) result_.system = std::move(sys_);
    return std::move(result_);
  }

  bool accept(const Assignment& a) const {
    if (options_.formula) return evaluate(*options_.formula, a);
    for (const Cts& s : structures_) {
      if (!contains_assignment(s, a)) return false;
    }
    return true;
  }

  void early_check(const std::vector<Cts>& subs, std::size_t tier) {
    if (!options_.early_check || result_.early_witness) return;
    for (const Cts& pi : subs) {
      if (!pi.is_elementary()) continue;
      std::optional<Assignment> a = any_assignment(pi);
      if (a && contains_assignment(sys_.basic(), *a) && accept(*a)) {
        result_.early_witness = std::move(a);
        result_.early_tier = tier;
        return;
      }
    }
  }

  void store_vertex(std::size_t j, TripletLine t, std::vector<Cts> subs) {
    if (!unify_same_name(subs, &result_.unifications)) {
      sys_.remove_vertex(j, t);
      return;
    }
    early_check(subs, j);
    for (std::size_t i = 0; i < subs.size(); ++i) sys_.member(i).set_vertex_sub(j, t, std::move(subs[i]));
  }

  void form_first_tier() {
    const Permutation& perm = sys_.skeleton().permutation();
    for (TripletLine t : sys_.skeleton().vertices(0).lines()) {
      std::vector<Cts> subs;
      for (std::size_t i = 0; i < sys_.num_members(); ++i) {
        Cts s = sys_.member(i).second();
        for (std::size_t k = 0; k < 3 && !s.is_empty(); ++k) s = concretize(s, perm.at(k), triplet_bit(t, k));
        subs.push_back(std::move(s));
      }
      store_vertex(0, t, std::move(subs));
    }
    sys_.set_formed(1);
  }

  void form_gap(std::size_t j) {
    const std::size_t k = sys_.num_members();
    for (TripletLine u : sys_.skeleton().vertices(j + 1).lines()) {
      for (std::size_t i = 0; i < k; ++i) sys_.member(i).set_vertex_sub(j + 1, u, std::nullopt);
    }
    for (TripletLine t : sys_.skeleton().vertices(j).lines()) {
      for (TripletLine u : sys_.skeleton().successors(j, t).lines()) {
        auto pi = shift_all(sys_, j, t, u, options_.granularity, &result_.unifications);
        if (!pi) {
          sys_.remove_edge(j, t, u);
          continue;
        }
        early_check(*pi, j + 1);
        for (std::size_t i = 0; i < k; ++i) sys_.member(i).set_edge_sub(j, t, u, std::move((*pi)[i]));
      }
    }
    for (TripletLine u : sys_.skeleton().vertices(j + 1).lines()) {
      Tier preds = sys_.skeleton().predecessors(j, u);
      if (preds.empty()) {
        sys_.remove_vertex(j + 1, u);
        continue;
      }
      std::vector<Cts> subs;
      for (std::size_t i = 0; i < k; ++i) {
        std::optional<Cts> acc;
        for (TripletLine t : preds.lines()) {
          const Cts& e = *sys_.member(i).edge_sub(j, t, u);
          acc = acc ? unite(*acc, e) : e;
        }
        subs.push_back(std::move(*acc));
      }
      store_vertex(j + 1, u, std::move(subs));
    }
    sys_.set_formed(j + 2);
  }

  std::optional<std::size_t> prune() {
    const std::size_t formed = sys_.formed();
    std::optional<std::size_t> lowest;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < formed; ++i) {
        for (TripletLine t : sys_.skeleton().vertices(i).lines()) {
          bool stranded = (i > 0 && sys_.skeleton().predecessors(i - 1, t).empty()) ||
                          (i + 1 < formed && sys_.skeleton().successors(i, t).empty());
          if (!stranded) continue;
          sys_.remove_vertex(i, t);
          changed = true;
          if (i + 1 < formed && (!lowest || i < *lowest)) lowest = i;
        }
      }
    }
    return lowest;
  }

  const std::vector<Cts>& structures_;
  SepOptions options_;
  HsSystem sys_;
  SepResult result_;
};

}  // namespace

std::optional<std::vector<Cts>> concordant_shift(const HsSystem& sys, std::size_t gap, TripletLine t,
                                                 TripletLine u, Granularity g) {
  return shift_all(sys, gap, t, u, g, nullptr);
}

std::optional<Assignment> early_elementary_check(const Cts& pi, const Cts& basic, const TabularFormula& f) {
  if (!pi.is_elementary()) return std::nullopt;
  std::optional<Assignment> a = any_assignment(pi);
  if (!a || !contains_assignment(basic, *a) || !evaluate(f, *a)) return std::nullopt;
  return a;
}

SepResult sep(const std::vector<Cts>& structures, const SepOptions& options) {
  if (structures.size() < 2) throw std::invalid_argument("sep needs at least two structures");
  for (const Cts& s : structures) {
    if (s.is_empty()) {
      SepResult r;
      r.empty_tier = 0;
      return r;
    }
    if (s.num_vars() != structures.front().num_vars()) {
      throw std::invalid_argument("sep: structures differ in n");
    }
  }
  return SepRun(structures, options).run();
}

SystemExtraction extract_jss_system(const HsSystem& sys, const std::vector<Cts>& structures,
                                    const TabularFormula* f, std::size_t step_budget) {
  SystemExtraction out;
  const std::size_t nt = sys.num_tiers();
  const std::size_t k = sys.num_members();
  std::vector<TripletLine> route(nt);

  auto walk = [&](auto& self, std::size_t j, TripletLine t, const std::vector<Cts>& running) -> bool {
    route[j] = t;
    if (j == 0) {
      Assignment a = route_assignment(sys.skeleton().permutation(), route);
      for (const Cts& s : structures) {
        if (!contains_assignment(s, a)) {
          throw std::logic_error("extracted route lies outside a structure: " + a.to_string());
        }
      }
      if (f && !evaluate(*f, a)) throw std::logic_error("extracted route falsifies the formula: " + a.to_string());
      out.assignment = std::move(a);
      return true;
    }
    for (TripletLine p : sys.skeleton().predecessors(j - 1, t).lines()) {
      if (out.steps >= step_budget) {
        out.budget_exhausted = true;
        return true;
      }
      ++out.steps;
      std::vector<Cts> next;
      next.reserve(k);
      bool alive = true;
      for (std::size_t i = 0; i < k && alive; ++i) {
        next.push_back(intersect(running[i], *sys.member(i).vertex_sub(j - 1, p)));
        alive = !next.back().is_empty();
      }
      if (!alive) {
        ++out.backtracks;
        continue;
      }
      if (self(self, j - 1, p, next)) return true;
    }
    return false;
  };

  for (TripletLine t : sys.skeleton().vertices(nt - 1).lines()) {
    std::vector<Cts> start;
    for (std::size_t i = 0; i < k; ++i) start.push_back(*sys.member(i).vertex_sub(nt - 1, t));
    if (walk(walk, nt - 1, t, start)) break;
  }
  return out;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Cts: return "cts";
    case Stage::Unify: return "unify";
    case Stage::Sep: return "sep";
  }
  return "?";
}

int Verdict::exit_code() const {
  if (satisfiable()) return 10;
  if (unsatisfiable()) return 20;
  return 30;
}

std::string Verdict::record() const {
  if (auto* s = std::get_if<Satisfiable>(&outcome)) return "SAT " + s->witness.to_string() + " source=" + s->source;
  if (auto* u = std::get_if<Unsatisfiable>(&outcome)) {
    std::string r = "UNSAT stage=" + std::string(to_string(u->stage));
    if (u->tier) r += " tier=" + std::to_string(*u->tier + 1);
    return r;
  }
  return "FAIL";
}

std::string Verdict::json() const {
  nlohmann::ordered_json j;
  if (auto* s = std::get_if<Satisfiable>(&outcome)) {
    j["verdict"] = "SAT";
    j["witness"] = s->witness.to_string();
    j["source"] = s->source;
  } else if (auto* u = std::get_if<Unsatisfiable>(&outcome)) {
    j["verdict"] = "UNSAT";
    j["stage"] = to_string(u->stage);
    j["tier"] = u->tier ? nlohmann::ordered_json(*u->tier + 1) : nlohmann::ordered_json(nullptr);
    j["detail"] = u->detail;
  } else {
    j["verdict"] = "FAIL";
    j["diagnostics"] = nlohmann::ordered_json::parse(std::get<ClassificationFailure>(outcome).diagnostics);
  }
  j["stats"] = {{"k", stats.k},
                {"w", stats.w},
                {"unify_waves", stats.unify_waves},
                {"sep_rebuilds", stats.sep_rebuilds},
                {"sep_unifications", stats.sep_unifications},
                {"backtracks", stats.backtracks},
                {"extraction_steps", stats.extraction_steps}};
  return j.dump(2);
}

namespace {

const Assignment& verified(const TabularFormula& f, const Assignment& a) {
  if (!evaluate(f, a)) throw std::logic_error("classifier produced a non-satisfying witness " + a.to_string());
  return a;
}

std::string failure_bundle(const HsSystem& sys, const std::vector<Cts>& structures, const SystemExtraction& x) {
  const VarNames names = default_names(structures.front().num_vars());
  nlohmann::ordered_json j;
  j["reason"] = x.budget_exhausted ? "extraction step budget exhausted" : "no route survives extraction";
  j["n"] = structures.front().num_vars();
  j["k"] = structures.size();
  j["extraction"] = {{"backtracks", x.backtracks}, {"steps", x.steps}, {"budget_exhausted", x.budget_exhausted}};
  j["structures"] = nlohmann::ordered_json::array();
  for (const Cts& s : structures) j["structures"].push_back(render(s, names));
  j["skeleton"] = render(sys.skeleton(), names);
  j["members"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sys.num_members(); ++i) j["members"].push_back(render(sys.member(i), names));
  return j.dump();
}

}  // namespace

Verdict classify(const TabularFormula& f, const ClassifyOptions& options) {
  Verdict v;
  TabularFormula canon = canonicalize(f);
  std::vector<Ctf> ctfs;
  v.stats.w = group_terms(canon).size();
  if (options.decomposition) {
    ctfs = *options.decomposition;
    if (!is_sound_decomposition(canon, ctfs)) {
      throw std::invalid_argument("supplied decomposition does not partition the formula");
    }
  } else {
    ctfs = decompose(canon, options.strategy).ctfs;
  }
  v.stats.k = ctfs.size();

  std::vector<Cts> structures;
  for (std::size_t i = 0; i < ctfs.size(); ++i) {
    ClearResult r = ctf_to_cts_with_evidence(ctfs[i]);
    if (r.structure.is_empty()) {
      v.outcome = Unsatisfiable{Stage::Cts, r.emptied_tier, "ct formula " + std::to_string(i + 1)};
      return v;
    }
    structures.push_back(std::move(r.structure));
  }

  if (structures.size() == 1) {
    v.outcome = Satisfiable{verified(f, *any_assignment(structures.front())), "single"};
    return v;
  }

  UnifyResult u = unify(structures);
  v.stats.unify_waves = u.waves;
  if (u.is_empty()) {
    v.outcome = Unsatisfiable{Stage::Unify, std::nullopt, std::string(to_string(*u.empty_cause))};
    return v;
  }
  structures = std::move(u.structures);

  SepResult s = sep(structures, {.granularity = options.granularity,
                                 .early_check = options.early_check,
                                 .formula = &canon});
  v.stats.sep_rebuilds = s.rebuilds;
  v.stats.sep_unifications = s.unifications;
  if (s.early_witness) {
    v.outcome = Satisfiable{verified(f, *s.early_witness), "early"};
    return v;
  }
  if (s.is_empty()) {
    v.outcome = Unsatisfiable{Stage::Sep, s.empty_tier, "empty tier"};
    return v;
  }

  SystemExtraction x = extract_jss_system(*s.system, structures, &canon, options.step_budget);
  v.stats.backtracks = x.backtracks;
  v.stats.extraction_steps = x.steps;
  if (x.assignment) {
    v.outcome = Satisfiable{verified(f, *x.assignment), "extraction"};
  } else {
    v.outcome = ClassificationFailure{failure_bundle(*s.system, structures, x)};
  }
  return v;
}

}  // namespace cts
