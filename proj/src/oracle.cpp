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

#include "cts/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cts/rng.hpp"
#include "cts/unify.hpp"
#include "json.hpp"

namespace cts {

// --- brute force ------------------------------------------------------------

OracleResult brute_force(const TabularFormula& f, std::size_t max_vars) {
  const std::size_t n = f.num_vars();
  if (n > max_vars) {
    throw OracleBoundError("brute force limited to " + std::to_string(max_vars) + " variables, got " +
                           std::to_string(n));
  }
  // A clause is falsified when the assignment matches its marks on its
  // three variables.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> falsifiers;
  for (const Clause& c : f.clauses()) {
    std::uint32_t vars = 0, pattern = 0;
    for (const Literal& l : c.literals()) {
      vars |= 1u << (l.var.index - 1);
      if (l.negated) pattern |= 1u << (l.var.index - 1);
    }
    falsifiers.emplace_back(vars, pattern);
  }
  OracleResult out;
  std::uint64_t count = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const auto bits = static_cast<std::uint32_t>(m);
    bool ok = std::none_of(falsifiers.begin(), falsifiers.end(),
                           [&](const auto& c) { return (bits & c.first) == c.second; });
    if (!ok) continue;
    if (count++ == 0) {
      Assignment a(n);
      for (std::size_t i = 0; i < n; ++i) a.set(VarId(static_cast<std::uint32_t>(i + 1)), (bits >> i) & 1u);
      out.witness = a;
    }
  }
  out.satisfiable = count > 0;
  out.model_count = count;
  return out;
}

// --- DPLL ------------------------------------------------------------------

namespace {

class Dpll {
 public:
  explicit Dpll(const TabularFormula& f) : n_(f.num_vars()) {
    for (const Clause& c : f.clauses()) {
      std::array<int, 3> lits;
      for (std::size_t i = 0; i < 3; ++i) {
        int v = static_cast<int>(c[i].var.index);
        lits[i] = c[i].negated ? -v : v;
      }
      clauses_.push_back(lits);
    }
  }

  std::optional<Assignment> solve() {
    std::vector<std::int8_t> vals(n_ + 1, -1);
    if (!search(vals)) return std::nullopt;
    Assignment a(n_);
    for (std::uint32_t v = 1; v <= n_; ++v) a.set(VarId(v), vals[v] == 1);
    return a;
  }

 private:
  static int value(const std::vector<std::int8_t>& vals, int lit) {
    int v = vals[static_cast<std::size_t>(std::abs(lit))];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }

  // Unit propagation; false on conflict. Sets `branch` to a literal of a
  // shortest open clause, or 0 when every clause is satisfied.
  bool propagate(std::vector<std::int8_t>& vals, int& branch) const {
    for (;;) {
      bool assigned = false;
      std::size_t best_open = 4;
      branch = 0;
      for (const auto& c : clauses_) {
        int open = 0, last = 0;
        bool sat = false;
        for (int lit : c) {
          int val = value(vals, lit);
          if (val == 1) {
            sat = true;
            break;
          }
          if (val == -1) {
            ++open;
            last = lit;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          vals[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : 0;
          assigned = true;
        } else if (static_cast<std::size_t>(open) < best_open) {
          best_open = static_cast<std::size_t>(open);
          branch = last;
        }
      }
      if (!assigned) return true;
    }
  }

  bool search(std::vector<std::int8_t>& vals) const {
    int branch = 0;
    if (!propagate(vals, branch)) return false;
    if (branch == 0) return true;
    const auto v = static_cast<std::size_t>(std::abs(branch));
    const std::int8_t preferred = branch > 0 ? 1 : 0;
    for (std::int8_t choice : {preferred, static_cast<std::int8_t>(1 - preferred)}) {
      std::vector<std::int8_t> next = vals;
      next[v] = choice;
      if (search(next)) {
        vals = std::move(next);
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::array<int, 3>> clauses_;
};

}  // namespace

OracleResult dpll(const TabularFormula& f) {
  OracleResult out;
  std::optional<Assignment> a = Dpll(f).solve();
  if (a) {
    if (!evaluate(f, *a)) throw std::logic_error("dpll produced a non-satisfying assignment");
    out.satisfiable = true;
    out.witness = std::move(a);
  }
  return out;
}

Engine parse_engine(std::string_view name) {
  if (name == "dpll") return Engine::Dpll;
  if (name == "brute") return Engine::Brute;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "' (dpll|brute)");
}

// --- minimization -------------------------------------------------------------

namespace {

struct BudgetExhausted {};

class Minimizer {
 public:
  Minimizer(const FormulaPredicate& p, std::size_t max_calls) : predicate_(p), max_calls_(max_calls) {}

  bool test(const TabularFormula& g) {
    std::string key = write_dimacs(g);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    if (calls_ >= max_calls_) throw BudgetExhausted{};
    ++calls_;
    bool r = predicate_(g);
    cache_.emplace(std::move(key), r);
    return r;
  }

  // Uncached, to catch predicates that change their mind.
  bool fresh(const TabularFormula& g) {
    ++calls_;
    return predicate_(g);
  }

  std::size_t calls() const { return calls_; }

 private:
  const FormulaPredicate& predicate_;
  std::size_t max_calls_;
  std::size_t calls_ = 0;
  std::map<std::string, bool> cache_;
};

std::vector<Clause> ddmin(Minimizer& mz, std::size_t n, std::vector<Clause> cs) {
  auto holds = [&](const std::vector<Clause>& sub) { return mz.test(TabularFormula(n, sub)); };
  std::size_t parts = 2;
  while (cs.size() >= 2) {
    parts = std::min(parts, cs.size());
    std::vector<std::vector<Clause>> chunks(parts);
    for (std::size_t i = 0; i < cs.size(); ++i) chunks[i * parts / cs.size()].push_back(cs[i]);
    bool reduced = false;
    for (const auto& chunk : chunks) {
      if (holds(chunk)) {
        cs = chunk;
        parts = 2;
        reduced = true;
        break;
      }
    }
    if (!reduced && parts > 2) {
      for (std::size_t skip = 0; skip < parts && !reduced; ++skip) {
        std::vector<Clause> rest;
        for (std::size_t c = 0; c < parts; ++c) {
          if (c != skip) rest.insert(rest.end(), chunks[c].begin(), chunks[c].end());
        }
        if (holds(rest)) {
          cs = std::move(rest);
          parts = std::max<std::size_t>(parts - 1, 2);
          reduced = true;
        }
      }
    }
    if (!reduced) {
      if (parts >= cs.size()) break;
      parts = std::min(2 * parts, cs.size());
    }
  }
  return cs;
}

std::vector<Clause> one_minimal(Minimizer& mz, std::size_t n, std::vector<Clause> cs) {
  for (std::size_t i = 0; i < cs.size();) {
    std::vector<Clause> without = cs;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (mz.test(TabularFormula(n, without))) {
      cs = std::move(without);
    } else {
      ++i;
    }
  }
  return cs;
}

TabularFormula compact(const TabularFormula& f) {
  std::vector<std::uint32_t> remap(f.num_vars() + 1, 0);
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c.literals()) remap[l.var.index] = 1;
  }
  std::uint32_t next = 0;
  for (std::size_t v = 1; v <= f.num_vars(); ++v) {
    if (remap[v]) remap[v] = ++next;
  }
  std::vector<Clause> cs;
  for (const Clause& c : f.clauses()) {
    cs.emplace_back(Literal{VarId(remap[c[0].var.index]), c[0].negated},
                    Literal{VarId(remap[c[1].var.index]), c[1].negated},
                    Literal{VarId(remap[c[2].var.index]), c[2].negated});
  }
  return TabularFormula(std::max<std::size_t>(next, 3), std::move(cs));
}

}  // namespace

MinimizeResult minimize(const TabularFormula& f, const FormulaPredicate& predicate, std::size_t max_calls) {
  Minimizer mz(predicate, max_calls);
  const bool first = mz.fresh(f);
  if (first != mz.fresh(f)) throw FlakyPredicateError("predicate answered differently for the same formula");
  if (!first) throw std::invalid_argument("minimize: predicate does not hold on the input");

  MinimizeResult out{f, 0, false};
  try {
    for (;;) {
      const TabularFormula& cur = out.formula;
      std::vector<Clause> cs = ddmin(mz, cur.num_vars(), cur.clauses());
      cs = one_minimal(mz, cur.num_vars(), std::move(cs));
      TabularFormula next(cur.num_vars(), std::move(cs));
      TabularFormula squeezed = compact(next);
      if (!(squeezed == next) && mz.test(squeezed)) next = std::move(squeezed);
      if (next == out.formula) break;
      out.formula = std::move(next);
    }
  } catch (const BudgetExhausted&) {
    out.truncated = true;
  }
  if (!mz.fresh(out.formula) || !mz.fresh(out.formula)) {
    throw FlakyPredicateError("predicate no longer holds on the minimized formula");
  }
  out.predicate_calls = mz.calls();
  return out;
}

// --- difftest ---------------------------------------------------------------

std::string_view to_string(Finding f) {
  switch (f) {
    case Finding::None: return "none";
    case Finding::SatVsUnsat: return "sat-vs-unsat";
    case Finding::UnsatVsSat: return "unsat-vs-sat";
    case Finding::Failure: return "classification-failure";
    case Finding::Unsound: return "unsound";
  }
  return "?";
}

namespace {

struct Judged {
  Finding finding = Finding::None;
  std::string record;
  std::string report;
  std::size_t backtracks = 0;
};

Judged judge(const std::function<Verdict(const TabularFormula&)>& classifier, const TabularFormula& f,
             bool oracle_sat) {
  Judged j;
  try {
    Verdict v = classifier(f);
    j.record = v.record();
    j.report = v.json();
    j.backtracks = v.stats.backtracks;
    if (auto* s = std::get_if<Satisfiable>(&v.outcome)) {
      if (!evaluate(f, s->witness)) {
        j.finding = Finding::Unsound;
      } else if (!oracle_sat) {
        // A verified witness contradicts the oracle: the oracle is wrong.
        throw std::logic_error("oracle reports unsatisfiable but witness verifies");
      }
    } else if (v.unsatisfiable()) {
      if (oracle_sat) j.finding = Finding::UnsatVsSat;
    } else {
      j.finding = Finding::Failure;
    }
  } catch (const std::logic_error& e) {
    if (std::string_view(e.what()).find("oracle reports") != std::string_view::npos) throw;
    j.finding = Finding::Unsound;
    j.record = std::string("ERROR ") + e.what();
    j.report = nlohmann::json{{"error", e.what()}}.dump(2);
  }
  return j;
}

struct Drawn {
  TabularFormula formula;
  std::size_t n, m;
  GenMode mode;
};

Drawn draw_instance(const DifftestParams& p, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = p.n_min + rng.below(p.n_max - p.n_min + 1);
  std::size_t lo = p.m_min, hi = p.m_max;
  if (p.m_ratio_max > 0) {
    lo = static_cast<std::size_t>(std::ceil(p.m_ratio_min * static_cast<double>(n)));
    hi = static_cast<std::size_t>(std::ceil(p.m_ratio_max * static_cast<double>(n)));
  }
  const std::size_t m = lo + rng.below(hi - lo + 1);
  static constexpr GenMode kModes[] = {GenMode::Free, GenMode::PlantedSat, GenMode::PlantedUnsat};
  const GenMode mode = kModes[rng.below(3)];
  GenParams g{.n = n, .m = m, .negation_fraction = p.negation_fraction, .mode = mode, .seed = rng.next()};
  return {generate(g), n, m, mode};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

std::string pad(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

InstanceOutcome run_instance(const DifftestParams& p, std::size_t index) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto classifier = p.classifier ? p.classifier
                                 : std::function<Verdict(const TabularFormula&)>(
                                       [&p](const TabularFormula& f) { return classify(f, p.classify); });
  InstanceOutcome o;
  o.index = index;
  o.seed = p.seed + index;
  Drawn d = draw_instance(p, o.seed);
  o.n = d.n;
  o.m = d.m;
  o.mode = d.mode;
  o.oracle_sat = dpll(d.formula).satisfiable;
  Judged j = judge(classifier, d.formula, o.oracle_sat);
  o.classifier_record = j.record;
  o.finding = j.finding;
  o.backtracks = j.backtracks;

  if (o.finding != Finding::None) {
    const Finding kind = o.finding;
    auto reproduces = [&](const TabularFormula& g) {
      return judge(classifier, g, dpll(g).satisfiable).finding == kind;
    };
    MinimizeResult mini = minimize(d.formula, reproduces, p.minimize_calls);
    o.minimized_clauses = mini.formula.num_clauses();
    if (p.out) {
      o.archive = "findings/" + pad(index) + "-" + std::string(to_string(kind));
      const std::filesystem::path dir = *p.out / o.archive;
      std::filesystem::create_directories(dir);
      std::ostringstream comment;
      comment << "difftest instance " << index << " seed " << o.seed << " mode " << to_string(d.mode);
      write_file(dir / "original.cnf", write_dimacs(d.formula, comment.str()));
      write_file(dir / "minimized.cnf",
                 write_dimacs(mini.formula, "minimized from instance " + std::to_string(index) +
                                                (mini.truncated ? " (call budget reached)" : "")));
      const bool mini_sat = dpll(mini.formula).satisfiable;
      Judged jm = judge(classifier, mini.formula, mini_sat);
      std::ostringstream verdicts;
      verdicts << "finding: " << to_string(kind) << '\n'
               << "classifier: " << j.record << '\n'
               << "oracle: " << (o.oracle_sat ? "SAT" : "UNSAT") << '\n'
               << "minimized classifier: " << jm.record << '\n'
               << "minimized oracle: " << (mini_sat ? "SAT" : "UNSAT") << '\n';
      write_file(dir / "verdicts.txt", verdicts.str());
      write_file(dir / "diagnostics.json", j.report + "\n");
      write_file(dir / "seed.txt", std::to_string(o.seed) + "\n");
    }
  }
  o.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return o;
}

nlohmann::ordered_json params_json(const DifftestParams& p) {
  nlohmann::ordered_json j;
  j["n_range"] = {p.n_min, p.n_max};
  if (p.m_ratio_max > 0) {
    j["m_ratio_range"] = {p.m_ratio_min, p.m_ratio_max};
  } else {
    j["m_range"] = {p.m_min, p.m_max};
  }
  j["negation_fraction"] = p.negation_fraction;
  j["modes"] = "free|sat|unsat, uniform per instance";
  j["count"] = p.count;
  j["seed"] = p.seed;
  j["seed_policy"] = "instance i uses seed + i";
  j["rng"] = kRngName;
  j["strategy"] = to_string(p.classify.strategy);
  j["granularity"] = p.classify.granularity == Granularity::Fine ? "fine" : "coarse";
  j["classifier"] = p.classifier ? "injected" : "classify";
  return j;
}

}  // namespace

std::string DifftestReport::results_json() const {
  nlohmann::ordered_json j;
  j["params"] = params_json(params);
  j["instances"] = instances.size();
  j["agreement"] = {{"classifier_sat", {{"oracle_sat", matrix[0][0]}, {"oracle_unsat", matrix[0][1]}}},
                    {"classifier_unsat", {{"oracle_sat", matrix[1][0]}, {"oracle_unsat", matrix[1][1]}}},
                    {"classifier_fail", {{"oracle_sat", matrix[2][0]}, {"oracle_unsat", matrix[2][1]}}}};
  j["soundness_violations"] = soundness_violations;
  j["classification_failures"] = classification_failures;
  j["disagreements"] = disagreements;
  j["instances_with_backtracking"] = with_backtracks;
  j["archives"] = archives;
  return j.dump(2);
}

std::string DifftestReport::json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(results_json());
  j["runtime"] = {{"wall_seconds", wall_seconds}, {"max_instance_seconds", max_instance_seconds}, {"jobs", params.jobs}};
  return j.dump(2);
}

DifftestReport difftest(const DifftestParams& params) {
  if (params.n_min < 3 || params.n_max < params.n_min) throw std::invalid_argument("invalid n range");
  if (params.m_ratio_max > 0 ? params.m_ratio_max < params.m_ratio_min || params.m_ratio_min <= 0
                             : params.m_min < 1 || params.m_max < params.m_min) {
    throw std::invalid_argument("invalid m range");
  }
  const auto start = std::chrono::steady_clock::now();
  DifftestReport report;
  report.params = params;
  report.instances.resize(params.count);
  if (params.out) std::filesystem::create_directories(*params.out);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= params.count) return;
      try {
        report.instances[i] = run_instance(params, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = params.count;
        return;
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(params.jobs, params.count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  for (const InstanceOutcome& o : report.instances) {
    std::size_t row = 2;
    if (o.classifier_record.rfind("SAT", 0) == 0) row = 0;
    if (o.classifier_record.rfind("UNSAT", 0) == 0) row = 1;
    if (o.finding == Finding::Unsound) ++report.soundness_violations;
    if (o.finding == Finding::Failure) ++report.classification_failures;
    if (o.finding == Finding::SatVsUnsat || o.finding == Finding::UnsatVsSat) ++report.disagreements;
    if (o.finding != Finding::Unsound) ++report.matrix[row][o.oracle_sat ? 0 : 1];
    if (o.backtracks > 0) ++report.with_backtracks;
    if (!o.archive.empty()) report.archives.push_back(o.archive);
    report.max_instance_seconds = std::max(report.max_instance_seconds, o.seconds);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (params.out) {
    write_file(*params.out / "report.json", report.json() + "\n");
    std::ostringstream tsv;
    tsv << "index\tseed\tn\tm\tmode\tclassifier\toracle\tfinding\tarchive\n";
    for (const InstanceOutcome& o : report.instances) {
      tsv << o.index << '\t' << o.seed << '\t' << o.n << '\t' << o.m << '\t' << to_string(o.mode) << '\t'
          << o.classifier_record << '\t' << (o.oracle_sat ? "SAT" : "UNSAT") << '\t' << to_string(o.finding)
          << '\t' << o.archive << '\n';
    }
    write_file(*params.out / "instances.tsv", tsv.str());
  }
  return report;
}

// --- equivalence sweep ------------------------------------------------------------

namespace {

std::vector<Assignment> joint_sets(const std::vector<Cts>& structures) {
  std::vector<Assignment> out;
  for (Assignment& a : enumerate_assignments(structures.front())) {
    bool all = std::all_of(structures.begin() + 1, structures.end(),
                           [&](const Cts& s) { return contains_assignment(s, a); });
    if (all) out.push_back(std::move(a));
  }
  return out;
}

void tally(EquivalenceTally& t, bool nonempty, bool has_jss) {
  ++t.checked;
  if (nonempty && has_jss) ++t.nonempty_with_jss;
  if (!nonempty && !has_jss) ++t.empty_without_jss;
  if (nonempty && !has_jss) ++t.nonempty_without_jss;
  if (!nonempty && has_jss) ++t.empty_with_jss;
}

void record_extraction(EquivalenceTally& t, std::size_t backtracks, bool found, bool has_jss) {
  ++t.extractions;
  if (backtracks > 0) ++t.extractions_with_backtracks;
  t.total_backtracks += backtracks;
  t.max_backtracks = std::max(t.max_backtracks, backtracks);
  if (has_jss && !found) ++t.extraction_misses;
}

nlohmann::ordered_json tally_json(const EquivalenceTally& t) {
  return {{"checked", t.checked},
          {"nonempty_with_jss", t.nonempty_with_jss},
          {"empty_without_jss", t.empty_without_jss},
          {"nonempty_without_jss", t.nonempty_without_jss},
          {"empty_with_jss", t.empty_with_jss},
          {"violations", t.violations()},
          {"extractions", t.extractions},
          {"extractions_with_backtracking", t.extractions_with_backtracks},
          {"total_backtracks", t.total_backtracks},
          {"max_backtracks", t.max_backtracks},
          {"extraction_misses", t.extraction_misses}};
}

}  // namespace

std::string EquivalenceReport::json() const {
  nlohmann::ordered_json j;
  j["formulas_drawn"] = formulas_drawn;
  j["two_structures"] = tally_json(pairs);
  j["structure_systems"] = tally_json(systems);
  j["archives"] = archives;
  return j.dump(2);
}

EquivalenceReport equivalence_sweep(const EquivalenceParams& p) {
  EquivalenceReport report;
  Rng rng(p.seed);
  const std::size_t max_draws = 200 * std::max<std::size_t>(p.systems, 1);
  auto archive = [&](const std::string& kind, const TabularFormula& f, const std::vector<Cts>& sys) {
    if (!p.out) return;
    std::string name = "equivalence/" + kind + "-" + pad(report.formulas_drawn);
    std::filesystem::create_directories(*p.out / name);
    write_file(*p.out / name / "formula.cnf", write_dimacs(f));
    std::string text;
    for (const Cts& s : sys) text += render(s) + "\n";
    write_file(*p.out / name / "structures.txt", text);
    report.archives.push_back(name);
  };

  while ((report.pairs.checked < p.systems || report.systems.checked < p.systems) &&
         report.formulas_drawn < max_draws) {
    ++report.formulas_drawn;
    const std::size_t n = p.n_min + rng.below(p.n_max - p.n_min + 1);
    const std::size_t m = n + rng.below(4 * n);
    TabularFormula f = canonicalize(
        generate({.n = n, .m = m, .negation_fraction = 0.5, .mode = GenMode::Free, .seed = rng.next()}));
    Decomposition d = decompose(f, Strategy::Assemble);
    if (d.ctfs.size() < 2) continue;
    std::vector<Cts> all;
    for (const Ctf& c : d.ctfs) all.push_back(ctf_to_cts(c));
    if (std::any_of(all.begin(), all.end(), [](const Cts& s) { return s.is_empty(); })) continue;

    if (report.pairs.checked < p.systems) {
      UnifyResult u = unify({all[0], all[1]});
      if (!u.is_empty()) {
        const bool has_jss = !joint_sets(u.structures).empty();
        EpResult ep = effective_procedure(u.structures[0], u.structures[1]);
        tally(report.pairs, !ep.is_empty(), has_jss);
        if (!ep.is_empty()) {
          Extraction x = extract_jss(*ep.hyperstructure, 1);
          record_extraction(report.pairs, x.backtracks, !x.assignments.empty(), has_jss);
        }
        if (ep.is_empty() == has_jss) archive(ep.is_empty() ? "pair-empty-with-jss" : "pair-nonempty-without-jss", f, u.structures);
      }
    }

    if (report.systems.checked < p.systems) {
      std::vector<Cts> sys(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(all.size(), p.max_k)));
      UnifyResult u = unify(sys);
      if (!u.is_empty()) {
        const bool has_jss = !joint_sets(u.structures).empty();
        SepResult s = sep(u.structures, {.early_check = false});
        tally(report.systems, !s.is_empty(), has_jss);
        if (!s.is_empty()) {
          SystemExtraction x = extract_jss_system(*s.system, u.structures, nullptr);
          record_extraction(report.systems, x.backtracks, x.assignment.has_value(), has_jss);
        }
        if (s.is_empty() == has_jss) archive(s.is_empty() ? "system-empty-with-jss" : "system-nonempty-without-jss", f, u.structures);
      }
    }
  }
  return report;
}

}  // namespace cts
