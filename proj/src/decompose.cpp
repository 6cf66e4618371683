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

#include "cts/decompose.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace cts {

Ctf::Ctf(Permutation perm, std::vector<Tier> lines)
    : perm_(std::move(perm)), lines_(std::move(lines)) {
  if (perm_.size() < 3 || lines_.size() != perm_.size() - 2) {
    throw std::invalid_argument("a CT formula over n variables has n-2 tiers");
  }
}

namespace {

// Window start and line code of `c` under `perm`, if compact.
std::optional<std::pair<std::size_t, TripletLine>> compact_line(
    const Clause& c, const Permutation& perm) {
  std::array<std::pair<std::size_t, bool>, 3> at;
  for (std::size_t i = 0; i < 3; ++i) at[i] = {perm.position(c[i].var), c[i].negated};
  std::sort(at.begin(), at.end());
  if (at[2].first - at[0].first != 2) return std::nullopt;
  auto code = static_cast<TripletLine>((at[0].second ? 4 : 0) | (at[1].second ? 2 : 0) |
                                       (at[2].second ? 1 : 0));
  return std::pair{at[0].first, code};
}

}  // namespace

Ctf Ctf::from_clauses(Permutation perm, std::span<const Clause> clauses) {
  std::vector<Tier> lines(perm.size() - 2);
  for (const Clause& c : clauses) {
    auto placed = compact_line(c, perm);
    if (!placed) {
      throw std::invalid_argument("clause over variables " +
                                  std::to_string(c[0].var.index) + "," +
                                  std::to_string(c[1].var.index) + "," +
                                  std::to_string(c[2].var.index) +
                                  " is not a compact triplet under the permutation");
    }
    lines[placed->first].insert(placed->second);
  }
  return Ctf(std::move(perm), std::move(lines));
}

std::size_t Ctf::num_lines() const {
  std::size_t c = 0;
  for (Tier t : lines_) c += static_cast<std::size_t>(t.size());
  return c;
}

std::vector<Clause> Ctf::clauses() const {
  std::vector<Clause> out;
  for (std::size_t j = 0; j < lines_.size(); ++j) {
    for (TripletLine t : lines_[j].lines()) {
      out.emplace_back(Literal{perm_.at(j), triplet_bit(t, 0)},
                       Literal{perm_.at(j + 1), triplet_bit(t, 1)},
                       Literal{perm_.at(j + 2), triplet_bit(t, 2)});
    }
  }
  return out;
}

std::vector<TermGroup> group_terms(const TabularFormula& f) {
  std::map<std::array<VarId, 3>, std::vector<Clause>> by_triple;
  for (const Clause& c : f.clauses()) by_triple[c.vars()].push_back(c);
  std::vector<TermGroup> groups;
  groups.reserve(by_triple.size());
  for (auto& [vars, clauses] : by_triple) groups.push_back({vars, std::move(clauses)});
  return groups;
}

Strategy parse_strategy(std::string_view name) {
  if (name == "simple") return Strategy::Simple;
  if (name == "assemble") return Strategy::Assemble;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (simple|assemble)");
}

std::string_view to_string(Strategy s) {
  return s == Strategy::Simple ? "simple" : "assemble";
}

namespace {

// Appends the variables not yet in `order`, ascending.
Permutation complete_order(std::vector<VarId> order, std::size_t n) {
  std::vector<char> used(n + 1, 0);
  for (VarId v : order) used[v.index] = 1;
  for (std::uint32_t v = 1; v <= n; ++v) {
    if (!used[v]) order.emplace_back(v);
  }
  return Permutation(std::move(order));
}

std::vector<Ctf> simple_placement(const std::vector<TermGroup>& groups, std::size_t n) {
  std::vector<Ctf> out;
  out.reserve(groups.size());
  for (const TermGroup& g : groups) {
    Permutation perm = complete_order({g.vars.begin(), g.vars.end()}, n);
    out.push_back(Ctf::from_clauses(std::move(perm), g.clauses));
  }
  return out;
}

class Assembler {
 public:
  Assembler(const std::vector<TermGroup>& groups, std::size_t n)
      : groups_(groups), n_(n), assigned_(groups.size(), 0), with_var_(n + 1) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (VarId v : groups[g].vars) with_var_[v.index].push_back(g);
    }
  }

  std::vector<Ctf> run() {
    std::vector<Ctf> out;
    std::size_t cursor = 0;
    for (;;) {
      while (cursor < groups_.size() && assigned_[cursor]) ++cursor;
      if (cursor == groups_.size()) break;
      out.push_back(build_from(cursor));
    }
    return out;
  }

 private:
  Ctf build_from(std::size_t seed) {
    order_.clear();
    position_.assign(n_ + 1, kUnplaced);
    std::vector<std::size_t> members;

    auto place = [&](VarId v) {
      position_[v.index] = order_.size();
      order_.push_back(v);
    };
    auto take = [&](std::size_t g) {
      assigned_[g] = 1;
      members.push_back(g);
      for (VarId v : groups_[g].vars) {
        if (position_[v.index] == kUnplaced) place(v);
      }
    };

    take(seed);
    while (order_.size() < n_) {
      std::optional<std::size_t> next = extension();
      if (!next) break;
      take(*next);
    }
    Permutation perm = complete_order(order_, n_);

    // Absorb every remaining group that already occupies a window.
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (assigned_[g]) continue;
      std::array<std::size_t, 3> pos;
      for (std::size_t i = 0; i < 3; ++i) pos[i] = perm.position(groups_[g].vars[i]);
      std::sort(pos.begin(), pos.end());
      if (pos[2] - pos[0] == 2) {
        assigned_[g] = 1;
        members.push_back(g);
      }
    }

    std::vector<Clause> clauses;
    for (std::size_t g : members) {
      clauses.insert(clauses.end(), groups_[g].clauses.begin(), groups_[g].clauses.end());
    }
    return Ctf::from_clauses(std::move(perm), clauses);
  }

  // Best unassigned group that extends the tail of the current order: one
  // new variable after the last two, else two new after the last one, else
  // three fresh variables.
  std::optional<std::size_t> extension() const {
    const std::size_t len = order_.size();
    const VarId last = order_[len - 1];
    const VarId second = len >= 2 ? order_[len - 2] : VarId();
    std::optional<std::size_t> overlap_one;
    for (std::size_t g : with_var_[last.index]) {
      if (assigned_[g]) continue;
      std::size_t placed = 0;
      bool has_second = false;
      for (VarId v : groups_[g].vars) {
        if (position_[v.index] != kUnplaced) ++placed;
        if (v == second) has_second = true;
      }
      if (placed == 2 && has_second && len + 1 <= n_) return g;
      if (placed == 1 && len + 2 <= n_ && !overlap_one) overlap_one = g;
    }
    if (overlap_one) return overlap_one;
    if (len + 3 > n_) return std::nullopt;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (assigned_[g]) continue;
      bool fresh = std::all_of(groups_[g].vars.begin(), groups_[g].vars.end(),
                               [&](VarId v) { return position_[v.index] == kUnplaced; });
      if (fresh) return g;
    }
    return std::nullopt;
  }

  static constexpr std::size_t kUnplaced = static_cast<std::size_t>(-1);

  const std::vector<TermGroup>& groups_;
  std::size_t n_;
  std::vector<char> assigned_;
  std::vector<std::vector<std::size_t>> with_var_;
  std::vector<VarId> order_;
  std::vector<std::size_t> position_;
};

}  // namespace

Decomposition decompose(const TabularFormula& f, Strategy strategy) {
  std::vector<TermGroup> groups = group_terms(f);
  Decomposition d;
  d.report.w = groups.size();
  for (const TermGroup& g : groups) d.report.group_sizes.push_back(g.clauses.size());
  if (groups.empty()) {
    // No clauses: a single CT formula with empty tiers keeps the pipeline
    // uniform.
    d.ctfs.emplace_back(Permutation::identity(f.num_vars()),
                        std::vector<Tier>(f.num_vars() - 2));
  } else if (strategy == Strategy::Simple) {
    d.ctfs = simple_placement(groups, f.num_vars());
  } else {
    d.ctfs = Assembler(groups, f.num_vars()).run();
  }
  d.report.k = d.ctfs.size();
  return d;
}

bool is_sound_decomposition(const TabularFormula& f, std::span<const Ctf> ctfs) {
  std::set<Clause> in_formula(f.clauses().begin(), f.clauses().end());
  std::set<Clause> covered;
  for (const Ctf& c : ctfs) {
    if (c.num_vars() != f.num_vars()) return false;
    for (const Clause& cl : c.clauses()) {
      if (!in_formula.count(cl)) return false;
      covered.insert(cl);
    }
  }
  return covered == in_formula;
}

ClearResult ctf_to_cts_with_evidence(const Ctf& c) {
  std::vector<Tier> tiers;
  tiers.reserve(c.tiers().size());
  for (Tier t : c.tiers()) tiers.emplace_back(static_cast<std::uint8_t>(~t.mask()));
  return clear_with_evidence(Cts(c.permutation(), std::move(tiers)));
}

Cts ctf_to_cts(const Ctf& c) { return ctf_to_cts_with_evidence(c).structure; }

std::string render(const Ctf& c, const VarNames& names) {
  // A CT formula table has the same layout as a structure table; reuse it
  // through a raw structure holding the clause lines.
  std::ostringstream os;
  std::string table = render(Cts(c.permutation(), {c.tiers().begin(), c.tiers().end()}), names);
  os << table;
  return os.str();
}

namespace {

[[noreturn]] void fail(const std::string& what, std::size_t line) {
  throw DimacsError(what, line, 1);
}

}  // namespace

std::vector<Ctf> parse_decomposition(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0, k = 0, lineno = 0;
  bool header = false;
  std::vector<Ctf> out;
  std::optional<Permutation> perm;
  std::vector<Clause> clauses;

  auto finish = [&] {
    if (perm) out.push_back(Ctf::from_clauses(*perm, clauses));
    clauses.clear();
  };

  for (std::string line; std::getline(in, line);) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == 'c') continue;
    if (head == "p") {
      std::string kind;
      if (header || !(ls >> kind >> n >> k) || kind != "ctf" || n < 3) {
        fail("header must be 'p ctf <vars> <formulas>'", lineno);
      }
      header = true;
      continue;
    }
    if (!header) fail("content before 'p ctf' header", lineno);
    if (head == "perm") {
      finish();
      std::vector<VarId> order;
      for (long long v; ls >> v && v != 0;) {
        if (v < 1 || static_cast<std::size_t>(v) > n) fail("variable out of range", lineno);
        order.emplace_back(static_cast<std::uint32_t>(v));
      }
      if (order.size() != n) fail("permutation must list all variables", lineno);
      try {
        perm = Permutation(std::move(order));
      } catch (const std::invalid_argument& e) {
        fail(e.what(), lineno);
      }
      continue;
    }
    if (!perm) fail("clause before first 'perm' line", lineno);
    std::istringstream cs(line);
    std::vector<long long> lits;
    for (long long l; cs >> l && l != 0;) lits.push_back(l);
    if (lits.size() != 3) fail("clause must have exactly 3 literals", lineno);
    auto lit = [&](long long l) {
      long long v = l < 0 ? -l : l;
      if (v < 1 || static_cast<std::size_t>(v) > n) fail("variable out of range", lineno);
      return Literal{VarId(static_cast<std::uint32_t>(v)), l < 0};
    };
    try {
      Clause c(lit(lits[0]), lit(lits[1]), lit(lits[2]));
      if (!compact_line(c, *perm)) fail("clause is not compact under its permutation", lineno);
      clauses.push_back(c);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), lineno);
    }
  }
  if (!header) fail("missing 'p ctf' header", lineno);
  finish();
  if (out.size() != k) {
    fail("header declares " + std::to_string(k) + " formulas, found " +
             std::to_string(out.size()),
         lineno);
  }
  return out;
}

std::string write_decomposition(std::span<const Ctf> ctfs) {
  std::ostringstream os;
  os << "p ctf " << (ctfs.empty() ? 0 : ctfs.front().num_vars()) << ' ' << ctfs.size()
     << '\n';
  for (const Ctf& c : ctfs) {
    os << "perm";
    for (VarId v : c.permutation().order()) os << ' ' << v.index;
    os << " 0\n";
    for (const Clause& cl : c.clauses()) {
      for (const Literal& l : cl.literals()) os << (l.negated ? "-" : "") << l.var.index << ' ';
      os << "0\n";
    }
  }
  return os.str();
}

}  // namespace cts
