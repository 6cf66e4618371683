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

#include "cts/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "cts/rng.hpp"

namespace cts {

Clause::Clause(Literal a, Literal b, Literal c) : lits_{a, b, c} {
  std::sort(lits_.begin(), lits_.end());
  if (lits_[0].var == lits_[1].var || lits_[1].var == lits_[2].var) {
    throw std::invalid_argument("clause repeats variable " +
                                std::to_string(lits_[1].var.index));
  }
  if (lits_[0].var.index == 0) {
    throw std::invalid_argument("variable indices are 1-based");
  }
}

TabularFormula::TabularFormula(std::size_t n, std::vector<Clause> clauses)
    : n_(n), clauses_(std::move(clauses)) {
  if (n_ < 3) throw std::invalid_argument("a 3-CNF needs at least 3 variables");
  for (const Clause& c : clauses_) {
    if (c[2].var.index > n_) {
      throw std::invalid_argument("variable " +
                                  std::to_string(c[2].var.index) +
                                  " out of range 1.." + std::to_string(n_));
    }
  }
}

Assignment::Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Assignment Assignment::from_string(std::string_view bits) {
  std::vector<std::uint8_t> v;
  v.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("assignment string must be 0/1");
    }
    v.push_back(ch == '1');
  }
  return Assignment(std::move(v));
}

std::string Assignment::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

DimacsError::DimacsError(const std::string& what, std::size_t line,
                         std::size_t column)
    : std::runtime_error("dimacs:" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

// Splits one physical line into whitespace-separated tokens.
void tokenize(std::string_view line, std::size_t lineno,
              std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    out.push_back({line.substr(i, j - i), lineno, i + 1});
    i = j;
  }
}

long long to_int(const Token& t) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    throw DimacsError("expected integer, got '" + std::string(t.text) + "'",
                      t.line, t.column);
  }
  return v;
}

}  // namespace

TabularFormula parse_dimacs(std::string_view text) {
  std::size_t n = 0;
  std::size_t declared_m = 0;
  bool have_header = false;
  std::vector<Clause> clauses;
  std::vector<Token> pending;  // literals of the clause being read
  std::vector<Token> tokens;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++lineno;

    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == 'c') continue;
    if (line[first] == '%') break;  // SATLIB trailer

    tokens.clear();
    tokenize(line, lineno, tokens);
    if (tokens.front().text == "p") {
      if (have_header) {
        throw DimacsError("duplicate header", lineno, first + 1);
      }
      if (tokens.size() != 4 || tokens[1].text != "cnf") {
        throw DimacsError("header must be 'p cnf <vars> <clauses>'", lineno,
                          first + 1);
      }
      long long nv = to_int(tokens[2]);
      long long mv = to_int(tokens[3]);
      if (nv < 3) {
        throw DimacsError("need at least 3 variables", lineno, tokens[2].column);
      }
      if (mv < 0) {
        throw DimacsError("negative clause count", lineno, tokens[3].column);
      }
      n = static_cast<std::size_t>(nv);
      declared_m = static_cast<std::size_t>(mv);
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw DimacsError("clause before 'p cnf' header", lineno, first + 1);
    }
    for (const Token& t : tokens) {
      long long lit = to_int(t);
      if (lit != 0) {
        long long var = lit < 0 ? -lit : lit;
        if (static_cast<std::size_t>(var) > n) {
          throw DimacsError("variable " + std::to_string(var) +
                                " out of range 1.." + std::to_string(n),
                            t.line, t.column);
        }
        pending.push_back(t);
        continue;
      }
      if (pending.size() != 3) {
        throw DimacsError("clause has " + std::to_string(pending.size()) +
                              " literals, expected exactly 3",
                          t.line, t.column);
      }
      std::array<Literal, 3> lits;
      for (std::size_t i = 0; i < 3; ++i) {
        long long l = to_int(pending[i]);
        lits[i] = {VarId(static_cast<std::uint32_t>(l < 0 ? -l : l)), l < 0};
      }
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
          if (lits[i].var == lits[j].var) {
            throw DimacsError("repeated variable " +
                                  std::to_string(lits[j].var.index) +
                                  " in clause",
                              pending[j].line, pending[j].column);
          }
        }
      }
      clauses.emplace_back(lits[0], lits[1], lits[2]);
      pending.clear();
    }
  }
  if (!have_header) throw DimacsError("missing 'p cnf' header", lineno, 1);
  if (!pending.empty()) {
    throw DimacsError("unterminated clause", pending.front().line,
                      pending.front().column);
  }
  if (clauses.size() != declared_m) {
    throw DimacsError("header declares " + std::to_string(declared_m) +
                          " clauses, found " + std::to_string(clauses.size()),
                      lineno, 1);
  }
  return TabularFormula(n, std::move(clauses));
}

std::string write_dimacs(const TabularFormula& f, std::string_view comment) {
  std::ostringstream os;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string l; std::getline(lines, l);) os << "c " << l << '\n';
  }
  os << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c.literals()) {
      os << (l.negated ? "-" : "") << l.var.index << ' ';
    }
    os << "0\n";
  }
  return os.str();
}

bool evaluate(const TabularFormula& f, const Assignment& a) {
  if (a.size() != f.num_vars()) {
    throw std::invalid_argument("assignment length " + std::to_string(a.size()) +
                                " != " + std::to_string(f.num_vars()));
  }
  for (const Clause& c : f.clauses()) {
    bool matched = true;
    for (const Literal& l : c.literals()) {
      if (a[l.var] != l.negated) {
        matched = false;
        break;
      }
    }
    if (matched) return false;
  }
  return true;
}

TabularFormula canonicalize(const TabularFormula& f) {
  std::vector<Clause> cs = f.clauses();
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return TabularFormula(f.num_vars(), std::move(cs));
}

namespace {

std::array<VarId, 3> draw_triple(Rng& rng, std::size_t n) {
  std::array<VarId, 3> vs;
  for (std::size_t i = 0; i < 3; ++i) {
    for (;;) {
      VarId v(static_cast<std::uint32_t>(rng.below(n) + 1));
      if (std::find(vs.begin(), vs.begin() + i, v) == vs.begin() + i) {
        vs[i] = v;
        break;
      }
    }
  }
  return vs;
}

Clause draw_clause(Rng& rng, std::size_t n, double neg) {
  auto vs = draw_triple(rng, n);
  return Clause({vs[0], rng.bernoulli(neg)}, {vs[1], rng.bernoulli(neg)},
                {vs[2], rng.bernoulli(neg)});
}

}  // namespace

GeneratedInstance generate_instance(const GenParams& p) {
  if (p.n < 3) throw std::invalid_argument("n must be >= 3");
  if (p.m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(p.negation_fraction >= 0.0 && p.negation_fraction <= 1.0)) {
    throw std::invalid_argument("negation fraction must lie in [0,1]");
  }
  Rng rng(p.seed);
  std::vector<Clause> clauses;
  std::optional<Assignment> planted;

  switch (p.mode) {
    case GenMode::Free:
      for (std::size_t i = 0; i < p.m; ++i) {
        clauses.push_back(draw_clause(rng, p.n, p.negation_fraction));
      }
      break;
    case GenMode::PlantedSat: {
      Assignment hidden(p.n);
      for (std::uint32_t v = 1; v <= p.n; ++v) {
        hidden.set(VarId(v), rng.bernoulli(0.5));
      }
      while (clauses.size() < p.m) {
        Clause c = draw_clause(rng, p.n, p.negation_fraction);
        bool falsified = true;
        for (const Literal& l : c.literals()) {
          if (hidden[l.var] != l.negated) falsified = false;
        }
        if (!falsified) clauses.push_back(c);
      }
      planted = hidden;
      break;
    }
    case GenMode::PlantedUnsat: {
      auto core = draw_triple(rng, p.n);
      for (unsigned pattern = 0; pattern < 8; ++pattern) {
        clauses.emplace_back(Literal{core[0], (pattern & 4) != 0},
                             Literal{core[1], (pattern & 2) != 0},
                             Literal{core[2], (pattern & 1) != 0});
      }
      while (clauses.size() < p.m) {
        clauses.push_back(draw_clause(rng, p.n, p.negation_fraction));
      }
      for (std::size_t i = clauses.size(); i > 1; --i) {
        std::swap(clauses[i - 1], clauses[rng.below(i)]);
      }
      break;
    }
  }
  return {TabularFormula(p.n, std::move(clauses)), std::move(planted)};
}

TabularFormula generate(const GenParams& p) {
  return generate_instance(p).formula;
}

GenMode parse_gen_mode(std::string_view name) {
  if (name == "free") return GenMode::Free;
  if (name == "sat") return GenMode::PlantedSat;
  if (name == "unsat") return GenMode::PlantedUnsat;
  throw std::invalid_argument("unknown generation mode '" + std::string(name) +
                              "' (free|sat|unsat)");
}

std::string_view to_string(GenMode mode) {
  switch (mode) {
    case GenMode::Free: return "free";
    case GenMode::PlantedSat: return "sat";
    case GenMode::PlantedUnsat: return "unsat";
  }
  return "?";
}

}  // namespace cts
