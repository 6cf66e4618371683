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

// Command-line front end. Exit codes: 10 satisfiable, 20 unsatisfiable,
// 30 classification failure, 0 success for non-verdict commands, 1 usage or
// I/O error.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "cts/decompose.hpp"
#include "cts/hyper.hpp"
#include "cts/oracle.hpp"
#include "cts/sep.hpp"
#include "cts/unify.hpp"

namespace fs = std::filesystem;
using namespace cts;

namespace {

constexpr int kUsageError = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_output(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw UsageError("cannot write " + path.string());
}

TabularFormula load_formula(const std::string& path) {
  try {
    return parse_dimacs(read_input(path));
  } catch (const DimacsError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
  }
}

std::vector<Ctf> load_decomposition(const std::string& path) {
  try {
    return parse_decomposition(read_input(path));
  } catch (const DimacsError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

// "a,b,c" or, without commas, one name per character.
VarNames parse_names(const std::string& text, std::size_t n) {
  if (text.empty()) return default_names(n);
  VarNames names;
  if (text.find(',') == std::string::npos) {
    for (char c : text) names.emplace_back(1, c);
  } else {
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
  }
  if (names.size() != n) {
    throw UsageError("--names gives " + std::to_string(names.size()) + " names for " + std::to_string(n) +
                     " variables");
  }
  return names;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, const char* flag) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError(std::string(flag) + " expects A..B");
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(std::string(flag) + ": bad bound '" + std::string(s) + "'");
    return v;
  };
  std::size_t a = number(std::string_view(text).substr(0, dots));
  std::size_t b = number(std::string_view(text).substr(dots + 2));
  if (a > b) throw UsageError(std::string(flag) + ": empty range");
  return {a, b};
}

// Rows of a tabular formula, one per clause, in the given column order.
std::string render_formula(const TabularFormula& f, const VarNames& names) {
  std::size_t width = 1;
  for (const auto& s : names) width = std::max(width, s.size());
  auto row = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ' ';
      out += cells[i];
      out.append(width - cells[i].size(), ' ');
    }
    out.erase(out.find_last_not_of(' ') + 1);
    return out + '\n';
  };
  std::string out = row(names);
  for (const Clause& c : f.clauses()) {
    std::vector<std::string> cells(f.num_vars());
    for (const Literal& l : c.literals()) cells[l.var.index - 1] = l.negated ? "1" : "0";
    out += row(cells);
  }
  return out;
}

template <typename T>
std::string numbered(const std::string& label, const std::vector<T>& items, const VarNames& names) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += '\n';
    out += label + " " + std::to_string(i + 1) + "\n" + render(items[i], names);
  }
  return out;
}

// Writes every intermediate object of the pipeline as a table file.
void dump_trace(const TabularFormula& input, const std::vector<Ctf>& ctfs, const VarNames& names,
                const fs::path& dir, const Verdict& verdict) {
  fs::create_directories(dir);
  const TabularFormula f = canonicalize(input);
  write_output(dir / "formula.txt", render_formula(f, names));
  write_output(dir / "ctf.txt", numbered("ct formula", ctfs, names));
  std::vector<Cts> structures;
  for (const Ctf& c : ctfs) structures.push_back(ctf_to_cts(c));
  write_output(dir / "structures.txt", numbered("structure", structures, names));
  write_output(dir / "verdict.txt", verdict.record() + "\n");
  if (std::any_of(structures.begin(), structures.end(), [](const Cts& s) { return s.is_empty(); })) return;

  UnifyResult all = unify(structures);
  write_output(dir / "unified.txt", all.is_empty() ? std::string("(empty: ") + std::string(to_string(*all.empty_cause)) + ")\n"
                                                   : numbered("structure", all.structures, names));
  if (structures.size() < 2) return;

  UnifyResult pair = unify({structures[0], structures[1]});
  if (pair.is_empty()) {
    write_output(dir / "unified-pair.txt", "(empty)\n");
    return;
  }
  write_output(dir / "unified-pair.txt", numbered("structure", pair.structures, names));
  write_output(dir / "basic-graph.txt", render(BasicGraph(pair.structures[0]), names));
  EpResult ep = effective_procedure(pair.structures[0], pair.structures[1]);
  if (ep.is_empty()) {
    write_output(dir / "hyperstructure.txt", "(empty at tier " + std::to_string(*ep.empty_tier + 1) + ")\n");
    return;
  }
  write_output(dir / "hyperstructure.txt", render(*ep.hyperstructure, names));

  // Joint satisfying sets, spelled in the second structure's order.
  const Permutation& order = pair.structures[1].permutation();
  std::vector<std::string> rows;
  for (const Assignment& a : extract_jss(*ep.hyperstructure, SIZE_MAX).assignments) {
    std::string row;
    for (std::size_t p = 0; p < order.size(); ++p) {
      if (p) row += ' ';
      row += a[order.at(p)] ? '1' : '0';
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (std::size_t p = 0; p < order.size(); ++p) out += (p ? " " : "") + names.at(order.at(p).index - 1);
  out += '\n';
  for (const auto& r : rows) out += r + '\n';
  write_output(dir / "joint-sets.txt", out);
}

Granularity parse_granularity(const std::string& s) {
  if (s == "fine") return Granularity::Fine;
  if (s == "coarse") return Granularity::Coarse;
  throw UsageError("unknown granularity '" + s + "' (fine|coarse)");
}

struct ClassifyArgs {
  std::string file;
  std::string trace;
  std::string strategy = "assemble";
  std::string decomposition;
  std::string granularity = "fine";
  std::string names;
  bool json = false;
};

ClassifyOptions classify_options(const ClassifyArgs& a, const TabularFormula& f) {
  ClassifyOptions o;
  o.strategy = parse_strategy(a.strategy);
  o.granularity = parse_granularity(a.granularity);
  if (!a.decomposition.empty()) {
    o.decomposition = load_decomposition(a.decomposition);
    if (!is_sound_decomposition(canonicalize(f), *o.decomposition)) {
      throw UsageError(a.decomposition + " is not a decomposition of " + a.file);
    }
  }
  return o;
}

std::vector<Ctf> trace_ctfs(const ClassifyOptions& o, const TabularFormula& f) {
  if (o.decomposition) return *o.decomposition;
  return decompose(canonicalize(f), o.strategy).ctfs;
}

int run_classify(const ClassifyArgs& a, int verbosity) {
  TabularFormula f = load_formula(a.file);
  ClassifyOptions o = classify_options(a, f);
  Verdict v = classify(f, o);
  if (a.json) {
    std::cout << v.json() << '\n';
  } else {
    std::cout << v.record() << '\n';
  }
  if (verbosity > 0) {
    std::cerr << "k=" << v.stats.k << " w=" << v.stats.w << " unify_waves=" << v.stats.unify_waves
              << " rebuilds=" << v.stats.sep_rebuilds << " unifications=" << v.stats.sep_unifications
              << " backtracks=" << v.stats.backtracks << '\n';
  }
  if (!a.trace.empty()) dump_trace(f, trace_ctfs(o, f), parse_names(a.names, f.num_vars()), a.trace, v);
  return v.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctssat: compact-triplet 3-SAT classifier"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Print statistics to stderr");

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a DIMACS 3-CNF (exit 10 SAT, 20 UNSAT, 30 FAIL)");
  classify_cmd->add_option("file", ca.file, "DIMACS file, - for stdin")->required();
  classify_cmd->add_option("--trace", ca.trace, "Directory for intermediate tables");
  classify_cmd->add_option("--strategy", ca.strategy, "simple|assemble")->check(CLI::IsMember({"simple", "assemble"}));
  classify_cmd->add_option("--decomposition", ca.decomposition, "Use the CT formulas from a .ctf file");
  classify_cmd->add_option("--granularity", ca.granularity, "fine|coarse")->check(CLI::IsMember({"fine", "coarse"}));
  classify_cmd->add_option("--names", ca.names, "Variable names for --trace");
  classify_cmd->add_flag("--json", ca.json, "Print the structured report instead of the record line");

  std::string oracle_file, engine = "dpll";
  auto* oracle_cmd = app.add_subcommand("oracle", "Ground-truth verdict (exit 10 SAT, 20 UNSAT)");
  oracle_cmd->add_option("file", oracle_file, "DIMACS file, - for stdin")->required();
  oracle_cmd->add_option("--engine", engine, "dpll|brute")->check(CLI::IsMember({"dpll", "brute"}));

  GenParams gp;
  std::string gen_mode = "free", gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a random 3-CNF in DIMACS");
  gen_cmd->add_option("--n", gp.n, "Variables")->required()->check(CLI::Range(3, 1 << 20));
  gen_cmd->add_option("--m", gp.m, "Clauses")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--neg", gp.negation_fraction, "Fraction of negated literals")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--mode", gen_mode, "free|sat|unsat")->check(CLI::IsMember({"free", "sat", "unsat"}));
  gen_cmd->add_option("--seed", gp.seed, "Seed");
  gen_cmd->add_option("-o,--output", gen_out, "Output file (default stdout)");

  DifftestParams dp;
  std::string n_range = "5..16", m_range = "3n..6n", dt_out;
  auto* diff_cmd = app.add_subcommand("difftest", "Compare the classifier against the DPLL oracle");
  diff_cmd->add_option("--n-range", n_range, "A..B");
  diff_cmd->add_option("--m-range", m_range, "C..D, or Xn..Yn for multiples of n");
  diff_cmd->add_option("--count", dp.count, "Instances")->required();
  diff_cmd->add_option("--seed", dp.seed, "Base seed");
  diff_cmd->add_option("--out", dt_out, "Report directory");
  diff_cmd->add_option("--jobs", dp.jobs, "Worker threads")->check(CLI::PositiveNumber);
  diff_cmd->add_option("--neg", dp.negation_fraction, "Fraction of negated literals")->check(CLI::Range(0.0, 1.0));

  ClassifyArgs ta;
  auto* trace_cmd = app.add_subcommand("trace", "Dump every intermediate table of the pipeline");
  trace_cmd->add_option("file", ta.file, "DIMACS file, - for stdin")->required();
  trace_cmd->add_option("--out", ta.trace, "Output directory")->required();
  trace_cmd->add_option("--strategy", ta.strategy, "simple|assemble")->check(CLI::IsMember({"simple", "assemble"}));
  trace_cmd->add_option("--decomposition", ta.decomposition, "Use the CT formulas from a .ctf file");
  trace_cmd->add_option("--names", ta.names, "Variable names, comma separated or one character each");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*classify_cmd) return run_classify(ca, verbosity);

    if (*oracle_cmd) {
      TabularFormula f = load_formula(oracle_file);
      OracleResult r = parse_engine(engine) == Engine::Brute ? brute_force(f) : dpll(f);
      if (r.satisfiable) {
        std::cout << "SAT " << r.witness->to_string() << " engine=" << engine;
        if (r.model_count) std::cout << " models=" << *r.model_count;
        std::cout << '\n';
        return 10;
      }
      std::cout << "UNSAT engine=" << engine << '\n';
      return 20;
    }

    if (*gen_cmd) {
      gp.mode = parse_gen_mode(gen_mode);
      std::ostringstream comment;
      comment << "gen n=" << gp.n << " m=" << gp.m << " neg=" << gp.negation_fraction << " mode=" << gen_mode
              << " seed=" << gp.seed << " rng=" << kRngName;
      std::string text = write_dimacs(generate(gp), comment.str());
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        write_output(gen_out, text);
      }
      return 0;
    }

    if (*diff_cmd) {
      std::tie(dp.n_min, dp.n_max) = parse_range(n_range, "--n-range");
      if (m_range.find('n') != std::string::npos) {
        std::string stripped;
        for (char c : m_range) {
          if (c != 'n') stripped += c;
        }
        auto [lo, hi] = parse_range(stripped, "--m-range");
        dp.m_ratio_min = static_cast<double>(lo);
        dp.m_ratio_max = static_cast<double>(hi);
        if (lo == 0) throw UsageError("--m-range: multiples of n must be positive");
      } else {
        std::tie(dp.m_min, dp.m_max) = parse_range(m_range, "--m-range");
      }
      if (dp.n_min < 3) throw UsageError("--n-range: at least 3 variables");
      if (!dt_out.empty()) dp.out = dt_out;
      DifftestReport r = difftest(dp);
      std::cout << r.json() << '\n';
      return 0;
    }

    if (*trace_cmd) {
      TabularFormula f = load_formula(ta.file);
      ClassifyOptions o = classify_options(ta, f);
      Verdict v = classify(f, o);
      dump_trace(f, trace_ctfs(o, f), parse_names(ta.names, f.num_vars()), ta.trace, v);
      std::cout << v.record() << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "ctssat: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ctssat: " << e.what() << '\n';
    return kUsageError;
  } catch (const OracleBoundError& e) {
    std::cerr << "ctssat: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
