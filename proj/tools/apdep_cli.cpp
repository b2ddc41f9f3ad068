// Command-line front end: check, entail, prove, countermodel, mine.
//
// Exit codes: 0 success or a positive answer, 1 a negative answer,
// 2 usage, input or parse errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "apdep/apdep.hpp"

namespace {

using namespace apdep;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

LoadedTeam load_team(const std::string& path, bool set_semantics) {
  auto in = open_input(path);
  auto loaded = load_team_csv(in, set_semantics ? Semantics::Set : Semantics::Bag);
  if (set_semantics && loaded.dropped_duplicates > 0)
    std::cerr << "warning: set semantics dropped " << loaded.dropped_duplicates << " duplicate row(s)\n";
  return loaded;
}

SigmaSet load_sigma(const std::string& path) {
  auto in = open_input(path);
  return parse_sigma(in);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string lhs_label(const VarSeq& lhs) { return lhs.empty() ? std::string("∅") : join_names(lhs); }

struct CheckOpts {
  std::string team, atom;
  bool set_semantics = false, json = false;
};

int cmd_check(const CheckOpts& o) {
  const Atom atom = parse_atom(o.atom);
  const auto loaded = load_team(o.team, o.set_semantics);
  const auto& m = loaded.team;
  const auto d = min_deletions(m, atom.lhs, atom.rhs);
  const auto sat = satisfies_approx(m, atom.p, atom.lhs, atom.rhs);
  const auto err = minimal_error(m, atom.lhs, atom.rhs);
  std::vector<std::size_t> witness;
  for (auto r : d.witness.removed) witness.push_back(loaded.source_rows[r]);

  if (o.json) {
    json j{{"atom", format_atom(atom)},
           {"satisfied", sat.satisfied},
           {"rows", m.size()},
           {"minDeletions", d.count},
           {"minimalError", err.value().fraction()},
           {"bound", (atom.p.value() * Rational(static_cast<std::int64_t>(m.size()))).fraction()},
           {"witnessRows", witness},
           {"droppedDuplicates", loaded.dropped_duplicates}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (sat.satisfied ? "satisfied: " : "violated: ") << format_atom(atom) << '\n'
              << "rows: " << m.size() << '\n'
              << "min deletions: " << d.count << '\n'
              << "minimal error: " << err.value().fraction() << '\n'
              << "witness rows:";
    if (witness.empty()) std::cout << " (none)";
    for (auto w : witness) std::cout << ' ' << w;
    std::cout << '\n';
    if (o.set_semantics) std::cout << "collapsed duplicates: " << loaded.dropped_duplicates << '\n';
  }
  return sat.satisfied ? kYes : kNo;
}

struct EntailOpts {
  std::string sigma, atom, out;
  bool json = false, oracle = false;
  std::size_t max_rows = 4, domain_size = 3;
};

int cmd_entail(const EntailOpts& o, bool prove) {
  const Atom atom = parse_atom(o.atom);
  const SigmaSet sigma = load_sigma(o.sigma);
  const auto weight = min_derivable_weight(sigma, to_set(atom.lhs), to_set(atom.rhs));
  const auto proof = derives(sigma, atom);
  if (proof) {
    const auto check = check_derivation(*proof, sigma);
    if (!check) throw std::logic_error("constructed proof failed to check: " + check.message);
  }
  std::optional<bool> oracle;
  if (o.oracle) oracle = semantic_entails_bruteforce(sigma, atom, o.max_rows, o.domain_size);

  if (o.json) {
    json j{{"atom", format_atom(atom)}, {"derivable", proof.has_value()}, {"minimalWeight", weight.value().fraction()}};
    if (oracle)
      j["oracle"] = json{{"maxRows", o.max_rows}, {"domainSize", o.domain_size}, {"entailed", *oracle}};
    if (prove && proof) {
      if (o.out.empty())
        j["proof"] = derivation_to_json(*proof);
      else
        write_file(o.out, derivation_to_json(*proof).dump(2) + "\n");
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (proof ? "derivable: " : "not derivable: ") << format_atom(atom) << '\n'
              << "minimal weight: " << weight.value().fraction() << '\n';
    if (oracle)
      std::cout << "bounded semantic check (" << o.max_rows << " rows, " << o.domain_size
                << " values): " << (*oracle ? "entailed" : "countermodel exists") << '\n';
    if (prove && proof) {
      const auto text = derivation_to_json(*proof).dump(2) + "\n";
      if (o.out.empty())
        std::cout << text;
      else
        write_file(o.out, text);
    }
  }
  return proof ? kYes : kNo;
}

struct CounterOpts {
  std::string sigma, atom, out, report;
  bool json = false;
  std::size_t max_rows = 6, domain_size = 6;
};

int cmd_countermodel(const CounterOpts& o) {
  const Atom atom = parse_atom(o.atom);
  const SigmaSet sigma = load_sigma(o.sigma);
  SearchBounds bounds;
  bounds.max_rows = o.max_rows;
  bounds.domain_size = o.domain_size;

  std::optional<Countermodel> cm;
  try {
    cm = find_countermodel(sigma, atom, bounds);
  } catch (const NoCountermodelFound& e) {
    if (o.json)
      std::cout << json{{"atom", format_atom(atom)}, {"derivable", false}, {"error", e.what()}}.dump(2) << '\n';
    else
      std::cout << "not derivable, " << e.what() << ": " << format_atom(atom) << '\n';
    return kNo;
  }
  if (!cm) {
    if (o.json)
      std::cout << json{{"atom", format_atom(atom)}, {"derivable", true}}.dump(2) << '\n';
    else
      std::cout << "derivable; no countermodel: " << format_atom(atom) << '\n';
    return kNo;
  }

  const auto rep = report_for(*cm, sigma, atom);
  std::ostringstream csv;
  write_team_csv(csv, cm->team);
  if (!o.out.empty()) write_file(o.out, csv.str());
  if (!o.report.empty()) write_file(o.report, report_to_json(rep).dump(2) + "\n");

  if (o.json) {
    json j{{"atom", format_atom(atom)}, {"derivable", false}, {"report", report_to_json(rep)}};
    if (o.out.empty()) j["team"] = team_to_json(cm->team);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "countermodel (" << source_name(cm->source) << ", " << rep.rows
              << " rows) for " << format_atom(atom) << '\n'
              << "target min deletions: " << rep.target.min_deletions << " > bound " << rep.target.bound.fraction()
              << '\n';
    for (const auto& c : rep.sigma_checks)
      std::cout << "  holds: " << format_atom(c.atom) << " (" << c.min_deletions << " <= " << c.bound.fraction()
                << ")\n";
    if (o.out.empty()) std::cout << csv.str();
  }
  return kYes;
}

struct MineOpts {
  std::string team, threshold = "0";
  std::size_t max_lhs = 1;
  bool set_semantics = false, json = false, csv = false;
};

int cmd_mine(const MineOpts& o) {
  ErrorRate threshold;
  try {
    threshold = ErrorRate::parse(o.threshold);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--threshold: ") + e.what());
  }
  const auto loaded = load_team(o.team, o.set_semantics);
  const auto results = mine(loaded.team, o.max_lhs, threshold);
  if (o.json) {
    std::cout << mining_to_json(results).dump(2) << '\n';
  } else if (o.csv) {
    write_mining_csv(std::cout, results);
  } else {
    for (const auto& r : results)
      std::cout << lhs_label(r.lhs) << " → " << r.rhs.name << ' ' << r.deletions << ' '
                << r.error.value().fraction() << '\n';
  }
  return kYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate dependence atoms: checking, derivations, countermodels and mining"};
  app.require_subcommand(1);

  CheckOpts check;
  auto* c = app.add_subcommand("check", "Check a team against dep[P](L ; R)");
  c->add_option("team", check.team, "CSV team file (header row = variables)")->required();
  c->add_option("atom", check.atom, "Atom, e.g. 'dep[1/4](x ; y)'")->required();
  c->add_flag("--set-semantics", check.set_semantics, "Drop duplicate rows (default keeps them)");
  c->add_flag("--json", check.json, "JSON output");

  EntailOpts entail;
  auto* e = app.add_subcommand("entail", "Decide derivability from a sigma file");
  EntailOpts prove;
  auto* p = app.add_subcommand("prove", "Derive an atom and emit the proof as JSON");
  for (auto [cmd, opts] : {std::pair{e, &entail}, std::pair{p, &prove}}) {
    cmd->add_option("sigma", opts->sigma, "Hypotheses, one atom per line")->required();
    cmd->add_option("atom", opts->atom, "Goal atom")->required();
    cmd->add_flag("--json", opts->json, "JSON output");
    cmd->add_flag("--oracle", opts->oracle, "Also run the bounded semantic check");
    cmd->add_option("--max-rows", opts->max_rows, "Oracle: largest team size")->capture_default_str();
    cmd->add_option("--domain-size", opts->domain_size, "Oracle: number of values")->capture_default_str();
  }
  p->add_option("-o,--output", prove.out, "Write the proof JSON here");

  CounterOpts counter;
  auto* k = app.add_subcommand("countermodel", "Build a verified countermodel for a non-derivable atom");
  k->add_option("sigma", counter.sigma, "Hypotheses, one atom per line")->required();
  k->add_option("atom", counter.atom, "Goal atom")->required();
  k->add_option("-o,--output", counter.out, "Write the team CSV here");
  k->add_option("--report", counter.report, "Write the verification report JSON here");
  k->add_flag("--json", counter.json, "JSON output");
  k->add_option("--max-rows", counter.max_rows, "Fallback enumeration: largest team size")->capture_default_str();
  k->add_option("--domain-size", counter.domain_size, "Fallback enumeration: number of values")
      ->capture_default_str();

  MineOpts mineo;
  auto* mcmd = app.add_subcommand("mine", "Report approximate dependencies found in a team");
  mcmd->add_option("team", mineo.team, "CSV team file")->required();
  mcmd->add_option("--max-lhs", mineo.max_lhs, "Largest left-hand side")->capture_default_str();
  mcmd->add_option("--threshold", mineo.threshold, "Largest error reported (a/b or decimal)")
      ->capture_default_str();
  mcmd->add_flag("--set-semantics", mineo.set_semantics, "Drop duplicate rows");
  auto* mj = mcmd->add_flag("--json", mineo.json, "JSON output");
  mcmd->add_flag("--csv", mineo.csv, "CSV output")->excludes(mj);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kError;
  }

  try {
    if (c->parsed()) return cmd_check(check);
    if (e->parsed()) return cmd_entail(entail, false);
    if (p->parsed()) return cmd_entail(prove, true);
    if (k->parsed()) return cmd_countermodel(counter);
    if (mcmd->parsed()) return cmd_mine(mineo);
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << '\n';
    return kError;
  } catch (const UnknownVariableError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kError;
  } catch (const UsageError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kError;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kError;
  } catch (const std::out_of_range& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kError;
  } catch (const BudgetExceeded& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kError;
  }
  return kError;
}
