#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "apdep/atom.hpp"
#include "apdep/calculus.hpp"
#include "apdep/completeness.hpp"
#include "apdep/discovery.hpp"
#include "apdep/team.hpp"

namespace apdep {

using json = nlohmann::ordered_json;

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

namespace detail {

inline std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Comma-separated records with RFC 4180 quoting. Unquoted fields are
/// trimmed; blank lines are skipped.
inline std::vector<CsvRecord> read_csv_records(std::istream& in) {
  std::vector<CsvRecord> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t start_line = no;
    CsvRecord rec;
    rec.line = start_line;
    std::string field;
    bool quoted = false, was_quoted = false;
    std::size_t quote_col = 0;
    std::size_t i = 0;
    for (;;) {
      if (i >= line.size() || (!quoted && line[i] == '\r' && i + 1 == line.size())) {
        if (quoted) {
          // quoted field spanning lines
          std::string more;
          if (!std::getline(in, more)) throw ParseError("unterminated quoted field", start_line, quote_col);
          ++no;
          field += '\n';
          line = std::move(more);
          i = 0;
          continue;
        }
        break;
      }
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          quoted = false;
          ++i;
          while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
          if (i < line.size() && line[i] != ',')
            throw ParseError("unexpected character after closing quote", no, i + 1);
          continue;
        }
        field += c;
        ++i;
        continue;
      }
      if (c == ',') {
        rec.fields.push_back(was_quoted ? field : detail::trim_copy(field));
        field.clear();
        was_quoted = false;
        ++i;
        continue;
      }
      if (c == '"' && detail::trim_copy(field).empty()) {
        field.clear();
        quoted = was_quoted = true;
        quote_col = i + 1;
        ++i;
        continue;
      }
      field += c;
      ++i;
    }
    rec.fields.push_back(was_quoted ? field : detail::trim_copy(field));
    out.push_back(std::move(rec));
  }
  return out;
}

enum class Semantics { Bag, Set };

struct LoadedTeam {
  MultiTeam team;
  /// 1-based data row (header excluded) of each team row.
  std::vector<std::size_t> source_rows;
  /// Rows dropped as duplicates under set semantics.
  std::size_t dropped_duplicates = 0;
};

/// First record is the header. Values stay strings unless their column is
/// listed in `integer_columns`.
inline LoadedTeam load_team_csv(std::istream& in, Semantics semantics = Semantics::Bag,
                                const std::set<std::string>& integer_columns = {}) {
  const auto records = read_csv_records(in);
  if (records.empty()) throw ParseError("missing header row", 1, 1);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i) {
    const auto& name = records[0].fields[i];
    if (name.empty()) throw ParseError("empty column name in header", records[0].line, i + 1);
    vars.emplace_back(name);
  }
  DomainPtr domain;
  try {
    domain = make_domain(vars);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), records[0].line, 1);
  }
  std::vector<bool> as_int(vars.size(), false);
  for (const auto& c : integer_columns) as_int[domain->index_of(Variable(c))] = true;

  LoadedTeam out{MultiTeam(domain), {}, 0};
  Team set_view(domain);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != vars.size())
      throw ParseError("expected " + std::to_string(vars.size()) + " fields, found " +
                           std::to_string(rec.fields.size()),
                       rec.line, 1);
    Tuple row;
    row.reserve(vars.size());
    for (std::size_t c = 0; c < vars.size(); ++c) {
      if (!as_int[c]) {
        row.emplace_back(rec.fields[c]);
        continue;
      }
      try {
        std::size_t used = 0;
        const long long v = std::stoll(rec.fields[c], &used);
        if (used != rec.fields[c].size()) throw std::invalid_argument("trailing text");
        row.emplace_back(static_cast<std::int64_t>(v));
      } catch (const std::exception&) {
        throw ParseError("column '" + vars[c].name + "' expects an integer, got '" + rec.fields[c] + "'", rec.line,
                         c + 1);
      }
    }
    if (semantics == Semantics::Set && !set_view.insert(row)) {
      ++out.dropped_duplicates;
      continue;
    }
    out.team.add(std::move(row));
    out.source_rows.push_back(r);
  }
  return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim_copy(s) == s) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace detail

inline void write_team_csv(std::ostream& out, const MultiTeam& m) {
  const auto& vars = m.domain().variables();
  for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << detail::csv_field(vars[i].name);
  out << '\n';
  for (const auto& r : m.rows()) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << detail::csv_field(r[i].str());
    out << '\n';
  }
}

inline json value_to_json(const Value& v) { return v.is_integer() ? json(v.as_integer()) : json(v.as_string()); }

inline Value value_from_json(const json& j) {
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value(j.get<std::string>());
  throw std::invalid_argument("team values must be strings or integers");
}

/// {"domain": [...], "rows": [[...], ...]}
inline json team_to_json(const MultiTeam& m) {
  json j;
  j["domain"] = json::array();
  for (const auto& v : m.domain().variables()) j["domain"].push_back(v.name);
  j["rows"] = json::array();
  for (const auto& r : m.rows()) {
    json row = json::array();
    for (const auto& v : r) row.push_back(value_to_json(v));
    j["rows"].push_back(std::move(row));
  }
  return j;
}

inline MultiTeam team_from_json(const json& j) {
  std::vector<Variable> vars;
  for (const auto& n : j.at("domain")) vars.emplace_back(n.get<std::string>());
  MultiTeam m(make_domain(std::move(vars)));
  for (const auto& r : j.at("rows")) {
    Tuple row;
    for (const auto& v : r) row.push_back(value_from_json(v));
    m.add(std::move(row));
  }
  return m;
}

inline json derivation_to_json(const Derivation& d) {
  json steps = json::array();
  for (const auto& st : d.steps) {
    json s{{"id", st.id}, {"rule", std::string(rule_name(st.rule))}};
    if (!st.premises.empty()) s["premises"] = st.premises;
    s["atom"] = format_atom(st.atom);
    if (st.side) {
      s["side"] = *st.side == Side::Lhs ? "lhs" : "rhs";
      s["split"] = st.split;
    }
    steps.push_back(std::move(s));
  }
  return json{{"steps", std::move(steps)}};
}

inline Derivation derivation_from_json(const json& j) {
  Derivation d;
  for (const auto& s : j.at("steps")) {
    Step st;
    st.id = s.at("id").get<int>();
    const auto name = s.at("rule").get<std::string>();
    const auto rule = rule_from_name(name);
    if (!rule) throw std::invalid_argument("unknown rule '" + name + "'");
    st.rule = *rule;
    if (s.contains("premises")) st.premises = s.at("premises").get<std::vector<int>>();
    st.atom = parse_atom(s.at("atom").get<std::string>());
    if (s.contains("side")) {
      const auto side = s.at("side").get<std::string>();
      if (side != "lhs" && side != "rhs") throw std::invalid_argument("side must be lhs or rhs");
      st.side = side == "lhs" ? Side::Lhs : Side::Rhs;
      st.split = s.at("split").get<std::size_t>();
    }
    d.steps.push_back(std::move(st));
  }
  return d;
}

inline json atom_check_to_json(const AtomCheck& c) {
  return json{{"atom", format_atom(c.atom)},
              {"minDeletions", c.min_deletions},
              {"bound", c.bound.fraction()},
              {"satisfied", c.satisfied}};
}

/// Sidecar report written next to an exported countermodel.
inline json report_to_json(const CountermodelReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.sigma_checks) checks.push_back(atom_check_to_json(c));
  return json{{"targetAtom", format_atom(rep.target.atom)},
              {"rows", rep.rows},
              {"minDeletions", rep.target.min_deletions},
              {"bound", rep.target.bound.fraction()},
              {"targetSatisfied", rep.target.satisfied},
              {"source", std::string(source_name(rep.source))},
              {"sigmaChecks", std::move(checks)}};
}

inline std::vector<std::string> names_of(const VarSeq& s) {
  std::vector<std::string> out;
  for (const auto& v : s) out.push_back(v.name);
  return out;
}

inline json mining_to_json(const std::vector<MiningResult>& results) {
  json arr = json::array();
  for (const auto& r : results)
    arr.push_back(json{{"lhs", names_of(r.lhs)},
                       {"rhs", r.rhs.name},
                       {"deletions", r.deletions},
                       {"error", r.error.value().fraction()}});
  return json{{"results", std::move(arr)}};
}

/// Columns: lhs (space separated), rhs, deletions, error as a/b.
inline void write_mining_csv(std::ostream& out, const std::vector<MiningResult>& results) {
  out << "lhs,rhs,deletions,error\n";
  for (const auto& r : results)
    out << detail::csv_field(join_names(r.lhs)) << ',' << detail::csv_field(r.rhs.name) << ',' << r.deletions << ','
        << r.error.value().fraction() << '\n';
}

}  // namespace apdep
