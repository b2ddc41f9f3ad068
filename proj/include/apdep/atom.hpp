#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "apdep/satisfaction.hpp"
#include "apdep/team.hpp"

namespace apdep {

/// Parse failure with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// dep_p(lhs, rhs).
struct Atom {
  ErrorRate p;
  VarSeq lhs;
  VarSeq rhs;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Canonical form: both sides sorted and duplicate-free.
struct NormalizedAtom {
  ErrorRate p;
  VarSeq lhs;
  VarSeq rhs;

  friend bool operator==(const NormalizedAtom&, const NormalizedAtom&) = default;
};

inline VarSeq sorted_unique(VarSeq s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline NormalizedAtom normalize(const Atom& a) { return {a.p, sorted_unique(a.lhs), sorted_unique(a.rhs)}; }

inline VarSet variables_of(const Atom& a) {
  VarSet out(a.lhs.begin(), a.lhs.end());
  out.insert(a.rhs.begin(), a.rhs.end());
  return out;
}

/// Hypotheses. Insertion order is kept and duplicates are dropped.
class SigmaSet {
 public:
  SigmaSet() = default;
  SigmaSet(std::initializer_list<Atom> atoms) {
    for (const auto& a : atoms) insert(a);
  }
  explicit SigmaSet(const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) insert(a);
  }

  bool insert(const Atom& a) {
    if (contains(a)) return false;
    atoms_.push_back(a);
    return true;
  }
  bool contains(const Atom& a) const { return std::find(atoms_.begin(), atoms_.end(), a) != atoms_.end(); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

  VarSet variables() const {
    VarSet out;
    for (const auto& a : atoms_) {
      const auto v = variables_of(a);
      out.insert(v.begin(), v.end());
    }
    return out;
  }

 private:
  std::vector<Atom> atoms_;
};

inline std::string join_names(const VarSeq& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i].name;
  }
  return out;
}

/// `dep[P](L ; R)`; P is printed as `a/b`, or `a` for integers.
inline std::string format_atom(const Atom& a) {
  std::string out = "dep[" + a.p.value().str() + "](";
  out += a.lhs.empty() ? std::string(" ") : join_names(a.lhs) + " ";
  out += ";";
  out += a.rhs.empty() ? std::string(" ") : " " + join_names(a.rhs);
  out += ")";
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << format_atom(a); }

namespace detail {

inline bool is_ident_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';' && c != '[' &&
         c != ']';
}

class AtomScanner {
 public:
  AtomScanner(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  Atom parse() {
    skip_ws();
    expect_word("dep");
    expect('[');
    const std::size_t p_col = col();
    const std::size_t close = s_.find(']', i_);
    if (close == std::string_view::npos) fail("missing ']'");
    const auto p_text = trim(s_.substr(i_, close - i_));
    ErrorRate p = parse_weight(p_text, p_col);
    i_ = close + 1;
    expect('(');
    VarSeq lhs = idents();
    expect(';');
    VarSeq rhs = idents();
    expect(')');
    skip_ws();
    if (i_ != s_.size()) fail("unexpected trailing text");
    return Atom{p, std::move(lhs), std::move(rhs)};
  }

 private:
  static std::string_view trim(std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  }

  ErrorRate parse_weight(std::string_view t, std::size_t column) {
    if (t.empty()) throw ParseError("empty weight", line_, column);
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '.')
        throw ParseError("weight must be a/b or a decimal literal, got '" + std::string(t) + "'", line_, column);
    Rational r;
    try {
      r = Rational::parse(t);
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_, column);
    }
    if (r > Rational(1)) throw ParseError("weight " + r.str() + " outside [0,1]", line_, column);
    return ErrorRate(r);
  }

  VarSeq idents() {
    VarSeq out;
    for (;;) {
      skip_ws();
      if (i_ >= s_.size() || !is_ident_char(s_[i_])) return out;
      const std::size_t start = i_;
      while (i_ < s_.size() && is_ident_char(s_[i_])) ++i_;
      out.emplace_back(std::string(s_.substr(start, i_ - start)));
    }
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  void expect(char c) {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  void expect_word(std::string_view w) {
    if (s_.substr(i_, w.size()) != w) fail("expected 'dep'");
    i_ += w.size();
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col()); }
  std::size_t col() const { return i_ + 1; }

  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parses `dep[P](L ; R)`. `line` is only used for error positions.
inline Atom parse_atom(std::string_view text, std::size_t line = 1) {
  return detail::AtomScanner(text, line).parse();
}

/// One atom per line; blank lines and `#` comments are skipped.
inline SigmaSet parse_sigma(std::istream& in) {
  SigmaSet sigma;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    sigma.insert(parse_atom(line, no));
  }
  return sigma;
}

inline SigmaSet parse_sigma(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sigma(in);
}

}  // namespace apdep
