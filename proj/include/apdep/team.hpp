#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace apdep {

class UnknownVariableError : public std::out_of_range {
 public:
  explicit UnknownVariableError(const std::string& name)
      : std::out_of_range("unknown variable '" + name + "'"), name_(name) {}
  const std::string& variable() const { return name_; }

 private:
  std::string name_;
};

/// Opaque cell value. Integers and strings never compare equal to each other,
/// so "4" and 4 are different tokens. The ordering exists only for canonical
/// sorting and carries no meaning.
class Value {
 public:
  Value() = default;
  Value(std::int64_t v) : v_(v) {}  // NOLINT
  Value(int v) : v_(static_cast<std::int64_t>(v)) {}  // NOLINT
  Value(std::string v) : v_(std::move(v)) {}  // NOLINT
  Value(const char* v) : v_(std::string(v)) {}  // NOLINT

  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }

  std::string str() const { return is_integer() ? std::to_string(as_integer()) : as_string(); }

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.str(); }

 private:
  std::variant<std::int64_t, std::string> v_{std::int64_t{0}};
};

struct Variable {
  std::string name;

  Variable() = default;
  explicit Variable(std::string n) : name(std::move(n)) {
    if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  }

  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// Ordered, possibly empty, duplicates allowed.
using VarSeq = std::vector<Variable>;
using VarSet = std::set<Variable>;
using Tuple = std::vector<Value>;

inline VarSeq seq(std::initializer_list<std::string_view> names) {
  VarSeq out;
  out.reserve(names.size());
  for (auto n : names) out.emplace_back(std::string(n));
  return out;
}

inline VarSet to_set(const VarSeq& s) { return VarSet(s.begin(), s.end()); }

inline VarSeq concat(const VarSeq& a, const VarSeq& b) {
  VarSeq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// The fixed variable set of a team, in column order.
class Domain {
 public:
  Domain() = default;
  explicit Domain(std::vector<Variable> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!index_.emplace(vars_[i].name, i).second)
        throw std::invalid_argument("duplicate variable '" + vars_[i].name + "' in domain");
    }
  }

  std::size_t size() const { return vars_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  bool contains(const Variable& v) const { return index_.count(v.name) != 0; }

  std::size_t index_of(const Variable& v) const {
    const auto it = index_.find(v.name);
    if (it == index_.end()) throw UnknownVariableError(v.name);
    return it->second;
  }

  std::vector<std::size_t> columns(const VarSeq& s) const {
    std::vector<std::size_t> out;
    out.reserve(s.size());
    for (const auto& v : s) out.push_back(index_of(v));
    return out;
  }

  VarSet as_set() const { return VarSet(vars_.begin(), vars_.end()); }

  friend bool operator==(const Domain& a, const Domain& b) { return a.as_set() == b.as_set(); }

 private:
  std::vector<Variable> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

using DomainPtr = std::shared_ptr<const Domain>;

inline DomainPtr make_domain(std::vector<Variable> vars) {
  return std::make_shared<const Domain>(std::move(vars));
}

/// A total map from the domain variables to values.
class Assignment {
 public:
  Assignment(DomainPtr domain, Tuple values) : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_->size())
      throw std::invalid_argument("assignment has " + std::to_string(values_.size()) +
                                  " values for a domain of " + std::to_string(domain_->size()));
  }

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const Tuple& values() const { return values_; }

  const Value& operator[](const Variable& v) const { return values_[domain_->index_of(v)]; }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    if (a.domain_ == b.domain_) return a.values_ == b.values_;
    if (!(*a.domain_ == *b.domain_)) return false;
    for (const auto& v : a.domain_->variables())
      if (a[v] != b[v]) return false;
    return true;
  }

 private:
  DomainPtr domain_;
  Tuple values_;
};

/// s(x): the values of `s` along `x`, in sequence order.
inline Tuple project(const Assignment& s, const VarSeq& x) {
  Tuple out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(s[v]);
  return out;
}

namespace detail {

inline std::vector<std::size_t> restriction_columns(const Domain& from, const VarSet& keep) {
  std::vector<std::size_t> cols;
  for (const auto& v : keep) from.index_of(v);
  for (std::size_t i = 0; i < from.size(); ++i)
    if (keep.count(from.variables()[i])) cols.push_back(i);
  return cols;
}

inline DomainPtr sub_domain(const Domain& from, const std::vector<std::size_t>& cols) {
  std::vector<Variable> vars;
  for (auto c : cols) vars.push_back(from.variables()[c]);
  return make_domain(std::move(vars));
}

inline Tuple pick(const Tuple& row, const std::vector<std::size_t>& cols) {
  Tuple out;
  out.reserve(cols.size());
  for (auto c : cols) out.push_back(row[c]);
  return out;
}

}  // namespace detail

/// A finite set of assignments over one domain. Rows keep first-insertion
/// order; inserting a row that is already present does nothing.
class Team {
 public:
  explicit Team(DomainPtr domain) : domain_(std::move(domain)) {}
  explicit Team(std::vector<Variable> vars) : domain_(make_domain(std::move(vars))) {}

  /// Returns false when the row was already present.
  bool insert(Tuple values) {
    if (values.size() != domain_->size())
      throw std::invalid_argument("row width does not match the domain");
    if (!seen_.insert(values).second) return false;
    rows_.push_back(std::move(values));
    return true;
  }

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<Tuple>& rows() const { return rows_; }
  Assignment row(std::size_t i) const { return Assignment(domain_, rows_.at(i)); }

  bool contains(const Tuple& values) const { return seen_.count(values) != 0; }

  /// Set equality, independent of row order and of column order.
  friend bool operator==(const Team& a, const Team& b) {
    if (!(a.domain() == b.domain()) || a.size() != b.size()) return false;
    const auto perm = b.domain_->columns(a.domain_->variables());
    for (const auto& r : b.rows_) {
      Tuple reordered(r.size());
      for (std::size_t i = 0; i < perm.size(); ++i) reordered[i] = r[perm[i]];
      if (!a.contains(reordered)) return false;
    }
    return true;
  }

 private:
  DomainPtr domain_;
  std::vector<Tuple> rows_;
  std::set<Tuple> seen_;
};

/// A multi-team (X, tau): row identifiers are the dense integers 0..n-1 and
/// distinct identifiers may carry equal assignments.
class MultiTeam {
 public:
  explicit MultiTeam(DomainPtr domain) : domain_(std::move(domain)) {}
  explicit MultiTeam(std::vector<Variable> vars) : domain_(make_domain(std::move(vars))) {}
  MultiTeam(DomainPtr domain, std::vector<Tuple> rows) : domain_(std::move(domain)), rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.size() != domain_->size()) throw std::invalid_argument("row width does not match the domain");
  }

  std::size_t add(Tuple values) {
    if (values.size() != domain_->size())
      throw std::invalid_argument("row width does not match the domain");
    rows_.push_back(std::move(values));
    return rows_.size() - 1;
  }

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<Tuple>& rows() const { return rows_; }
  Assignment row(std::size_t i) const { return Assignment(domain_, rows_.at(i)); }

  /// Same identifiers, same assignments (column order may differ).
  friend bool operator==(const MultiTeam& a, const MultiTeam& b) {
    if (!(a.domain() == b.domain()) || a.size() != b.size()) return false;
    const auto perm = b.domain_->columns(a.domain_->variables());
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t i = 0; i < perm.size(); ++i)
        if (a.rows_[r][i] != b.rows_[r][perm[i]]) return false;
    return true;
  }

 private:
  DomainPtr domain_;
  std::vector<Tuple> rows_;
};

/// T restricted to V; rows that become equal collapse.
inline Team restrict_team(const Team& t, const VarSet& keep) {
  const auto cols = detail::restriction_columns(t.domain(), keep);
  Team out(detail::sub_domain(t.domain(), cols));
  for (const auto& r : t.rows()) out.insert(detail::pick(r, cols));
  return out;
}

/// M restricted to V; identifiers and multiplicities are kept.
inline MultiTeam restrict_multiteam(const MultiTeam& m, const VarSet& keep) {
  const auto cols = detail::restriction_columns(m.domain(), keep);
  std::vector<Tuple> rows;
  rows.reserve(m.size());
  for (const auto& r : m.rows()) rows.push_back(detail::pick(r, cols));
  return MultiTeam(detail::sub_domain(m.domain(), cols), std::move(rows));
}

/// Identifier i is the team's i-th row.
inline MultiTeam team_as_multiteam(const Team& t) { return MultiTeam(t.domain_ptr(), t.rows()); }

}  // namespace apdep
