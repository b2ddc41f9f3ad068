#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "apdep/rational.hpp"
#include "apdep/team.hpp"

namespace apdep {

/// An exact rational in [0, 1].
class ErrorRate {
 public:
  ErrorRate() = default;
  ErrorRate(Rational v) : v_(v) {  // NOLINT: checked conversion
    if (v_ < Rational(0) || v_ > Rational(1))
      throw std::out_of_range("error rate " + v_.str() + " outside [0,1]");
  }
  ErrorRate(std::int64_t n, std::int64_t d) : ErrorRate(Rational(n, d)) {}

  const Rational& value() const { return v_; }
  operator const Rational&() const { return v_; }  // NOLINT

  static ErrorRate parse(std::string_view text) { return ErrorRate(Rational::parse(text)); }

  friend bool operator==(const ErrorRate&, const ErrorRate&) = default;
  friend auto operator<=>(const ErrorRate& a, const ErrorRate& b) { return a.v_ <=> b.v_; }

 private:
  Rational v_{0};
};

/// Rows whose removal makes dep(x, y) hold. `removed` is sorted ascending.
struct DeletionWitness {
  std::vector<std::size_t> removed;
  std::size_t total_rows = 0;
};

struct DeletionCount {
  std::size_t count = 0;
  DeletionWitness witness;
};

namespace detail {

inline bool equal_on(const Tuple& a, const Tuple& b, const std::vector<std::size_t>& cols) {
  for (auto c : cols)
    if (a[c] != b[c]) return false;
  return true;
}

inline int compare_on(const Tuple& a, const Tuple& b, const std::vector<std::size_t>& cols) {
  for (auto c : cols) {
    const auto o = a[c] <=> b[c];
    if (o != 0) return o < 0 ? -1 : 1;
  }
  return 0;
}

// Rows grouped by x-tuple, then by y-tuple inside a group. Each x-group keeps
// one most frequent y-class (the class holding the smallest row id on ties)
// and everything else in the group goes into the witness.
inline DeletionCount count_deletions(const std::vector<Tuple>& rows, const std::vector<std::size_t>& xc,
                                     const std::vector<std::size_t>& yc, bool want_witness) {
  const std::size_t n = rows.size();
  DeletionCount out;
  out.witness.total_rows = n;
  if (n < 2 || yc.empty()) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (int c = compare_on(rows[a], rows[b], xc); c != 0) return c < 0;
    if (int c = compare_on(rows[a], rows[b], yc); c != 0) return c < 0;
    return a < b;
  });

  std::size_t g = 0;
  while (g < n) {
    std::size_t g_end = g + 1;
    while (g_end < n && equal_on(rows[order[g]], rows[order[g_end]], xc)) ++g_end;

    std::size_t best_begin = g, best_end = g, best_first = n;
    for (std::size_t c = g; c < g_end;) {
      std::size_t c_end = c + 1;
      while (c_end < g_end && equal_on(rows[order[c]], rows[order[c_end]], yc)) ++c_end;
      const std::size_t len = c_end - c;
      const std::size_t best_len = best_end - best_begin;
      // order[c] is the smallest id in its class
      if (len > best_len || (len == best_len && order[c] < best_first)) {
        best_begin = c;
        best_end = c_end;
        best_first = order[c];
      }
      c = c_end;
    }
    out.count += (g_end - g) - (best_end - best_begin);
    if (want_witness) {
      for (std::size_t i = g; i < g_end; ++i)
        if (i < best_begin || i >= best_end) out.witness.removed.push_back(order[i]);
    }
    g = g_end;
  }
  std::sort(out.witness.removed.begin(), out.witness.removed.end());
  return out;
}

// count <= p * n, by cross-multiplication.
inline bool within_rate(std::size_t count, std::size_t n, const Rational& p) {
  return static_cast<__int128>(count) * p.den() <= static_cast<__int128>(p.num()) * static_cast<__int128>(n);
}

}  // namespace detail

/// dep(x, y): any two rows agreeing on x agree on y.
inline bool satisfies_dep(const MultiTeam& m, const VarSeq& x, const VarSeq& y) {
  const auto xc = m.domain().columns(x);
  const auto yc = m.domain().columns(y);
  return detail::count_deletions(m.rows(), xc, yc, false).count == 0;
}

inline bool satisfies_dep(const Team& t, const VarSeq& x, const VarSeq& y) {
  return satisfies_dep(team_as_multiteam(t), x, y);
}

/// The fewest rows whose deletion makes dep(x, y) hold, with such a set.
inline DeletionCount min_deletions(const MultiTeam& m, const VarSeq& x, const VarSeq& y) {
  const auto xc = m.domain().columns(x);
  const auto yc = m.domain().columns(y);
  return detail::count_deletions(m.rows(), xc, yc, true);
}

/// Least p with M |= dep_p(x, y); zero for the empty multi-team.
inline ErrorRate minimal_error(const MultiTeam& m, const VarSeq& x, const VarSeq& y) {
  if (m.empty()) return ErrorRate{};
  const auto d = min_deletions(m, x, y);
  return ErrorRate(Rational(static_cast<std::int64_t>(d.count), static_cast<std::int64_t>(m.size())));
}

inline ErrorRate minimal_error(const Team& t, const VarSeq& x, const VarSeq& y) {
  return minimal_error(team_as_multiteam(t), x, y);
}

struct ApproxResult {
  bool satisfied = false;
  std::size_t min_deletions = 0;
  /// Present when satisfied.
  std::optional<DeletionWitness> witness;

  explicit operator bool() const { return satisfied; }
};

/// M |= dep_p(x, y): some deletion of at most p*|M| rows leaves dep(x, y) true.
inline ApproxResult satisfies_approx(const MultiTeam& m, const ErrorRate& p, const VarSeq& x, const VarSeq& y) {
  auto d = min_deletions(m, x, y);
  ApproxResult r;
  r.min_deletions = d.count;
  r.satisfied = detail::within_rate(d.count, m.size(), p.value());
  if (r.satisfied) r.witness = std::move(d.witness);
  return r;
}

inline ApproxResult satisfies_approx(const Team& t, const ErrorRate& p, const VarSeq& x, const VarSeq& y) {
  return satisfies_approx(team_as_multiteam(t), p, x, y);
}

/// dep*(x, y). Every team here is finite, and finite teams satisfy it.
inline bool satisfies_modfinite(const MultiTeam& /*m*/, const VarSeq& /*x*/, const VarSeq& /*y*/) { return true; }

}  // namespace apdep
