#pragma once

#include <algorithm>
#include <bit>
#include <numeric>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apdep/atom.hpp"
#include "apdep/calculus.hpp"
#include "apdep/satisfaction.hpp"
#include "apdep/team.hpp"

namespace apdep {

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NoCountermodelFound : public std::runtime_error {
 public:
  NoCountermodelFound() : std::runtime_error("no countermodel found within bounds") {}
};

/// State of the countermodel construction for (sigma, target).
struct TauContext {
  SigmaSet sigma;
  Atom target;
  /// Every variable of sigma and the target, sorted.
  VarSeq z_tau;
  /// Least derivable weight from target.lhs to each variable of z_tau.
  std::map<Variable, ErrorRate> d;
  /// {target.p} together with every d value; sorted, distinct.
  std::vector<Rational> a_tau;
  std::int64_t n = 2;
};

/// 1 + max ceil(2 / (a - b)) over distinct a > b; 2 when there is no such pair.
inline std::int64_t separation_rows(const std::vector<Rational>& a_tau) {
  std::int64_t best = 0;
  bool any = false;
  for (std::size_t i = 0; i < a_tau.size(); ++i)
    for (std::size_t j = 0; j < a_tau.size(); ++j) {
      if (!(a_tau[i] > a_tau[j])) continue;
      any = true;
      best = std::max(best, (Rational(2) / (a_tau[i] - a_tau[j])).ceil());
    }
  return any ? 1 + best : 2;
}

inline TauContext build_tau_context(const SigmaSet& sigma, const Atom& target) {
  TauContext ctx;
  ctx.sigma = sigma;
  ctx.target = target;
  VarSet z = sigma.variables();
  const auto tv = variables_of(target);
  z.insert(tv.begin(), tv.end());
  ctx.z_tau.assign(z.begin(), z.end());
  ctx.d = d_tau_table(sigma, target.lhs, z);

  ctx.a_tau.push_back(target.p.value());
  for (const auto& [v, r] : ctx.d) ctx.a_tau.push_back(r.value());
  std::sort(ctx.a_tau.begin(), ctx.a_tau.end());
  ctx.a_tau.erase(std::unique(ctx.a_tau.begin(), ctx.a_tau.end()), ctx.a_tau.end());
  ctx.n = separation_rows(ctx.a_tau);
  return ctx;
}

/// m(u) = floor(d(u) * n), so m/n <= d(u) < (m+1)/n.
inline std::int64_t threshold_row(const TauContext& ctx, const Variable& u) {
  return (ctx.d.at(u).value() * Rational(ctx.n)).floor();
}

/// The n-row team s_0..s_{n-1} over z_tau with s_i(u) = min(i, m(u)).
inline MultiTeam build_x_tau(const TauContext& ctx) {
  MultiTeam team(ctx.z_tau);
  std::vector<std::int64_t> m;
  for (const auto& u : ctx.z_tau) m.push_back(threshold_row(ctx, u));
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Tuple row;
    row.reserve(m.size());
    for (auto mu : m) row.emplace_back(std::min(i, mu));
    team.add(std::move(row));
  }
  return team;
}

enum class CountermodelSource { Construction, StateSearch, Exhaustive };

inline std::string_view source_name(CountermodelSource s) {
  switch (s) {
    case CountermodelSource::Construction: return "x-tau";
    case CountermodelSource::StateSearch: return "state-search";
    case CountermodelSource::Exhaustive: return "exhaustive";
  }
  return "?";
}

struct Countermodel {
  MultiTeam team;
  bool checked_sigma = false;
  bool checked_target_fails = false;
  CountermodelSource source = CountermodelSource::Construction;
};

/// Limits for the searches that run when X_tau itself does not verify.
struct SearchBounds {
  /// Largest team tried by the agreement-pattern search.
  std::size_t state_rows = 12;
  /// Rows and value range of the plain enumeration.
  std::size_t max_rows = 6;
  std::size_t domain_size = 6;
  /// Number of teams the plain enumeration may visit.
  std::uint64_t budget = 2'000'000;
};

inline bool satisfies_all(const MultiTeam& m, const SigmaSet& sigma) {
  for (const auto& a : sigma)
    if (!satisfies_approx(m, a.p, a.lhs, a.rhs)) return false;
  return true;
}

/// Re-checks a candidate with the satisfaction module.
inline std::optional<Countermodel> verify_countermodel(MultiTeam team, const SigmaSet& sigma, const Atom& target,
                                                       CountermodelSource source) {
  if (!satisfies_all(team, sigma)) return std::nullopt;
  if (satisfies_approx(team, target.p, target.lhs, target.rhs)) return std::nullopt;
  return Countermodel{std::move(team), true, true, source};
}

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

// C(n + k - 1, k): multisets of size k from n kinds, saturating.
inline std::uint64_t multiset_count(std::uint64_t kinds, std::uint64_t k) {
  if (kinds == 0) return k == 0 ? 1 : 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t top = kinds + i - 1;
    // r * top / i stays integral at every step
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t r1 = r / g, i1 = i / g;
    r = saturating_mul(r1, top / i1);
    if (r == UINT64_MAX) return r;
  }
  return r;
}

// Calls visit on every multi-team with exactly `rows` rows over `vars` and
// values 0..domain_size-1, once per multiset of rows. Stops when visit
// returns false; returns false in that case.
inline bool for_each_multiset_team(const VarSeq& vars, std::size_t rows, std::size_t domain_size,
                                   const std::function<bool(const MultiTeam&)>& visit) {
  const auto domain = make_domain(vars);
  std::size_t kinds = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) kinds *= domain_size;
  std::vector<Tuple> all(kinds);
  for (std::size_t code = 0; code < kinds; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      all[code].emplace_back(static_cast<std::int64_t>(c % domain_size));
      c /= domain_size;
    }
  }
  std::vector<std::size_t> pick(rows, 0);
  for (;;) {
    std::vector<Tuple> team_rows;
    team_rows.reserve(rows);
    for (auto k : pick) team_rows.push_back(all[k]);
    if (!visit(MultiTeam(domain, std::move(team_rows)))) return false;
    // next nondecreasing sequence
    std::size_t i = rows;
    while (i > 0 && pick[i - 1] == kinds - 1) --i;
    if (i == 0) return true;
    const std::size_t v = pick[i - 1] + 1;
    for (std::size_t j = i - 1; j < rows; ++j) pick[j] = v;
  }
}

// Teams built from agreement patterns: a row with pattern W holds 0 on W and
// a value unique to the row elsewhere. With at least one row on the full
// pattern, dep_q(U, V) then needs exactly the rows with U in W and V not in W
// deleted. The search tries every count vector over the patterns that
// falsify the target, for teams of up to `max_rows` rows.
inline std::optional<MultiTeam> search_agreement_patterns(const SigmaSet& sigma, const Atom& target,
                                                          const VarSeq& z, std::size_t max_rows) {
  const std::size_t nz = z.size();
  if (nz >= 20) return std::nullopt;
  std::map<Variable, std::size_t> bit;
  for (std::size_t i = 0; i < nz; ++i) bit[z[i]] = i;
  const auto mask = [&](const VarSeq& s) {
    std::uint64_t m = 0;
    for (const auto& v : s) m |= std::uint64_t{1} << bit.at(v);
    return m;
  };
  struct Constraint {
    std::uint64_t lhs, rhs;
    Rational q;
  };
  std::vector<Constraint> cons;
  for (const auto& a : sigma) cons.push_back({mask(a.lhs), mask(a.rhs), a.p.value()});
  const std::uint64_t x = mask(target.lhs), y = mask(target.rhs);
  const auto violates = [](std::uint64_t w, std::uint64_t l, std::uint64_t r) {
    return (l & ~w) == 0 && (r & ~w) != 0;
  };

  struct Pattern {
    std::uint64_t w;
    std::vector<std::size_t> hits;
  };
  std::vector<Pattern> pats;
  const std::uint64_t full = (std::uint64_t{1} << nz) - 1;
  for (std::uint64_t w = 0; w <= full; ++w) {
    if (!violates(w, x, y)) continue;
    Pattern p{w, {}};
    bool usable = true;
    for (std::size_t c = 0; c < cons.size(); ++c) {
      if (!violates(w, cons[c].lhs, cons[c].rhs)) continue;
      if (cons[c].q == Rational(0)) usable = false;
      p.hits.push_back(c);
    }
    if (usable) pats.push_back(std::move(p));
  }
  if (pats.empty()) return std::nullopt;
  std::stable_sort(pats.begin(), pats.end(), [](const Pattern& a, const Pattern& b) {
    if (a.hits.size() != b.hits.size()) return a.hits.size() < b.hits.size();
    return std::popcount(a.w) > std::popcount(b.w);
  });
  if (pats.size() > 10) pats.resize(10);

  for (std::size_t n = 2; n <= max_rows; ++n) {
    const Rational nr(static_cast<std::int64_t>(n));
    // bad rows needed: > p*n, and at most n-1 since one row takes the full pattern
    const std::int64_t need = (target.p.value() * nr).floor() + 1;
    if (need > static_cast<std::int64_t>(n) - 1) continue;
    std::vector<std::int64_t> cap;
    for (const auto& c : cons) cap.push_back((c.q * nr).floor());
    std::vector<std::int64_t> used(cons.size(), 0);
    std::vector<std::size_t> count(pats.size(), 0);

    std::function<bool(std::size_t, std::int64_t)> dfs = [&](std::size_t i, std::int64_t bad) -> bool {
      if (bad >= need) return true;
      if (i == pats.size()) return false;
      const std::int64_t room = static_cast<std::int64_t>(n) - 1 - bad;
      std::int64_t most = room;
      for (auto c : pats[i].hits) most = std::min(most, cap[c] - used[c]);
      for (std::int64_t k = most; k >= 0; --k) {
        for (auto c : pats[i].hits) used[c] += k;
        count[i] = static_cast<std::size_t>(k);
        const bool ok = dfs(i + 1, bad + k);
        if (ok) return true;
        for (auto c : pats[i].hits) used[c] -= k;
      }
      count[i] = 0;
      return false;
    };
    if (!dfs(0, 0)) continue;

    MultiTeam team(z);
    std::int64_t row = 0;
    const auto emit = [&](std::uint64_t w) {
      Tuple t;
      for (std::size_t b = 0; b < nz; ++b)
        t.emplace_back((w >> b) & 1 ? std::int64_t{0} : row + 1);
      team.add(std::move(t));
      ++row;
    };
    for (std::size_t i = 0; i < pats.size(); ++i)
      for (std::size_t k = 0; k < count[i]; ++k) emit(pats[i].w);
    while (static_cast<std::size_t>(row) < n) emit(full);
    return team;
  }
  return std::nullopt;
}

}  // namespace detail

/// A finite team satisfying sigma and falsifying target, or nullopt when the
/// target is derivable. X_tau is tried first; when it does not verify, the
/// agreement-pattern search and then a plain enumeration within `bounds`
/// are tried. Throws NoCountermodelFound when all of them come up empty.
inline std::optional<Countermodel> find_countermodel(const SigmaSet& sigma, const Atom& target,
                                                     const SearchBounds& bounds = {}) {
  if (derives(sigma, target)) return std::nullopt;

  const TauContext ctx = build_tau_context(sigma, target);
  if (auto cm = verify_countermodel(build_x_tau(ctx), sigma, target, CountermodelSource::Construction)) return cm;

  if (auto team = detail::search_agreement_patterns(sigma, target, ctx.z_tau, bounds.state_rows))
    if (auto cm = verify_countermodel(std::move(*team), sigma, target, CountermodelSource::StateSearch)) return cm;

  std::uint64_t kinds = 1;
  for (std::size_t i = 0; i < ctx.z_tau.size(); ++i) kinds = detail::saturating_mul(kinds, bounds.domain_size);
  std::uint64_t spent = 0;
  std::optional<Countermodel> found;
  for (std::size_t rows = 1; rows <= bounds.max_rows && !found; ++rows) {
    spent += detail::multiset_count(kinds, rows);
    if (spent > bounds.budget) break;
    detail::for_each_multiset_team(ctx.z_tau, rows, bounds.domain_size, [&](const MultiTeam& m) {
      found = verify_countermodel(m, sigma, target, CountermodelSource::Exhaustive);
      return !found;
    });
  }
  if (found) return found;
  throw NoCountermodelFound();
}

/// True iff no multi-team over the variables of sigma and target, with at
/// most max_rows rows and values below domain_size, satisfies sigma while
/// falsifying target. Throws BudgetExceeded when
/// domain_size^(|Z| * max_rows) is above `budget`.
inline bool semantic_entails_bruteforce(const SigmaSet& sigma, const Atom& target, std::size_t max_rows,
                                        std::size_t domain_size, std::uint64_t budget = 100'000'000) {
  VarSet z = sigma.variables();
  const auto tv = variables_of(target);
  z.insert(tv.begin(), tv.end());
  const VarSeq vars(z.begin(), z.end());

  std::uint64_t size = 1;
  for (std::size_t i = 0; i < vars.size() * max_rows; ++i) size = detail::saturating_mul(size, domain_size);
  if (size > budget)
    throw BudgetExceeded("enumeration of " + std::to_string(domain_size) + "^(" + std::to_string(vars.size()) +
                         "*" + std::to_string(max_rows) + ") teams exceeds the budget of " +
                         std::to_string(budget));
  if (domain_size == 0) return true;

  for (std::size_t rows = 1; rows <= max_rows; ++rows) {
    const bool clean = detail::for_each_multiset_team(vars, rows, domain_size, [&](const MultiTeam& m) {
      return !verify_countermodel(m, sigma, target, CountermodelSource::Exhaustive);
    });
    if (!clean) return false;
  }
  return true;
}

struct AtomCheck {
  Atom atom;
  std::size_t min_deletions = 0;
  /// p * rows; the atom holds iff min_deletions <= bound.
  Rational bound;
  bool satisfied = false;
};

struct CountermodelReport {
  AtomCheck target;
  std::vector<AtomCheck> sigma_checks;
  std::size_t rows = 0;
  CountermodelSource source = CountermodelSource::Construction;
};

inline AtomCheck check_atom(const MultiTeam& m, const Atom& a) {
  const auto r = satisfies_approx(m, a.p, a.lhs, a.rhs);
  return AtomCheck{a, r.min_deletions, a.p.value() * Rational(static_cast<std::int64_t>(m.size())), r.satisfied};
}

inline CountermodelReport report_for(const Countermodel& cm, const SigmaSet& sigma, const Atom& target) {
  CountermodelReport rep;
  rep.target = check_atom(cm.team, target);
  for (const auto& a : sigma) rep.sigma_checks.push_back(check_atom(cm.team, a));
  rep.rows = cm.team.size();
  rep.source = cm.source;
  return rep;
}

}  // namespace apdep
