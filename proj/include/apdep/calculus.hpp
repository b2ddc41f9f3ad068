#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "apdep/atom.hpp"
#include "apdep/rational.hpp"
#include "apdep/satisfaction.hpp"

namespace apdep {

// A1  dep_0(xy, x)                                   reflexivity
// A2  dep_1(x, y)                                    totality
// A3  dep_p(x, yv)             => dep_p(xu, y)       weakening
// A4  dep_p(x, y)              => dep_p(xu, yu)      augmentation
// A5  dep_p(xu, yv)            => dep_p(ux, yv), dep_p(xu, vy)
// A6  dep_p(x, y), dep_q(y, v) => dep_{p+q}(x, v)    if p + q <= 1
// A7  dep_p(x, y)              => dep_q(x, y)        if p <= q <= 1
// CTR dep_p(ux, y)             => dep_p(x, y)        if every variable of u occurs in x
//
// CTR (contraction) is not derivable from A1-A7 over sequences: nothing there
// shortens a left-hand side, so e.g. dep_0(x, xx) has no proof. It is sound
// because rows agreeing on x agree on ux whenever vars(u) are in vars(x).
enum class Rule { Hyp, A1, A2, A3, A4, A5, A6, A7, Contraction };

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Hyp: return "HYP";
    case Rule::A1: return "A1";
    case Rule::A2: return "A2";
    case Rule::A3: return "A3";
    case Rule::A4: return "A4";
    case Rule::A5: return "A5";
    case Rule::A6: return "A6";
    case Rule::A7: return "A7";
    case Rule::Contraction: return "CTR";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (Rule r : {Rule::Hyp, Rule::A1, Rule::A2, Rule::A3, Rule::A4, Rule::A5, Rule::A6, Rule::A7,
                 Rule::Contraction})
    if (rule_name(r) == s) return r;
  return std::nullopt;
}

enum class Side { Lhs, Rhs };

struct Step {
  int id = 0;
  Rule rule = Rule::Hyp;
  std::vector<int> premises;
  Atom atom;
  // A5 only: which side is rotated and the length of its first block.
  std::optional<Side> side;
  std::size_t split = 0;
};

/// The last step is the conclusion.
struct Derivation {
  std::vector<Step> steps;

  const Atom& conclusion() const {
    if (steps.empty()) throw std::logic_error("empty derivation has no conclusion");
    return steps.back().atom;
  }
};

struct CheckResult {
  bool valid = true;
  std::optional<int> failed_step;
  std::string message;

  explicit operator bool() const { return valid; }
};

namespace detail {

inline bool is_prefix(const VarSeq& pre, const VarSeq& s) {
  return pre.size() <= s.size() && std::equal(pre.begin(), pre.end(), s.begin());
}

inline VarSeq rotate_at(const VarSeq& s, std::size_t split) {
  VarSeq out(s.begin() + static_cast<std::ptrdiff_t>(split), s.end());
  out.insert(out.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(split));
  return out;
}

inline std::string check_step(const Step& st, const std::vector<const Atom*>& prem, const SigmaSet& sigma) {
  const Atom& c = st.atom;
  const auto need = [&](std::size_t k) -> std::string {
    if (prem.size() != k)
      return std::string(rule_name(st.rule)) + " takes " + std::to_string(k) + " premise(s), got " +
             std::to_string(prem.size());
    return {};
  };
  switch (st.rule) {
    case Rule::Hyp:
      if (auto e = need(0); !e.empty()) return e;
      if (!sigma.contains(c)) return "hypothesis " + format_atom(c) + " is not in sigma";
      return {};
    case Rule::A1:
      if (auto e = need(0); !e.empty()) return e;
      if (c.p.value() != Rational(0)) return "A1 concludes weight 0";
      if (!is_prefix(c.rhs, c.lhs)) return "A1 right-hand side must be a prefix of the left-hand side";
      return {};
    case Rule::A2:
      if (auto e = need(0); !e.empty()) return e;
      if (c.p.value() != Rational(1)) return "A2 concludes weight 1";
      return {};
    case Rule::A3: {
      if (auto e = need(1); !e.empty()) return e;
      const Atom& a = *prem[0];
      if (a.p != c.p) return "A3 keeps the weight";
      if (!is_prefix(a.lhs, c.lhs)) return "A3 left-hand side must extend the premise's";
      if (!is_prefix(c.rhs, a.rhs)) return "A3 right-hand side must be a prefix of the premise's";
      return {};
    }
    case Rule::A4: {
      if (auto e = need(1); !e.empty()) return e;
      const Atom& a = *prem[0];
      if (a.p != c.p) return "A4 keeps the weight";
      if (!is_prefix(a.lhs, c.lhs)) return "A4 left-hand side must extend the premise's";
      const VarSeq u(c.lhs.begin() + static_cast<std::ptrdiff_t>(a.lhs.size()), c.lhs.end());
      if (c.rhs != concat(a.rhs, u)) return "A4 must append the same block to both sides";
      return {};
    }
    case Rule::A5: {
      if (auto e = need(1); !e.empty()) return e;
      const Atom& a = *prem[0];
      if (a.p != c.p) return "A5 keeps the weight";
      if (!st.side) return "A5 needs a declared side";
      const bool lhs = *st.side == Side::Lhs;
      const VarSeq& from = lhs ? a.lhs : a.rhs;
      if (st.split > from.size()) return "A5 split point out of range";
      if ((lhs ? c.rhs != a.rhs : c.lhs != a.lhs)) return "A5 leaves the other side unchanged";
      if ((lhs ? c.lhs : c.rhs) != rotate_at(from, st.split)) return "A5 conclusion is not the declared block swap";
      return {};
    }
    case Rule::A6: {
      if (auto e = need(2); !e.empty()) return e;
      const Atom& a = *prem[0];
      const Atom& b = *prem[1];
      if (a.rhs != b.lhs) return "A6 middle sequences differ";
      const Rational sum = a.p.value() + b.p.value();
      if (sum > Rational(1)) return "A6 side condition p+q <= 1 violated (" + sum.str() + ")";
      if (c.p.value() != sum) return "A6 concludes weight p+q = " + sum.str();
      if (c.lhs != a.lhs || c.rhs != b.rhs) return "A6 conclusion must be dep(x, v)";
      return {};
    }
    case Rule::A7: {
      if (auto e = need(1); !e.empty()) return e;
      const Atom& a = *prem[0];
      if (c.lhs != a.lhs || c.rhs != a.rhs) return "A7 keeps both sides";
      if (c.p < a.p) return "A7 cannot lower the weight";
      return {};
    }
    case Rule::Contraction: {
      if (auto e = need(1); !e.empty()) return e;
      const Atom& a = *prem[0];
      if (a.p != c.p) return "CTR keeps the weight";
      if (a.rhs != c.rhs) return "CTR keeps the right-hand side";
      if (c.lhs.size() > a.lhs.size() ||
          !std::equal(c.lhs.rbegin(), c.lhs.rend(), a.lhs.rbegin()))
        return "CTR conclusion must be a suffix of the premise's left-hand side";
      const VarSet kept(c.lhs.begin(), c.lhs.end());
      for (std::size_t i = 0; i < a.lhs.size() - c.lhs.size(); ++i)
        if (!kept.count(a.lhs[i])) return "CTR drops '" + a.lhs[i].name + "', which does not occur in the rest";
      return {};
    }
  }
  return "unknown rule";
}

}  // namespace detail

/// Checks every step against its rule schema, over sequences. Reports the
/// first invalid step.
inline CheckResult check_derivation(const Derivation& d, const SigmaSet& sigma) {
  if (d.steps.empty()) return {false, std::nullopt, "empty derivation"};
  std::unordered_map<int, const Atom*> seen;
  for (const Step& st : d.steps) {
    const auto fail = [&](std::string msg) {
      return CheckResult{false, st.id, "step " + std::to_string(st.id) + " (" + std::string(rule_name(st.rule)) +
                                           "): " + std::move(msg)};
    };
    if (seen.count(st.id)) return fail("duplicate step id");
    std::vector<const Atom*> prem;
    for (int pid : st.premises) {
      const auto it = seen.find(pid);
      if (it == seen.end()) return fail("premise " + std::to_string(pid) + " does not precede this step");
      prem.push_back(it->second);
    }
    if (auto msg = detail::check_step(st, prem, sigma); !msg.empty()) return fail(std::move(msg));
    seen.emplace(st.id, &st.atom);
  }
  return {};
}

namespace detail {

using Mask = std::uint64_t;

/// Sigma over variable bit positions, normalized to sets.
class CompiledSigma {
 public:
  struct Edge {
    Mask lhs;
    Mask rhs;
    Rational weight;
    std::size_t atom;
  };

  explicit CompiledSigma(const SigmaSet& sigma) {
    for (const auto& a : sigma) {
      for (const auto& v : a.lhs) bit_of(v);
      for (const auto& v : a.rhs) bit_of(v);
    }
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const Atom& a = sigma.atoms()[i];
      const Mask r = mask(a.rhs);
      const Mask l = mask(a.lhs);
      // an atom whose rhs is inside its lhs never grows a state
      if ((r & ~l) != 0) edges_.push_back({l, r, a.p.value(), i});
    }
  }

  template <class Range>
  Mask mask(const Range& vars) {
    Mask m = 0;
    for (const auto& v : vars) m |= Mask{1} << bit_of(v);
    return m;
  }

  std::size_t bit_of(const Variable& v) {
    const auto it = bits_.find(v.name);
    if (it != bits_.end()) return it->second;
    if (vars_.size() == 64) throw std::length_error("derivation search supports at most 64 variables");
    bits_.emplace(v.name, vars_.size());
    vars_.push_back(v);
    return vars_.size() - 1;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Variable>& variables() const { return vars_; }

 private:
  std::unordered_map<std::string, std::size_t> bits_;
  std::vector<Variable> vars_;
  std::vector<Edge> edges_;
};

struct SearchResult {
  Rational cost{1};
  // Edge indices (into CompiledSigma::edges) in application order. Empty
  // when the cost was capped to 1.
  std::vector<std::size_t> path;
  bool by_totality = true;
};

// Least-cost-first search over variable sets. A state W grows to W u V
// through any edge U -> V with U in W, paying the edge weight. Anything at
// cost 1 or more is answered by totality instead.
template <class Visit>
void search_states(const CompiledSigma& cs, Mask start, Visit&& visit,
                   std::unordered_map<Mask, std::pair<Mask, std::size_t>>* prev) {
  using Item = std::pair<Rational, Mask>;
  const auto later = [](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> open(later);
  std::unordered_map<Mask, Rational> best;
  best.emplace(start, Rational(0));
  open.push({Rational(0), start});
  while (!open.empty()) {
    const auto [cost, w] = open.top();
    open.pop();
    if (best.at(w) != cost) continue;
    if (!visit(w, cost)) return;
    const auto& edges = cs.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = edges[e];
      if ((edge.lhs & ~w) != 0 || (edge.rhs & ~w) == 0) continue;
      const Rational next_cost = cost + edge.weight;
      if (next_cost >= Rational(1)) continue;
      const Mask next = w | edge.rhs;
      auto it = best.find(next);
      if (it != best.end() && it->second <= next_cost) continue;
      best[next] = next_cost;
      if (prev) (*prev)[next] = {w, e};
      open.push({next_cost, next});
    }
  }
}

inline SearchResult shortest_cover(const CompiledSigma& cs, Mask start, Mask goal) {
  SearchResult out;
  if ((goal & ~start) == 0) {
    out.cost = Rational(0);
    out.by_totality = false;
    return out;
  }
  std::unordered_map<Mask, std::pair<Mask, std::size_t>> prev;
  std::optional<Mask> reached;
  search_states(
      cs, start,
      [&](Mask w, const Rational& cost) {
        if ((goal & ~w) != 0) return true;
        reached = w;
        out.cost = cost;
        return false;
      },
      &prev);
  if (!reached) return out;
  out.by_totality = false;
  for (Mask w = *reached; w != start;) {
    const auto [from, edge] = prev.at(w);
    out.path.push_back(edge);
    w = from;
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

// Least cost of a state containing each variable; variables never reached
// below 1 get 1.
inline std::vector<Rational> cheapest_per_variable(const CompiledSigma& cs, Mask start) {
  const std::size_t nv = cs.variables().size();
  std::vector<Rational> out(nv, Rational(1));
  Mask done = 0;
  const Mask all = nv == 64 ? ~Mask{0} : ((Mask{1} << nv) - 1);
  search_states(
      cs, start,
      [&](Mask w, const Rational& cost) {
        Mask fresh = w & ~done;
        while (fresh) {
          const int b = std::countr_zero(fresh);
          out[static_cast<std::size_t>(b)] = cost;
          fresh &= fresh - 1;
        }
        done |= w;
        return done != all;
      },
      nullptr);
  return out;
}

}  // namespace detail

/// Least r with dep_r(lhs, target) derivable from sigma; 1 when only
/// totality applies.
inline ErrorRate min_derivable_weight(const SigmaSet& sigma, const VarSet& lhs, const VarSet& target) {
  detail::CompiledSigma cs(sigma);
  const auto start = cs.mask(lhs);
  const auto goal = cs.mask(target);
  return ErrorRate(detail::shortest_cover(cs, start, goal).cost);
}

/// d_tau(v) for the left-hand side x.
inline ErrorRate d_tau(const SigmaSet& sigma, const VarSeq& x, const Variable& v) {
  return min_derivable_weight(sigma, to_set(x), VarSet{v});
}

/// d_tau for every variable in `vars` at once.
inline std::map<Variable, ErrorRate> d_tau_table(const SigmaSet& sigma, const VarSeq& x, const VarSet& vars) {
  detail::CompiledSigma cs(sigma);
  const auto start = cs.mask(x);
  for (const auto& v : vars) cs.bit_of(v);
  const auto costs = detail::cheapest_per_variable(cs, start);
  std::map<Variable, ErrorRate> out;
  for (const auto& v : vars) out.emplace(v, ErrorRate(costs[cs.bit_of(v)]));
  return out;
}

namespace detail {

class ProofBuilder {
 public:
  int add(Rule r, std::vector<int> premises, Atom atom, std::optional<Side> side = std::nullopt,
          std::size_t split = 0) {
    d_.steps.push_back(Step{next_, r, std::move(premises), std::move(atom), side, split});
    return next_++;
  }

  // Skips steps that would restate their premise.
  int derive(Rule r, int premise, Atom atom) {
    if (this->atom(premise) == atom) return premise;
    return add(r, {premise}, std::move(atom));
  }

  const Atom& atom(int id) const { return d_.steps.at(static_cast<std::size_t>(id - 1)).atom; }
  Derivation take() { return std::move(d_); }

 private:
  Derivation d_;
  int next_ = 1;
};

}  // namespace detail

/// A proof of `goal` from `sigma`, or nullopt when the least derivable
/// weight for its variable sets exceeds goal.p.
///
/// The proof replays the search path. It keeps dep_c(L, S), starting from
/// S = L, and each hypothesis dep_q(U, V) with U inside S becomes
///   dep_q(U S, V)    A3
///   dep_q(S, V)      CTR
///   dep_q(S S, V S)  A4
///   dep_q(S, V S)    CTR
///   dep_{c+q}(L, V S) A6
/// and the goal's right-hand side R is cut out of S with dep_0(S, R).
inline std::optional<Derivation> derives(const SigmaSet& sigma, const Atom& goal) {
  detail::CompiledSigma cs(sigma);
  const auto start = cs.mask(goal.lhs);
  const auto target = cs.mask(goal.rhs);
  const auto found = detail::shortest_cover(cs, start, target);
  if (found.cost > goal.p.value()) return std::nullopt;

  detail::ProofBuilder pb;
  const VarSeq& L = goal.lhs;
  const VarSeq& R = goal.rhs;
  if (found.by_totality) {
    pb.add(Rule::A2, {}, Atom{ErrorRate(1, 1), L, R});
    return pb.take();
  }

  // dep_0(L, L) is only written out when no hypothesis replaces it.
  int cur = 0;
  Rational c{0};
  VarSeq S = L;
  for (std::size_t e : found.path) {
    const Atom& h = sigma.atoms()[cs.edges()[e].atom];
    const ErrorRate q = h.p;
    const int hyp = pb.add(Rule::Hyp, {}, h);
    int from_s = hyp;
    if (h.lhs != S) {
      const int weak = pb.derive(Rule::A3, hyp, Atom{q, concat(h.lhs, S), h.rhs});
      from_s = pb.derive(Rule::Contraction, weak, Atom{q, S, h.rhs});
    }
    const VarSeq VS = concat(h.rhs, S);
    const int aug = pb.derive(Rule::A4, from_s, Atom{q, concat(S, S), VS});
    const int grown = pb.derive(Rule::Contraction, aug, Atom{q, S, VS});
    c += q.value();
    cur = cur == 0 ? grown : pb.add(Rule::A6, {cur, grown}, Atom{ErrorRate(c), L, VS});
    S = VS;
  }

  if (cur == 0) cur = pb.add(Rule::A1, {}, Atom{ErrorRate{}, L, L});
  if (S != R) {
    const int refl = pb.add(Rule::A1, {}, Atom{ErrorRate{}, R, R});
    const int weak = pb.derive(Rule::A3, refl, Atom{ErrorRate{}, concat(R, S), R});
    const int cut = pb.derive(Rule::Contraction, weak, Atom{ErrorRate{}, S, R});
    cur = pb.add(Rule::A6, {cur, cut}, Atom{ErrorRate(c), L, R});
  }
  if (pb.atom(cur).p != goal.p) pb.add(Rule::A7, {cur}, goal);
  return pb.take();
}

}  // namespace apdep
