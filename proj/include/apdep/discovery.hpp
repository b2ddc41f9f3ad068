#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "apdep/satisfaction.hpp"
#include "apdep/team.hpp"

namespace apdep {

struct MiningResult {
  VarSeq lhs;  // sorted
  Variable rhs;
  ErrorRate error;
  std::size_t deletions = 0;

  friend bool operator==(const MiningResult&, const MiningResult&) = default;
};

struct ColumnStats {
  std::size_t distinct = 0;
  std::size_t top_frequency = 0;
};

inline ColumnStats column_stats(const MultiTeam& m, const Variable& v) {
  const std::size_t col = m.domain().index_of(v);
  std::map<Value, std::size_t> freq;
  for (const auto& r : m.rows()) ++freq[r[col]];
  ColumnStats s;
  s.distinct = freq.size();
  for (const auto& [value, count] : freq) s.top_frequency = std::max(s.top_frequency, count);
  return s;
}

/// Every (lhs, rhs) with |lhs| <= max_lhs, rhs outside lhs and minimal error
/// at most `threshold`, ordered by (error, |lhs|, names). A candidate lhs is
/// skipped for rhs once a proper subset of it determined rhs exactly.
inline std::vector<MiningResult> mine(const MultiTeam& m, std::size_t max_lhs, const ErrorRate& threshold) {
  VarSeq vars = m.domain().variables();
  std::sort(vars.begin(), vars.end());
  const std::size_t nv = vars.size();
  std::vector<MiningResult> out;
  std::map<Variable, std::vector<std::vector<std::size_t>>> exact;  // rhs -> exact lhs index sets

  const auto covers = [](const std::vector<std::size_t>& big, const std::vector<std::size_t>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  std::vector<std::size_t> pick;
  for (std::size_t k = 0; k <= std::min(max_lhs, nv); ++k) {
    pick.resize(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      VarSeq lhs;
      for (auto i : pick) lhs.push_back(vars[i]);
      for (std::size_t r = 0; r < nv; ++r) {
        if (std::find(pick.begin(), pick.end(), r) != pick.end()) continue;
        const Variable& rhs = vars[r];
        auto& known = exact[rhs];
        if (std::any_of(known.begin(), known.end(), [&](const auto& s) { return covers(pick, s); })) continue;
        const auto d = min_deletions(m, lhs, VarSeq{rhs});
        const ErrorRate err =
            m.empty() ? ErrorRate{} : ErrorRate(Rational(static_cast<std::int64_t>(d.count),
                                                         static_cast<std::int64_t>(m.size())));
        if (err > threshold) continue;
        out.push_back({lhs, rhs, err, d.count});
        if (d.count == 0) known.push_back(pick);
      }
      // next k-combination
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == nv - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const MiningResult& a, const MiningResult& b) {
    if (a.error != b.error) return a.error < b.error;
    if (a.lhs.size() != b.lhs.size()) return a.lhs.size() < b.lhs.size();
    if (a.lhs != b.lhs) return a.lhs < b.lhs;
    return a.rhs < b.rhs;
  });
  return out;
}

}  // namespace apdep
