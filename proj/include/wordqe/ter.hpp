#ifndef WORDQE_TER_HPP
#define WORDQE_TER_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordqe/core.hpp"

namespace wordqe {

/// Limits on candidate block shifts (tercom conventions).
struct ShiftParams {
  bool enable_shifts = true;
  std::size_t max_span = 10;
  std::size_t max_distance = 50;
};

struct TerResult {
  EditScript script;
  double ter = 0.0;
};

namespace detail {

inline void require_non_empty(const TokenSequence& mt, const TokenSequence& pe) {
  if (mt.empty()) throw Error(ErrorCode::EmptySegment, "MT segment is empty");
  if (pe.empty()) throw Error(ErrorCode::EmptySegment, "post-edited segment is empty");
}

/// Interns both sides into a shared integer vocabulary.
inline std::pair<std::vector<int>, std::vector<int>> intern(const TokenSequence& a, const TokenSequence& b) {
  std::unordered_map<std::string_view, int> ids;
  auto id_of = [&](const Token& t) {
    auto [it, inserted] = ids.try_emplace(t, static_cast<int>(ids.size()));
    return it->second;
  };
  std::vector<int> ia, ib;
  ia.reserve(a.size());
  ib.reserve(b.size());
  for (const auto& t : a) ia.push_back(id_of(t));
  for (const auto& t : b) ib.push_back(id_of(t));
  return {std::move(ia), std::move(ib)};
}

/// Computes DP row `i` (hypothesis token `tok`) from row i-1.
template <typename T>
void next_row(const std::vector<std::size_t>& prev, const T& tok, const std::vector<T>& ref, std::size_t i,
              std::vector<std::size_t>& cur) {
  cur[0] = i;
  for (std::size_t j = 1; j <= ref.size(); ++j) {
    const std::size_t diag = prev[j - 1] + (tok == ref[j - 1] ? 0 : 1);
    cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
  }
}

/// Unit-cost edit distance, two-row DP.
template <typename T>
std::size_t edit_distance(const std::vector<T>& hyp, const std::vector<T>& ref) {
  std::vector<std::size_t> prev(ref.size() + 1), cur(ref.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    next_row(prev, hyp[i - 1], ref, i, cur);
    std::swap(prev, cur);
  }
  return prev[ref.size()];
}

template <typename T>
void apply_shift(std::vector<T>& v, const ShiftSpan& s) {
  std::vector<T> block(v.begin() + static_cast<std::ptrdiff_t>(s.start),
                       v.begin() + static_cast<std::ptrdiff_t>(s.start + s.length));
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(s.start),
          v.begin() + static_cast<std::ptrdiff_t>(s.start + s.length));
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(s.destination), block.begin(), block.end());
}

/// Full-matrix DP with backtrace. `origin[i]` is the original MT index of
/// hyp[i]. Backtrace preference: match > substitution > deletion > insertion.
inline std::vector<Edit> align_path(const std::vector<int>& hyp, const std::vector<std::size_t>& origin,
                                    const std::vector<int>& ref, const TokenSequence& pe) {
  const std::size_t n = hyp.size(), m = ref.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  std::vector<Edit> path;
  path.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && hyp[i - 1] == ref[j - 1] && at(i - 1, j - 1) == here) {
      path.push_back({EditKind::Match, origin[i - 1], j - 1, std::nullopt, {}});
      --i, --j;
    } else if (i > 0 && j > 0 && hyp[i - 1] != ref[j - 1] && at(i - 1, j - 1) + 1 == here) {
      path.push_back({EditKind::Substitution, origin[i - 1], j - 1, std::nullopt, pe[j - 1]});
      --i, --j;
    } else if (j > 0 && at(i, j - 1) + 1 == here) {
      path.push_back({EditKind::Deletion, std::nullopt, j - 1, std::nullopt, pe[j - 1]});
      --j;
    } else {
      path.push_back({EditKind::Insertion, origin[i - 1], std::nullopt, std::nullopt, {}});
      --i;
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline std::size_t path_cost(const std::vector<Edit>& edits) {
  return static_cast<std::size_t>(
      std::count_if(edits.begin(), edits.end(), [](const Edit& e) { return e.kind != EditKind::Match; }));
}

}  // namespace detail

/// Shift-free minimal-cost alignment of `mt` to `pe`.
inline EditScript levenshtein_align(const TokenSequence& mt, const TokenSequence& pe) {
  detail::require_non_empty(mt, pe);
  auto [hyp, ref] = detail::intern(mt, pe);
  std::vector<std::size_t> origin(mt.size());
  std::iota(origin.begin(), origin.end(), std::size_t{0});
  EditScript script;
  script.edits = detail::align_path(hyp, origin, ref, pe);
  script.total_cost = detail::path_cost(script.edits);
  return script;
}

/// TER alignment with greedy block shifts.
///
/// Each round evaluates every admissible shift and keeps the one with the
/// lowest residual edit distance (ties: smallest start, then length, then
/// destination). It is applied only if the residual plus the shift's unit
/// cost is strictly lower than the current residual.
inline TerResult ter_align(const TokenSequence& mt, const TokenSequence& pe, const ShiftParams& params = {}) {
  detail::require_non_empty(mt, pe);
  auto [hyp, ref] = detail::intern(mt, pe);
  std::vector<std::size_t> origin(mt.size());
  std::iota(origin.begin(), origin.end(), std::size_t{0});

  EditScript script;
  std::size_t residual = detail::edit_distance(hyp, ref);
  const std::size_t n = hyp.size();

  // A candidate shift only rearranges hyp[lo, hi) with lo = min(start, dest)
  // and hi = max(start, dest) + len. Its cost is min_j F[j] + B[hi][j], where
  // F is the forward DP row after the rearranged region (seeded from the
  // cached prefix row `fwd[lo]`) and B[hi] the cached suffix row.
  const std::size_t m = ref.size();
  std::vector<std::vector<std::size_t>> fwd, bwd;
  auto fill_rows = [&] {
    fwd.assign(n + 1, std::vector<std::size_t>(m + 1));
    bwd.assign(n + 1, std::vector<std::size_t>(m + 1));
    std::iota(fwd[0].begin(), fwd[0].end(), std::size_t{0});
    for (std::size_t i = 1; i <= n; ++i) detail::next_row(fwd[i - 1], hyp[i - 1], ref, i, fwd[i]);
    for (std::size_t j = 0; j <= m; ++j) bwd[n][j] = m - j;
    for (std::size_t i = n; i-- > 0;) {
      bwd[i][m] = n - i;
      for (std::size_t j = m; j-- > 0;) {
        const std::size_t diag = bwd[i + 1][j + 1] + (hyp[i] == ref[j] ? 0 : 1);
        bwd[i][j] = std::min({diag, bwd[i + 1][j] + 1, bwd[i][j + 1] + 1});
      }
    }
  };

  while (params.enable_shifts && residual > 1) {
    fill_rows();
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    ShiftSpan best{};
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t start = 0; start < n; ++start) {
      const std::size_t max_len = std::min(params.max_span, n - start);
      for (std::size_t len = 1; len <= max_len; ++len) {
        for (std::size_t dest = 0; dest + len <= n; ++dest) {
          if (dest == start) continue;
          const std::size_t dist = dest > start ? dest - start : start - dest;
          if (dist > params.max_distance) continue;
          const std::size_t lo = std::min(start, dest), hi = std::max(start, dest) + len;
          // Token at position k of the shifted hypothesis, for k in [lo, hi).
          auto shifted_at = [&](std::size_t k) {
            if (dest > start) return k < dest ? hyp[k + len] : hyp[k - dest + start];
            return k < dest + len ? hyp[k - dest + start] : hyp[k - len];
          };
          prev = fwd[lo];
          for (std::size_t i = lo + 1; i <= hi; ++i) {
            detail::next_row(prev, shifted_at(i - 1), ref, i, cur);
            std::swap(prev, cur);
          }
          std::size_t c = std::numeric_limits<std::size_t>::max();
          for (std::size_t j = 0; j <= m; ++j) c = std::min(c, prev[j] + bwd[hi][j]);
          if (c < best_cost) {
            best_cost = c;
            best = {start, len, dest};
          }
        }
      }
    }
    if (best_cost == std::numeric_limits<std::size_t>::max() || best_cost + 1 >= residual) break;
    detail::apply_shift(hyp, best);
    detail::apply_shift(origin, best);
    script.edits.push_back({EditKind::Shift, std::nullopt, std::nullopt, best, {}});
    residual = best_cost;
  }

  const std::size_t shifts = script.edits.size();
  auto path = detail::align_path(hyp, origin, ref, pe);
  script.edits.insert(script.edits.end(), path.begin(), path.end());
  script.total_cost = detail::path_cost(path) + shifts;
  const double ter = static_cast<double>(script.total_cost) / static_cast<double>(pe.size());
  return {std::move(script), ter};
}

/// Applies `script` to `mt`. Throws ScriptMismatch if the script does not
/// describe `mt` (wrong indices, bad shift spans, missing tokens).
inline TokenSequence replay(const TokenSequence& mt, const EditScript& script) {
  std::vector<std::size_t> order(mt.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  TokenSequence out;
  std::size_t pos = 0;
  for (const auto& e : script.edits) {
    switch (e.kind) {
      case EditKind::Shift: {
        if (pos != 0 || !out.empty()) throw Error(ErrorCode::ScriptMismatch, "shift after alignment edits");
        if (!e.shift_span) throw Error(ErrorCode::ScriptMismatch, "shift without span");
        const auto& s = *e.shift_span;
        if (s.length == 0 || s.start + s.length > order.size() || s.destination + s.length > order.size()) {
          throw Error(ErrorCode::ScriptMismatch, "shift span out of range");
        }
        detail::apply_shift(order, s);
        break;
      }
      case EditKind::Match:
      case EditKind::Substitution:
      case EditKind::Insertion: {
        if (!e.mt_index || pos >= order.size() || order[pos] != *e.mt_index) {
          throw Error(ErrorCode::ScriptMismatch, "MT index out of sequence");
        }
        ++pos;
        if (e.kind == EditKind::Match) out.push_back(mt[*e.mt_index]);
        if (e.kind == EditKind::Substitution) out.push_back(e.token);
        break;
      }
      case EditKind::Deletion:
        out.push_back(e.token);
        break;
    }
  }
  if (pos != order.size()) throw Error(ErrorCode::ScriptMismatch, "script does not cover all MT tokens");
  return out;
}

/// Derives WMT-style word and gap tags from an alignment.
///
/// A word is BAD if it is substituted, must be removed, or was moved by a
/// shift. A gap is BAD if one or more PE tokens are missing there; missing
/// tokens attach to the gap after the preceding aligned MT token.
inline TagSequence edits_to_tags(const EditScript& script, std::size_t mt_len) {
  std::vector<std::size_t> order(mt_len);
  std::iota(order.begin(), order.end(), std::size_t{0});
  TagSequence tags = all_ok(mt_len);
  std::vector<bool> shifted(mt_len, false);

  std::size_t pos = 0;
  std::optional<std::size_t> prev;
  for (const auto& e : script.edits) {
    switch (e.kind) {
      case EditKind::Shift: {
        if (pos != 0 || !e.shift_span) throw Error(ErrorCode::ScriptMismatch, "malformed shift record");
        const auto& s = *e.shift_span;
        if (s.length == 0 || s.start + s.length > mt_len || s.destination + s.length > mt_len) {
          throw Error(ErrorCode::ScriptMismatch, "shift span out of range for MT length " + std::to_string(mt_len));
        }
        for (std::size_t k = s.start; k < s.start + s.length; ++k) shifted[order[k]] = true;
        detail::apply_shift(order, s);
        break;
      }
      case EditKind::Match:
      case EditKind::Substitution:
      case EditKind::Insertion: {
        if (!e.mt_index || pos >= mt_len || order[pos] != *e.mt_index) {
          throw Error(ErrorCode::ScriptMismatch, "script does not match MT length " + std::to_string(mt_len));
        }
        ++pos;
        prev = *e.mt_index;
        if (e.kind != EditKind::Match) tags[word_slot(*e.mt_index)] = Label::BAD;
        break;
      }
      case EditKind::Deletion:
        tags[gap_slot(prev ? *prev + 1 : 0)] = Label::BAD;
        break;
    }
  }
  if (pos != mt_len) {
    throw Error(ErrorCode::ScriptMismatch, "script covers " + std::to_string(pos) + " MT tokens, expected " +
                                               std::to_string(mt_len));
  }
  for (std::size_t k = 0; k < mt_len; ++k) {
    if (shifted[k]) tags[word_slot(k)] = Label::BAD;
  }
  return tags;
}

inline TagSequence generate_reference_tags(const TranslationTriplet& triplet, const ShiftParams& params = {}) {
  auto result = ter_align(triplet.mt, triplet.pe, params);
  return edits_to_tags(result.script, triplet.mt.size());
}

}  // namespace wordqe

#endif  // WORDQE_TER_HPP
