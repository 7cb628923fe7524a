#ifndef WORDQE_LOSS_HPP
#define WORDQE_LOSS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wordqe/core.hpp"

namespace wordqe {

enum class LossReduction { Mean, Sum };

struct BalancedLoss {
  double total = 0.0;
  double l_ok = 0.0;
  double l_bad = 0.0;
};

inline constexpr double kProbabilityEpsilon = 1e-12;

/// Class-balanced NLL: total = l_ok + mu * l_bad.
///
/// l_ok averages -log p(OK) over OK-reference slots and l_bad averages
/// -log(1 - p(OK)) over BAD-reference slots (or sums them with
/// LossReduction::Sum). A class absent from the references contributes 0.
inline BalancedLoss balanced_nll(const PredictionMatrix& p, const std::vector<TagSequence>& refs, double mu,
                                 LossReduction reduction = LossReduction::Mean) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (p.size() != refs.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(p.size()) + " score rows vs " + std::to_string(refs.size()) + " reference rows");
  }
  double sum_ok = 0.0, sum_bad = 0.0;
  std::size_t n_ok = 0, n_bad = 0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s].size() != refs[s].size()) {
      throw Error(ErrorCode::ShapeMismatch, "segment " + std::to_string(s + 1) + " has " +
                                                std::to_string(p[s].size()) + " scores and " +
                                                std::to_string(refs[s].size()) + " tags");
    }
    for (std::size_t i = 0; i < p[s].size(); ++i) {
      const double q = std::clamp(p[s][i], kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
      if (refs[s][i] == Label::OK) {
        sum_ok -= std::log(q);
        ++n_ok;
      } else {
        sum_bad -= std::log1p(-q);
        ++n_bad;
      }
    }
  }
  BalancedLoss out;
  if (reduction == LossReduction::Mean) {
    out.l_ok = n_ok ? sum_ok / static_cast<double>(n_ok) : 0.0;
    out.l_bad = n_bad ? sum_bad / static_cast<double>(n_bad) : 0.0;
  } else {
    out.l_ok = sum_ok;
    out.l_bad = sum_bad;
  }
  out.total = out.l_ok + mu * out.l_bad;
  return out;
}

}  // namespace wordqe

#endif  // WORDQE_LOSS_HPP
