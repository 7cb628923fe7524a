#ifndef WORDQE_ENSEMBLE_HPP
#define WORDQE_ENSEMBLE_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wordqe/core.hpp"
#include "wordqe/metrics.hpp"
#include "wordqe/optimizer.hpp"

namespace wordqe {

enum class OptimizerMethod { NelderMead, Powell };

namespace detail {

inline void require_same_shape(const std::vector<PredictionMatrix>& preds) {
  for (std::size_t m = 1; m < preds.size(); ++m) {
    if (preds[m].size() != preds[0].size()) {
      throw Error(ErrorCode::ShapeMismatch, "model " + std::to_string(m + 1) + " has " +
                                                std::to_string(preds[m].size()) + " segments, model 1 has " +
                                                std::to_string(preds[0].size()));
    }
    for (std::size_t s = 0; s < preds[0].size(); ++s) {
      if (preds[m][s].size() != preds[0][s].size()) {
        throw Error(ErrorCode::ShapeMismatch, "model " + std::to_string(m + 1) + " segment " + std::to_string(s + 1) +
                                                  " has " + std::to_string(preds[m][s].size()) + " slots, expected " +
                                                  std::to_string(preds[0][s].size()));
      }
    }
  }
}

}  // namespace detail

/// Weighted sum of model scores per slot, without clamping.
inline PredictionMatrix combine_unclamped(const std::vector<PredictionMatrix>& preds, const EnsembleWeights& w) {
  if (preds.empty()) throw Error(ErrorCode::ShapeMismatch, "no prediction matrices");
  if (w.lambdas.size() != preds.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(w.lambdas.size()) + " weights for " +
                                              std::to_string(preds.size()) + " models");
  }
  detail::require_same_shape(preds);
  PredictionMatrix out(preds[0].size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s].assign(preds[0][s].size(), 0.0);
    for (std::size_t m = 0; m < preds.size(); ++m) {
      for (std::size_t i = 0; i < out[s].size(); ++i) out[s][i] += w.lambdas[m] * preds[m][s][i];
    }
  }
  return out;
}

/// Linear combination of p(OK) scores, clamped to [0, 1].
inline PredictionMatrix combine(const std::vector<PredictionMatrix>& preds, const EnsembleWeights& w) {
  auto out = combine_unclamped(preds, w);
  for (auto& row : out) {
    for (auto& v : row) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

/// OK iff p(OK) >= threshold.
inline std::vector<TagSequence> binarize(const PredictionMatrix& p, double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0,1)");
  std::vector<TagSequence> out(p.size());
  for (std::size_t s = 0; s < p.size(); ++s) {
    out[s].reserve(p[s].size());
    for (double v : p[s]) out[s].push_back(v >= threshold ? Label::OK : Label::BAD);
  }
  return out;
}

struct EnsembleOptions {
  OptimizerMethod method = OptimizerMethod::NelderMead;
  double threshold = 0.5;
  OptimizerConfig optimizer;
};

struct EnsembleResult {
  EnsembleWeights weights;
  double mcc = 0.0;
  /// Dev MCC of each input model on its own.
  std::vector<double> single_model_mcc;
  /// Set when the ensemble does not reach the best single model.
  bool below_best_single = false;
  OptimizeResult optimizer;
};

/// Target-side MCC of the ensemble under weights `w`.
inline double ensemble_mcc(const std::vector<PredictionMatrix>& preds, const std::vector<TagSequence>& refs,
                           const EnsembleWeights& w, double threshold = 0.5) {
  return mcc(confusion(binarize(combine(preds, w), threshold), refs, SlotFilter::All));
}

/// Tunes ensemble weights to maximize dev-set Target MCC.
///
/// Nelder-Mead starts from the unit vectors plus the origin. Powell starts
/// from the best unit vector. The best weights seen across all objective
/// evaluations are returned.
inline EnsembleResult optimize_weights(const std::vector<PredictionMatrix>& dev_preds,
                                       const std::vector<TagSequence>& dev_refs, const EnsembleOptions& opts = {}) {
  const std::size_t k = dev_preds.size();
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "an ensemble needs at least 2 models");
  detail::require_same_shape(dev_preds);
  if (dev_refs.size() != dev_preds[0].size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(dev_refs.size()) + " reference segments vs " +
                                               std::to_string(dev_preds[0].size()) + " predicted");
  }
  for (std::size_t s = 0; s < dev_refs.size(); ++s) {
    if (dev_refs[s].size() != dev_preds[0][s].size()) {
      throw Error(ErrorCode::ShapeMismatch, "segment " + std::to_string(s + 1) + " reference arity differs from scores");
    }
  }

  Vector best_x;
  double best_f = std::numeric_limits<double>::infinity();
  auto objective = [&](const Vector& lambdas) {
    const double f = -ensemble_mcc(dev_preds, dev_refs, EnsembleWeights{lambdas}, opts.threshold);
    if (f < best_f) {
      best_f = f;
      best_x = lambdas;
    }
    return f;
  };

  EnsembleResult result;
  const auto vertices = standard_simplex_vertices(k);
  for (std::size_t m = 0; m < k; ++m) {
    result.single_model_mcc.push_back(-objective(vertices[m]));
  }

  if (opts.method == OptimizerMethod::NelderMead) {
    result.optimizer = nelder_mead(objective, vertices, opts.optimizer);
  } else {
    const auto start = std::max_element(result.single_model_mcc.begin(), result.single_model_mcc.end());
    result.optimizer = powell(objective, vertices[static_cast<std::size_t>(start - result.single_model_mcc.begin())],
                              opts.optimizer);
  }

  result.weights.lambdas = best_x;
  result.mcc = -best_f;
  result.below_best_single =
      result.mcc < *std::max_element(result.single_model_mcc.begin(), result.single_model_mcc.end());
  return result;
}

}  // namespace wordqe

#endif  // WORDQE_ENSEMBLE_HPP
