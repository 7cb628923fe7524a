#ifndef WORDQE_OPTIMIZER_HPP
#define WORDQE_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wordqe/core.hpp"

namespace wordqe {

using Vector = std::vector<double>;
using Objective = std::function<double(const Vector&)>;

struct OptimizerConfig {
  std::size_t max_iterations = 1000;
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
  // Nelder-Mead reflection, expansion, contraction, shrink.
  double alpha = 1.0;
  double gamma = 2.0;
  double rho = 0.5;
  double sigma = 0.5;
  std::uint64_t seed = 0;
  /// Magnitude of the perturbation applied to a flat Nelder-Mead simplex.
  /// Zero disables it.
  double jitter = 0.0;

  void validate() const {
    if (!(alpha > 0.0) || !(gamma > 1.0) || !(rho > 0.0 && rho < 1.0) || !(sigma > 0.0 && sigma < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "Nelder-Mead coefficients out of range");
    }
    if (!(f_tolerance > 0.0) || !(x_tolerance > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    }
    if (jitter < 0.0) throw Error(ErrorCode::InvalidArgument, "jitter must be non-negative");
  }
};

/// One line per iteration: best value so far and the spread of the current
/// state (simplex f-range for Nelder-Mead, step length for Powell).
struct TraceRecord {
  std::size_t iteration = 0;
  double f_best = 0.0;
  double spread = 0.0;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct OptimizeResult {
  Vector x;
  double f = 0.0;
  std::vector<TraceRecord> trace;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Memoizes an objective by exact argument value.
class CachedObjective {
 public:
  explicit CachedObjective(Objective fn) : fn_(std::move(fn)) {}

  double operator()(const Vector& x) {
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    double v = fn_(x);
    cache_.emplace(x, v);
    return v;
  }

  std::size_t evaluations() const { return cache_.size(); }

 private:
  Objective fn_;
  std::map<Vector, double> cache_;
};

/// The k unit basis vectors followed by the origin.
inline std::vector<Vector> standard_simplex_vertices(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "simplex dimension must be at least 1");
  std::vector<Vector> v(k + 1, Vector(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) v[i][i] = 1.0;
  return v;
}

/// Rank of the edge matrix {v_i - v_0}, by Gaussian elimination with
/// partial pivoting.
inline std::size_t affine_rank(const std::vector<Vector>& vertices, double tol = 1e-12) {
  if (vertices.size() < 2) return 0;
  const std::size_t dim = vertices[0].size();
  std::vector<Vector> rows;
  double scale = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    Vector r(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      r[j] = vertices[i][j] - vertices[0][j];
      scale = std::max(scale, std::abs(r[j]));
    }
    rows.push_back(std::move(r));
  }
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[piv][col])) piv = r;
    }
    if (std::abs(rows[piv][col]) <= tol * scale) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const double factor = rows[r][col] / rows[rank][col];
      for (std::size_t j = col; j < dim; ++j) rows[r][j] -= factor * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

namespace detail {

inline Vector axpy(const Vector& base, double t, const Vector& dir) {
  Vector out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * dir[i];
  return out;
}

/// Uniform double in [0, 1) from the raw 64-bit engine output, so results do
/// not depend on the standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Nelder-Mead downhill simplex.
///
/// Stops when both the f-range and the largest vertex distance from the best
/// vertex fall within tolerance, or after `max_iterations` iterations.
inline OptimizeResult nelder_mead(const Objective& objective, std::vector<Vector> simplex,
                                  const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const std::size_t dim = simplex.empty() ? 0 : simplex[0].size();
  if (dim == 0 || simplex.size() != dim + 1) {
    throw Error(ErrorCode::DegenerateSimplex, "need k+1 vertices of dimension k");
  }
  for (const auto& v : simplex) {
    if (v.size() != dim) throw Error(ErrorCode::DegenerateSimplex, "vertex dimensions differ");
  }
  if (affine_rank(simplex) != dim) throw Error(ErrorCode::DegenerateSimplex, "vertices are affinely dependent");

  CachedObjective f(objective);
  std::mt19937_64 rng(cfg.seed);
  Vector fv(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = f(simplex[i]);

  OptimizeResult result;
  std::vector<std::size_t> order(simplex.size());

  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<Vector> s;
    Vector v;
    for (auto i : order) {
      s.push_back(std::move(simplex[i]));
      v.push_back(fv[i]);
    }
    simplex = std::move(s);
    fv = std::move(v);
  };

  auto x_spread = [&] {
    double m = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) m = std::max(m, std::abs(simplex[i][j] - simplex[0][j]));
    }
    return m;
  };

  sort_simplex();
  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (fv.back() - fv.front() <= cfg.f_tolerance && x_spread() <= cfg.x_tolerance) {
      result.converged = true;
      break;
    }
    if (cfg.jitter > 0.0 && fv.back() == fv.front()) {
      for (std::size_t i = 1; i < simplex.size(); ++i) {
        for (auto& xj : simplex[i]) xj += cfg.jitter * (2.0 * detail::unit_uniform(rng) - 1.0);
        fv[i] = f(simplex[i]);
      }
      sort_simplex();
    }

    const std::size_t worst = dim;
    Vector centroid(dim, 0.0);
    for (std::size_t i = 0; i < worst; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(dim);

    Vector away(dim);
    for (std::size_t j = 0; j < dim; ++j) away[j] = centroid[j] - simplex[worst][j];

    const Vector xr = detail::axpy(centroid, cfg.alpha, away);
    const double fr = f(xr);
    bool shrink = false;
    if (fr < fv[0]) {
      const Vector xe = detail::axpy(centroid, cfg.alpha * cfg.gamma, away);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[worst - 1]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else if (fr < fv[worst]) {
      const Vector xc = detail::axpy(centroid, cfg.alpha * cfg.rho, away);
      const double fc = f(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    } else {
      const Vector xc = detail::axpy(centroid, -cfg.rho, away);
      const double fc = f(xc);
      if (fc < fv[worst]) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i < simplex.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          simplex[i][j] = simplex[0][j] + cfg.sigma * (simplex[i][j] - simplex[0][j]);
        }
        fv[i] = f(simplex[i]);
      }
    }
    sort_simplex();
    result.trace.push_back({iter, fv.front(), fv.back() - fv.front()});
  }

  result.x = simplex.front();
  result.f = fv.front();
  result.evaluations = f.evaluations();
  return result;
}

namespace detail {

/// Minimizes objective(x + t*dir) over t by downhill golden-ratio bracketing
/// followed by golden-section search. Returns the new point and value; the
/// input point is returned unchanged unless a strictly lower value is found.
inline std::pair<Vector, double> line_minimize(CachedObjective& f, const Vector& x, double fx, const Vector& dir) {
  constexpr double kGold = 1.618033988749895;
  constexpr double kInvGold = 0.6180339887498949;
  constexpr double kRelTol = 1.5e-8;
  constexpr double kAbsTol = 1e-14;
  constexpr int kMaxExpand = 80;
  constexpr int kMaxSection = 200;

  auto phi = [&](double t) { return t == 0.0 ? fx : f(axpy(x, t, dir)); };

  double a = 0.0, fa = fx;
  double b = 1.0, fb = phi(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = b + kGold * (b - a), fc = phi(c);
  for (int i = 0; i < kMaxExpand && fc < fb; ++i) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + kGold * (b - a);
    fc = phi(c);
  }

  double lo = std::min(a, c), hi = std::max(a, c);
  double t1 = hi - kInvGold * (hi - lo), t2 = lo + kInvGold * (hi - lo);
  double f1 = phi(t1), f2 = phi(t2);
  for (int i = 0; i < kMaxSection && (hi - lo) > kRelTol * (std::abs(t1) + std::abs(t2)) + kAbsTol; ++i) {
    if (f1 < f2) {
      hi = t2;
      t2 = t1;
      f2 = f1;
      t1 = hi - kInvGold * (hi - lo);
      f1 = phi(t1);
    } else {
      lo = t1;
      t1 = t2;
      f1 = f2;
      t2 = lo + kInvGold * (hi - lo);
      f2 = phi(t2);
    }
  }

  double best_t = 0.0, best_f = fx;
  for (auto [t, v] : {std::pair{b, fb}, std::pair{t1, f1}, std::pair{t2, f2}}) {
    if (v < best_f) {
      best_f = v;
      best_t = t;
    }
  }
  if (best_t == 0.0) return {x, fx};
  return {axpy(x, best_t, dir), best_f};
}

}  // namespace detail

/// Powell's conjugate-direction method. Each iteration line-minimizes along
/// every direction in the set, then replaces the direction of largest decrease
/// with the net displacement when the standard acceptance test passes.
inline OptimizeResult powell(const Objective& objective, Vector x0, const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const std::size_t dim = x0.size();
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "empty starting point");

  CachedObjective f(objective);
  std::vector<Vector> dirs(dim, Vector(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) dirs[i][i] = 1.0;

  Vector x = std::move(x0);
  double fx = f(x);
  OptimizeResult result;

  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    const Vector x_start = x;
    const double f_start = fx;
    double biggest = 0.0;
    std::size_t biggest_dir = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double before = fx;
      std::tie(x, fx) = detail::line_minimize(f, x, fx, dirs[i]);
      if (before - fx > biggest) {
        biggest = before - fx;
        biggest_dir = i;
      }
    }

    Vector step(dim);
    double step_norm = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      step[j] = x[j] - x_start[j];
      step_norm = std::max(step_norm, std::abs(step[j]));
    }

    const bool f_done = 2.0 * (f_start - fx) <= cfg.f_tolerance * (std::abs(f_start) + std::abs(fx)) + 1e-300;
    if (f_done || step_norm <= cfg.x_tolerance) {
      result.trace.push_back({iter, fx, step_norm});
      result.converged = true;
      break;
    }

    Vector extrapolated(dim);
    for (std::size_t j = 0; j < dim; ++j) extrapolated[j] = 2.0 * x[j] - x_start[j];
    const double fe = f(extrapolated);
    if (fe < f_start) {
      const double t = 2.0 * (f_start - 2.0 * fx + fe) * std::pow(f_start - fx - biggest, 2) -
                       biggest * std::pow(f_start - fe, 2);
      if (t < 0.0) {
        std::tie(x, fx) = detail::line_minimize(f, x, fx, step);
        dirs[biggest_dir] = dirs.back();
        dirs.back() = step;
      }
    }
    result.trace.push_back({iter, fx, step_norm});
  }

  result.x = std::move(x);
  result.f = fx;
  result.evaluations = f.evaluations();
  return result;
}

/// Line-oriented trace: "iteration f_best spread".
inline std::string format_trace(const std::vector<TraceRecord>& trace) {
  std::string out;
  char line[96];
  for (const auto& r : trace) {
    std::snprintf(line, sizeof line, "%zu %.17g %.17g\n", r.iteration, r.f_best, r.spread);
    out += line;
  }
  return out;
}

}  // namespace wordqe

#endif  // WORDQE_OPTIMIZER_HPP
