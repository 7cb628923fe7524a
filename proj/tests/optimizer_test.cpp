#include <gtest/gtest.h>

#include <cmath>

#include "wordqe/optimizer.hpp"

using namespace wordqe;

namespace {

double rosenbrock(const Vector& x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

/// Initial simplex around x0: each coordinate nudged by 5% (or 0.00025 if 0).
std::vector<Vector> nudged_simplex(const Vector& x0) {
  std::vector<Vector> s{x0};
  for (std::size_t i = 0; i < x0.size(); ++i) {
    Vector v = x0;
    v[i] = v[i] != 0.0 ? 1.05 * v[i] : 0.00025;
    s.push_back(v);
  }
  return s;
}

/// Strictly convex quadratic with minimum value `fmin` at c_i = i / (dim + 1)
/// and condition number up to 10.
Objective convex_quadratic(std::size_t dim, double fmin) {
  return [dim, fmin](const Vector& x) {
    double f = fmin;
    for (std::size_t i = 0; i < dim; ++i) {
      const double c = static_cast<double>(i + 1) / static_cast<double>(dim + 1);
      const double w = 1.0 + 9.0 * static_cast<double>(i) / static_cast<double>(dim);
      f += w * (x[i] - c) * (x[i] - c);
    }
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      const double d = (x[i] - x[i + 1]) + 1.0 / static_cast<double>(dim + 1);
      f += 0.5 * d * d;
    }
    return f;
  };
}

}  // namespace

TEST(StandardSimplex, Vertices) {
  EXPECT_EQ(standard_simplex_vertices(2), (std::vector<Vector>{{1, 0}, {0, 1}, {0, 0}}));
  EXPECT_EQ(standard_simplex_vertices(1), (std::vector<Vector>{{1}, {0}}));
  EXPECT_THROW(standard_simplex_vertices(0), Error);
  for (std::size_t k = 1; k <= 16; ++k) EXPECT_EQ(affine_rank(standard_simplex_vertices(k)), k);
}

TEST(NelderMead, ShiftedBowl) {
  auto f = [](const Vector& x) {
    double s = 0;
    for (double v : x) s += (v - 1.0) * (v - 1.0);
    return s;
  };
  auto r = nelder_mead(f, standard_simplex_vertices(3));
  for (double v : r.x) EXPECT_NEAR(v, 1.0, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(NelderMead, AbsoluteValue1D) {
  auto r = nelder_mead([](const Vector& x) { return std::abs(x[0]); }, standard_simplex_vertices(1));
  EXPECT_LT(std::abs(r.x[0]), 1e-6);
}

TEST(NelderMead, Rosenbrock) {
  OptimizerConfig cfg;
  cfg.max_iterations = 500;
  auto r = nelder_mead(rosenbrock, nudged_simplex({-1.2, 1.0}), cfg);
  EXPECT_LT(r.f, 1e-8);
  EXPECT_LE(r.trace.size(), 500u);
}

TEST(NelderMead, DegenerateSimplexRejected) {
  auto f = [](const Vector& x) { return x[0] * x[0]; };
  try {
    nelder_mead(f, {{0, 0}, {1, 1}, {2, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSimplex);
  }
  EXPECT_THROW(nelder_mead(f, {{0, 0}, {1, 0}}), Error);
}

TEST(NelderMead, BestValueIsMonotoneAndTraceDeterministic) {
  auto a = nelder_mead(rosenbrock, nudged_simplex({-1.2, 1.0}));
  auto b = nelder_mead(rosenbrock, nudged_simplex({-1.2, 1.0}));
  ASSERT_EQ(a.trace, b.trace);
  for (std::size_t i = 1; i < a.trace.size(); ++i) EXPECT_LE(a.trace[i].f_best, a.trace[i - 1].f_best);
}

TEST(NelderMead, CoefficientValidation) {
  OptimizerConfig cfg;
  cfg.gamma = 1.0;
  EXPECT_THROW(nelder_mead(rosenbrock, nudged_simplex({0.5, 0.5}), cfg), Error);
  cfg = {};
  cfg.rho = 1.0;
  EXPECT_THROW(nelder_mead(rosenbrock, nudged_simplex({0.5, 0.5}), cfg), Error);
}

TEST(NelderMead, JitterIsDeterministicPerSeed) {
  // Zero on [-2,2]^2, so the starting simplex is flat.
  auto plateau = [](const Vector& x) {
    double s = 0.0;
    for (double v : x) s += std::max(0.0, std::abs(v) - 2.0);
    return s;
  };
  OptimizerConfig cfg;
  cfg.jitter = 1e-3;
  cfg.seed = 5;
  cfg.max_iterations = 50;
  auto a = nelder_mead(plateau, standard_simplex_vertices(2), cfg);
  auto b = nelder_mead(plateau, standard_simplex_vertices(2), cfg);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.x, b.x);
}

TEST(Powell, QuadraticBowl) {
  auto r = powell(convex_quadratic(3, 0.0), {2.0, -1.0, 0.5});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.x[i], (i + 1) / 4.0, 1e-6);
}

TEST(Powell, AlreadyOptimalStartDoesNotMove) {
  auto f = [](const Vector& x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; };
  auto r = powell(f, {0.0, 0.0});
  EXPECT_EQ(r.x, (Vector{0.0, 0.0}));
  EXPECT_EQ(r.f, 0.0);
}

TEST(Powell, Rosenbrock) {
  OptimizerConfig cfg;
  cfg.max_iterations = 500;
  auto r = powell(rosenbrock, {-1.2, 1.0}, cfg);
  EXPECT_LT(r.f, 1e-6);
}

TEST(Powell, DeterministicTrace) {
  auto a = powell(rosenbrock, {-1.2, 1.0});
  auto b = powell(rosenbrock, {-1.2, 1.0});
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.x, b.x);
}

TEST(BothOptimizers, ConvexQuadraticsReachMinimum) {
  for (std::size_t dim = 2; dim <= 5; ++dim) {
    const double fmin = 0.75;
    auto f = convex_quadratic(dim, fmin);
    OptimizerConfig cfg;
    cfg.max_iterations = 20000;
    auto nm = nelder_mead(f, standard_simplex_vertices(dim), cfg);
    EXPECT_LT(nm.f - fmin, 1e-8) << "nelder-mead dim " << dim;
    auto pw = powell(f, Vector(dim, 0.0), cfg);
    EXPECT_LT(pw.f - fmin, 1e-8) << "powell dim " << dim;
  }
}

TEST(CachedObjective, EvaluatesEachPointOnce) {
  int calls = 0;
  CachedObjective f([&](const Vector& x) {
    ++calls;
    return x[0];
  });
  f({1.0});
  f({1.0});
  f({2.0});
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(f.evaluations(), 2u);
}

TEST(Trace, LineFormat) {
  EXPECT_EQ(format_trace({{1, 0.5, 0.25}, {2, 0.0, 0.0}}), "1 0.5 0.25\n2 0 0\n");
}
