#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hsob/hajlasz.hpp"
#include "hsob/rearrange.hpp"

namespace hsob::testing {

inline StepFunction random_step_function(std::mt19937_64& rng, int max_steps = 12) {
  std::uniform_int_distribution<int> steps(1, max_steps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int k = steps(rng);
  std::vector<double> t(k), v(k);
  double acc = 0.0;
  for (int j = 0; j < k; ++j) {
    acc += std::exp(-4.0 + 6.0 * unit(rng));
    t[j] = acc;
    v[j] = 0.05 + 3.0 * unit(rng);
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  return StepFunction(std::move(t), std::move(v));
}

/// Integer-valued weights and quantized values so every partial sum is exact.
inline WeightedSample random_integer_sample(std::mt19937_64& rng, int n, int levels) {
  std::uniform_int_distribution<int> value(-levels, levels);
  std::uniform_int_distribution<int> weight(1, 9);
  WeightedSample s;
  for (int i = 0; i < n; ++i) {
    s.values.push_back(static_cast<double>(value(rng)));
    s.weights.push_back(static_cast<double>(weight(rng)));
  }
  return s;
}

/// Numerical integral of h over [a, b] (b may be +inf).
inline double quad(const std::function<double(double)>& h, double a, double b) {
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double x) { return h(x); }, a, b);
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double x) { return h(x); }, a, b);
}

/// f* and f** evaluated from first principles on a StepFunction description.
inline double star_value(const std::vector<double>& t, const std::vector<double>& v, double x) {
  for (std::size_t j = 0; j < t.size(); ++j)
    if (x < t[j]) return v[j];
  return 0.0;
}

inline double double_star_value(const std::vector<double>& t, const std::vector<double>& v, double x) {
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double hi = std::min(t[j], x);
    if (hi > prev) acc += v[j] * (hi - prev);
    prev = t[j];
    if (x <= t[j]) break;
  }
  return acc / x;
}

/// Integral of F over [0, inf) split at the given knots, each piece by
/// tanh-sinh (exp-sinh on the tail).
inline double quad_pieces(const std::function<double(double)>& h, std::vector<double> knots) {
  knots.insert(knots.begin(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) total += quad(h, knots[j], knots[j + 1]);
  total += quad(h, knots.back(), std::numeric_limits<double>::infinity());
  return total;
}

inline void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& body) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    body(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Weighted-L^1 minimal gradient by enumerating every vertex of
/// {g >= 0, g_i + g_j >= c_ij}.
inline double brute_force_l1(std::size_t n, const std::vector<GradientPair>& pairs,
                             const std::vector<double>& w) {
  const int rows = static_cast<int>(pairs.size() + n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    a(static_cast<Eigen::Index>(k), pairs[k].i) = 1.0;
    a(static_cast<Eigen::Index>(k), pairs[k].j) = 1.0;
    b[static_cast<Eigen::Index>(k)] = pairs[k].c;
  }
  for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(pairs.size() + i), static_cast<Eigen::Index>(i)) = 1.0;
  double best = std::numeric_limits<double>::infinity();
  for_each_combination(rows, static_cast<int>(n), [&](const std::vector<int>& sel) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      m.row(static_cast<Eigen::Index>(r)) = a.row(sel[r]);
      rhs[static_cast<Eigen::Index>(r)] = b[sel[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.rank() < static_cast<Eigen::Index>(n)) return;
    const Eigen::VectorXd g = lu.solve(rhs);
    if (((a * g - b).array() < -1e-9).any()) return;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) value += w[i] * g[static_cast<Eigen::Index>(i)];
    best = std::min(best, value);
  });
  return best;
}

/// Weighted-L^2 minimal gradient norm by enumerating active sets: for each
/// subset of pair constraints, the minimum-norm point on their affine hull
/// is a candidate; the optimum is the best feasible candidate.
inline double brute_force_l2(std::size_t n, const std::vector<GradientPair>& pairs,
                             const std::vector<double>& w) {
  const std::size_t k = pairs.size();
  Eigen::VectorXd winv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) winv[static_cast<Eigen::Index>(i)] = 1.0 / w[i];
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<std::size_t> active;
    for (std::size_t r = 0; r < k; ++r)
      if (mask & (1u << r)) active.push_back(r);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (!active.empty()) {
      const auto m = static_cast<Eigen::Index>(active.size());
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(n));
      Eigen::VectorXd c(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        a(r, pairs[active[r]].i) = 1.0;
        a(r, pairs[active[r]].j) = 1.0;
        c[r] = pairs[active[r]].c;
      }
      const Eigen::MatrixXd gram = a * winv.asDiagonal() * a.transpose();
      const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(c);
      g = winv.asDiagonal() * a.transpose() * lambda;
      if (((a * g - c).array().abs() > 1e-9).any()) continue;
    }
    bool feasible = true;
    for (const auto& p : pairs)
      if (g[p.i] + g[p.j] < p.c - 1e-9) feasible = false;
    if (!feasible) continue;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) value += w[i] * g[static_cast<Eigen::Index>(i)] * g[static_cast<Eigen::Index>(i)];
    best = std::min(best, std::sqrt(value));
  }
  return best;
}

/// Random instance with n atoms, every pair present with probability 0.8.
inline GradientProblem random_gradient_problem(std::mt19937_64& rng, std::size_t n,
                                               const RiSpaceSpec& objective, bool equal_weights) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GradientPair> pairs;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (unit(rng) < 0.8) pairs.push_back({i, j, 0.05 + 2.0 * unit(rng)});
  if (pairs.empty()) pairs.push_back({0, 1, 1.0});
  std::vector<double> w(n, 1.0);
  if (!equal_weights)
    for (auto& x : w) x = 0.2 + unit(rng);
  return GradientProblem(n, std::move(pairs), std::move(w), objective);
}

}  // namespace hsob::testing
