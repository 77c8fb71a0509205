#include "hsob/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace hsob {

namespace {

constexpr std::size_t kRefactorEvery = 100;
constexpr std::size_t kDegenerateRun = 30;

}  // namespace

PackingResult maximize_packing(std::size_t rows, std::span<const SparseColumn> columns,
                               std::span<const double> cost, std::span<const double> rhs,
                               std::size_t budget) {
  const std::size_t m = rows;
  const std::size_t n = columns.size();
  if (cost.size() != n) throw std::invalid_argument("packing LP: cost size mismatch");
  if (rhs.size() != m) throw std::invalid_argument("packing LP: rhs size mismatch");
  for (double b : rhs)
    if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("packing LP: rhs must be >= 0");
  for (const auto& col : columns)
    for (const auto& [r, v] : col.entries)
      if (r >= m || !std::isfinite(v)) throw std::invalid_argument("packing LP: bad column entry");

  double cost_scale = 0.0;
  for (double c : cost) cost_scale = std::max(cost_scale, std::abs(c));
  double rhs_scale = 0.0;
  for (double b : rhs) rhs_scale = std::max(rhs_scale, b);
  const double price_tol = 1e-11 * std::max(cost_scale, 1e-300);
  constexpr double pivot_tol = 1e-10;

  // variable index: [0, n) structural, [n, n + m) slack
  std::vector<std::size_t> basis(m);
  std::vector<std::ptrdiff_t> position(n + m, -1);
  for (std::size_t r = 0; r < m; ++r) {
    basis[r] = n + r;
    position[n + r] = static_cast<std::ptrdiff_t>(r);
  }
  Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd xb(m);
  for (std::size_t r = 0; r < m; ++r) xb[r] = rhs[r];

  auto var_cost = [&](std::size_t k) { return k < n ? cost[k] : 0.0; };

  auto refactor = [&] {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t k = basis[r];
      if (k < n) {
        for (const auto& [row, v] : columns[k].entries) basis_matrix(row, r) += v;
      } else {
        basis_matrix(k - n, r) = 1.0;
      }
    }
    binv = basis_matrix.partialPivLu().inverse();
    Eigen::VectorXd b(m);
    for (std::size_t r = 0; r < m; ++r) b[r] = rhs[r];
    xb = binv * b;
    for (std::size_t r = 0; r < m; ++r)
      if (xb[r] < 0.0 && xb[r] > -1e-12 * std::max(rhs_scale, 1.0)) xb[r] = 0.0;
  };

  PackingResult result;
  std::size_t since_refactor = 0;
  std::size_t degenerate_run = 0;
  Eigen::VectorXd pi(m);
  Eigen::VectorXd alpha(m);

  while (true) {
    Eigen::VectorXd cb(m);
    for (std::size_t r = 0; r < m; ++r) cb[r] = var_cost(basis[r]);
    pi = binv.transpose() * cb;

    const bool bland = degenerate_run >= kDegenerateRun;
    std::size_t entering = n + m;
    double best = price_tol;
    for (std::size_t k = 0; k < n + m; ++k) {
      if (position[k] >= 0) continue;
      double d;
      if (k < n) {
        d = cost[k];
        for (const auto& [row, v] : columns[k].entries) d -= pi[row] * v;
      } else {
        d = -pi[k - n];
      }
      if (d > best) {
        entering = k;
        if (bland) break;
        best = d;
      }
    }
    if (entering == n + m) {
      result.optimal = true;
      break;
    }
    if (result.iterations >= budget) break;

    if (entering < n) {
      alpha.setZero();
      for (const auto& [row, v] : columns[entering].entries) alpha += v * binv.col(row);
    } else {
      alpha = binv.col(entering - n);
    }

    std::size_t leave = m;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (alpha[r] <= pivot_tol) continue;
      const double ratio = std::max(xb[r], 0.0) / alpha[r];
      const bool better =
          ratio < theta ||
          (ratio == theta && (bland ? basis[r] < basis[leave] : alpha[r] > alpha[leave]));
      if (better) {
        theta = ratio;
        leave = r;
      }
    }
    if (leave == m) throw std::domain_error("packing LP is unbounded");

    xb -= theta * alpha;
    xb[leave] = theta;
    const double piv = alpha[leave];
    binv.row(leave) /= piv;
    for (std::size_t r = 0; r < m; ++r)
      if (r != leave && alpha[r] != 0.0) binv.row(r) -= alpha[r] * binv.row(leave);

    position[basis[leave]] = -1;
    basis[leave] = entering;
    position[entering] = static_cast<std::ptrdiff_t>(leave);

    degenerate_run = theta <= 1e-14 * std::max(rhs_scale, 1.0) ? degenerate_run + 1 : 0;
    ++result.iterations;
    if (++since_refactor >= kRefactorEvery) {
      refactor();
      since_refactor = 0;
    }
  }

  if (since_refactor > 0) {
    refactor();
    Eigen::VectorXd cb(m);
    for (std::size_t r = 0; r < m; ++r) cb[r] = var_cost(basis[r]);
    pi = binv.transpose() * cb;
  }
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) result.x[basis[r]] = std::max(xb[r], 0.0);
  result.duals.assign(pi.data(), pi.data() + m);
  for (std::size_t k = 0; k < n; ++k) result.objective += cost[k] * result.x[k];
  return result;
}

}  // namespace hsob
