#pragma once

/**
 * @file
 * Hajlasz s-gradients on finite metric measure spaces.
 *
 * g >= 0 is an s-gradient of f when |f(x) - f(y)| <= d(x, y)^s (g(x) + g(y))
 * for every pair of atoms.  On a finite space this is the constraint system
 * g_i + g_j >= c_ij with c_ij = |f_i - f_j| / d_ij^s, and the homogeneous
 * Hajlasz-Sobolev norm is the smallest X-norm of a feasible g.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsob/rinorm.hpp"
#include "hsob/space.hpp"

namespace hsob {

struct GradientCheck {
  bool ok = true;
  /// max over pairs of |f_i - f_j| - d^s (g_i + g_j); 0 on spaces with < 2 atoms.
  double max_violation = 0.0;
  std::size_t witness_i = 0;
  std::size_t witness_j = 0;
};

/// Every pair is checked within the additive tolerance `tol`.  Throws
/// std::invalid_argument on negative or misaligned g.
GradientCheck is_s_gradient(const DiscreteSpace& space, std::span<const double> f,
                            std::span<const double> g, double s, double tol = 0.0);

/// g_i = (1/2) max_{j != i} |f_i - f_j| / d_ij^s.  Always an s-gradient.
std::vector<double> canonical_gradient(const DiscreteSpace& space, std::span<const double> f,
                                       double s);

struct GradientPair {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double c = 0.0;
};

class GradientProblem {
 public:
  /// Builds c_ij for all pairs with c_ij > 0.  The objective must be lp:1,
  /// lp:2 or linf; the L^1 and L^2 objectives are weighted by atom masses.
  static GradientProblem from_function(const DiscreteSpace& space, std::span<const double> f,
                                       double s, const RiSpaceSpec& objective);

  /// Direct construction from a pair list (pairs with c = 0 are dropped).
  GradientProblem(std::size_t n, std::vector<GradientPair> pairs, std::vector<double> weights,
                  const RiSpaceSpec& objective);

  std::size_t size() const { return weights_.size(); }
  std::span<const GradientPair> pairs() const { return pairs_; }
  std::span<const double> weights() const { return weights_; }
  const RiSpaceSpec& objective() const { return objective_; }
  double max_c() const { return max_c_; }

  /// Objective value of g (weighted L^1, weighted L^2, or sup).
  double evaluate(std::span<const double> g) const;
  /// max over pairs of c_ij - (g_i + g_j); -inf without pairs.
  double max_deficit(std::span<const double> g) const;

 private:
  std::vector<double> weights_;
  std::vector<GradientPair> pairs_;
  RiSpaceSpec objective_;
  double max_c_ = 0.0;
};

struct GradientSolution {
  std::vector<double> g;
  double norm_value = 0.0;
  /// L^1: duality gap |primal - dual| / max(1, primal); L^2: KKT residual
  /// norm; L^inf: 0 (closed form).
  double certificate = 0.0;
  /// Human-readable summary of the certificate.
  std::string certificate_kind;
  /// L^1: dual pair weights y_ij; L^inf: the maximizing pair (i, j) as two
  /// entries; L^2: multipliers of the pair constraints.
  std::vector<double> dual;
  std::size_t iterations = 0;
};

struct SolverOptions {
  std::size_t budget = 100000;
  double feasibility_tol = 1e-8;  ///< relative to max c_ij
};

/// Minimum-norm s-gradient.  L^inf is closed form (max c / 2), L^1 is solved
/// through the dual packing LP by revised simplex, L^2 by a primal-dual
/// interior point method.  Throws SolverError with the best feasible iterate
/// when the iteration budget runs out.
GradientSolution minimal_gradient(const GradientProblem& problem, const SolverOptions& options = {});

struct TestPair {
  std::vector<double> f;
  std::vector<double> g;
  GradientCheck check;  ///< is_s_gradient(f, g, s, 1e-12)
};

/// f(x) = (r - d(x0, x))^s inside the closed ball, 0 outside;
/// g = indicator of the open ball B(x0, r).
TestPair test_function(const DiscreteSpace& space, std::size_t x0, double r, double s);

/// (r - d)^s for d <= r, else 0.
double test_function_value(double d, double r, double s);

/// mu{f > lambda} = mu(B(x0, r - lambda^{1/s})) for 0 < lambda <= r^s, 0 above.
double test_function_distribution(const AnalyticSpace& space, std::span<const double> x0, double r,
                                  double s, double lambda);

}  // namespace hsob
