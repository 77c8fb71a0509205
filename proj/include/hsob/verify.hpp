#pragma once

/**
 * @file
 * Numerical harness for the oscillation inequality
 *
 *     ((|f|^p)**(t) - (|f|^p)*(t))^{1/p} <= C t^{s/alpha} ((g^p)**(t))^{1/p},
 *
 * its converse through the test functions f_{r,x0}, and the embedding
 * estimates of M^{s,X} by Boyd-index case.  Everything is computed from
 * exact step-function rearrangements; unspecified constants are measured and
 * reported, never asserted.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsob/rinorm.hpp"
#include "hsob/space.hpp"

namespace hsob {

struct ReportIds {
  std::string space;
  std::string f;
  std::string g;
};

struct InequalityMetadata {
  double s = 0.0;
  double alpha = 0.0;
  double p = 0.0;
  double c = 0.0;
  double b = 0.0;  ///< lower-bound constant if known, 0 otherwise
  ReportIds ids;
};

struct InequalityReport {
  std::vector<double> t_grid;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> ratio;  ///< lhs / rhs, 0 / 0 -> 0
  double empirical_constant = 0.0;
  double theoretical_constant = 0.0;
  std::string formula = "(c*2^(s/alpha+1))^(1/p)";
  double slack = 0.10;
  bool pass = true;
  InequalityMetadata metadata;
};

/// [10 * min atom mass, total mass / 2].
struct MassRange {
  double lo = 0.0;
  double hi = 0.0;
};
MassRange admissible_masses(const DiscreteSpace& space);

/// `count` log-spaced masses over the admissible range.
std::vector<double> default_t_grid(const DiscreteSpace& space, std::size_t count = 64);

/// Requires 0 < p <= 1, s > 0, alpha > 0, c >= 1 and g an s-gradient of f
/// (checked with tolerance 1e-10 max|f|).  An empty grid selects
/// default_t_grid; masses outside the admissible range are rejected.
InequalityReport oscillation_inequality_report(const DiscreteSpace& space,
                                               std::span<const double> f,
                                               std::span<const double> g, double s,
                                               double alpha, double p, double c,
                                               std::span<const double> t_grid = {},
                                               double b = 0.0, const ReportIds& ids = {});

/// int_0^{2M} t^{sigma-1} min(1, M/t) dt in closed form.
double converse_rhs_integral(double mass, double sigma);

struct ConverseRow {
  std::size_t probe = 0;
  Coord center;
  double radius = 0.0;
  double mass = 0.0;          ///< mu(B(x0, r))
  double lhs = 0.0;           ///< f**(0) - f**(2M)
  double lhs_identity = 0.0;  ///< int_0^{2M} (f** - f*) dt / t
  double rhs_integral = 0.0;  ///< int_0^{2M} t^{sigma-1} min(1, M/t) dt
  double hypothesis_constant = 0.0;  ///< lhs / rhs_integral
  double c_prime = 0.0;       ///< (r^s / 2) / M^sigma
  double l1_norm = 0.0;       ///< ||f||_{L^1}
  bool l1_ok = true;          ///< ||f||_{L^1} <= r^s M
  bool half_bound_ok = true;  ///< lhs >= r^s / 2
  bool gradient_ok = true;    ///< test pair passes is_s_gradient (discrete only)
  bool skipped = false;
  std::string reason;
};

struct ConverseReport {
  double s = 0.0;
  double alpha = 0.0;
  std::vector<ConverseRow> rows;
  std::size_t used = 0;
  /// s / slope of log(r^s / 2) against log M.
  double fitted_alpha = 0.0;
  /// slope of log M against log r.
  double growth_slope = 0.0;
  double c_prime_min = 0.0;
  double c_prime_max = 0.0;
  double c_prime_spread = 0.0;  ///< max / min
  double hypothesis_min = 0.0;
  double hypothesis_max = 0.0;
  bool all_checks_ok = true;    ///< l1_ok, half_bound_ok, gradient_ok on used rows
};

struct AnalyticProbe {
  Coord center;
  double radius = 0.0;
};

struct DiscreteProbe {
  std::size_t center = 0;
  double radius = 0.0;
};

/// Requires 0 < s <= 1.  Radii outside admissible_radii are skipped on
/// discrete spaces, as are balls of zero mass.
ConverseReport converse_probe(const AnalyticSpace& space, double s, double alpha,
                              std::span<const AnalyticProbe> probes);
ConverseReport converse_probe(const DiscreteSpace& space, double s, double alpha,
                              std::span<const DiscreteProbe> probes);

struct EmbeddingChain {
  bool available = false;
  bool identity_ok = false;   ///< Q_sigma[(f** - f*) / t^sigma] = t^{-sigma} f** at breakpoints
  double identity_error = 0.0;
  double q_norm = 0.0;        ///< measured operator norm of Q_sigma on X (probe family + instance)
  double q_bound = 0.0;       ///< 1 / (1/p - sigma) for L^p
  double k = 0.0;             ///< sup (f** - f*) t^{-sigma} / g**
  double c_x = 0.0;           ///< ||g**||_X / ||g||_X
  double g_double_star_norm = 0.0;
  bool consistent = false;    ///< lhs <= q_norm k ||g**||_X
};

struct EmbeddingReport {
  std::string case_id;        ///< "1a", "1b", "1c", "2" or "3"
  std::string diagnosis;      ///< Boyd-index comparison used to pick the case
  std::string lhs_formula;
  std::string rhs_formula;
  double sigma = 0.0;
  double lower_boyd = 0.0;
  double upper_boyd = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double empirical_constant = 0.0;  ///< lhs / rhs, 0 / 0 -> 0
  bool finite = true;               ///< lhs finite
  bool doublestar_diverges = false; ///< norm_doublestar divergence flag (case 1 only)
  double g_norm = 0.0;
  double f_l1_plus_linf = 0.0;
  double f_linf = 0.0;
  std::optional<double> p_star;     ///< alpha p / (alpha - s p) for L^p in case 1a
  EmbeddingChain chain;
  InequalityMetadata metadata;
};

/// Case by analytic Boyd indices of `spec` against sigma = s / alpha.
/// `requested_case`, when given, must agree with the selection.
EmbeddingReport embedding_report(const DiscreteSpace& space, std::span<const double> f,
                                 std::span<const double> g, double s, double alpha,
                                 const RiSpaceSpec& spec,
                                 const std::optional<std::string>& requested_case = std::nullopt,
                                 const ReportIds& ids = {});

/// (int_0^1 (f**(t) / (1 + ln(1/t)))^p dt / t)^{1/p}; +inf for p <= 1.
double log_refined_norm(const StepFunction& fs, double p);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace hsob
