#pragma once

/**
 * @file
 * Metric measure spaces: weighted point clouds with a metric oracle, and
 * closed-form ball-measure oracles, together with diagnostics for the
 * measure-growth hypotheses (lower bounds, almost continuity, doubling).
 *
 * Balls are open everywhere: B(x, r) = {y : d(x, y) < r}.
 */

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hsob {

using Coord = std::vector<double>;

enum class MetricKind { euclidean, linf, matrix };

std::string to_string(MetricKind kind);
MetricKind parse_metric_kind(const std::string& name);

/// Sorted distances from one center with cumulative weights; the discrete
/// map r -> mu(B(x, r)) is piecewise constant with breakpoints exactly at
/// these distances.
class RadialProfile {
 public:
  RadialProfile(std::vector<double> distances, std::vector<double> cumulative);

  /// Mass of the open ball of radius r.
  double open_ball(double r) const;
  /// Mass of the closed ball of radius r.
  double closed_ball(double r) const;

  std::span<const double> distances() const { return distances_; }
  std::span<const double> cumulative() const { return cumulative_; }

 private:
  std::vector<double> distances_;
  std::vector<double> cumulative_;
};

/// Weighted finite metric space, immutable after construction.
class DiscreteSpace {
 public:
  /// Coordinate-backed space with a euclidean or l-infinity metric.
  /// `coords` is row-major, `weights.size()` rows of `dim` entries.
  DiscreteSpace(std::size_t dim, std::vector<double> coords, std::vector<double> weights,
                MetricKind metric);

  /// Matrix-backed space. `dist` is row-major n x n; symmetry, positivity and
  /// the triangle inequality are validated (exhaustively for n <= 2000,
  /// on 10^6 seeded random triples above).
  DiscreteSpace(std::vector<double> dist, std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }
  MetricKind metric() const { return metric_; }
  bool has_coords() const { return !coords_.empty(); }

  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_.at(i); }
  double total_mass() const { return total_mass_; }
  double min_atom_mass() const { return min_atom_mass_; }

  std::span<const double> point(std::size_t i) const;
  double distance(std::size_t i, std::size_t j) const;

  /// Smallest nearest-neighbour distance and the diameter; computed once on
  /// first use (O(n^2)).
  double min_nn_distance() const;
  double diameter() const;

  RadialProfile profile(std::size_t center) const;

  /// Raw distance matrix (matrix metric only).
  std::span<const double> distance_matrix() const { return dist_; }

 private:
  struct GeometryCache;
  const GeometryCache& geometry() const;
  void validate_weights();

  std::size_t dim_ = 0;
  MetricKind metric_ = MetricKind::euclidean;
  std::vector<double> coords_;
  std::vector<double> dist_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
  double min_atom_mass_ = 0.0;
  std::shared_ptr<GeometryCache> cache_;
};

/// Closed-form ball-measure oracles.
class AnalyticSpace {
 public:
  enum class Kind { euclidean_lebesgue, appendix_plane };

  /// Lebesgue measure on R^dim with the euclidean metric.
  static AnalyticSpace euclidean_lebesgue(int dim);

  /// R^2 with the l-infinity metric and Lebesgue measure plus length measure
  /// on the vertical lines x = 0 and x = 1.  For the open square of radius r
  /// around (a, b):  mu = 4 r^2 + 2 r [|a| < r] + 2 r [|1 - a| < r].
  static AnalyticSpace appendix_plane();

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string name() const;

  double distance(std::span<const double> x, std::span<const double> y) const;
  double ball_measure(std::span<const double> x, double r) const;

  /// Integral over B(x, r) of (r - d(x, y))^s d mu(y), in closed form.
  double radial_moment(std::span<const double> x, double r, double s) const;

 private:
  AnalyticSpace(Kind kind, int dim) : kind_(kind), dim_(dim) {}
  void check_point(std::span<const double> x) const;

  Kind kind_;
  int dim_;
};

/// Volume of the euclidean unit ball in R^n.
double unit_ball_volume(int n);

double ball_measure(const DiscreteSpace& space, std::size_t x, double r);
double ball_measure(const AnalyticSpace& space, std::span<const double> x, double r);

struct GrowthProbe {
  std::size_t center = 0;  ///< index into the probed center list
  double radius = 0.0;
  double mass = 0.0;
  double ratio = 0.0;      ///< mass / radius^alpha
};

struct GrowthCertificate {
  double alpha = 0.0;
  double b = 0.0;            ///< empirical lower-bound constant (= worst_ratio)
  double worst_ratio = 0.0;
  std::vector<GrowthProbe> probe_log;
};

GrowthCertificate lower_bound_probe(const DiscreteSpace& space, double alpha,
                                    std::span<const std::size_t> centers,
                                    std::span<const double> radii);
GrowthCertificate lower_bound_probe(const AnalyticSpace& space, double alpha,
                                    std::span<const Coord> centers,
                                    std::span<const double> radii);

struct ContinuityProbe {
  std::size_t center = 0;
  double t = 0.0;
  bool success = false;
  double radius = 0.0;       ///< radius whose open ball carries mass_above
  double mass_below = 0.0;   ///< largest ball mass < t found
  double mass_above = 0.0;   ///< smallest ball mass >= t found
  double required_c = 1.0;   ///< mass_above / t
};

struct ContinuityReport {
  double c = 1.0;
  bool all_ok = true;
  double max_required_c = 1.0;
  std::vector<ContinuityProbe> probes;
};

/// For each (center, t) looks for r with t <= mu(B(x, r)) <= c t.  On a
/// discrete space the breakpoints of the radial profile are scanned exactly;
/// on an analytic space r -> mu(B(x, r)) is bisected to width 1e-9 r and the
/// masses on both sides of the located jump are compared against [t, c t].
ContinuityReport almost_continuity_check(const DiscreteSpace& space, double c,
                                         std::span<const double> t_grid,
                                         std::span<const std::size_t> centers);
ContinuityReport almost_continuity_check(const AnalyticSpace& space, double c,
                                         std::span<const double> t_grid,
                                         std::span<const Coord> centers);

struct DoublingProbe {
  std::size_t center = 0;
  double radius = 0.0;
  double inner = 0.0;
  double outer = 0.0;
  double ratio = 0.0;
  bool skipped = false;  ///< inner ball had zero mass
};

struct DoublingReport {
  double constant = 0.0;  ///< max ratio over non-skipped probes
  std::size_t skipped = 0;
  std::vector<DoublingProbe> probes;
};

DoublingReport doubling_check(const DiscreteSpace& space, std::span<const std::size_t> centers,
                              std::span<const double> radii);
DoublingReport doubling_check(const AnalyticSpace& space, std::span<const Coord> centers,
                              std::span<const double> radii);

/// Radii in [4 * min nearest-neighbour distance, diameter / 2].
struct RadiusRange {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double r) const { return r >= lo && r <= hi; }
};
RadiusRange admissible_radii(const DiscreteSpace& space);

}  // namespace hsob
