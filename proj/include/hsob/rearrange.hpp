#pragma once

/**
 * @file
 * Distribution functions, decreasing rearrangements and maximal averages of
 * functions on weighted finite spaces.
 *
 * A rearrangement is stored as a StepFunction: nonincreasing, right
 * continuous, value v_j on [t_{j-1}, t_j), zero beyond the last breakpoint.
 * Everything derived from it (integrals, f**, the oscillation f** - f*) is
 * evaluated exactly as finite sums.
 */

#include <cstddef>
#include <span>
#include <vector>

namespace hsob {

/// Function samples aligned with atom masses.
struct WeightedSample {
  std::vector<double> values;
  std::vector<double> weights;

  WeightedSample() = default;
  WeightedSample(std::vector<double> values, std::vector<double> weights);

  std::size_t size() const { return values.size(); }
  double total_mass() const;
  /// Throws std::invalid_argument unless sizes match and weights are > 0.
  void validate() const;
};

class StepFunction {
 public:
  /// The zero function.
  StepFunction() = default;

  /// `breakpoints` = t_1 < ... < t_k (t_0 = 0 is implicit), `values` =
  /// v_1 >= ... >= v_k > 0.
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// f*(t); right-continuous, so a breakpoint returns the value to its right.
  double operator()(double t) const;

  /// Integral of f* over [0, t].
  double integral(double t) const;

  /// f**(t) = integral(t) / t, with f**(0) = f*(0+) and the 1/t decay beyond
  /// the support.  Throws for t < 0.
  double double_star(double t) const;

  /// t (f**(t) - f*(t)) = integral over {f* > f*(t)} of (f* - f*(t)).
  /// Accumulated from nonnegative increments, so it is exactly nondecreasing.
  double oscillation_mass(double t) const;

  /// f**(t) - f*(t) for t > 0.
  double oscillation(double t) const;

  /// Lebesgue measure of {f* > lambda}.
  double level_measure(double lambda) const;

  std::size_t steps() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  /// End of the support (t_k), 0 for the zero function.
  double support() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
  /// f*(0+) = ess sup.
  double sup() const { return values_.empty() ? 0.0 : values_.front(); }

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  /// Left endpoint of step j (0-based), i.e. t_{j}.
  double step_begin(std::size_t j) const { return j == 0 ? 0.0 : breakpoints_[j - 1]; }
  /// Oscillation mass on step j; index steps() is the tail beyond the support.
  double step_oscillation_mass(std::size_t j) const { return osc_mass_[j]; }

  /// (f*)^p; (|f|^p)* coincides with it for p > 0.
  StepFunction pow(double p) const;
  /// c f* for c >= 0 (|c| for negative c).
  StepFunction scaled(double c) const;
  /// The dilation t -> f*(t / s).
  StepFunction dilated(double s) const;

  /// Index of the step containing t (steps() when t >= support()).
  std::size_t locate(double t) const;

 private:
  void build_prefix();

  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> prefix_;    // prefix_[j] = integral over [0, t_j]
  std::vector<double> osc_mass_ = {0.0};  // size steps()+1
};

double distribution(const WeightedSample& f, double lambda);

/// Sorts |f| descending (stable in the index), merges equal values into one
/// step and drops zeros.
StepFunction decreasing_rearrangement(const WeightedSample& f);

/// Same as fs.double_star(t); t = 0 gives f*(0+).
double double_star(const StepFunction& fs, double t);

/// f**(t) - f*(t) evaluated twice: from the rearrangement, and from the
/// samples via t (f** - f*)(t) = sum over |f_i| > f*(t) of w_i (|f_i| - f*(t)).
/// Throws hsob::ConsistencyError when the two disagree by more than 1e-10
/// relative to f**(t).
double oscillation(const WeightedSample& f, double t);
/// Same check against an already computed rearrangement of f.
double oscillation(const WeightedSample& f, const StepFunction& fs, double t);

/// Elementwise |f|^p.
WeightedSample abs_pow(const WeightedSample& f, double p);

}  // namespace hsob
