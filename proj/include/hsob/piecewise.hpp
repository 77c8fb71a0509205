#pragma once

/**
 * @file
 * Piecewise power-law functions on [0, inf): on each piece the function is a
 * finite sum  sum_m c_m t^{e_m}.  Rearrangements, maximal averages and their
 * weighted variants all have this form, so integrals such as
 *
 *     int_lo^hi |h(t)|^q t^gamma dt
 *
 * reduce to closed-form power integrals: one term per piece directly, several
 * nonnegative terms with integer q by multinomial expansion.  Other pieces
 * (non-integer q with two or more terms on a bounded piece) use 20-point
 * Gauss-Legendre on geometrically refined sub-pieces, where the integrand is
 * analytic.
 */

#include <limits>
#include <span>
#include <vector>

namespace hsob {

class StepFunction;

struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;
};

struct PowerPiece {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  std::vector<PowerTerm> terms;
};

class PiecewisePower {
 public:
  PiecewisePower() = default;
  /// Pieces must be ordered and non-overlapping; gaps are zero.
  explicit PiecewisePower(std::vector<PowerPiece> pieces);

  /// f* of a rearrangement (constant pieces).
  static PiecewisePower rearrangement(const StepFunction& fs);
  /// f** = v_j + M_j / t on each step, M / t beyond the support.
  static PiecewisePower double_star(const StepFunction& fs);
  /// f** - f* = M_j / t.
  static PiecewisePower oscillation(const StepFunction& fs);
  /// c t^e on [lo, hi).
  static PiecewisePower power_law(double coef, double exponent, double lo = 0.0,
                                  double hi = std::numeric_limits<double>::infinity());

  /// t^e h(t).
  PiecewisePower times_power(double e) const;

  double operator()(double t) const;

  /// int_lo^hi |h(t)|^q t^gamma dt; +inf when the integral diverges.
  double integrate(double q, double gamma, double lo = 0.0,
                   double hi = std::numeric_limits<double>::infinity()) const;

  std::span<const PowerPiece> pieces() const { return pieces_; }

 private:
  std::vector<PowerPiece> pieces_;
};

/// int_a^b t^k dt for 0 <= a < b <= inf; +inf when divergent.
double power_integral(double k, double a, double b);

}  // namespace hsob
