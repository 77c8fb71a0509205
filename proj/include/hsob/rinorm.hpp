#pragma once

/**
 * @file
 * Rearrangement-invariant norms on (0, inf) for a closed parametric family
 * (L^p, Lorentz L^{p,q}, weak L^inf, L^1 + L^inf), their fundamental
 * functions and Boyd indices, the Hardy operators P^(q) and Q_lambda^(q),
 * and the dilation operator E_s f(t) = f*(t / s).
 */

#include <string>

#include "hsob/piecewise.hpp"
#include "hsob/rearrange.hpp"

namespace hsob {

class RiSpaceSpec {
 public:
  enum class Kind { lp, lorentz, weak_linf, l1_plus_linf };

  static RiSpaceSpec lp(double p);
  static RiSpaceSpec lorentz(double p, double q);
  static RiSpaceSpec weak_linf();
  static RiSpaceSpec l1_plus_linf();

  /// "lp:2", "lp:4/3", "lp:inf", "linf", "lorentz:4:2", "weak-linf", "l1+linf".
  static RiSpaceSpec parse(const std::string& text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double q() const { return q_; }

  /// Analytic Boyd indices; the upper index governs P^(q), the lower Q.
  double lower_boyd() const;
  double upper_boyd() const;

  bool operator==(const RiSpaceSpec&) const = default;

 private:
  RiSpaceSpec(Kind kind, double p, double q) : kind_(kind), p_(p), q_(q) {}

  Kind kind_;
  double p_;
  double q_;
};

/// ||f||_X = ||f*||_{X-bar}.  Divergent quantities are +inf.
double norm(const RiSpaceSpec& spec, const StepFunction& fs);

struct DoubleStarNorm {
  double value = 0.0;
  bool diverges_at_zero = false;
  bool diverges_at_infinity = false;
  bool diverges() const { return diverges_at_zero || diverges_at_infinity; }
};

/// (int_0^inf (t^{1/p - sigma} f**(t))^q dt/t)^{1/q} for an L^p or L^{p,q}
/// spec, i.e. the X-norm of t^{-sigma} f**.  Requires 0 < sigma < 1, q >= 1.
DoubleStarNorm norm_doublestar(const RiSpaceSpec& spec, const StepFunction& fs, double sigma);

/// phi_X(s) = ||chi_[0,s)||_X.
double fundamental_function(const RiSpaceSpec& spec, double s);

struct DualCheck {
  double phi = 0.0;
  double phi_associate = 0.0;
  double product = 0.0;
};

/// phi_X(s) and phi_{X'}(s).  L^p uses the conjugate exponent,
/// L^1 + L^inf its associate L^1 cap L^inf, Lorentz the identity
/// phi_{X'} = s / phi_X.  Weak L^inf is rejected.
DualCheck dual_check(const RiSpaceSpec& spec, double s);

/// P^(q) h(t) = ((1/t) int_0^t |h|^q)^{1/q}.
double hardy_P(double q, const PiecewisePower& h, double t);
double hardy_P(double q, const StepFunction& fs, double t);

/// Q_lambda^(q) h(t) = (t^{-lambda} int_t^inf |h(x)|^q x^{lambda - 1} dx)^{1/q}.
double hardy_Q(double lambda, double q, const PiecewisePower& h, double t);
double hardy_Q(double lambda, double q, const StepFunction& fs, double t);

/// Lebesgue-space norm of a piecewise power function: (int |h|^p)^{1/p}.
double lp_norm(double p, const PiecewisePower& h);

/// int f* h*.
double rearrangement_pairing(const StepFunction& f, const StepFunction& h);

/// Empirical norm of E_s over a fixed probe family of step functions:
/// sup ||E_s f||_X / ||f||_X.
double dilation_norm(const RiSpaceSpec& spec, double s);

/// ln h_X(s) / ln s for the probe-family dilation norm.
double boyd_exponent_estimate(const RiSpaceSpec& spec, double s);

}  // namespace hsob
