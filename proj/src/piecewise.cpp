#include "hsob/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "hsob/rearrange.hpp"

namespace hsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<PowerTerm> nonzero_terms(const std::vector<PowerTerm>& terms) {
  std::vector<PowerTerm> out;
  for (const auto& t : terms)
    if (t.coef != 0.0) out.push_back(t);
  return out;
}

// (sum of terms)^q for integer q, combining equal exponents.
std::vector<PowerTerm> expand_power(const std::vector<PowerTerm>& terms, int q) {
  std::vector<PowerTerm> acc = {{1.0, 0.0}};
  for (int round = 0; round < q; ++round) {
    std::vector<PowerTerm> next;
    for (const auto& a : acc) {
      for (const auto& b : terms) {
        const PowerTerm prod{a.coef * b.coef, a.exponent + b.exponent};
        auto same = std::find_if(next.begin(), next.end(), [&](const PowerTerm& x) {
          return x.exponent == prod.exponent;
        });
        if (same == next.end()) {
          next.push_back(prod);
        } else {
          same->coef += prod.coef;
        }
      }
    }
    acc = std::move(next);
  }
  return acc;
}

double eval_terms(const std::vector<PowerTerm>& terms, double t) {
  double sum = 0.0;
  for (const auto& term : terms) sum += term.coef * std::pow(t, term.exponent);
  return sum;
}

double gauss_legendre(const std::vector<PowerTerm>& terms, double q, double gamma, double a,
                      double b) {
  auto integrand = [&](double t) { return std::pow(std::abs(eval_terms(terms, t)), q) * std::pow(t, gamma); };
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::log2(b / a))));
  const double ratio = std::pow(b / a, 1.0 / pieces);
  double total = 0.0;
  double lo = a;
  for (int k = 0; k < pieces; ++k) {
    const double hi = k + 1 == pieces ? b : lo * ratio;
    total += boost::math::quadrature::gauss<double, 20>::integrate(integrand, lo, hi);
    lo = hi;
  }
  return total;
}

}  // namespace

double power_integral(double k, double a, double b) {
  if (!(a >= 0.0) || !(b > a)) return 0.0;
  const double m = k + 1.0;
  if (a == 0.0) {
    if (b == kInf || m <= 0.0) return kInf;
    return std::pow(b, m) / m;
  }
  if (b == kInf) {
    if (m >= 0.0) return kInf;
    return std::pow(a, m) / (-m);
  }
  const double log_ratio = std::log(b / a);
  if (m == 0.0) return log_ratio;
  return std::pow(a, m) * std::expm1(m * log_ratio) / m;
}

PiecewisePower::PiecewisePower(std::vector<PowerPiece> pieces) : pieces_(std::move(pieces)) {
  double prev = 0.0;
  for (const auto& p : pieces_) {
    if (!(p.lo >= prev) || !(p.hi > p.lo))
      throw std::invalid_argument("piecewise function: pieces must be ordered and non-empty");
    prev = p.hi;
  }
}

PiecewisePower PiecewisePower::rearrangement(const StepFunction& fs) {
  std::vector<PowerPiece> pieces;
  for (std::size_t j = 0; j < fs.steps(); ++j)
    pieces.push_back({fs.step_begin(j), fs.breakpoints()[j], {{fs.values()[j], 0.0}}});
  return PiecewisePower(std::move(pieces));
}

PiecewisePower PiecewisePower::double_star(const StepFunction& fs) {
  std::vector<PowerPiece> pieces;
  for (std::size_t j = 0; j < fs.steps(); ++j) {
    PowerPiece piece{fs.step_begin(j), fs.breakpoints()[j], {{fs.values()[j], 0.0}}};
    if (const double m = fs.step_oscillation_mass(j); m != 0.0) piece.terms.push_back({m, -1.0});
    pieces.push_back(std::move(piece));
  }
  if (!fs.empty())
    pieces.push_back({fs.support(), kInf, {{fs.step_oscillation_mass(fs.steps()), -1.0}}});
  return PiecewisePower(std::move(pieces));
}

PiecewisePower PiecewisePower::oscillation(const StepFunction& fs) {
  std::vector<PowerPiece> pieces;
  for (std::size_t j = 1; j <= fs.steps(); ++j) {
    const double hi = j < fs.steps() ? fs.breakpoints()[j] : kInf;
    pieces.push_back({fs.step_begin(j), hi, {{fs.step_oscillation_mass(j), -1.0}}});
  }
  return PiecewisePower(std::move(pieces));
}

PiecewisePower PiecewisePower::power_law(double coef, double exponent, double lo, double hi) {
  return PiecewisePower({{lo, hi, {{coef, exponent}}}});
}

PiecewisePower PiecewisePower::times_power(double e) const {
  PiecewisePower out = *this;
  for (auto& piece : out.pieces_)
    for (auto& term : piece.terms) term.exponent += e;
  return out;
}

double PiecewisePower::operator()(double t) const {
  for (const auto& p : pieces_)
    if (t >= p.lo && t < p.hi) return eval_terms(p.terms, t);
  return 0.0;
}

double PiecewisePower::integrate(double q, double gamma, double lo, double hi) const {
  if (!(q > 0.0)) throw std::invalid_argument("integration power q must be > 0");
  if (!(lo >= 0.0) || !(hi >= lo)) throw std::invalid_argument("invalid integration range");
  double total = 0.0;
  for (const auto& piece : pieces_) {
    const double a = std::max(piece.lo, lo);
    const double b = std::min(piece.hi, hi);
    if (!(b > a)) continue;
    const auto terms = nonzero_terms(piece.terms);
    if (terms.empty()) continue;
    if (terms.size() == 1) {
      total += std::pow(std::abs(terms[0].coef), q) *
               power_integral(terms[0].exponent * q + gamma, a, b);
      continue;
    }
    const bool nonnegative = std::all_of(terms.begin(), terms.end(),
                                         [](const PowerTerm& t) { return t.coef > 0.0; });
    const double q_round = std::round(q);
    if (nonnegative && q == q_round && q <= 64.0) {
      for (const auto& term : expand_power(terms, static_cast<int>(q_round)))
        total += term.coef * power_integral(term.exponent + gamma, a, b);
      continue;
    }
    if (a == 0.0 || b == kInf)
      throw std::domain_error("non-integer power of a multi-term piece on an unbounded interval");
    total += gauss_legendre(terms, q, gamma, a, b);
  }
  return total;
}

}  // namespace hsob
