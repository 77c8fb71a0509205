#include "hsob/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "hsob/hajlasz.hpp"
#include "hsob/parallel.hpp"
#include "hsob/piecewise.hpp"
#include "hsob/rearrange.hpp"

namespace hsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return kInf;
  return num / den;
}

void check_exponents(double s, double alpha) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
}

WeightedSample sample_of(const DiscreteSpace& space, std::span<const double> v) {
  return WeightedSample({v.begin(), v.end()}, {space.weights().begin(), space.weights().end()});
}

void require_gradient(const DiscreteSpace& space, std::span<const double> f,
                      std::span<const double> g, double s) {
  double scale = 0.0;
  for (double x : f) scale = std::max(scale, std::abs(x));
  const GradientCheck check = is_s_gradient(space, f, g, s, 1e-10 * scale);
  if (!check.ok) {
    std::ostringstream msg;
    msg << "g is not an s-gradient of f: violation " << check.max_violation << " at pair ("
        << check.witness_i << ", " << check.witness_j << ")";
    throw std::invalid_argument(msg.str());
  }
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

void finish_fits(ConverseReport& report) {
  std::vector<double> log_r, log_m, log_half;
  double cmin = kInf, cmax = 0.0, hmin = kInf, hmax = 0.0;
  for (const auto& row : report.rows) {
    if (row.skipped) continue;
    ++report.used;
    log_r.push_back(std::log(row.radius));
    log_m.push_back(std::log(row.mass));
    log_half.push_back(std::log(0.5 * std::pow(row.radius, report.s)));
    cmin = std::min(cmin, row.c_prime);
    cmax = std::max(cmax, row.c_prime);
    hmin = std::min(hmin, row.hypothesis_constant);
    hmax = std::max(hmax, row.hypothesis_constant);
    report.all_checks_ok = report.all_checks_ok && row.l1_ok && row.half_bound_ok && row.gradient_ok;
  }
  if (report.used == 0) return;
  report.c_prime_min = cmin;
  report.c_prime_max = cmax;
  report.c_prime_spread = cmax / cmin;
  report.hypothesis_min = hmin;
  report.hypothesis_max = hmax;
  const bool spread = *std::max_element(log_m.begin(), log_m.end()) >
                      *std::min_element(log_m.begin(), log_m.end());
  if (report.used >= 2 && spread) {
    report.growth_slope = fit_slope(log_r, log_m);
    report.fitted_alpha = report.s / fit_slope(log_m, log_half);
  }
}

// Rows shared by both converse variants.
void fill_bounds(ConverseRow& row, double s, double sigma) {
  const double top = std::pow(row.radius, s);
  row.rhs_integral = converse_rhs_integral(row.mass, sigma);
  row.hypothesis_constant = row.lhs / row.rhs_integral;
  row.c_prime = 0.5 * top / std::pow(row.mass, sigma);
  row.l1_ok = row.l1_norm <= top * row.mass * (1.0 + 1e-12);
  row.half_bound_ok = row.lhs >= 0.5 * top * (1.0 - 1e-12);
}

// int over [a, b] of (f**(t) / (1 + ln(1/t)))^p dt / t for f** = v + m / t,
// 0 < a < b <= 1, in the variable u = ln t.
double log_piece(double v, double m, double p, double a, double b) {
  auto integrand = [&](double u) {
    return std::pow(v + m * std::exp(-u), p) * std::pow(1.0 - u, -p);
  };
  const double ua = std::log(a);
  const double ub = std::log(b);
  const int pieces = std::max(1, static_cast<int>(std::ceil((ub - ua) / 0.25)));
  const double width = (ub - ua) / pieces;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = ua + k * width;
    const double hi = k + 1 == pieces ? ub : lo + width;
    total += boost::math::quadrature::gauss<double, 20>::integrate(integrand, lo, hi);
  }
  return total;
}

StepFunction rearrange_abs(const DiscreteSpace& space, std::span<const double> v) {
  return decreasing_rearrangement(sample_of(space, v));
}

// sup over t <= cap of phi_X(t) (f** - f*)(t) / t; phi(t) / t^2 is
// nonincreasing, so the sup sits at the left endpoints of the steps.
double weak_case_lhs(const RiSpaceSpec& spec, const StepFunction& fs, double cap) {
  double best = 0.0;
  for (std::size_t j = 1; j <= fs.steps(); ++j) {
    const double t = fs.step_begin(j);
    if (t > cap) break;
    best = std::max(best, fundamental_function(spec, t) * fs.step_oscillation_mass(j) / (t * t));
  }
  return best;
}

EmbeddingChain lp_chain(const StepFunction& fs, const StepFunction& gs, double p, double sigma,
                        double lhs, double g_norm) {
  EmbeddingChain chain;
  chain.available = true;
  const PiecewisePower h = PiecewisePower::oscillation(fs).times_power(-sigma);
  const double h_norm = lp_norm(p, h);
  chain.q_norm = safe_ratio(lhs, h_norm);
  chain.q_bound = 1.0 / (1.0 / p - sigma);

  double worst = 0.0;
  for (std::size_t j = 1; j <= fs.steps(); ++j) {
    const double t = fs.step_begin(j);
    const double expect = std::pow(t, -sigma) * fs.double_star(t);
    const double got = hardy_Q(sigma, 1.0, h, t);
    worst = std::max(worst, std::abs(got - expect) / std::max(expect, 1e-300));
  }
  chain.identity_error = worst;
  chain.identity_ok = worst <= 1e-9;

  std::vector<double> knots(fs.breakpoints().begin(), fs.breakpoints().end());
  knots.insert(knots.end(), gs.breakpoints().begin(), gs.breakpoints().end());
  std::sort(knots.begin(), knots.end());
  double k = 0.0;
  for (double t : knots) k = std::max(k, safe_ratio(h(t), gs.double_star(t)));
  chain.k = k;

  chain.g_double_star_norm = lp_norm(p, PiecewisePower::double_star(gs));
  chain.c_x = safe_ratio(chain.g_double_star_norm, g_norm);
  const double bound = chain.q_bound * chain.k * chain.g_double_star_norm;
  chain.consistent = lhs <= bound * (1.0 + 1e-9) && chain.q_norm <= chain.q_bound * (1.0 + 1e-9);
  return chain;
}

}  // namespace

MassRange admissible_masses(const DiscreteSpace& space) {
  return {10.0 * space.min_atom_mass(), 0.5 * space.total_mass()};
}

std::vector<double> default_t_grid(const DiscreteSpace& space, std::size_t count) {
  const MassRange range = admissible_masses(space);
  if (!(range.lo <= range.hi))
    throw std::invalid_argument("space too small: no admissible masses (10 min atom > total / 2)");
  if (count == 0) throw std::invalid_argument("t grid needs at least one point");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = range.lo;
    return grid;
  }
  const double step = std::log(range.hi / range.lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = range.lo * std::exp(step * static_cast<double>(k));
  grid.front() = range.lo;
  grid.back() = range.hi;
  return grid;
}

InequalityReport oscillation_inequality_report(const DiscreteSpace& space,
                                               std::span<const double> f,
                                               std::span<const double> g, double s,
                                               double alpha, double p, double c,
                                               std::span<const double> t_grid, double b,
                                               const ReportIds& ids) {
  check_exponents(s, alpha);
  if (!(p > 0.0) || !(p <= 1.0)) throw std::invalid_argument("oscillation inequality needs 0 < p <= 1");
  if (!(c >= 1.0) || !std::isfinite(c)) throw std::invalid_argument("almost-continuity c must be >= 1");
  require_gradient(space, f, g, s);

  InequalityReport report;
  report.metadata = {s, alpha, p, c, b, ids};
  const double sigma = s / alpha;
  report.theoretical_constant = std::pow(c * std::pow(2.0, sigma + 1.0), 1.0 / p);

  if (t_grid.empty()) {
    report.t_grid = default_t_grid(space);
  } else {
    const MassRange range = admissible_masses(space);
    for (double t : t_grid)
      if (!(t >= range.lo * (1.0 - 1e-12)) || !(t <= range.hi * (1.0 + 1e-12)))
        throw std::invalid_argument("t = " + fmt(t) + " outside the admissible range [" +
                                    fmt(range.lo) + ", " + fmt(range.hi) + "]");
    report.t_grid.assign(t_grid.begin(), t_grid.end());
  }

  const WeightedSample fp = abs_pow(sample_of(space, f), p);
  const StepFunction fp_star = decreasing_rearrangement(fp);
  const StepFunction gp_star = decreasing_rearrangement(abs_pow(sample_of(space, g), p));

  const std::size_t count = report.t_grid.size();
  report.lhs.resize(count);
  report.rhs.resize(count);
  report.ratio.resize(count);
  parallel_for(count, [&](std::size_t k) {
    const double t = report.t_grid[k];
    const double osc = std::max(oscillation(fp, fp_star, t), 0.0);
    report.lhs[k] = std::pow(osc, 1.0 / p);
    report.rhs[k] = std::pow(t, sigma) * std::pow(gp_star.double_star(t), 1.0 / p);
    report.ratio[k] = safe_ratio(report.lhs[k], report.rhs[k]);
  });
  for (double r : report.ratio) report.empirical_constant = std::max(report.empirical_constant, r);
  report.pass = report.empirical_constant <= report.theoretical_constant * (1.0 + report.slack);
  return report;
}

double converse_rhs_integral(double mass, double sigma) {
  if (!(mass > 0.0)) throw std::invalid_argument("converse bound needs a ball of positive mass");
  if (!(sigma > 0.0)) throw std::invalid_argument("converse bound needs sigma > 0");
  if (sigma == 1.0) return mass * (1.0 + std::log(2.0));
  return std::pow(mass, sigma) * (1.0 / sigma + (std::pow(2.0, sigma - 1.0) - 1.0) / (sigma - 1.0));
}

ConverseReport converse_probe(const AnalyticSpace& space, double s, double alpha,
                              std::span<const AnalyticProbe> probes) {
  check_exponents(s, alpha);
  if (s > 1.0) throw std::invalid_argument("converse probe needs 0 < s <= 1");
  const double sigma = s / alpha;
  ConverseReport report;
  report.s = s;
  report.alpha = alpha;
  report.rows.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t k) {
    ConverseRow& row = report.rows[k];
    row.probe = k;
    row.center = probes[k].center;
    row.radius = probes[k].radius;
    if (!(row.radius > 0.0)) {
      row.skipped = true;
      row.reason = "radius must be > 0";
      return;
    }
    row.mass = space.ball_measure(row.center, row.radius);
    if (!(row.mass > 0.0)) {
      row.skipped = true;
      row.reason = "ball of zero mass";
      return;
    }
    const double top = std::pow(row.radius, s);
    row.l1_norm = space.radial_moment(row.center, row.radius, s);
    row.lhs = top - row.l1_norm / (2.0 * row.mass);
    row.lhs_identity = row.lhs;
    fill_bounds(row, s, sigma);
  });
  finish_fits(report);
  return report;
}

ConverseReport converse_probe(const DiscreteSpace& space, double s, double alpha,
                              std::span<const DiscreteProbe> probes) {
  check_exponents(s, alpha);
  if (s > 1.0) throw std::invalid_argument("converse probe needs 0 < s <= 1");
  const double sigma = s / alpha;
  const RadiusRange range = admissible_radii(space);
  ConverseReport report;
  report.s = s;
  report.alpha = alpha;
  report.rows.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t k) {
    ConverseRow& row = report.rows[k];
    row.probe = k;
    row.radius = probes[k].radius;
    if (probes[k].center >= space.size()) throw std::out_of_range("probe center out of range");
    if (space.has_coords()) {
      const auto pt = space.point(probes[k].center);
      row.center.assign(pt.begin(), pt.end());
    } else {
      row.center = {static_cast<double>(probes[k].center)};
    }
    if (!range.contains(row.radius)) {
      row.skipped = true;
      row.reason = "radius outside admissible range [" + fmt(range.lo) + ", " + fmt(range.hi) + "]";
      return;
    }
    const TestPair pair = test_function(space, probes[k].center, row.radius, s);
    row.gradient_ok = pair.check.ok;
    for (std::size_t i = 0; i < space.size(); ++i)
      if (pair.g[i] > 0.0) row.mass += space.weight(i);
    if (!(row.mass > 0.0)) {
      row.skipped = true;
      row.reason = "ball of zero mass";
      return;
    }
    const StepFunction fs = rearrange_abs(space, pair.f);
    row.lhs = fs.sup() - fs.double_star(2.0 * row.mass);
    row.lhs_identity = PiecewisePower::oscillation(fs).integrate(1.0, -1.0, 0.0, 2.0 * row.mass);
    row.l1_norm = fs.integral(fs.support());
    fill_bounds(row, s, sigma);
  });
  finish_fits(report);
  return report;
}

double log_refined_norm(const StepFunction& fs, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("log-refined norm needs p > 0");
  if (fs.empty()) return 0.0;
  if (p <= 1.0) return kInf;
  const double first_end = std::min(fs.breakpoints()[0], 1.0);
  double total = std::pow(fs.sup(), p) * std::pow(1.0 + std::log(1.0 / first_end), 1.0 - p) / (p - 1.0);
  for (std::size_t j = 1; j <= fs.steps(); ++j) {
    const double a = fs.step_begin(j);
    if (a >= 1.0) break;
    const double b = j < fs.steps() ? std::min(fs.breakpoints()[j], 1.0) : 1.0;
    const double v = j < fs.steps() ? fs.values()[j] : 0.0;
    total += log_piece(v, fs.step_oscillation_mass(j), p, a, b);
  }
  return std::pow(total, 1.0 / p);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

EmbeddingReport embedding_report(const DiscreteSpace& space, std::span<const double> f,
                                 std::span<const double> g, double s, double alpha,
                                 const RiSpaceSpec& spec,
                                 const std::optional<std::string>& requested_case,
                                 const ReportIds& ids) {
  check_exponents(s, alpha);
  require_gradient(space, f, g, s);

  EmbeddingReport report;
  report.sigma = s / alpha;
  report.lower_boyd = spec.lower_boyd();
  report.upper_boyd = spec.upper_boyd();
  report.metadata = {s, alpha, spec.p(), 0.0, 0.0, ids};
  const double sigma = report.sigma;
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  const bool is_lp = spec.kind() == RiSpaceSpec::Kind::lp;

  std::ostringstream diag;
  diag << "sigma = s/alpha = " << fmt(sigma) << ", Boyd indices of " << spec.to_string() << " = ["
       << fmt(report.lower_boyd) << ", " << fmt(report.upper_boyd) << "]: ";
  if (sigma > 1.0 && !same(sigma, 1.0)) {
    report.case_id = "3";
    diag << "sigma > 1";
  } else if (same(sigma, 1.0)) {
    report.case_id = "2";
    diag << "sigma = 1";
  } else if (report.lower_boyd > sigma && !same(report.lower_boyd, sigma)) {
    report.case_id = "1a";
    diag << "lower index > sigma";
  } else if (is_lp && same(1.0 / spec.p(), sigma)) {
    report.case_id = "1b";
    diag << "1/p = sigma";
  } else if (report.upper_boyd < sigma && !same(report.upper_boyd, sigma)) {
    report.case_id = "1c";
    diag << "upper index < sigma";
  } else {
    diag << "sigma lies between the indices";
    throw std::invalid_argument(diag.str() + "; no embedding case applies");
  }
  report.diagnosis = diag.str();
  if (requested_case && *requested_case != report.case_id)
    throw std::invalid_argument("requested case " + *requested_case + " but " + report.diagnosis +
                                " selects case " + report.case_id);

  const StepFunction fs = rearrange_abs(space, f);
  const StepFunction gs = rearrange_abs(space, g);
  report.g_norm = norm(spec, gs);
  report.f_l1_plus_linf = norm(RiSpaceSpec::l1_plus_linf(), fs);
  report.f_linf = fs.sup();

  const bool doublestar_defined =
      sigma < 1.0 && (is_lp || spec.kind() == RiSpaceSpec::Kind::lorentz) && spec.q() >= 1.0 &&
      std::isfinite(spec.q());
  std::optional<DoubleStarNorm> doublestar;
  if (doublestar_defined) {
    doublestar = norm_doublestar(spec, fs, sigma);
    report.doublestar_diverges = doublestar->diverges();
  }

  if (report.case_id == "1a") {
    if (!doublestar) throw std::invalid_argument("case 1a needs an L^p or Lorentz spec with q >= 1");
    report.lhs = doublestar->value;
    report.rhs = report.g_norm;
    report.lhs_formula = "||t^{-sigma} f**||_X";
    report.rhs_formula = "||g||_X";
    if (is_lp) {
      const double p = spec.p();
      report.p_star = alpha * p / (alpha - s * p);
      if (std::isfinite(p)) report.chain = lp_chain(fs, gs, p, sigma, report.lhs, report.g_norm);
    }
  } else if (report.case_id == "1b") {
    report.lhs = log_refined_norm(fs, spec.p());
    report.rhs = report.g_norm + report.f_l1_plus_linf;
    report.lhs_formula = "(int_0^1 (f**(t) / (1 + ln(1/t)))^p dt/t)^{1/p}";
    report.rhs_formula = "||g||_p + ||f||_{L1+Linf}";
  } else if (report.case_id == "1c" || report.case_id == "3") {
    report.lhs = report.f_linf;
    report.rhs = report.g_norm + report.f_l1_plus_linf;
    report.lhs_formula = "||f||_inf";
    report.rhs_formula = "||g||_X + ||f||_{L1+Linf}";
  } else {
    report.lhs = weak_case_lhs(spec, fs, admissible_masses(space).hi);
    report.rhs = report.g_norm;
    report.lhs_formula = "sup_{t <= total/2} phi_X(t) (f**(t) - f*(t)) / t";
    report.rhs_formula = "||g||_X";
  }
  report.finite = std::isfinite(report.lhs);
  report.empirical_constant = safe_ratio(report.lhs, report.rhs);
  return report;
}

}  // namespace hsob
