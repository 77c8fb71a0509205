#include "hsob/rinorm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace hsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_exponent(const std::string& text, const std::string& whole) {
  if (text == "inf") return kInf;
  if (const auto slash = text.find('/'); slash != std::string::npos)
    return parse_exponent(text.substr(0, slash), whole) / parse_exponent(text.substr(slash + 1), whole);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("cannot parse exponent '" + text + "' in space spec '" + whole + "'");
  return value;
}

std::string format_exponent(double x) {
  if (x == kInf) return "inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

StepFunction indicator(double s) { return StepFunction({s}, {1.0}); }

}  // namespace

// ---------------------------------------------------------------------------

RiSpaceSpec RiSpaceSpec::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p needs p >= 1");
  return {Kind::lp, p, p};
}

RiSpaceSpec RiSpaceSpec::lorentz(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0) || p == kInf)
    throw std::invalid_argument("Lorentz space needs 0 < p < inf and q > 0");
  return {Kind::lorentz, p, q};
}

RiSpaceSpec RiSpaceSpec::weak_linf() { return {Kind::weak_linf, kInf, kInf}; }
RiSpaceSpec RiSpaceSpec::l1_plus_linf() { return {Kind::l1_plus_linf, 1.0, 1.0}; }

RiSpaceSpec RiSpaceSpec::parse(const std::string& text) {
  if (text == "weak-linf") return weak_linf();
  if (text == "l1+linf") return l1_plus_linf();
  if (text == "linf") return lp(kInf);
  const auto parts = split(text, ':');
  if (parts[0] == "lp" && parts.size() == 2) return lp(parse_exponent(parts[1], text));
  if (parts[0] == "lorentz" && parts.size() == 3)
    return lorentz(parse_exponent(parts[1], text), parse_exponent(parts[2], text));
  throw std::invalid_argument("unknown space spec '" + text +
                              "' (expected lp:P, lorentz:P:Q, weak-linf or l1+linf)");
}

std::string RiSpaceSpec::to_string() const {
  switch (kind_) {
    case Kind::lp: return "lp:" + format_exponent(p_);
    case Kind::lorentz: return "lorentz:" + format_exponent(p_) + ":" + format_exponent(q_);
    case Kind::weak_linf: return "weak-linf";
    case Kind::l1_plus_linf: return "l1+linf";
  }
  return "?";
}

double RiSpaceSpec::lower_boyd() const {
  switch (kind_) {
    case Kind::lp:
    case Kind::lorentz: return 1.0 / p_;
    case Kind::weak_linf:
    case Kind::l1_plus_linf: return 0.0;
  }
  return 0.0;
}

double RiSpaceSpec::upper_boyd() const {
  switch (kind_) {
    case Kind::lp:
    case Kind::lorentz: return 1.0 / p_;
    case Kind::weak_linf: return 0.0;
    case Kind::l1_plus_linf: return 1.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

double norm(const RiSpaceSpec& spec, const StepFunction& fs) {
  if (fs.empty()) return 0.0;
  const auto t = fs.breakpoints();
  const auto v = fs.values();
  const double top = fs.sup();
  switch (spec.kind()) {
    case RiSpaceSpec::Kind::lp: {
      const double p = spec.p();
      if (p == kInf) return top;
      double sum = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j)
        sum += std::pow(v[j] / top, p) * (t[j] - fs.step_begin(j));
      return top * std::pow(sum, 1.0 / p);
    }
    case RiSpaceSpec::Kind::lorentz: {
      const double p = spec.p();
      const double q = spec.q();
      if (q == kInf) {
        double best = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) best = std::max(best, v[j] * std::pow(t[j], 1.0 / p));
        return best;
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j)
        sum += std::pow(v[j] / top, q) * power_integral(q / p - 1.0, fs.step_begin(j), t[j]);
      return top * std::pow(sum, 1.0 / q);
    }
    case RiSpaceSpec::Kind::weak_linf: {
      // f** - f* = M_j / t decreases on each step: the sup sits at the left
      // endpoints t_1, ..., t_k.
      double best = 0.0;
      for (std::size_t j = 1; j <= fs.steps(); ++j)
        best = std::max(best, fs.step_oscillation_mass(j) / fs.step_begin(j));
      return best;
    }
    case RiSpaceSpec::Kind::l1_plus_linf: return fs.integral(1.0);
  }
  return 0.0;
}

DoubleStarNorm norm_doublestar(const RiSpaceSpec& spec, const StepFunction& fs, double sigma) {
  if (spec.kind() != RiSpaceSpec::Kind::lp && spec.kind() != RiSpaceSpec::Kind::lorentz)
    throw std::invalid_argument("norm_doublestar needs an L^p or Lorentz spec, got " + spec.to_string());
  if (!(sigma > 0.0) || !(sigma < 1.0))
    throw std::invalid_argument("norm_doublestar needs 0 < sigma < 1");
  const double p = spec.p();
  const double q = spec.q();
  if (!(q >= 1.0) || q == kInf) throw std::invalid_argument("norm_doublestar needs 1 <= q < inf");
  DoubleStarNorm out;
  if (fs.empty()) return out;
  const double shift = 1.0 / p - sigma;
  out.diverges_at_zero = shift <= 0.0;
  out.diverges_at_infinity = shift - 1.0 >= 0.0;
  if (out.diverges()) {
    out.value = kInf;
    return out;
  }
  const auto h = PiecewisePower::double_star(fs);
  out.value = std::pow(h.integrate(q, shift * q - 1.0), 1.0 / q);
  return out;
}

double fundamental_function(const RiSpaceSpec& spec, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("fundamental function needs s > 0");
  return norm(spec, indicator(s));
}

DualCheck dual_check(const RiSpaceSpec& spec, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dual check needs s > 0");
  DualCheck out;
  out.phi = fundamental_function(spec, s);
  switch (spec.kind()) {
    case RiSpaceSpec::Kind::lp: {
      const double p = spec.p();
      const double conj = p == 1.0 ? kInf : (p == kInf ? 1.0 : p / (p - 1.0));
      out.phi_associate = fundamental_function(RiSpaceSpec::lp(conj), s);
      break;
    }
    case RiSpaceSpec::Kind::l1_plus_linf:
      // associate of L^1 + L^inf is L^1 cap L^inf with max(||.||_1, ||.||_inf)
      out.phi_associate = std::max(fundamental_function(RiSpaceSpec::lp(1.0), s),
                                   fundamental_function(RiSpaceSpec::lp(kInf), s));
      break;
    case RiSpaceSpec::Kind::lorentz: out.phi_associate = s / out.phi; break;
    case RiSpaceSpec::Kind::weak_linf:
      throw std::invalid_argument("weak L^inf has no implemented associate space");
  }
  out.product = out.phi * out.phi_associate;
  return out;
}

double hardy_P(double q, const PiecewisePower& h, double t) {
  if (!(q > 0.0)) throw std::invalid_argument("Hardy operator needs q > 0");
  if (!(t > 0.0)) throw std::invalid_argument("Hardy operator needs t > 0");
  return std::pow(h.integrate(q, 0.0, 0.0, t) / t, 1.0 / q);
}

double hardy_P(double q, const StepFunction& fs, double t) {
  return hardy_P(q, PiecewisePower::rearrangement(fs), t);
}

double hardy_Q(double lambda, double q, const PiecewisePower& h, double t) {
  if (!(q > 0.0)) throw std::invalid_argument("Hardy operator needs q > 0");
  if (!(lambda >= 0.0) || !(lambda < 1.0)) throw std::invalid_argument("Q_lambda needs 0 <= lambda < 1");
  if (!(t > 0.0)) throw std::invalid_argument("Hardy operator needs t > 0");
  const double tail = h.integrate(q, lambda - 1.0, t, kInf);
  return std::pow(std::pow(t, -lambda) * tail, 1.0 / q);
}

double hardy_Q(double lambda, double q, const StepFunction& fs, double t) {
  return hardy_Q(lambda, q, PiecewisePower::rearrangement(fs), t);
}

double lp_norm(double p, const PiecewisePower& h) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm needs p > 0");
  return std::pow(h.integrate(p, 0.0), 1.0 / p);
}

double rearrangement_pairing(const StepFunction& f, const StepFunction& h) {
  double total = 0.0;
  double left = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < f.steps() && j < h.steps()) {
    const double right = std::min(f.breakpoints()[i], h.breakpoints()[j]);
    total += f.values()[i] * h.values()[j] * (right - left);
    left = right;
    if (f.breakpoints()[i] == right) ++i;
    if (h.breakpoints()[j] == right) ++j;
  }
  return total;
}

double dilation_norm(const RiSpaceSpec& spec, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dilation needs s > 0");
  std::vector<StepFunction> probes;
  for (double m : {1e-3, 0.1, 1.0, 10.0, 1e3}) probes.push_back(indicator(m));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const int steps = 1 + static_cast<int>(unit(rng) * 30);
    std::vector<double> t(steps), v(steps);
    for (int j = 0; j < steps; ++j) {
      t[j] = std::pow(10.0, -3.0 + 6.0 * unit(rng));
      v[j] = 0.01 + unit(rng);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    v.resize(t.size());
    std::sort(v.begin(), v.end(), std::greater<>());
    probes.emplace_back(std::move(t), std::move(v));
  }
  double best = 0.0;
  for (const auto& f : probes) {
    const double base = norm(spec, f);
    if (base > 0.0) best = std::max(best, norm(spec, f.dilated(s)) / base);
  }
  return best;
}

double boyd_exponent_estimate(const RiSpaceSpec& spec, double s) {
  if (!(s > 0.0) || s == 1.0) throw std::invalid_argument("Boyd exponent needs s > 0, s != 1");
  return std::log(dilation_norm(spec, s)) / std::log(s);
}

}  // namespace hsob
