#include "hsob/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hsob/errors.hpp"

namespace hsob {

WeightedSample::WeightedSample(std::vector<double> v, std::vector<double> w)
    : values(std::move(v)), weights(std::move(w)) {
  validate();
}

double WeightedSample::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void WeightedSample::validate() const {
  if (values.size() != weights.size())
    throw std::invalid_argument("sample has " + std::to_string(values.size()) + " values but " +
                                std::to_string(weights.size()) + " weights");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and > 0");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("function values must be finite");
}

// ---------------------------------------------------------------------------

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size())
    throw std::invalid_argument("step function: breakpoints and values differ in length");
  double prev_t = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double t = breakpoints[j];
    const double v = values[j];
    if (!(t > prev_t) || !std::isfinite(t))
      throw std::invalid_argument("step function breakpoints must be finite and increasing");
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("step function values must be finite and >= 0");
    if (!values_.empty() && v > values_.back())
      throw std::invalid_argument("step function values must be nonincreasing");
    prev_t = t;
    if (v == 0.0) break;
    if (!values_.empty() && v == values_.back()) {
      breakpoints_.back() = t;
    } else {
      breakpoints_.push_back(t);
      values_.push_back(v);
    }
  }
  build_prefix();
}

void StepFunction::build_prefix() {
  const std::size_t k = values_.size();
  prefix_.assign(k + 1, 0.0);
  osc_mass_.assign(k + 1, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    prefix_[j + 1] = prefix_[j] + values_[j] * (breakpoints_[j] - step_begin(j));
    const double next = j + 1 < k ? values_[j + 1] : 0.0;
    osc_mass_[j + 1] = osc_mass_[j] + (values_[j] - next) * breakpoints_[j];
  }
}

std::size_t StepFunction::locate(double t) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                                  breakpoints_.begin());
}

double StepFunction::operator()(double t) const {
  if (t < 0.0) throw std::invalid_argument("f* is defined on [0, inf)");
  const std::size_t j = locate(t);
  return j < values_.size() ? values_[j] : 0.0;
}

double StepFunction::integral(double t) const {
  if (t < 0.0) throw std::invalid_argument("integral upper limit must be >= 0");
  const std::size_t j = locate(t);
  if (j >= values_.size()) return prefix_.back();
  return prefix_[j] + values_[j] * (t - step_begin(j));
}

double StepFunction::double_star(double t) const {
  if (t < 0.0) throw std::invalid_argument("f** needs t >= 0");
  if (t == 0.0) return sup();
  return integral(t) / t;
}

double StepFunction::oscillation_mass(double t) const {
  if (t < 0.0) throw std::invalid_argument("oscillation needs t >= 0");
  return osc_mass_[locate(t)];
}

double StepFunction::oscillation(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("oscillation needs t > 0");
  return oscillation_mass(t) / t;
}

double StepFunction::level_measure(double lambda) const {
  const auto above = std::partition_point(values_.begin(), values_.end(),
                                          [lambda](double v) { return v > lambda; });
  const auto j = static_cast<std::size_t>(above - values_.begin());
  return j == 0 ? 0.0 : breakpoints_[j - 1];
}

StepFunction StepFunction::pow(double p) const {
  if (!(p > 0.0)) throw std::invalid_argument("power must be > 0");
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(),
                 [p](double x) { return std::pow(x, p); });
  return StepFunction(breakpoints_, std::move(v));
}

StepFunction StepFunction::scaled(double c) const {
  const double a = std::abs(c);
  if (a == 0.0) return {};
  std::vector<double> v(values_);
  for (auto& x : v) x *= a;
  return StepFunction(breakpoints_, std::move(v));
}

StepFunction StepFunction::dilated(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("dilation factor must be > 0");
  std::vector<double> t(breakpoints_);
  for (auto& x : t) x *= s;
  return StepFunction(std::move(t), values_);
}

// ---------------------------------------------------------------------------

double distribution(const WeightedSample& f, double lambda) {
  f.validate();
  if (lambda < 0.0) throw std::invalid_argument("distribution level must be >= 0");
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.values[i]) > lambda) mass += f.weights[i];
  return mass;
}

StepFunction decreasing_rearrangement(const WeightedSample& f) {
  f.validate();
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(f.values[a]) > std::abs(f.values[b]);
  });
  std::vector<double> breaks;
  std::vector<double> values;
  double acc = 0.0;
  for (std::size_t idx : order) {
    const double v = std::abs(f.values[idx]);
    if (v == 0.0) break;
    acc += f.weights[idx];
    if (!values.empty() && values.back() == v) {
      breaks.back() = acc;
    } else {
      breaks.push_back(acc);
      values.push_back(v);
    }
  }
  return StepFunction(std::move(breaks), std::move(values));
}

double double_star(const StepFunction& fs, double t) { return fs.double_star(t); }

double oscillation(const WeightedSample& f, double t) {
  return oscillation(f, decreasing_rearrangement(f), t);
}

double oscillation(const WeightedSample& f, const StepFunction& fs, double t) {
  const double total = f.total_mass();
  if (!(t > 0.0) || t > total * (1.0 + 1e-12))
    throw std::invalid_argument("oscillation needs 0 < t <= total mass");

  const double from_steps = fs.oscillation(t);

  const double level = fs(t);
  double excess = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f.values[i]);
    if (a > level) excess += f.weights[i] * (a - level);
  }
  const double from_samples = excess / t;

  const double scale = std::max(fs.double_star(t), std::abs(from_steps));
  if (std::abs(from_steps - from_samples) > 1e-10 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "oscillation routes disagree at t=" << t << ": " << from_steps << " vs "
        << from_samples;
    throw ConsistencyError(msg.str());
  }
  return from_steps;
}

WeightedSample abs_pow(const WeightedSample& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("power must be > 0");
  WeightedSample out;
  out.weights = f.weights;
  out.values.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::pow(std::abs(f.values[i]), p);
  return out;
}

}  // namespace hsob
