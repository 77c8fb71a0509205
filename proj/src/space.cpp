#include "hsob/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hsob/parallel.hpp"

namespace hsob {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::linf: return "linf";
    case MetricKind::matrix: return "matrix";
  }
  return "unknown";
}

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "linf") return MetricKind::linf;
  if (name == "matrix") return MetricKind::matrix;
  throw std::invalid_argument("unknown metric '" + name + "' (expected euclidean, linf or matrix)");
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::vector<double> distances, std::vector<double> cumulative)
    : distances_(std::move(distances)), cumulative_(std::move(cumulative)) {
  if (distances_.size() != cumulative_.size())
    throw std::invalid_argument("radial profile: size mismatch");
}

double RadialProfile::open_ball(double r) const {
  const auto it = std::lower_bound(distances_.begin(), distances_.end(), r);
  if (it == distances_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - distances_.begin()) - 1];
}

double RadialProfile::closed_ball(double r) const {
  const auto it = std::upper_bound(distances_.begin(), distances_.end(), r);
  if (it == distances_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - distances_.begin()) - 1];
}

// ---------------------------------------------------------------------------
// DiscreteSpace

struct DiscreteSpace::GeometryCache {
  std::once_flag once;
  double min_nn = 0.0;
  double diameter = 0.0;
};

void DiscreteSpace::validate_weights() {
  if (weights_.empty()) throw std::invalid_argument("discrete space needs at least one point");
  min_atom_mass_ = std::numeric_limits<double>::infinity();
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("discrete space weights must be finite and > 0");
    min_atom_mass_ = std::min(min_atom_mass_, w);
  }
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  cache_ = std::make_shared<GeometryCache>();
}

DiscreteSpace::DiscreteSpace(std::size_t dim, std::vector<double> coords,
                             std::vector<double> weights, MetricKind metric)
    : dim_(dim), metric_(metric), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (metric == MetricKind::matrix)
    throw std::invalid_argument("coordinate space needs a euclidean or linf metric");
  if (dim_ == 0) throw std::invalid_argument("coordinate dimension must be >= 1");
  validate_weights();
  if (coords_.size() != dim_ * weights_.size())
    throw std::invalid_argument("coordinate array does not match weights x dim");
  for (double v : coords_)
    if (!std::isfinite(v)) throw std::invalid_argument("coordinates must be finite");

  // Distinct points: sort row indices lexicographically and compare neighbours.
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(dim_), row(b),
                                        row(b) + static_cast<std::ptrdiff_t>(dim_));
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (std::equal(row(order[k - 1]), row(order[k - 1]) + static_cast<std::ptrdiff_t>(dim_),
                   row(order[k])))
      throw std::invalid_argument("duplicate points " + std::to_string(order[k - 1]) + " and " +
                                  std::to_string(order[k]));
  }
}

DiscreteSpace::DiscreteSpace(std::vector<double> dist, std::vector<double> weights)
    : dim_(0), metric_(MetricKind::matrix), dist_(std::move(dist)), weights_(std::move(weights)) {
  validate_weights();
  const std::size_t n = size();
  if (dist_.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[i * n + i] != 0.0) throw std::invalid_argument("distance matrix diagonal must be 0");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = dist_[i * n + j];
      if (!std::isfinite(a) || a != dist_[j * n + i])
        throw std::invalid_argument("distance matrix must be finite and symmetric");
      if (!(a > 0.0))
        throw std::invalid_argument("distinct points must have positive distance (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
  auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double dik = dist_[i * n + k];
    const double bound = dist_[i * n + j] + dist_[j * n + k];
    if (dik > bound * (1.0 + 1e-12))
      throw std::invalid_argument("triangle inequality fails at (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ", " + std::to_string(k) + ")");
  };
  if (n <= 2000) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check_triple(i, j, k);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int trial = 0; trial < 1'000'000; ++trial) check_triple(pick(rng), pick(rng), pick(rng));
  }
}

std::span<const double> DiscreteSpace::point(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("unknown point id " + std::to_string(i));
  if (!has_coords()) return {};
  return std::span<const double>(coords_).subspan(i * dim_, dim_);
}

double DiscreteSpace::distance(std::size_t i, std::size_t j) const {
  const std::size_t n = size();
  if (i >= n || j >= n)
    throw std::out_of_range("unknown point id " + std::to_string(std::max(i, j)));
  if (metric_ == MetricKind::matrix) return dist_[i * n + j];
  const double* a = coords_.data() + i * dim_;
  const double* b = coords_.data() + j * dim_;
  if (metric_ == MetricKind::linf) {
    double m = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

const DiscreteSpace::GeometryCache& DiscreteSpace::geometry() const {
  std::call_once(cache_->once, [this] {
    const std::size_t n = size();
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    std::vector<double> far(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = distance(i, j);
        nn[i] = std::min(nn[i], d);
        far[i] = std::max(far[i], d);
      }
    });
    cache_->min_nn = n > 1 ? *std::min_element(nn.begin(), nn.end()) : 0.0;
    cache_->diameter = *std::max_element(far.begin(), far.end());
  });
  return *cache_;
}

double DiscreteSpace::min_nn_distance() const { return geometry().min_nn; }
double DiscreteSpace::diameter() const { return geometry().diameter; }

RadialProfile DiscreteSpace::profile(std::size_t center) const {
  const std::size_t n = size();
  if (center >= n) throw std::out_of_range("unknown point id " + std::to_string(center));
  std::vector<std::pair<double, double>> dw(n);
  for (std::size_t j = 0; j < n; ++j) dw[j] = {distance(center, j), weights_[j]};
  std::sort(dw.begin(), dw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> d(n), cum(n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = dw[j].first;
    acc += dw[j].second;
    cum[j] = acc;
  }
  return RadialProfile(std::move(d), std::move(cum));
}

RadiusRange admissible_radii(const DiscreteSpace& space) {
  return {4.0 * space.min_nn_distance(), 0.5 * space.diameter()};
}

// ---------------------------------------------------------------------------
// AnalyticSpace

double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

AnalyticSpace AnalyticSpace::euclidean_lebesgue(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  return AnalyticSpace(Kind::euclidean_lebesgue, dim);
}

AnalyticSpace AnalyticSpace::appendix_plane() { return AnalyticSpace(Kind::appendix_plane, 2); }

std::string AnalyticSpace::name() const {
  if (kind_ == Kind::appendix_plane) return "appendix_plane";
  return "euclidean_lebesgue_" + std::to_string(dim_);
}

void AnalyticSpace::check_point(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", space has " + std::to_string(dim_));
}

double AnalyticSpace::distance(std::span<const double> x, std::span<const double> y) const {
  check_point(x);
  check_point(y);
  if (kind_ == Kind::appendix_plane)
    return std::max(std::abs(x[0] - y[0]), std::abs(x[1] - y[1]));
  double sum = 0.0;
  for (int k = 0; k < dim_; ++k) sum += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(sum);
}

double AnalyticSpace::ball_measure(std::span<const double> x, double r) const {
  check_point(x);
  if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (kind_ == Kind::euclidean_lebesgue) return unit_ball_volume(dim_) * std::pow(r, dim_);
  const double a = x[0];
  double mass = 4.0 * r * r;
  if (std::abs(a) < r) mass += 2.0 * r;
  if (std::abs(1.0 - a) < r) mass += 2.0 * r;
  return mass;
}

double AnalyticSpace::radial_moment(std::span<const double> x, double r, double s) const {
  check_point(x);
  if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (!(s > 0.0)) throw std::invalid_argument("smoothness s must be > 0");
  if (kind_ == Kind::euclidean_lebesgue) {
    // n V_n int_0^r (r - rho)^s rho^(n-1) d rho = n V_n r^(n+s) B(n, s+1)
    const int n = dim_;
    const double beta = std::exp(std::lgamma(n) + std::lgamma(s + 1.0) - std::lgamma(n + s + 1.0));
    return n * unit_ball_volume(n) * std::pow(r, n + s) * beta;
  }
  // Area part: distance push-forward has density 8 rho.
  double total = 8.0 * std::pow(r, s + 2.0) / ((s + 1.0) * (s + 2.0));
  // Each vertical line at horizontal offset h: atom 2h at rho = h, density 2 beyond.
  for (double h : {std::abs(x[0]), std::abs(1.0 - x[0])}) {
    if (h < r) total += 2.0 * h * std::pow(r - h, s) + 2.0 * std::pow(r - h, s + 1.0) / (s + 1.0);
  }
  return total;
}

double ball_measure(const DiscreteSpace& space, std::size_t x, double r) {
  if (x >= space.size()) throw std::out_of_range("unknown point id " + std::to_string(x));
  if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
  double mass = 0.0;
  for (std::size_t j = 0; j < space.size(); ++j)
    if (space.distance(x, j) < r) mass += space.weight(j);
  return mass;
}

double ball_measure(const AnalyticSpace& space, std::span<const double> x, double r) {
  return space.ball_measure(x, r);
}

// ---------------------------------------------------------------------------
// Diagnostics

namespace {

void require_nonempty(std::size_t centers, std::size_t grid, const char* what) {
  if (centers == 0 || grid == 0) throw std::invalid_argument(std::string(what) + ": empty probe set");
}

void require_positive(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be > 0");
}

// Shared probe loop; `measure(k, r)` evaluates the ball around center k.
template <class Measure>
GrowthCertificate growth_probe(double alpha, std::size_t centers, std::span<const double> radii,
                               Measure&& measure) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  require_nonempty(centers, radii.size(), "lower_bound_probe");
  require_positive(radii, "radius");
  GrowthCertificate cert;
  cert.alpha = alpha;
  cert.probe_log.resize(centers * radii.size());
  parallel_for(centers, [&](std::size_t k) {
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double r = radii[j];
      const double m = measure(k, r);
      cert.probe_log[k * radii.size() + j] = {k, r, m, m / std::pow(r, alpha)};
    }
  });
  cert.worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& p : cert.probe_log) cert.worst_ratio = std::min(cert.worst_ratio, p.ratio);
  cert.b = cert.worst_ratio;
  return cert;
}

template <class Measure>
DoublingReport doubling_probe(std::size_t centers, std::span<const double> radii,
                              Measure&& measure) {
  require_nonempty(centers, radii.size(), "doubling_check");
  require_positive(radii, "radius");
  DoublingReport report;
  report.probes.resize(centers * radii.size());
  parallel_for(centers, [&](std::size_t k) {
    for (std::size_t j = 0; j < radii.size(); ++j) {
      DoublingProbe p;
      p.center = k;
      p.radius = radii[j];
      p.inner = measure(k, radii[j]);
      p.outer = measure(k, 2.0 * radii[j]);
      p.skipped = !(p.inner > 0.0);
      p.ratio = p.skipped ? 0.0 : p.outer / p.inner;
      report.probes[k * radii.size() + j] = p;
    }
  });
  for (const auto& p : report.probes) {
    if (p.skipped) {
      ++report.skipped;
    } else {
      report.constant = std::max(report.constant, p.ratio);
    }
  }
  return report;
}

void finish(ContinuityReport& report) {
  report.all_ok = true;
  report.max_required_c = 1.0;
  for (const auto& p : report.probes) {
    report.all_ok = report.all_ok && p.success;
    report.max_required_c = std::max(report.max_required_c, p.required_c);
  }
}

}  // namespace

GrowthCertificate lower_bound_probe(const DiscreteSpace& space, double alpha,
                                    std::span<const std::size_t> centers,
                                    std::span<const double> radii) {
  for (auto x : centers)
    if (x >= space.size()) throw std::out_of_range("unknown point id " + std::to_string(x));
  return growth_probe(alpha, centers.size(), radii, [&](std::size_t k, double r) {
    return ball_measure(space, centers[k], r);
  });
}

GrowthCertificate lower_bound_probe(const AnalyticSpace& space, double alpha,
                                    std::span<const Coord> centers,
                                    std::span<const double> radii) {
  return growth_probe(alpha, centers.size(), radii, [&](std::size_t k, double r) {
    return space.ball_measure(centers[k], r);
  });
}

ContinuityReport almost_continuity_check(const DiscreteSpace& space, double c,
                                         std::span<const double> t_grid,
                                         std::span<const std::size_t> centers) {
  if (!(c > 1.0)) throw std::invalid_argument("almost-continuity constant c must be > 1");
  require_nonempty(centers.size(), t_grid.size(), "almost_continuity_check");
  require_positive(t_grid, "t");
  for (double t : t_grid)
    if (t > space.total_mass())
      throw std::invalid_argument("t = " + std::to_string(t) + " exceeds the total mass " +
                                  std::to_string(space.total_mass()));
  for (auto x : centers)
    if (x >= space.size()) throw std::out_of_range("unknown point id " + std::to_string(x));

  ContinuityReport report;
  report.c = c;
  report.probes.resize(centers.size() * t_grid.size());
  parallel_for(centers.size(), [&](std::size_t k) {
    const RadialProfile prof = space.profile(centers[k]);
    const auto d = prof.distances();
    const auto cum = prof.cumulative();
    const std::size_t n = d.size();
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      const double t = t_grid[j];
      // First atom whose closed ball reaches t, then the end of its tie group.
      std::size_t first = static_cast<std::size_t>(
          std::lower_bound(cum.begin(), cum.end(), t) - cum.begin());
      if (first == n) first = n - 1;  // rounding in the running sum
      std::size_t group_begin = first;
      while (group_begin > 0 && d[group_begin - 1] == d[first]) --group_begin;
      std::size_t group_end = first;
      while (group_end + 1 < n && d[group_end + 1] == d[first]) ++group_end;

      ContinuityProbe p;
      p.center = k;
      p.t = t;
      p.mass_above = cum[group_end];
      p.mass_below = group_begin > 0 ? cum[group_begin - 1] : 0.0;
      p.radius = group_end + 1 < n ? d[group_end + 1] : (d[group_end] > 0 ? 2.0 * d[group_end] : 1.0);
      p.required_c = std::max(1.0, p.mass_above / t);
      p.success = p.mass_above <= c * t;
      report.probes[k * t_grid.size() + j] = p;
    }
  });
  finish(report);
  return report;
}

ContinuityReport almost_continuity_check(const AnalyticSpace& space, double c,
                                         std::span<const double> t_grid,
                                         std::span<const Coord> centers) {
  if (!(c > 1.0)) throw std::invalid_argument("almost-continuity constant c must be > 1");
  require_nonempty(centers.size(), t_grid.size(), "almost_continuity_check");
  require_positive(t_grid, "t");

  ContinuityReport report;
  report.c = c;
  report.probes.resize(centers.size() * t_grid.size());
  parallel_for(centers.size(), [&](std::size_t k) {
    const Coord& x = centers[k];
    auto m = [&](double r) { return space.ball_measure(x, r); };
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      const double t = t_grid[j];
      // Bracket the crossing: m(lo) < t <= m(hi).
      double hi = 1.0;
      while (m(hi) < t) hi *= 2.0;
      double lo = 0.5 * hi;
      while (m(lo) >= t && lo > 1e-300) lo *= 0.5;
      while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (m(mid) < t) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      ContinuityProbe p;
      p.center = k;
      p.t = t;
      p.radius = hi;
      p.mass_below = m(lo);
      p.mass_above = m(hi);
      p.required_c = std::max(1.0, p.mass_above / t);
      p.success = p.mass_above <= c * t;
      report.probes[k * t_grid.size() + j] = p;
    }
  });
  finish(report);
  return report;
}

DoublingReport doubling_check(const DiscreteSpace& space, std::span<const std::size_t> centers,
                              std::span<const double> radii) {
  std::vector<RadialProfile> profiles;
  profiles.reserve(centers.size());
  for (auto x : centers) profiles.push_back(space.profile(x));
  return doubling_probe(centers.size(), radii, [&](std::size_t k, double r) {
    return profiles[k].open_ball(r);
  });
}

DoublingReport doubling_check(const AnalyticSpace& space, std::span<const Coord> centers,
                              std::span<const double> radii) {
  return doubling_probe(centers.size(), radii, [&](std::size_t k, double r) {
    return space.ball_measure(centers[k], r);
  });
}

}  // namespace hsob
