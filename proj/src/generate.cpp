#include "hsob/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace hsob {

namespace {

int cells_on(double lo, double hi, int per_unit, const char* axis) {
  const double exact = (hi - lo) * per_unit;
  const int n = static_cast<int>(std::lround(exact));
  if (n <= 0 || std::abs(exact - n) > 1e-9 * std::max(1.0, exact))
    throw std::invalid_argument(std::string("window ") + axis +
                                " extent times points-per-unit must be a positive integer");
  return n;
}

}  // namespace

DiscreteSpace grid_space(int dim, int n, double lo, double hi, MetricKind metric) {
  if (dim < 1) throw std::invalid_argument("grid dimension must be >= 1");
  if (n < 1) throw std::invalid_argument("grid needs at least one point per axis");
  if (!(hi > lo)) throw std::invalid_argument("grid needs lo < hi");
  if (metric == MetricKind::matrix) throw std::invalid_argument("grid spaces use a coordinate metric");
  const double h = (hi - lo) / n;
  std::size_t count = 1;
  for (int d = 0; d < dim; ++d) count *= static_cast<std::size_t>(n);
  std::vector<double> coords;
  coords.reserve(count * static_cast<std::size_t>(dim));
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t k = 0; k < count; ++k) {
    for (int d = 0; d < dim; ++d) coords.push_back(lo + (idx[static_cast<std::size_t>(d)] + 0.5) * h);
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < n) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return DiscreteSpace(static_cast<std::size_t>(dim), std::move(coords),
                       std::vector<double>(count, std::pow(h, dim)), metric);
}

DiscreteSpace random_cloud(int dim, int n, std::uint64_t seed, double lo, double hi,
                           MetricKind metric) {
  if (dim < 1) throw std::invalid_argument("cloud dimension must be >= 1");
  if (n < 1) throw std::invalid_argument("cloud needs at least one point");
  if (!(hi > lo)) throw std::invalid_argument("cloud needs lo < hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(lo, hi);
  std::vector<double> coords(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim));
  for (auto& x : coords) x = coord(rng);
  const double mass = std::pow(hi - lo, dim) / n;
  return DiscreteSpace(static_cast<std::size_t>(dim), std::move(coords),
                       std::vector<double>(static_cast<std::size_t>(n), mass), metric);
}

DiscreteSpace appendix_plane_sample(int per_unit, std::array<double, 4> window) {
  if (per_unit < 1) throw std::invalid_argument("points per unit must be >= 1");
  const auto [x0, x1, y0, y1] = window;
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("window needs x0 < x1 and y0 < y1");
  const int nx = cells_on(x0, x1, per_unit, "x");
  const int ny = cells_on(y0, y1, per_unit, "y");
  const double h = 1.0 / per_unit;
  std::vector<double> coords;
  std::vector<double> weights;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      coords.push_back(x0 + (i + 0.5) * h);
      coords.push_back(y0 + (j + 0.5) * h);
      weights.push_back(h * h);
    }
  for (double line : {0.0, 1.0}) {
    if (line < x0 || line >= x1) continue;
    const double offset = (line - x0) * per_unit - 0.5;
    if (std::abs(offset - std::round(offset)) < 1e-9)
      throw std::invalid_argument("line x = " + std::to_string(line) +
                                  " falls on cell centers; shift the window");
    for (int j = 0; j < ny; ++j) {
      coords.push_back(line);
      coords.push_back(y0 + (j + 0.5) * h);
      weights.push_back(h);
    }
  }
  return DiscreteSpace(2, std::move(coords), std::move(weights), MetricKind::linf);
}

std::vector<double> random_bumps(const DiscreteSpace& space, int count, std::uint64_t seed) {
  if (!space.has_coords()) throw std::invalid_argument("random bumps need a coordinate space");
  if (count < 1) throw std::invalid_argument("need at least one bump");
  const std::size_t dim = space.dim();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto p = space.point(i);
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  double extent = 0.0;
  for (std::size_t d = 0; d < dim; ++d) extent = std::max(extent, hi[d] - lo[d]);
  if (extent == 0.0) extent = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Bump {
    std::vector<double> center;
    double width;
    double amplitude;
  };
  std::vector<Bump> bumps(static_cast<std::size_t>(count));
  for (auto& b : bumps) {
    b.center.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) b.center[d] = lo[d] + unit(rng) * (hi[d] - lo[d]);
    b.width = extent * (0.05 + 0.25 * unit(rng));
    b.amplitude = 2.0 * unit(rng) - 1.0;
  }
  std::vector<double> f(space.size(), 0.0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto p = space.point(i);
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (std::size_t d = 0; d < dim; ++d) r2 += (p[d] - b.center[d]) * (p[d] - b.center[d]);
      f[i] += b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width));
    }
  }
  return f;
}

}  // namespace hsob
