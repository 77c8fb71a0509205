#pragma once

/// Deterministic generators for spaces and sample functions.

#include <array>
#include <cstdint>
#include <vector>

#include "hsob/space.hpp"

namespace hsob {

/// n^dim cell centers of the cube [lo, hi]^dim, each weighted by the cell
/// volume.
DiscreteSpace grid_space(int dim, int n, double lo = 0.0, double hi = 1.0,
                         MetricKind metric = MetricKind::euclidean);

/// n uniform points in [lo, hi]^dim with equal weights summing to the cube
/// volume.
DiscreteSpace random_cloud(int dim, int n, std::uint64_t seed, double lo = 0.0, double hi = 1.0,
                           MetricKind metric = MetricKind::euclidean);

/// Discretization of the two-line plane measure on the window
/// [x0, x1] x [y0, y1]: cell centers of an N-per-unit grid weighted 1/N^2,
/// plus points spaced 1/N on the lines x = 0 and x = 1 weighted 1/N.
/// Uses the l-infinity metric.
DiscreteSpace appendix_plane_sample(int per_unit, std::array<double, 4> window);

/// Sum of `count` Gaussian bumps with seeded centers (inside the bounding
/// box of the points), widths and signed amplitudes.  Needs coordinates.
std::vector<double> random_bumps(const DiscreteSpace& space, int count, std::uint64_t seed);

}  // namespace hsob
