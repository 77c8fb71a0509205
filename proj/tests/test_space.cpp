#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hsob/generate.hpp"
#include "hsob/space.hpp"

using namespace hsob;

namespace {

double brute_ball(const DiscreteSpace& s, std::size_t x, double r) {
  double m = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (s.distance(x, j) < r) m += s.weight(j);
  return m;
}

// Monte-Carlo estimate of the two-line plane measure of the open linf ball.
double monte_carlo_plane(double a, double b, double r, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double box = 2.0 * r;
  int inside = 0;
  for (int k = 0; k < samples; ++k) {
    const double dx = box * u(rng), dy = box * u(rng);
    if (std::max(std::abs(dx), std::abs(dy)) < r) ++inside;
  }
  double mass = inside / double(samples) * (2 * box) * (2 * box);
  for (double line : {0.0, 1.0}) {
    int hits = 0;
    for (int k = 0; k < samples; ++k) {
      const double y = b + box * u(rng);
      if (std::max(std::abs(line - a), std::abs(y - b)) < r) ++hits;
    }
    mass += hits / double(samples) * 2 * box;
  }
  return mass;
}

}  // namespace

TEST_CASE("euclidean lebesgue balls") {
  const auto plane = AnalyticSpace::euclidean_lebesgue(2);
  const Coord origin{0.0, 0.0};
  CHECK(ball_measure(plane, origin, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  const auto line = AnalyticSpace::euclidean_lebesgue(1);
  CHECK(line.ball_measure(std::vector<double>{3.0}, 0.5) == doctest::Approx(1.0));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
  CHECK_THROWS_AS(ball_measure(plane, origin, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_measure(plane, Coord{1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("two-line plane closed form") {
  const auto plane = AnalyticSpace::appendix_plane();
  CHECK(plane.ball_measure(std::vector<double>{0.5, 0.0}, 0.25) == doctest::Approx(0.25));
  CHECK(plane.ball_measure(std::vector<double>{0.001, 0.0}, 0.002) ==
        doctest::Approx(0.000016 + 0.004).epsilon(1e-14));
  // open ball: at r = |a| the line is not yet inside
  CHECK(plane.ball_measure(std::vector<double>{0.1, 0.0}, 0.1) == doctest::Approx(0.04));
  CHECK(plane.ball_measure(std::vector<double>{0.1, 0.0}, std::nextafter(0.1, 1.0)) ==
        doctest::Approx(0.04 + 0.2));

  std::mt19937_64 rng(3);
  const double cases[][3] = {{0.5, 0.0, 0.25}, {0.001, 0.0, 0.002}, {0.3, 1.0, 0.8}, {-0.2, 5.0, 1.5}};
  for (const auto& c : cases) {
    const double exact = plane.ball_measure(std::vector<double>{c[0], c[1]}, c[2]);
    const double mc = monte_carlo_plane(c[0], c[1], c[2], rng, 400000);
    CHECK(mc == doctest::Approx(exact).epsilon(0.02));
  }
}

TEST_CASE("discrete ball measure is open and steps at the sorted distances") {
  const auto s = random_cloud(2, 60, 11);
  for (std::size_t x : {0u, 17u, 59u}) {
    const auto prof = s.profile(x);
    double prev = 0.0;
    for (double d : prof.distances()) {
      if (d == 0.0) continue;
      const double at = ball_measure(s, x, d);
      const double above = ball_measure(s, x, std::nextafter(d, 10.0));
      CHECK(at == doctest::Approx(brute_ball(s, x, d)).epsilon(1e-14));
      CHECK(above == doctest::Approx(brute_ball(s, x, std::nextafter(d, 10.0))).epsilon(1e-14));
      CHECK(above > at);
      CHECK(at >= prev);
      prev = above;
    }
  }
  CHECK_THROWS_AS(ball_measure(s, 60, 1.0), std::out_of_range);
  CHECK_THROWS_AS(ball_measure(s, 0, -1.0), std::invalid_argument);
}

TEST_CASE("matrix metric validation") {
  CHECK_NOTHROW(DiscreteSpace({0, 1, 2, 1, 0, 1, 2, 1, 0}, {1, 1, 1}));
  CHECK_THROWS_AS(DiscreteSpace({0, 1, 3, 1, 0, 1, 3, 1, 0}, {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteSpace({0, 1, 2, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteSpace({0, 0, 0, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteSpace({0, 1, 1, 0}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteSpace(2, {0, 0, 0, 0}, {1, 1}, MetricKind::euclidean), std::invalid_argument);
}

TEST_CASE("lower bound probe") {
  const auto plane = AnalyticSpace::euclidean_lebesgue(2);
  const std::vector<Coord> centers{{0, 0}, {3, -1}};
  const std::vector<double> radii{0.1, 1.0, 7.0};
  const auto cert = lower_bound_probe(plane, 2.0, centers, radii);
  CHECK(cert.worst_ratio == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(cert.probe_log.size() == 6);

  const auto two_line = AnalyticSpace::appendix_plane();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Coord> pc;
  for (int k = 0; k < 50; ++k) pc.push_back({u(rng), u(rng)});
  const std::vector<double> pr{1e-3, 0.01, 0.3, 2.0, 10.0};
  const auto pcert = lower_bound_probe(two_line, 2.0, pc, pr);
  CHECK(pcert.worst_ratio >= 0.25);
  double mn = 1e300;
  for (const auto& p : pcert.probe_log) mn = std::min(mn, p.ratio);
  CHECK(pcert.worst_ratio == mn);

  const auto grid = grid_space(2, 32, 0.0, 1.0);
  const double h = 1.0 / 32;
  std::vector<std::size_t> gc;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    if (p[0] > 0.3 && p[0] < 0.7 && p[1] > 0.3 && p[1] < 0.7 && i % 7 == 0) gc.push_back(i);
  }
  const std::vector<double> gr{4 * h, 5.5 * h, 7 * h, 0.25};
  const auto gcert = lower_bound_probe(grid, 2.0, gc, gr);
  double oracle = 1e300;
  for (auto x : gc)
    for (double r : gr) oracle = std::min(oracle, brute_ball(grid, x, r) / (r * r));
  CHECK(gcert.worst_ratio == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(gcert.worst_ratio / std::numbers::pi - 1.0) <= 0.25);

  CHECK_THROWS(lower_bound_probe(plane, 2.0, std::vector<Coord>{}, radii));
}

TEST_CASE("almost continuity") {
  const auto plane = AnalyticSpace::euclidean_lebesgue(2);
  const std::vector<double> ts{1e-6, 0.3, 5.0, 1e4};
  const std::vector<Coord> centers{{0, 0}, {1, 2}};
  CHECK(almost_continuity_check(plane, 1.01, ts, centers).all_ok);

  const auto two_line = AnalyticSpace::appendix_plane();
  const double a = 0.001;
  const std::vector<double> t1{1e-4};
  const std::vector<Coord> c1{{a, 0.0}};
  const auto rep = almost_continuity_check(two_line, 2.0, t1, c1);
  CHECK_FALSE(rep.all_ok);
  REQUIRE(rep.probes.size() == 1);
  CHECK(rep.probes[0].mass_above == doctest::Approx(4 * a * a + 2 * a).epsilon(1e-6));
  CHECK(rep.probes[0].mass_below == doctest::Approx(4 * a * a).epsilon(1e-6));
  CHECK(rep.max_required_c == doctest::Approx((4 * a * a + 2 * a) / 1e-4).epsilon(1e-6));
  CHECK_THROWS_AS(almost_continuity_check(plane, 1.0, ts, centers), std::invalid_argument);

  // a doubling grid is almost continuous with c equal to its doubling constant
  const auto grid = grid_space(2, 16, 0.0, 1.0);
  std::vector<std::size_t> all(grid.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<double> radii;
  for (double r = grid.min_nn_distance() * 0.999; r < grid.diameter(); r *= 1.1) radii.push_back(r);
  const auto dbl = doubling_check(grid, all, radii);
  std::vector<double> masses;
  for (double t = grid.min_atom_mass(); t <= grid.total_mass() / 2; t *= 1.3) masses.push_back(t);
  const auto cont = almost_continuity_check(grid, dbl.constant, masses, all);
  CHECK(cont.all_ok);
  CHECK_THROWS_AS(almost_continuity_check(grid, 2.0, std::vector<double>{2.0}, all), std::invalid_argument);
}

TEST_CASE("doubling") {
  for (int n : {1, 2, 3}) {
    const auto e = AnalyticSpace::euclidean_lebesgue(n);
    const std::vector<Coord> centers{Coord(n, 0.0), Coord(n, 1.5)};
    const std::vector<double> radii{0.01, 1.0, 100.0};
    CHECK(doubling_check(e, centers, radii).constant == doctest::Approx(std::pow(2.0, n)).epsilon(1e-12));
  }
  const auto grid = grid_space(2, 48, 0.0, 1.0);
  const double h = 1.0 / 48;
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    if (std::abs(p[0] - 0.5) < 0.05 && std::abs(p[1] - 0.5) < 0.05) centers.push_back(i);
  }
  const std::vector<double> radii{4 * h, 5 * h, 6.5 * h, 8 * h};
  const auto rep = doubling_check(grid, centers, radii);
  double oracle = 0.0;
  for (auto x : centers)
    for (double r : radii) oracle = std::max(oracle, brute_ball(grid, x, 2 * r) / brute_ball(grid, x, r));
  CHECK(rep.constant == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(rep.constant / 4.0 - 1.0) <= 0.30);

  // near the line the two-line plane doubles badly at matched radii
  const auto two_line = AnalyticSpace::appendix_plane();
  double prev = 0.0;
  for (double a : {1e-1, 1e-2, 1e-3}) {
    const std::vector<Coord> c{{a, 0.0}};
    const std::vector<double> r{0.75 * a};
    const double cd = doubling_check(two_line, c, r).constant;
    CHECK(cd > prev);
    prev = cd;
  }
}

TEST_CASE("admissible radii") {
  const auto grid = grid_space(2, 10, 0.0, 1.0);
  const auto range = admissible_radii(grid);
  CHECK(range.lo == doctest::Approx(0.4));
  CHECK(range.hi == doctest::Approx(std::sqrt(2.0) * 0.9 / 2));
  CHECK(range.contains(0.5));
  CHECK_FALSE(range.contains(0.1));
}
