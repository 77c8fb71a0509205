#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "hsob/generate.hpp"
#include "hsob/hajlasz.hpp"
#include "hsob/verify.hpp"
#include "support.hpp"

using namespace hsob;
using hsob::testing::quad;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Average of the largest values of v (weights w) over a set of mass t.
double top_average(std::vector<double> v, std::vector<double> w, double t) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] > v[b]; });
  double mass = 0.0, acc = 0.0;
  for (auto i : idx) {
    const double take = std::min(w[i], t - mass);
    if (take <= 0.0) break;
    acc += take * v[i];
    mass += take;
  }
  return acc / t;
}

double value_at(std::vector<double> v, std::vector<double> w, double t) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] > v[b]; });
  double mass = 0.0;
  for (auto i : idx) {
    mass += w[i];
    if (mass > t) return v[i];
  }
  return 0.0;
}

double measured_c(const DiscreteSpace& space) {
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < space.size(); i += 37) centers.push_back(i);
  auto grid = default_t_grid(space, 64);
  const auto rep = almost_continuity_check(space, 1e6, grid, centers);
  return rep.max_required_c;
}

}  // namespace

TEST_CASE("admissible masses and default grid") {
  const auto grid = grid_space(2, 10, 0.0, 1.0);
  const auto range = admissible_masses(grid);
  CHECK(range.lo == doctest::Approx(0.1));
  CHECK(range.hi == doctest::Approx(0.5));
  const auto t = default_t_grid(grid, 64);
  REQUIRE(t.size() == 64);
  CHECK(t.front() == range.lo);
  CHECK(t.back() == range.hi);
  for (std::size_t k = 1; k + 1 < t.size(); ++k)
    CHECK(t[k + 1] / t[k] == doctest::Approx(t[1] / t[0]).epsilon(1e-12));
  CHECK_THROWS_AS(default_t_grid(grid_space(1, 4), 8), std::invalid_argument);
}

TEST_CASE("oscillation report on constants and test functions") {
  const auto space = grid_space(2, 32, 0.0, 2.0);
  const std::vector<double> cst(space.size(), 1.7);
  const std::vector<double> zero(space.size(), 0.0);
  const auto flat = oscillation_inequality_report(space, cst, zero, 1.0, 2.0, 1.0, 1.5);
  CHECK(flat.pass);
  CHECK(flat.empirical_constant == 0.0);
  for (double x : flat.lhs) CHECK(x == 0.0);

  const double c = measured_c(space);
  CHECK(c >= 1.0);
  const std::size_t x0 = 16 * 32 + 16;
  const auto pair = test_function(space, x0, 0.7, 1.0);
  const auto rep = oscillation_inequality_report(space, pair.f, pair.g, 1.0, 2.0, 1.0, c);
  CHECK(rep.pass);
  CHECK(rep.theoretical_constant == doctest::Approx(c * std::pow(2.0, 1.5)));
  CHECK(rep.formula == "(c*2^(s/alpha+1))^(1/p)");

  // lhs and rhs against a sort-based oracle
  const std::vector<double> w(space.weights().begin(), space.weights().end());
  for (double p : {0.5, 1.0}) {
    std::vector<double> fp(pair.f.size()), gp(pair.g.size());
    for (std::size_t i = 0; i < fp.size(); ++i) {
      fp[i] = std::pow(std::abs(pair.f[i]), p);
      gp[i] = std::pow(pair.g[i], p);
    }
    const auto r = oscillation_inequality_report(space, pair.f, pair.g, 1.0, 2.0, p, c);
    for (std::size_t k = 0; k < r.t_grid.size(); k += 7) {
      const double t = r.t_grid[k];
      const double lhs = std::pow(top_average(fp, w, t) - value_at(fp, w, t), 1 / p);
      const double rhs = std::pow(t, 0.5) * std::pow(top_average(gp, w, t), 1 / p);
      CHECK(r.lhs[k] == doctest::Approx(lhs).epsilon(1e-9).scale(1e-12));
      CHECK(r.rhs[k] == doctest::Approx(rhs).epsilon(1e-12));
      if (r.lhs[k] > 0.0) CHECK(r.rhs[k] > 0.0);
    }
  }
}

TEST_CASE("oscillation report rejects bad input") {
  const auto space = grid_space(2, 16, 0.0, 1.0);
  const auto pair = test_function(space, 8 * 16 + 8, 0.3, 1.0);
  CHECK_THROWS_AS(oscillation_inequality_report(space, pair.f, pair.g, 1.0, 2.0, 1.5, 2.0), std::invalid_argument);
  std::vector<double> weak(pair.g);
  for (auto& x : weak) x *= 0.1;
  CHECK_THROWS_AS(oscillation_inequality_report(space, pair.f, weak, 1.0, 2.0, 1.0, 2.0), std::invalid_argument);
  const std::vector<double> outside{space.total_mass()};
  CHECK_THROWS_AS(oscillation_inequality_report(space, pair.f, pair.g, 1.0, 2.0, 1.0, 2.0, outside),
                  std::invalid_argument);
}

TEST_CASE("converse bound integral") {
  for (double sigma : {0.25, 0.5, 1.0, 1.5})
    for (double m : {0.01, 1.0, 30.0}) {
      const double oracle = quad([&](double t) { return std::pow(t, sigma - 1); }, 0.0, m) +
                            quad([&](double t) { return std::pow(t, sigma - 2) * m; }, m, 2 * m);
      CHECK(rel(converse_rhs_integral(m, sigma), oracle) <= 1e-8);
    }
}

TEST_CASE("converse probe on euclidean spaces") {
  for (int n : {1, 2}) {
    const auto space = AnalyticSpace::euclidean_lebesgue(n);
    const double s = 1.0;
    std::vector<AnalyticProbe> probes;
    for (double r : {0.25, 0.5, 1.0, 2.0}) probes.push_back({Coord(n, 0.3), r});
    const auto rep = converse_probe(space, s, double(n), probes);
    CHECK(rep.all_checks_ok);
    CHECK(std::abs(rep.fitted_alpha / n - 1.0) <= 0.05);
    CHECK(rep.growth_slope == doctest::Approx(double(n)).epsilon(1e-10));
    CHECK(rep.c_prime_spread <= 1.2);
    for (const auto& row : rep.rows) {
      // ||f||_1 = int_0^r (r - rho)^s d(omega rho^n)
      const double omega = unit_ball_volume(n);
      const double l1 = quad([&](double rho) { return std::pow(row.radius - rho, s) * omega * n * std::pow(rho, n - 1); },
                             0.0, row.radius);
      CHECK(rel(row.l1_norm, l1) <= 1e-9);
      CHECK(rel(row.lhs, std::pow(row.radius, s) - l1 / (2 * row.mass)) <= 1e-9);
      CHECK(row.lhs >= std::pow(row.radius, s) / 2);
      CHECK(row.lhs_identity == row.lhs);
    }
  }
  CHECK_THROWS_AS(converse_probe(AnalyticSpace::euclidean_lebesgue(1), 1.5, 1.0, std::vector<AnalyticProbe>{}),
                  std::invalid_argument);
}

TEST_CASE("converse probe on a grid") {
  const auto space = grid_space(2, 48, 0.0, 2.0);
  const std::size_t x0 = 24 * 48 + 24;
  std::vector<DiscreteProbe> probes;
  for (double r : {0.01, 0.2, 0.3, 0.45, 0.6}) probes.push_back({x0, r});
  const auto rep = converse_probe(space, 0.5, 2.0, probes);
  CHECK(rep.rows[0].skipped);  // below grid resolution
  CHECK(rep.used == 4);
  CHECK(rep.all_checks_ok);
  for (const auto& row : rep.rows) {
    if (row.skipped) continue;
    CHECK(rel(row.lhs_identity, row.lhs) <= 1e-10);
    CHECK(row.l1_ok);
    CHECK(row.half_bound_ok);
  }
}

TEST_CASE("embedding case selection") {
  const auto space = grid_space(1, 64, 0.0, 4.0);
  std::mt19937_64 rng(3);
  const auto f = random_bumps(space, 3, 5);
  const auto g = canonical_gradient(space, f, 1.0);
  CHECK(embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::lp(4.0 / 3)).case_id == "1a");
  CHECK(embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::lp(2)).case_id == "1b");
  CHECK(embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::lp(4)).case_id == "1c");
  CHECK(embedding_report(space, f, g, 1.0, 1.0, RiSpaceSpec::weak_linf()).case_id == "2");
  const auto g15 = canonical_gradient(space, f, 1.5);
  CHECK(embedding_report(space, f, g15, 1.5, 1.0, RiSpaceSpec::lp(2)).case_id == "3");
  CHECK_THROWS_AS(embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::lp(4), std::string("1a")),
                  std::invalid_argument);
  CHECK_THROWS_AS(embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::l1_plus_linf()), std::invalid_argument);

  const auto c = embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::lp(4));
  CHECK(c.doublestar_diverges);
  CHECK(c.lhs == c.f_linf);

  const auto a = embedding_report(space, f, g, 1.0, 2.0, RiSpaceSpec::lp(4.0 / 3));
  REQUIRE(a.p_star.has_value());
  CHECK(*a.p_star == doctest::Approx(4.0));
  CHECK(a.chain.available);
  CHECK(a.chain.identity_ok);
  CHECK(a.chain.consistent);
  CHECK(a.chain.q_bound == doctest::Approx(4.0));
  CHECK(a.chain.q_norm <= a.chain.q_bound * (1 + 1e-9));
}

TEST_CASE("embedding of a constant") {
  const auto space = grid_space(1, 32, 0.0, 2.0);
  const std::vector<double> cst(space.size(), 3.0);
  const std::vector<double> zero(space.size(), 0.0);
  const auto a = embedding_report(space, cst, zero, 1.0, 2.0, RiSpaceSpec::lp(4.0 / 3));
  CHECK(a.finite);
  // ||t^{-1/2} 3 min(1, 2/t)||_{4/3}
  const double oracle =
      std::pow(quad([](double t) { return std::pow(3 * std::pow(t, -0.5), 4.0 / 3); }, 0, 2) +
                   quad([](double t) { return std::pow(6 * std::pow(t, -1.5), 4.0 / 3); }, 2,
                        std::numeric_limits<double>::infinity()),
               0.75);
  CHECK(rel(a.lhs, oracle) <= 1e-8);
  const auto w = embedding_report(space, cst, zero, 1.0, 1.0, RiSpaceSpec::weak_linf());
  CHECK(w.lhs == 0.0);
}

TEST_CASE("log-refined norm against quadrature") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const auto fs = hsob::testing::random_step_function(rng, 8);
    for (double p : {1.5, 2.0, 3.0}) {
      // substitute u = ln(1/t): int_0^inf (f**(e^-u) / (1 + u))^p du
      std::vector<double> cuts{0.0};
      for (double t : fs.breakpoints())
        if (t < 1.0) cuts.push_back(-std::log(t));
      std::sort(cuts.begin(), cuts.end());
      auto h = [&](double u) { return std::pow(fs.double_star(std::exp(-u)) / (1 + u), p); };
      double total = 0.0;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += quad(h, cuts[k], cuts[k + 1]);
      total += quad(h, cuts.back(), std::numeric_limits<double>::infinity());
      CHECK(rel(log_refined_norm(fs, p), std::pow(total, 1 / p)) <= 1e-8);
    }
    CHECK(std::isinf(log_refined_norm(fs, 1.0)));
  }
}

TEST_CASE("slope fit") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  CHECK(fit_slope(x, y) == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_slope(std::vector<double>{1, 1}, std::vector<double>{0, 1}), std::invalid_argument);
}
