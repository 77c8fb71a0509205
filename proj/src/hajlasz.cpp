#include "hsob/hajlasz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "hsob/errors.hpp"
#include "hsob/parallel.hpp"
#include "hsob/simplex.hpp"

namespace hsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_aligned(const DiscreteSpace& space, std::span<const double> v, const char* what) {
  if (v.size() != space.size())
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) +
                                " entries, space has " + std::to_string(space.size()) + " atoms");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

void check_s(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("smoothness s must be > 0");
}

double pow_s(double d, double s) {
  if (s == 1.0) return d;
  if (s == 0.5) return std::sqrt(d);
  if (s == 2.0) return d * d;
  return std::pow(d, s);
}

// Per-row maxima of |f_i - f_j| / d_ij^s over j != i (all j, both sides).
std::vector<double> row_max_ratio(const DiscreteSpace& space, std::span<const double> f, double s) {
  const std::size_t n = space.size();
  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double diff = std::abs(f[i] - f[j]);
      if (diff == 0.0) continue;
      best = std::max(best, diff / pow_s(space.distance(i, j), s));
    }
    out[i] = best;
  });
  return out;
}

// Pair constraints g_i + g_j >= c as the normalized data used by the solvers.
struct Normalized {
  std::vector<double> c;  // c / max_c
  std::vector<double> w;  // w / mean(w)
  double c_scale = 1.0;
  double w_scale = 1.0;
};

Normalized normalize(const GradientProblem& problem) {
  Normalized out;
  out.c_scale = problem.max_c();
  out.w_scale = std::accumulate(problem.weights().begin(), problem.weights().end(), 0.0) /
                static_cast<double>(problem.size());
  for (const auto& p : problem.pairs()) out.c.push_back(p.c / out.c_scale);
  for (double w : problem.weights()) out.w.push_back(w / out.w_scale);
  return out;
}

// Raises g until every pair constraint holds exactly in floating point.
void repair(const GradientProblem& problem, std::vector<double>& g) {
  for (auto& x : g) x = std::max(x, 0.0);
  std::vector<double> bump(g.size(), 0.0);
  bool any = false;
  for (const auto& p : problem.pairs()) {
    const double deficit = p.c - (g[p.i] + g[p.j]);
    if (deficit > 0.0) {
      bump[p.i] = std::max(bump[p.i], deficit);
      bump[p.j] = std::max(bump[p.j], deficit);
      any = true;
    }
  }
  if (!any) return;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += bump[i];
}

std::vector<double> pair_halves(const GradientProblem& problem) {
  std::vector<double> g(problem.size(), 0.0);
  for (const auto& p : problem.pairs()) {
    g[p.i] = std::max(g[p.i], 0.5 * p.c);
    g[p.j] = std::max(g[p.j], 0.5 * p.c);
  }
  return g;
}

GradientSolution solve_linf(const GradientProblem& problem) {
  GradientSolution out;
  const double level = 0.5 * problem.max_c();
  out.g.assign(problem.size(), level);
  out.norm_value = problem.pairs().empty() ? 0.0 : level;
  out.certificate_kind = "closed form: maximizing pair forces g_i + g_j >= max c";
  for (const auto& p : problem.pairs()) {
    if (p.c == problem.max_c()) {
      out.dual = {static_cast<double>(p.i), static_cast<double>(p.j)};
      break;
    }
  }
  return out;
}

GradientSolution solve_l1(const GradientProblem& problem, const SolverOptions& options) {
  const Normalized data = normalize(problem);
  const auto pairs = problem.pairs();
  std::vector<SparseColumn> columns(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    columns[k].entries = {{pairs[k].i, 1.0}, {pairs[k].j, 1.0}};
  const PackingResult lp = maximize_packing(problem.size(), columns, data.c, data.w, options.budget);

  GradientSolution out;
  out.g.resize(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i)
    out.g[i] = std::max(lp.duals[i], 0.0) * data.c_scale;
  repair(problem, out.g);
  out.iterations = lp.iterations;
  if (!lp.optimal) {
    std::vector<double> fallback = pair_halves(problem);
    throw SolverError("L1 simplex stopped after " + std::to_string(lp.iterations) + " pivots",
                      std::move(fallback));
  }
  out.norm_value = problem.evaluate(out.g);
  out.dual.resize(pairs.size());
  double dual_value = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.dual[k] = lp.x[k] * data.w_scale;
    dual_value += pairs[k].c * out.dual[k];
  }
  out.certificate = std::abs(out.norm_value - dual_value) / std::max(1.0, out.norm_value);
  out.certificate_kind = "duality gap against dual pair weights";
  return out;
}

GradientSolution solve_l2(const GradientProblem& problem, const SolverOptions& options) {
  const Normalized data = normalize(problem);
  const auto pairs = problem.pairs();
  const std::size_t n = problem.size();
  const std::size_t m = pairs.size();
  const std::size_t max_iter = std::min<std::size_t>(options.budget, 500);

  Eigen::VectorXd q(n);  // diagonal of the Hessian
  for (std::size_t i = 0; i < n; ++i) q[i] = 2.0 * data.w[i];

  Eigen::VectorXd g(n);
  {
    std::vector<double> start(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      start[pairs[k].i] = std::max(start[pairs[k].i], 0.5 * data.c[k]);
      start[pairs[k].j] = std::max(start[pairs[k].j], 0.5 * data.c[k]);
    }
    for (std::size_t i = 0; i < n; ++i) g[i] = 1.05 * start[i] + 0.05;
  }
  auto apply_a = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(m);
    for (std::size_t k = 0; k < m; ++k) y[k] = x[pairs[k].i] + x[pairs[k].j];
    return y;
  };
  auto apply_at = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < m; ++k) {
      x[pairs[k].i] += y[k];
      x[pairs[k].j] += y[k];
    }
    return x;
  };
  Eigen::VectorXd cvec(m);
  for (std::size_t k = 0; k < m; ++k) cvec[k] = data.c[k];

  Eigen::VectorXd slack = apply_a(g) - cvec;
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m);

  auto max_step = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double a = 1.0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
      if (dv[k] < 0.0) a = std::min(a, -v[k] / dv[k]);
    return a;
  };

  GradientSolution out;
  double residual = kInf;
  bool converged = false;
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::VectorXd rd = q.cwiseProduct(g) - apply_at(z);
    const Eigen::VectorXd rp = apply_a(g) - slack - cvec;
    const double mu = slack.dot(z) / static_cast<double>(m);
    residual = std::max({rd.lpNorm<Eigen::Infinity>(), rp.lpNorm<Eigen::Infinity>(), mu});
    if (residual <= 1e-12) {
      converged = true;
      break;
    }

    const Eigen::VectorXd dscale = z.cwiseQuotient(slack);
    Eigen::MatrixXd h = q.asDiagonal();
    for (std::size_t k = 0; k < m; ++k) {
      const auto i = pairs[k].i;
      const auto j = pairs[k].j;
      h(i, i) += dscale[k];
      h(j, j) += dscale[k];
      h(i, j) += dscale[k];
      h(j, i) += dscale[k];
    }
    const Eigen::LLT<Eigen::MatrixXd> chol(h);
    if (chol.info() != Eigen::Success) {
      // normal matrix lost definiteness near the boundary; accept a tight iterate
      converged = residual <= 1e-9;
      break;
    }

    struct Step {
      Eigen::VectorXd dg, ds, dz;
    };
    auto solve = [&](const Eigen::VectorXd& rc) {
      Step st;
      const Eigen::VectorXd t = (rc - z.cwiseProduct(rp)).cwiseQuotient(slack);
      st.dg = chol.solve(-rd + apply_at(t));
      st.ds = apply_a(st.dg) + rp;
      st.dz = (rc - z.cwiseProduct(st.ds)).cwiseQuotient(slack);
      return st;
    };

    const Eigen::VectorXd sz = slack.cwiseProduct(z);
    const Step aff = solve(-sz);
    const double a_aff = std::min(max_step(slack, aff.ds), max_step(z, aff.dz));
    const double mu_aff =
        (slack + a_aff * aff.ds).dot(z + a_aff * aff.dz) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / mu, 3.0);
    const Eigen::VectorXd rc =
        -sz - aff.ds.cwiseProduct(aff.dz) + Eigen::VectorXd::Constant(m, sigma * mu);
    const Step st = solve(rc);
    const double a = std::min(1.0, 0.99 * std::min(max_step(slack, st.ds), max_step(z, st.dz)));
    g += a * st.dg;
    slack += a * st.ds;
    z += a * st.dz;
  }

  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.g[i] = g[i] * data.c_scale;
  repair(problem, out.g);
  out.iterations = it;
  if (!converged) {
    std::ostringstream msg;
    msg << "L2 interior point stopped after " << it << " iterations, KKT residual " << residual;
    throw SolverError(msg.str(), out.g);
  }
  out.norm_value = problem.evaluate(out.g);
  out.certificate = residual;
  out.certificate_kind = "KKT residual (normalized units)";
  out.dual.resize(m);
  for (std::size_t k = 0; k < m; ++k) out.dual[k] = z[k] * data.w_scale;
  return out;
}

}  // namespace

GradientCheck is_s_gradient(const DiscreteSpace& space, std::span<const double> f,
                            std::span<const double> g, double s, double tol) {
  check_aligned(space, f, "f");
  check_aligned(space, g, "g");
  check_s(s);
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  for (double x : g)
    if (x < 0.0) throw std::invalid_argument("s-gradient candidates must be nonnegative");

  const std::size_t n = space.size();
  GradientCheck out;
  if (n < 2) return out;
  struct RowBest {
    double violation = -kInf;
    std::size_t j = 0;
  };
  std::vector<RowBest> rows(n);
  parallel_for(n, [&](std::size_t i) {
    RowBest best;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ds = pow_s(space.distance(i, j), s);
      // d^s (c - (g_i + g_j)) with c = |f_i - f_j| / d^s: exactly <= 0 for the
      // canonical gradient, whose halves dominate c / 2 per pair.
      const double v = ds * (std::abs(f[i] - f[j]) / ds - (g[i] + g[j]));
      if (v > best.violation) best = {v, j};
    }
    rows[i] = best;
  });
  out.max_violation = -kInf;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (rows[i].violation > out.max_violation) {
      out.max_violation = rows[i].violation;
      out.witness_i = i;
      out.witness_j = rows[i].j;
    }
  }
  out.ok = out.max_violation <= tol;
  return out;
}

std::vector<double> canonical_gradient(const DiscreteSpace& space, std::span<const double> f,
                                       double s) {
  check_aligned(space, f, "f");
  check_s(s);
  auto g = row_max_ratio(space, f, s);
  for (auto& x : g) x *= 0.5;
  return g;
}

// ---------------------------------------------------------------------------

GradientProblem GradientProblem::from_function(const DiscreteSpace& space,
                                               std::span<const double> f, double s,
                                               const RiSpaceSpec& objective) {
  check_aligned(space, f, "f");
  check_s(s);
  const std::size_t n = space.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("space too large");
  std::vector<std::vector<GradientPair>> rows(n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = std::abs(f[i] - f[j]);
      if (diff == 0.0) continue;
      rows[i].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                         diff / pow_s(space.distance(i, j), s)});
    }
  });
  std::vector<GradientPair> pairs;
  for (auto& r : rows) pairs.insert(pairs.end(), r.begin(), r.end());
  return GradientProblem(n, std::move(pairs), {space.weights().begin(), space.weights().end()},
                         objective);
}

GradientProblem::GradientProblem(std::size_t n, std::vector<GradientPair> pairs,
                                 std::vector<double> weights, const RiSpaceSpec& objective)
    : weights_(std::move(weights)), objective_(objective) {
  if (weights_.size() != n) throw std::invalid_argument("gradient problem: weights size mismatch");
  if (n == 0) throw std::invalid_argument("gradient problem needs at least one atom");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and > 0");
  const bool supported = objective == RiSpaceSpec::lp(1.0) || objective == RiSpaceSpec::lp(2.0) ||
                         objective == RiSpaceSpec::lp(kInf);
  if (!supported)
    throw std::invalid_argument("minimal gradient objective must be lp:1, lp:2 or linf, got " +
                                objective.to_string());
  for (const auto& p : pairs) {
    if (p.i >= n || p.j >= n || p.i == p.j)
      throw std::invalid_argument("gradient problem: bad pair indices");
    if (!(p.c >= 0.0) || !std::isfinite(p.c))
      throw std::invalid_argument("gradient problem: c_ij must be finite and >= 0 "
                                  "(coincident points with different values?)");
    if (p.c > 0.0) {
      pairs_.push_back(p);
      max_c_ = std::max(max_c_, p.c);
    }
  }
}

double GradientProblem::evaluate(std::span<const double> g) const {
  if (g.size() != size()) throw std::invalid_argument("gradient size mismatch");
  switch (static_cast<int>(objective_.p())) {
    case 1: {
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) sum += weights_[i] * std::abs(g[i]);
      return sum;
    }
    case 2: {
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) sum += weights_[i] * g[i] * g[i];
      return std::sqrt(sum);
    }
    default: {
      double best = 0.0;
      for (double x : g) best = std::max(best, std::abs(x));
      return best;
    }
  }
}

double GradientProblem::max_deficit(std::span<const double> g) const {
  double worst = -kInf;
  for (const auto& p : pairs_) worst = std::max(worst, p.c - (g[p.i] + g[p.j]));
  return worst;
}

GradientSolution minimal_gradient(const GradientProblem& problem, const SolverOptions& options) {
  if (problem.pairs().empty()) {
    GradientSolution out;
    out.g.assign(problem.size(), 0.0);
    out.certificate_kind = "no active constraints";
    return out;
  }
  GradientSolution out;
  if (problem.objective().p() == kInf) {
    out = solve_linf(problem);
  } else if (problem.objective().p() == 1.0) {
    out = solve_l1(problem, options);
  } else {
    out = solve_l2(problem, options);
  }
  const double deficit = problem.max_deficit(out.g);
  if (deficit > options.feasibility_tol * problem.max_c())
    throw SolverError("gradient solver returned an infeasible point (deficit " +
                          std::to_string(deficit) + ")",
                      pair_halves(problem));
  return out;
}

// ---------------------------------------------------------------------------

double test_function_value(double d, double r, double s) {
  return d <= r ? std::pow(r - d, s) : 0.0;
}

TestPair test_function(const DiscreteSpace& space, std::size_t x0, double r, double s) {
  if (x0 >= space.size()) throw std::out_of_range("center index out of range");
  if (!(r > 0.0)) throw std::invalid_argument("test function radius must be > 0");
  check_s(s);
  TestPair out;
  out.f.resize(space.size());
  out.g.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double d = space.distance(x0, i);
    out.f[i] = test_function_value(d, r, s);
    out.g[i] = d < r ? 1.0 : 0.0;
  }
  out.check = is_s_gradient(space, out.f, out.g, s, 1e-12);
  return out;
}

double test_function_distribution(const AnalyticSpace& space, std::span<const double> x0, double r,
                                  double s, double lambda) {
  if (!(r > 0.0)) throw std::invalid_argument("test function radius must be > 0");
  check_s(s);
  if (lambda < 0.0) throw std::invalid_argument("distribution level must be >= 0");
  if (lambda >= std::pow(r, s)) return 0.0;
  return space.ball_measure(x0, r - std::pow(lambda, 1.0 / s));
}

}  // namespace hsob
