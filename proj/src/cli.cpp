#include "hsob/cli.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsob/errors.hpp"
#include "hsob/generate.hpp"
#include "hsob/hajlasz.hpp"
#include "hsob/io.hpp"
#include "hsob/rearrange.hpp"
#include "hsob/rinorm.hpp"
#include "hsob/verify.hpp"

namespace hsob::cli {

namespace {

using nlohmann::json;

/// Bad parameter combination detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

std::string short_num(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

DiscreteSpace load_discrete(const std::string& path) {
  Space space = load_space(path);
  if (auto* d = std::get_if<DiscreteSpace>(&space)) return std::move(*d);
  throw UsageError(path + ": this command needs a discrete space");
}

std::vector<double> load_aligned(const std::string& path, const DiscreteSpace& space) {
  auto v = load_values(path);
  if (v.size() != space.size())
    throw InputError(path + ": " + std::to_string(v.size()) + " values for a space of " +
                     std::to_string(space.size()) + " atoms");
  return v;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return out;
}

std::vector<std::size_t> spread_centers(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> out;
  if (n <= cap) {
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
  } else {
    for (std::size_t k = 0; k < cap; ++k) out.push_back(k * n / cap);
  }
  return out;
}

void maybe_write_json(const std::string& path, const json& doc) {
  if (!path.empty()) write_json(path, doc);
}

/// Largest mass ratio needed for almost continuity over the t grid and its
/// doubles, i.e. the measured c.
double measure_c(const DiscreteSpace& space, const std::vector<double>& t_grid) {
  std::vector<double> ts = t_grid;
  for (double t : t_grid) ts.push_back(std::min(2.0 * t, space.total_mass()));
  const auto centers = spread_centers(space.size(), 4096);
  return almost_continuity_check(space, 2.0, ts, centers).max_required_c;
}

// ---------------------------------------------------------------------------

struct SpaceCheckArgs {
  std::string space;
  std::optional<double> alpha;
  std::optional<double> c;
  std::size_t centers = 64;
  std::string summary;
};

int space_check(const SpaceCheckArgs& a) {
  Space space = load_space(a.space);
  json doc;
  doc["space"] = a.space;
  std::ostringstream line;
  line << "space-check:";
  bool ok = true;

  if (const auto* d = std::get_if<DiscreteSpace>(&space)) {
    const auto centers = spread_centers(d->size(), a.centers);
    doc["kind"] = "discrete";
    doc["metric"] = to_string(d->metric());
    doc["atoms"] = d->size();
    doc["total_mass"] = d->total_mass();
    doc["min_atom_mass"] = d->min_atom_mass();
    line << " n=" << d->size() << " total=" << short_num(d->total_mass());
    if (d->size() >= 2) {
      const RadiusRange range = admissible_radii(*d);
      doc["min_nn_distance"] = d->min_nn_distance();
      doc["diameter"] = d->diameter();
      doc["admissible_radii"] = {num(range.lo), num(range.hi)};
      if (range.lo < range.hi) {
        const auto radii = log_space(range.lo, range.hi, 16);
        if (a.alpha) {
          const auto cert = lower_bound_probe(*d, *a.alpha, centers, radii);
          doc["growth"] = {{"alpha", *a.alpha}, {"b", num(cert.b)}};
          line << " b=" << short_num(cert.b);
        }
        const auto dbl = doubling_check(*d, centers, radii);
        doc["doubling_constant"] = num(dbl.constant);
        line << " doubling=" << short_num(dbl.constant);
      }
    }
    const MassRange masses = admissible_masses(*d);
    if (masses.lo <= masses.hi) {
      const auto ts = default_t_grid(*d, 32);
      const auto rep = almost_continuity_check(*d, a.c.value_or(2.0), ts, centers);
      doc["continuity"] = {{"max_required_c", rep.max_required_c}};
      line << " required_c=" << short_num(rep.max_required_c);
      if (a.c) {
        doc["continuity"]["c"] = *a.c;
        doc["continuity"]["all_ok"] = rep.all_ok;
        ok = rep.all_ok;
      }
    }
  } else {
    const auto& an = std::get<AnalyticSpace>(space);
    doc["kind"] = an.name();
    line << " " << an.name();
    std::vector<Coord> centers;
    if (an.kind() == AnalyticSpace::Kind::appendix_plane) {
      centers = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {0.01, 0.0}, {-1.0, 0.5}};
    } else {
      centers = {Coord(static_cast<std::size_t>(an.dim()), 0.0),
                 Coord(static_cast<std::size_t>(an.dim()), 1.0)};
    }
    const auto radii = log_space(1e-3, 10.0, 16);
    if (a.alpha) {
      const auto cert = lower_bound_probe(an, *a.alpha, centers, radii);
      doc["growth"] = {{"alpha", *a.alpha}, {"b", num(cert.b)}};
      line << " b=" << short_num(cert.b);
    }
    const auto dbl = doubling_check(an, centers, radii);
    doc["doubling_constant"] = num(dbl.constant);
    line << " doubling=" << short_num(dbl.constant);
    const auto rep = almost_continuity_check(an, a.c.value_or(2.0), log_space(1e-6, 10.0, 16), centers);
    doc["continuity"] = {{"max_required_c", rep.max_required_c}};
    line << " required_c=" << short_num(rep.max_required_c);
    if (a.c) {
      doc["continuity"]["c"] = *a.c;
      doc["continuity"]["all_ok"] = rep.all_ok;
      ok = rep.all_ok;
    }
  }
  doc["pass"] = ok;
  maybe_write_json(a.summary, doc);
  std::cout << line.str() << (ok ? "" : " FAILED") << "\n";
  return ok ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct RearrangeArgs {
  std::string space, fn, out, summary;
};

int rearrange(const RearrangeArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const auto f = load_aligned(a.fn, space);
  const WeightedSample sample(f, {space.weights().begin(), space.weights().end()});
  const StepFunction fs = decreasing_rearrangement(sample);
  std::vector<std::vector<double>> rows;
  rows.push_back({0.0, fs.sup(), fs.sup(), 0.0});
  for (std::size_t j = 1; j <= fs.steps(); ++j) {
    const double t = fs.step_begin(j);
    rows.push_back({t, fs(t), fs.double_star(t), oscillation(sample, fs, t)});
  }
  write_csv(a.out, {"t", "f_star", "f_double_star", "osc"}, rows);
  json doc = {{"steps", fs.steps()},       {"support", fs.support()},
              {"sup", fs.sup()},           {"integral", fs.integral(fs.support())},
              {"total_mass", space.total_mass()}};
  maybe_write_json(a.summary, doc);
  std::cout << "rearrange: " << fs.steps() << " steps, support " << short_num(fs.support())
            << ", sup " << short_num(fs.sup()) << " -> " << a.out << "\n";
  return kPass;
}

// ---------------------------------------------------------------------------

struct GradientArgs {
  std::string space, fn, grad, out, summary;
  double s = 1.0;
  double tol = 0.0;
  std::string objective = "lp:1";
  std::size_t budget = 100000;
};

int gradient_check(const GradientArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const auto f = load_aligned(a.fn, space);
  const auto g = load_aligned(a.grad, space);
  const GradientCheck check = is_s_gradient(space, f, g, a.s, a.tol);
  json doc = {{"ok", check.ok},
              {"max_violation", num(check.max_violation)},
              {"witness", {check.witness_i, check.witness_j}},
              {"s", a.s},
              {"tol", a.tol}};
  maybe_write_json(a.summary, doc);
  std::cout << "gradient check: ok=" << (check.ok ? "true" : "false")
            << " max_violation=" << short_num(check.max_violation) << " witness=("
            << check.witness_i << "," << check.witness_j << ")\n";
  return check.ok ? kPass : kCheckFailed;
}

int gradient_canonical(const GradientArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const auto f = load_aligned(a.fn, space);
  const auto g = canonical_gradient(space, f, a.s);
  const GradientCheck check = is_s_gradient(space, f, g, a.s, 0.0);
  save_values(a.out, g);
  double l1 = 0.0, top = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    l1 += space.weight(i) * g[i];
    top = std::max(top, g[i]);
  }
  maybe_write_json(a.summary, {{"ok", check.ok}, {"l1", l1}, {"sup", top}});
  std::cout << "gradient canonical: n=" << g.size() << " ||g||_1=" << short_num(l1)
            << " sup=" << short_num(top) << " check=" << (check.ok ? "ok" : "FAILED") << "\n";
  return check.ok ? kPass : kCheckFailed;
}

int gradient_min(const GradientArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const auto f = load_aligned(a.fn, space);
  RiSpaceSpec objective = RiSpaceSpec::lp(1.0);
  try {
    objective = RiSpaceSpec::parse(a.objective);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const GradientProblem problem = GradientProblem::from_function(space, f, a.s, objective);
  SolverOptions options;
  options.budget = a.budget;
  try {
    const GradientSolution sol = minimal_gradient(problem, options);
    save_values(a.out, sol.g);
    maybe_write_json(a.summary, {{"objective", objective.to_string()},
                                 {"norm_value", sol.norm_value},
                                 {"certificate", num(sol.certificate)},
                                 {"certificate_kind", sol.certificate_kind},
                                 {"iterations", sol.iterations},
                                 {"pairs", problem.pairs().size()}});
    std::cout << "gradient min: objective=" << objective.to_string()
              << " norm=" << short_num(sol.norm_value) << " certificate=" << short_num(sol.certificate)
              << " (" << sol.certificate_kind << ") iterations=" << sol.iterations << "\n";
    return kPass;
  } catch (const SolverError& e) {
    save_values(a.out, e.best_feasible());
    std::cout << "gradient min: FAILED " << e.what() << "; best feasible iterate written to " << a.out
              << "\n";
    return kCheckFailed;
  }
}

// ---------------------------------------------------------------------------

struct OscillationArgs {
  std::string space, fn, grad, out, summary;
  double s = 1.0, alpha = 1.0, p = 1.0;
  std::optional<double> c;
  std::size_t t_count = 64;
};

std::vector<double> gradient_or_canonical(const std::string& path, const DiscreteSpace& space,
                                          const std::vector<double>& f, double s) {
  return path.empty() ? canonical_gradient(space, f, s) : load_aligned(path, space);
}

int verify_oscillation(const OscillationArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const auto f = load_aligned(a.fn, space);
  const auto g = gradient_or_canonical(a.grad, space, f, a.s);
  const auto grid = default_t_grid(space, a.t_count);
  const double c = a.c ? *a.c : measure_c(space, grid);
  double b = 0.0;
  if (const RadiusRange range = admissible_radii(space); range.lo < range.hi) {
    const auto centers = spread_centers(space.size(), 256);
    b = lower_bound_probe(space, a.alpha, centers, log_space(range.lo, range.hi, 16)).b;
  }
  const ReportIds ids{a.space, a.fn, a.grad.empty() ? "canonical" : a.grad};
  const InequalityReport rep =
      oscillation_inequality_report(space, f, g, a.s, a.alpha, a.p, c, grid, b, ids);
  if (!a.out.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rep.t_grid.size(); ++k)
      rows.push_back({rep.t_grid[k], rep.lhs[k], rep.rhs[k], rep.ratio[k]});
    write_csv(a.out, {"t", "lhs", "rhs", "ratio"}, rows);
  }
  json doc = {{"pass", rep.pass},
              {"empirical_constant", num(rep.empirical_constant)},
              {"theoretical_constant", num(rep.theoretical_constant)},
              {"formula", rep.formula},
              {"slack", rep.slack},
              {"c_measured", !a.c.has_value()},
              {"metadata",
               {{"s", a.s}, {"alpha", a.alpha}, {"p", a.p}, {"c", c}, {"b", b},
                {"space", ids.space}, {"f", ids.f}, {"g", ids.g}}},
              {"t_count", rep.t_grid.size()},
              {"t_range", {rep.t_grid.front(), rep.t_grid.back()}}};
  maybe_write_json(a.summary, doc);
  std::cout << "verify-oscillation: pass=" << (rep.pass ? "true" : "false")
            << " empirical=" << short_num(rep.empirical_constant)
            << " theoretical=" << short_num(rep.theoretical_constant) << " c=" << short_num(c) << "\n";
  return rep.pass ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct ConverseArgs {
  std::string space, out, summary;
  double s = 1.0, alpha = 1.0;
  std::vector<double> radii;
  std::vector<double> center;
  std::vector<std::size_t> centers;
};

int verify_converse(const ConverseArgs& a) {
  Space space = load_space(a.space);
  ConverseReport rep;
  if (const auto* d = std::get_if<DiscreteSpace>(&space)) {
    if (!a.center.empty()) throw UsageError("--center takes coordinates on analytic spaces; use --centers");
    const std::vector<std::size_t> centers = a.centers.empty() ? std::vector<std::size_t>{0} : a.centers;
    std::vector<DiscreteProbe> probes;
    for (auto x : centers)
      for (double r : a.radii) probes.push_back({x, r});
    rep = converse_probe(*d, a.s, a.alpha, probes);
  } else {
    const auto& an = std::get<AnalyticSpace>(space);
    if (!a.centers.empty()) throw UsageError("--centers takes point ids on discrete spaces; use --center");
    const Coord center = a.center.empty() ? Coord(static_cast<std::size_t>(an.dim()), 0.0) : a.center;
    std::vector<AnalyticProbe> probes;
    for (double r : a.radii) probes.push_back({center, r});
    rep = converse_probe(an, a.s, a.alpha, probes);
  }
  if (!a.out.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.rows)
      rows.push_back({static_cast<double>(r.probe), r.radius, r.mass, r.lhs, r.lhs_identity,
                      r.rhs_integral, r.hypothesis_constant, r.c_prime, r.l1_norm,
                      r.skipped ? 1.0 : 0.0});
    write_csv(a.out,
              {"probe", "radius", "mass", "lhs", "lhs_identity", "rhs_integral", "hypothesis_constant",
               "c_prime", "l1_norm", "skipped"},
              rows);
  }
  json skipped = json::array();
  for (const auto& r : rep.rows)
    if (r.skipped) skipped.push_back({{"probe", r.probe}, {"radius", r.radius}, {"reason", r.reason}});
  const bool ok = rep.used > 0 && rep.all_checks_ok;
  maybe_write_json(a.summary, {{"pass", ok},
                               {"used", rep.used},
                               {"skipped", skipped},
                               {"fitted_alpha", num(rep.fitted_alpha)},
                               {"growth_slope", num(rep.growth_slope)},
                               {"c_prime_min", num(rep.c_prime_min)},
                               {"c_prime_max", num(rep.c_prime_max)},
                               {"c_prime_spread", num(rep.c_prime_spread)},
                               {"hypothesis_min", num(rep.hypothesis_min)},
                               {"hypothesis_max", num(rep.hypothesis_max)},
                               {"s", a.s},
                               {"alpha", a.alpha}});
  std::cout << "verify-converse: used=" << rep.used << "/" << rep.rows.size()
            << " fitted_alpha=" << short_num(rep.fitted_alpha)
            << " C'_spread=" << short_num(rep.c_prime_spread)
            << " checks=" << (rep.all_checks_ok ? "ok" : "FAILED") << "\n";
  return ok ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct EmbeddingArgs {
  std::string space, fn, grad, spec, summary;
  std::string requested_case;
  double s = 1.0, alpha = 1.0;
};

int verify_embedding(const EmbeddingArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const auto f = load_aligned(a.fn, space);
  const auto g = gradient_or_canonical(a.grad, space, f, a.s);
  RiSpaceSpec spec = RiSpaceSpec::lp(1.0);
  try {
    spec = RiSpaceSpec::parse(a.spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::optional<std::string> requested;
  if (!a.requested_case.empty()) requested = a.requested_case;
  const ReportIds ids{a.space, a.fn, a.grad.empty() ? "canonical" : a.grad};
  EmbeddingReport rep;
  try {
    rep = embedding_report(space, f, g, a.s, a.alpha, spec, requested, ids);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool chain_ok = !rep.chain.available || (rep.chain.identity_ok && rep.chain.consistent);
  const bool ok = rep.finite && chain_ok;
  json doc = {{"pass", ok},
              {"case", rep.case_id},
              {"diagnosis", rep.diagnosis},
              {"lhs_formula", rep.lhs_formula},
              {"rhs_formula", rep.rhs_formula},
              {"lhs", num(rep.lhs)},
              {"rhs", num(rep.rhs)},
              {"empirical_constant", num(rep.empirical_constant)},
              {"doublestar_diverges", rep.doublestar_diverges},
              {"g_norm", num(rep.g_norm)},
              {"f_l1_plus_linf", num(rep.f_l1_plus_linf)},
              {"f_linf", num(rep.f_linf)},
              {"metadata", {{"s", a.s}, {"alpha", a.alpha}, {"spec", spec.to_string()},
                            {"space", ids.space}, {"f", ids.f}, {"g", ids.g}}}};
  if (rep.p_star) doc["p_star"] = num(*rep.p_star);
  if (rep.chain.available)
    doc["chain"] = {{"identity_ok", rep.chain.identity_ok},
                    {"identity_error", num(rep.chain.identity_error)},
                    {"q_norm", num(rep.chain.q_norm)},
                    {"q_bound", num(rep.chain.q_bound)},
                    {"k", num(rep.chain.k)},
                    {"c_x", num(rep.chain.c_x)},
                    {"consistent", rep.chain.consistent}};
  maybe_write_json(a.summary, doc);
  std::cout << "verify-embedding: case " << rep.case_id << " lhs=" << short_num(rep.lhs)
            << " rhs=" << short_num(rep.rhs) << " constant=" << short_num(rep.empirical_constant)
            << (ok ? "" : " FAILED") << "\n";
  return ok ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct GalleryArgs {
  std::string probe = "a=0.001";
  double c = 2.0;
  std::optional<double> t;
  std::string summary;
};

int gallery_appendix(const GalleryArgs& a) {
  const auto eq = a.probe.find('=');
  if (eq == std::string::npos || a.probe.substr(0, eq) != "a")
    throw UsageError("--probe expects a=VALUE");
  double offset = 0.0;
  try {
    offset = std::stod(a.probe.substr(eq + 1));
  } catch (const std::exception&) {
    throw UsageError("--probe expects a=VALUE, got " + a.probe);
  }
  if (!(offset > 0.0) || !(offset < 0.5)) throw UsageError("--probe needs 0 < a < 1/2");
  if (!(a.c > 1.0)) throw UsageError("--c must be > 1");
  const AnalyticSpace plane = AnalyticSpace::appendix_plane();
  // Just above the mass 4a^2 of the largest square that misses the line x = 0.
  const double t = a.t.value_or(4.0 * offset * offset * (1.0 + 1e-4));
  const std::vector<Coord> centers = {{offset, 0.0}};
  const std::vector<double> ts = {t};
  const auto rep = almost_continuity_check(plane, a.c, ts, centers);
  const auto& probe = rep.probes.front();
  const double predicted = 1.0 + 1.0 / (2.0 * offset);
  maybe_write_json(a.summary, {{"pass", rep.all_ok},
                               {"a", offset},
                               {"t", t},
                               {"c", a.c},
                               {"required_c", probe.required_c},
                               {"predicted_required_c", predicted},
                               {"mass_below", probe.mass_below},
                               {"mass_above", probe.mass_above},
                               {"radius", probe.radius}});
  std::cout << "gallery appendix-plane: a=" << short_num(offset) << " t=" << short_num(t)
            << " required c=" << short_num(probe.required_c) << " (1+1/(2a)=" << short_num(predicted)
            << ") vs c=" << short_num(a.c)
            << (rep.all_ok ? ": c-almost continuous at this probe"
                           : ": FAILED, not c-almost continuous")
            << "\n";
  return rep.all_ok ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct GenSpaceArgs {
  std::string out;
  int dim = 2;
  int n = 16;
  double lo = 0.0, hi = 1.0;
  std::string metric = "euclidean";
  std::uint64_t seed = 0;
  int per_unit = 32;
  std::vector<double> window = {-0.5, 1.5, -1.0, 1.0};
};

MetricKind coord_metric(const std::string& name) {
  try {
    return parse_metric_kind(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct GenFnArgs {
  std::string space, out, grad_out;
  std::size_t center = 0;
  double r = 0.5, s = 1.0;
  int count = 3;
  std::uint64_t seed = 0;
};

int gen_test_function(const GenFnArgs& a) {
  const DiscreteSpace space = load_discrete(a.space);
  const TestPair pair = test_function(space, a.center, a.r, a.s);
  save_values(a.out, pair.f);
  if (!a.grad_out.empty()) save_values(a.grad_out, pair.g);
  std::cout << "gen-fn test-function: center=" << a.center << " r=" << short_num(a.r)
            << " s=" << short_num(a.s) << " pair " << (pair.check.ok ? "is" : "is NOT")
            << " an s-gradient pair (max violation " << short_num(pair.check.max_violation) << ")\n";
  return pair.check.ok ? kPass : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Hajlasz-Sobolev oscillation and embedding harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hsob 0.1.0");

  SpaceCheckArgs sc;
  auto* cmd_space = app.add_subcommand("space-check", "Measure growth, almost continuity and doubling");
  cmd_space->add_option("--space", sc.space, "Space JSON")->required();
  cmd_space->add_option("--alpha", sc.alpha, "Exponent for the lower-bound probe");
  cmd_space->add_option("--c", sc.c, "Almost-continuity constant to certify (exit 1 if it fails)");
  cmd_space->add_option("--centers", sc.centers, "Maximum number of probe centers");
  cmd_space->add_option("--summary", sc.summary, "JSON summary path");

  RearrangeArgs ra;
  auto* cmd_re = app.add_subcommand("rearrange", "Decreasing rearrangement curve (t, f*, f**, osc)");
  cmd_re->add_option("--space", ra.space, "Space JSON")->required();
  cmd_re->add_option("--fn", ra.fn, "Function JSON")->required();
  cmd_re->add_option("--out", ra.out, "CSV output path")->required();
  cmd_re->add_option("--summary", ra.summary, "JSON summary path");

  GradientArgs ga;
  auto* cmd_grad = app.add_subcommand("gradient", "s-gradient tools");
  cmd_grad->require_subcommand(1);
  auto* cmd_check = cmd_grad->add_subcommand("check", "Check that g is an s-gradient of f");
  auto* cmd_canon = cmd_grad->add_subcommand("canonical", "Canonical s-gradient");
  auto* cmd_min = cmd_grad->add_subcommand("min", "Minimal-norm s-gradient");
  for (auto* sub : {cmd_check, cmd_canon, cmd_min}) {
    sub->add_option("--space", ga.space, "Space JSON")->required();
    sub->add_option("--fn", ga.fn, "Function JSON")->required();
    sub->add_option("--s", ga.s, "Smoothness exponent")->check(CLI::PositiveNumber);
    sub->add_option("--summary", ga.summary, "JSON summary path");
  }
  cmd_check->add_option("--grad", ga.grad, "Gradient JSON")->required();
  cmd_check->add_option("--tol", ga.tol, "Additive tolerance")->check(CLI::NonNegativeNumber);
  cmd_canon->add_option("--out", ga.out, "Gradient JSON output")->required();
  cmd_min->add_option("--out", ga.out, "Gradient JSON output")->required();
  cmd_min->add_option("--objective", ga.objective, "lp:1, lp:2 or linf");
  cmd_min->add_option("--budget", ga.budget, "Iteration budget");

  OscillationArgs oa;
  auto* cmd_osc = app.add_subcommand("verify-oscillation", "Oscillation inequality report");
  cmd_osc->add_option("--space", oa.space, "Space JSON")->required();
  cmd_osc->add_option("--fn", oa.fn, "Function JSON")->required();
  cmd_osc->add_option("--grad", oa.grad, "Gradient JSON (canonical gradient if omitted)");
  cmd_osc->add_option("--s", oa.s, "Smoothness exponent")->required()->check(CLI::PositiveNumber);
  cmd_osc->add_option("--alpha", oa.alpha, "Growth exponent")->required()->check(CLI::PositiveNumber);
  cmd_osc->add_option("--p", oa.p, "Exponent 0 < p <= 1")->required()->check(CLI::Range(1e-300, 1.0));
  cmd_osc->add_option("--c", oa.c, "Almost-continuity constant (measured if omitted)");
  cmd_osc->add_option("--t-count", oa.t_count, "Number of log-spaced masses")->check(CLI::PositiveNumber);
  cmd_osc->add_option("--out", oa.out, "CSV report path");
  cmd_osc->add_option("--summary", oa.summary, "JSON summary path");

  ConverseArgs ca;
  auto* cmd_conv = app.add_subcommand("verify-converse", "Converse probe with test functions");
  cmd_conv->add_option("--space", ca.space, "Space JSON")->required();
  cmd_conv->add_option("--s", ca.s, "Smoothness exponent 0 < s <= 1")->required()->check(CLI::Range(1e-300, 1.0));
  cmd_conv->add_option("--alpha", ca.alpha, "Growth exponent")->required()->check(CLI::PositiveNumber);
  cmd_conv->add_option("--radii", ca.radii, "Comma-separated radii")->required()->delimiter(',');
  cmd_conv->add_option("--center", ca.center, "Center coordinates (analytic spaces)")->delimiter(',');
  cmd_conv->add_option("--centers", ca.centers, "Center point ids (discrete spaces)")->delimiter(',');
  cmd_conv->add_option("--out", ca.out, "CSV report path");
  cmd_conv->add_option("--summary", ca.summary, "JSON summary path");

  EmbeddingArgs ea;
  auto* cmd_emb = app.add_subcommand("verify-embedding", "Embedding estimate by Boyd-index case");
  cmd_emb->add_option("--space", ea.space, "Space JSON")->required();
  cmd_emb->add_option("--fn", ea.fn, "Function JSON")->required();
  cmd_emb->add_option("--grad", ea.grad, "Gradient JSON (canonical gradient if omitted)");
  cmd_emb->add_option("--s", ea.s, "Smoothness exponent")->required()->check(CLI::PositiveNumber);
  cmd_emb->add_option("--alpha", ea.alpha, "Growth exponent")->required()->check(CLI::PositiveNumber);
  cmd_emb->add_option("--spec", ea.spec, "r.i. space: lp:P, lorentz:P:Q, weak-linf, l1+linf")->required();
  cmd_emb->add_option("--case", ea.requested_case, "Expected case (1a, 1b, 1c, 2, 3)");
  cmd_emb->add_option("--summary", ea.summary, "JSON summary path");

  GalleryArgs gl;
  auto* cmd_gal = app.add_subcommand("gallery", "Worked examples");
  cmd_gal->require_subcommand(1);
  auto* cmd_gal_plane = cmd_gal->add_subcommand("appendix-plane", "Almost-continuity failure near a line");
  cmd_gal_plane->add_option("--probe", gl.probe, "Probe offset a=VALUE");
  cmd_gal_plane->add_option("--c", gl.c, "Constant to test");
  cmd_gal_plane->add_option("--t", gl.t, "Mass level (default just above 4a^2)");
  cmd_gal_plane->add_option("--summary", gl.summary, "JSON summary path");

  GenSpaceArgs gs;
  auto* cmd_gen = app.add_subcommand("gen-space", "Generate a space file");
  cmd_gen->require_subcommand(1);
  auto* gen_grid = cmd_gen->add_subcommand("grid", "Cell-centered grid on [lo, hi]^dim");
  auto* gen_cloud = cmd_gen->add_subcommand("random-cloud", "Seeded uniform point cloud");
  auto* gen_plane = cmd_gen->add_subcommand("appendix-plane-sample", "Sample of the two-line plane measure");
  for (auto* sub : {gen_grid, gen_cloud}) {
    sub->add_option("--dim", gs.dim, "Dimension")->check(CLI::PositiveNumber);
    sub->add_option("--n", gs.n, "Points per axis (grid) or total (cloud)")->check(CLI::PositiveNumber);
    sub->add_option("--lo", gs.lo, "Lower corner coordinate");
    sub->add_option("--hi", gs.hi, "Upper corner coordinate");
    sub->add_option("--metric", gs.metric, "euclidean or linf");
  }
  gen_cloud->add_option("--seed", gs.seed, "Random seed");
  gen_plane->add_option("--per-unit", gs.per_unit, "Grid points per unit length")->check(CLI::PositiveNumber);
  gen_plane->add_option("--window", gs.window, "x0,x1,y0,y1")->delimiter(',')->expected(4);
  for (auto* sub : {gen_grid, gen_cloud, gen_plane})
    sub->add_option("--out", gs.out, "Space JSON output")->required();

  GenFnArgs gf;
  auto* cmd_fn = app.add_subcommand("gen-fn", "Generate a function file");
  cmd_fn->require_subcommand(1);
  auto* fn_test = cmd_fn->add_subcommand("test-function", "(r - d(x0, x))^s on a ball, with its indicator gradient");
  auto* fn_bumps = cmd_fn->add_subcommand("bumps", "Seeded sum of Gaussian bumps");
  for (auto* sub : {fn_test, fn_bumps}) {
    sub->add_option("--space", gf.space, "Space JSON")->required();
    sub->add_option("--out", gf.out, "Function JSON output")->required();
  }
  fn_test->add_option("--center", gf.center, "Center point id");
  fn_test->add_option("--r", gf.r, "Radius")->check(CLI::PositiveNumber);
  fn_test->add_option("--s", gf.s, "Smoothness exponent")->check(CLI::PositiveNumber);
  fn_test->add_option("--grad-out", gf.grad_out, "Gradient JSON output");
  fn_bumps->add_option("--count", gf.count, "Number of bumps")->check(CLI::PositiveNumber);
  fn_bumps->add_option("--seed", gf.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (cmd_space->parsed()) return space_check(sc);
    if (cmd_re->parsed()) return rearrange(ra);
    if (cmd_check->parsed()) return gradient_check(ga);
    if (cmd_canon->parsed()) return gradient_canonical(ga);
    if (cmd_min->parsed()) return gradient_min(ga);
    if (cmd_osc->parsed()) return verify_oscillation(oa);
    if (cmd_conv->parsed()) return verify_converse(ca);
    if (cmd_emb->parsed()) return verify_embedding(ea);
    if (cmd_gal_plane->parsed()) return gallery_appendix(gl);
    if (gen_grid->parsed() || gen_cloud->parsed() || gen_plane->parsed()) {
      std::optional<DiscreteSpace> space;
      try {
        if (gen_grid->parsed()) {
          space = grid_space(gs.dim, gs.n, gs.lo, gs.hi, coord_metric(gs.metric));
        } else if (gen_cloud->parsed()) {
          space = random_cloud(gs.dim, gs.n, gs.seed, gs.lo, gs.hi, coord_metric(gs.metric));
        } else {
          space = appendix_plane_sample(gs.per_unit, {gs.window[0], gs.window[1], gs.window[2], gs.window[3]});
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      save_space(gs.out, *space);
      std::cout << "gen-space: " << space->size() << " points, total mass "
                << short_num(space->total_mass()) << " -> " << gs.out << "\n";
      return kPass;
    }
    if (fn_test->parsed()) return gen_test_function(gf);
    if (fn_bumps->parsed()) {
      const DiscreteSpace space = load_discrete(gf.space);
      save_values(gf.out, random_bumps(space, gf.count, gf.seed));
      std::cout << "gen-fn bumps: " << space.size() << " values -> " << gf.out << "\n";
      return kPass;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  }
  std::cerr << app.help() << "\n";
  return kUsage;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data());
}

}  // namespace hsob::cli
