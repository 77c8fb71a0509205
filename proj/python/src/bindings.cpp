#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hsob/cli.hpp"
#include "hsob/errors.hpp"
#include "hsob/generate.hpp"
#include "hsob/hajlasz.hpp"
#include "hsob/rearrange.hpp"
#include "hsob/rinorm.hpp"
#include "hsob/space.hpp"
#include "hsob/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

hsob::DiscreteSpace make_space(const std::vector<std::vector<double>>& points,
                               std::vector<double> weights, const std::string& metric) {
  const std::size_t dim = points.empty() ? 0 : points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("points must all have the same dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return hsob::DiscreteSpace(dim, std::move(flat), std::move(weights),
                             hsob::parse_metric_kind(metric));
}

std::vector<double> space_weights(const hsob::DiscreteSpace& space) {
  return {space.weights().begin(), space.weights().end()};
}

py::dict solution_dict(const hsob::GradientSolution& sol) {
  return py::dict("g"_a = sol.g, "norm_value"_a = sol.norm_value, "certificate"_a = sol.certificate,
                  "certificate_kind"_a = sol.certificate_kind, "iterations"_a = sol.iterations);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rearrangements, r.i. norms, s-gradients and the oscillation-inequality harness";

  py::register_exception<hsob::ConsistencyError>(m, "ConsistencyError");
  py::register_exception<hsob::SolverError>(m, "SolverError");

  py::enum_<hsob::MetricKind>(m, "MetricKind")
      .value("euclidean", hsob::MetricKind::euclidean)
      .value("linf", hsob::MetricKind::linf)
      .value("matrix", hsob::MetricKind::matrix);

  py::class_<hsob::DiscreteSpace>(m, "DiscreteSpace")
      .def(py::init(&make_space), "points"_a, "weights"_a, "metric"_a = "euclidean")
      .def_static(
          "from_matrix",
          [](const std::vector<std::vector<double>>& dist, std::vector<double> weights) {
            std::vector<double> flat;
            for (const auto& row : dist) flat.insert(flat.end(), row.begin(), row.end());
            return hsob::DiscreteSpace(std::move(flat), std::move(weights));
          },
          "dist"_a, "weights"_a)
      .def("__len__", &hsob::DiscreteSpace::size)
      .def_property_readonly("total_mass", &hsob::DiscreteSpace::total_mass)
      .def_property_readonly("weights", &space_weights)
      .def("distance", &hsob::DiscreteSpace::distance, "i"_a, "j"_a)
      .def("ball_measure",
           [](const hsob::DiscreteSpace& s, std::size_t x, double r) { return hsob::ball_measure(s, x, r); },
           "center"_a, "radius"_a)
      .def("min_nn_distance", &hsob::DiscreteSpace::min_nn_distance)
      .def("diameter", &hsob::DiscreteSpace::diameter);

  py::class_<hsob::AnalyticSpace>(m, "AnalyticSpace")
      .def_static("euclidean_lebesgue", &hsob::AnalyticSpace::euclidean_lebesgue, "dim"_a)
      .def_static("appendix_plane", &hsob::AnalyticSpace::appendix_plane)
      .def_property_readonly("name", &hsob::AnalyticSpace::name)
      .def(
          "ball_measure",
          [](const hsob::AnalyticSpace& s, const std::vector<double>& x, double r) {
            return s.ball_measure(x, r);
          },
          "center"_a, "radius"_a);

  m.def("grid_space", &hsob::grid_space, "dim"_a, "n"_a, "lo"_a = 0.0, "hi"_a = 1.0,
        "metric"_a = hsob::MetricKind::euclidean);
  m.def("random_cloud", &hsob::random_cloud, "dim"_a, "n"_a, "seed"_a, "lo"_a = 0.0, "hi"_a = 1.0,
        "metric"_a = hsob::MetricKind::euclidean);
  m.def("appendix_plane_sample", &hsob::appendix_plane_sample, "per_unit"_a, "window"_a);

  py::class_<hsob::StepFunction>(m, "StepFunction")
      .def(py::init<std::vector<double>, std::vector<double>>(), "breakpoints"_a, "values"_a)
      .def("__call__", &hsob::StepFunction::operator(), "t"_a)
      .def("double_star", &hsob::StepFunction::double_star, "t"_a)
      .def("oscillation", &hsob::StepFunction::oscillation, "t"_a)
      .def("integral", &hsob::StepFunction::integral, "t"_a)
      .def_property_readonly("breakpoints", [](const hsob::StepFunction& f) {
        return std::vector<double>(f.breakpoints().begin(), f.breakpoints().end());
      })
      .def_property_readonly("values", [](const hsob::StepFunction& f) {
        return std::vector<double>(f.values().begin(), f.values().end());
      });

  m.def(
      "decreasing_rearrangement",
      [](std::vector<double> values, std::vector<double> weights) {
        return hsob::decreasing_rearrangement(hsob::WeightedSample(std::move(values), std::move(weights)));
      },
      "values"_a, "weights"_a);

  m.def(
      "norm",
      [](const std::string& spec, const hsob::StepFunction& fs) {
        return hsob::norm(hsob::RiSpaceSpec::parse(spec), fs);
      },
      "spec"_a, "f_star"_a, "Norm of a rearrangement in lp:P, lorentz:P:Q, weak-linf or l1+linf");

  m.def(
      "is_s_gradient",
      [](const hsob::DiscreteSpace& space, const std::vector<double>& f, const std::vector<double>& g,
         double s, double tol) {
        const auto r = hsob::is_s_gradient(space, f, g, s, tol);
        return py::dict("ok"_a = r.ok, "max_violation"_a = r.max_violation,
                        "witness"_a = py::make_tuple(r.witness_i, r.witness_j));
      },
      "space"_a, "f"_a, "g"_a, "s"_a, "tol"_a = 0.0);
  m.def(
      "canonical_gradient",
      [](const hsob::DiscreteSpace& space, const std::vector<double>& f, double s) {
        return hsob::canonical_gradient(space, f, s);
      },
      "space"_a, "f"_a, "s"_a);
  m.def(
      "minimal_gradient",
      [](const hsob::DiscreteSpace& space, const std::vector<double>& f, double s,
         const std::string& objective) {
        const auto problem =
            hsob::GradientProblem::from_function(space, f, s, hsob::RiSpaceSpec::parse(objective));
        hsob::GradientSolution sol;
        {
          py::gil_scoped_release release;
          sol = hsob::minimal_gradient(problem);
        }
        return solution_dict(sol);
      },
      "space"_a, "f"_a, "s"_a, "objective"_a = "lp:1");
  m.def(
      "test_function",
      [](const hsob::DiscreteSpace& space, std::size_t x0, double r, double s) {
        const auto pair = hsob::test_function(space, x0, r, s);
        return py::dict("f"_a = pair.f, "g"_a = pair.g, "ok"_a = pair.check.ok,
                        "max_violation"_a = pair.check.max_violation);
      },
      "space"_a, "center"_a, "r"_a, "s"_a);

  m.def(
      "oscillation_report",
      [](const hsob::DiscreteSpace& space, const std::vector<double>& f, const std::vector<double>& g,
         double s, double alpha, double p, double c) {
        const auto rep = hsob::oscillation_inequality_report(space, f, g, s, alpha, p, c);
        return py::dict("t"_a = rep.t_grid, "lhs"_a = rep.lhs, "rhs"_a = rep.rhs, "ratio"_a = rep.ratio,
                        "empirical_constant"_a = rep.empirical_constant,
                        "theoretical_constant"_a = rep.theoretical_constant, "pass"_a = rep.pass);
      },
      "space"_a, "f"_a, "g"_a, "s"_a, "alpha"_a, "p"_a, "c"_a);
  m.def(
      "converse_probe",
      [](const hsob::AnalyticSpace& space, double s, double alpha, const std::vector<double>& center,
         const std::vector<double>& radii) {
        std::vector<hsob::AnalyticProbe> probes;
        for (double r : radii) probes.push_back({center, r});
        const auto rep = hsob::converse_probe(space, s, alpha, probes);
        std::vector<double> c_prime;
        for (const auto& row : rep.rows) c_prime.push_back(row.c_prime);
        return py::dict("fitted_alpha"_a = rep.fitted_alpha, "growth_slope"_a = rep.growth_slope,
                        "c_prime"_a = c_prime, "c_prime_spread"_a = rep.c_prime_spread,
                        "all_checks_ok"_a = rep.all_checks_ok);
      },
      "space"_a, "s"_a, "alpha"_a, "center"_a, "radii"_a);
  m.def(
      "embedding_report",
      [](const hsob::DiscreteSpace& space, const std::vector<double>& f, const std::vector<double>& g,
         double s, double alpha, const std::string& spec) {
        const auto rep = hsob::embedding_report(space, f, g, s, alpha, hsob::RiSpaceSpec::parse(spec));
        return py::dict("case"_a = rep.case_id, "lhs"_a = rep.lhs, "rhs"_a = rep.rhs,
                        "empirical_constant"_a = rep.empirical_constant, "finite"_a = rep.finite,
                        "doublestar_diverges"_a = rep.doublestar_diverges);
      },
      "space"_a, "f"_a, "g"_a, "s"_a, "alpha"_a, "spec"_a);

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "hsob");
        return hsob::cli::run(args);
      },
      "args"_a, "Run the command-line front end in-process; returns the exit code");
}
