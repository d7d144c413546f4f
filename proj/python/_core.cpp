// Python bindings for the solver core. Numbers go in and out as floats and
// NumPy arrays; reports are plain objects with the same fields as in C++.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracfem/cases.hpp"
#include "fracfem/config.hpp"
#include "fracfem/convergence.hpp"
#include "fracfem/fem.hpp"
#include "fracfem/kernel.hpp"
#include "fracfem/mittag_leffler.hpp"
#include "fracfem/parallel.hpp"
#include "fracfem/semidiscrete.hpp"
#include "fracfem/timestepper.hpp"

namespace py = pybind11;
using namespace fracfem;

namespace {

Eigen::MatrixXd dof_points(const Mesh& mesh) {
  Eigen::MatrixXd p(mesh.dof_count(), 2);
  for (int i = 0; i < mesh.dof_count(); ++i) {
    const auto q = mesh.dof_point(i);
    p(i, 0) = q[0];
    p(i, 1) = q[1];
  }
  return p;
}

FemSystem case_system(const DataCase& c, int resolution) {
  return assemble(Mesh::uniform(c.domain, resolution));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-term time-fractional diffusion: FEM solvers and convergence studies";
  m.attr("__version__") = FRACFEM_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<FracOrders>(m, "Orders")
      .def(py::init([](double alpha, const std::vector<std::pair<double, double>>& lower, double horizon) {
             std::vector<LowerOrder> lo;
             for (const auto& [order, weight] : lower) lo.push_back({order, weight});
             return FracOrders(alpha, lo, horizon);
           }),
           py::arg("alpha"), py::arg("lower") = std::vector<std::pair<double, double>>{},
           py::arg("horizon") = 1.0)
      .def_property_readonly("alpha", &FracOrders::alpha)
      .def_property_readonly("horizon", &FracOrders::horizon)
      .def_property_readonly("lower", [](const FracOrders& o) {
        std::vector<std::pair<double, double>> out;
        for (const auto& lo : o.lower()) out.emplace_back(lo.order, lo.weight);
        return out;
      })
      .def("__repr__", &FracOrders::describe);

  m.def("mml_value",
        [](const std::vector<double>& betas, double beta0, const std::vector<double>& z, double tol) {
          return mml_value(MLParams{betas, beta0}, z, tol).value;
        },
        py::arg("betas"), py::arg("beta0"), py::arg("z"), py::arg("tol") = 1e-12,
        "Multinomial Mittag-Leffler function: series when reliable, else contour.");
  m.def("mml_series",
        [](const std::vector<double>& betas, double beta0, const std::vector<double>& z, double tol) {
          return mml_eval(MLParams{betas, beta0}, z, tol).value;
        },
        py::arg("betas"), py::arg("beta0"), py::arg("z"), py::arg("tol") = 1e-12);
  m.def("mml_contour",
        [](const std::vector<double>& betas, double beta0, const std::vector<double>& z, int nodes) {
          return mml_contour(MLParams{betas, beta0}, z, nodes).value;
        },
        py::arg("betas"), py::arg("beta0"), py::arg("z"), py::arg("nodes") = 32);

  m.def("relaxation", &relaxation_alt, py::arg("lam"), py::arg("t"), py::arg("orders"),
        "Per-mode solution factor e(t) for the initial value.");
  m.def("response", &mode_response, py::arg("lam"), py::arg("t"), py::arg("orders"),
        "Per-mode kernel ebar(t).");
  m.def("primitive", &mode_primitive, py::arg("lam"), py::arg("t"), py::arg("orders"),
        "Integral of ebar over [0, t].");

  m.def("l1_weights", &l1_weights, py::arg("alpha"), py::arg("count"));
  m.def("caputo_l1", [](const std::vector<double>& samples, double alpha, double tau) {
    return caputo_l1_apply(samples, alpha, tau);
  }, py::arg("samples"), py::arg("alpha"), py::arg("tau"));

  m.def("case_names", &case_names);
  m.def("worker_count", &worker_count);

  m.def("solve_semidiscrete",
        [](const std::string& name, const FracOrders& orders, int resolution, const std::vector<double>& times) {
          const DataCase c = make_case(name, orders);
          const SemidiscreteSolution sol(case_system(c, resolution), orders, c.initial, c.regularity,
                                         c.sources);
          Eigen::MatrixXd values(sol.system().dofs(), static_cast<Eigen::Index>(times.size()));
          for (std::size_t i = 0; i < times.size(); ++i) values.col(static_cast<Eigen::Index>(i)) = sol.evolve(times[i]);
          return py::make_tuple(dof_points(sol.system().mesh()), values);
        },
        py::arg("case"), py::arg("orders"), py::arg("resolution"), py::arg("times"),
        "Returns (points, values) with one column of nodal values per time.");

  m.def("solve_fully_discrete",
        [](const std::string& name, const FracOrders& orders, int resolution, int steps) {
          const DataCase c = make_case(name, orders);
          const FemSystem s = case_system(c, resolution);
          const Vector u0 = project_initial(s, c.initial, choose_projection(c.initial, c.regularity));
          std::vector<int> all;
          for (int n = 0; n <= steps; ++n) all.push_back(n);
          const auto traj = solve_fully_discrete(s, orders, TimeGrid(orders.horizon(), steps), u0, c.sources, all);
          Eigen::MatrixXd values(s.dofs(), steps + 1);
          for (int n = 0; n <= steps; ++n) values.col(n) = traj.states[n];
          return py::make_tuple(dof_points(s.mesh()), Eigen::VectorXd::Map(traj.times.data(), steps + 1).eval(), values);
        },
        py::arg("case"), py::arg("orders"), py::arg("resolution"), py::arg("steps"),
        "Returns (points, times, values) for the L1 scheme on a uniform grid.");

  py::class_<LadderPoint>(m, "LadderPoint")
      .def_readonly("param", &LadderPoint::param)
      .def_readonly("l2", &LadderPoint::l2)
      .def_readonly("h1", &LadderPoint::h1)
      .def("__repr__", [](const LadderPoint& p) {
        return "LadderPoint(param=" + std::to_string(p.param) + ", l2=" + std::to_string(p.l2) +
               ", h1=" + std::to_string(p.h1) + ")";
      });

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("case_name", &ConvergenceReport::case_name)
      .def_readonly("study", &ConvergenceReport::study)
      .def_readonly("t_eval", &ConvergenceReport::t_eval)
      .def_readonly("points", &ConvergenceReport::points)
      .def_readonly("rate_l2", &ConvergenceReport::rate_l2)
      .def_readonly("rate_h1", &ConvergenceReport::rate_h1)
      .def_readonly("theory_l2", &ConvergenceReport::theory_l2)
      .def_readonly("theory_h1", &ConvergenceReport::theory_h1)
      .def_readonly("tolerance", &ConvergenceReport::tolerance)
      .def_readonly("flagged", &ConvergenceReport::flagged)
      .def_readonly("notes", &ConvergenceReport::notes)
      .def("pass_l2", &ConvergenceReport::pass_l2)
      .def("pass_h1", &ConvergenceReport::pass_h1)
      .def("__eq__", [](const ConvergenceReport& a, const ConvergenceReport& b) { return a == b; });

  m.def("converge_space",
        [](const std::string& name, const FracOrders& orders, const std::vector<double>& times,
           const std::vector<int>& resolutions, int reference_modes, double tolerance) {
          SpaceStudyOptions opts;
          opts.reference_modes = reference_modes;
          opts.tolerance = tolerance;
          py::gil_scoped_release release;
          return run_convergence_space(make_case(name, orders), orders, times, resolutions, opts);
        },
        py::arg("case"), py::arg("orders"), py::arg("times"), py::arg("resolutions"),
        py::arg("reference_modes") = 0, py::arg("tolerance") = 0.15);
  m.def("converge_time",
        [](const std::string& name, const FracOrders& orders, int resolution, const std::vector<int>& steps,
           double tolerance) {
          TimeStudyOptions opts;
          opts.tolerance = tolerance;
          py::gil_scoped_release release;
          return run_convergence_time(make_case(name, orders), orders, resolution, steps, opts);
        },
        py::arg("case"), py::arg("orders"), py::arg("resolution"), py::arg("steps"),
        py::arg("tolerance") = 0.10);
  m.def("blowup",
        [](const std::string& name, const FracOrders& orders, int resolution, const std::vector<double>& times,
           int reference_modes) {
          SpaceStudyOptions opts;
          opts.reference_modes = reference_modes;
          py::gil_scoped_release release;
          return run_blowup_study(make_case(name, orders), orders, resolution, times, opts);
        },
        py::arg("case"), py::arg("orders"), py::arg("resolution"), py::arg("times"),
        py::arg("reference_modes") = 0);

  m.def("estimate_rate", [](const std::vector<double>& params, const std::vector<double>& errors) {
    return estimate_rate(params, errors);
  }, py::arg("params"), py::arg("errors"));
  m.def("emit_table", &emit_table, py::arg("report"));
  m.def("parse_table", [](const std::string& text) { return parse_table(text); }, py::arg("text"));
  m.def("config_hash", [](const std::string& text) { return hex64(parse_config(text).hash); },
        py::arg("json_text"), "FNV-1a hash of the canonical form of a run configuration.");
}
