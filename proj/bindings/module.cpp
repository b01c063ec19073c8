// Python bindings: the core operations behind the soscert package.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "soscert/io.hpp"
#include "soscert/oracle.hpp"
#include "soscert/problems.hpp"
#include "soscert/solver.hpp"

namespace py = pybind11;
using namespace soscert;

namespace {

SolverConfig make_config(const std::string& method, double tol, int max_iter, double tau0,
                         double tau_min, std::optional<double> tau_cap, bool stall_continue) {
  SolverConfig cfg = SolverConfig::for_method(method_from_name(method));
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.tau0 = tau0;
  cfg.tau_min = tau_min;
  if (tau_cap) cfg.tau_cap = *tau_cap;
  cfg.continue_on_underflow = stall_continue;
  return cfg;
}

// rows x 6 matrix mirroring the trace CSV columns
Eigen::MatrixXd trace_matrix(const IterationTrace& trace) {
  Eigen::MatrixXd m(trace.rows.size(), 6);
  for (size_t i = 0; i < trace.rows.size(); ++i) {
    const TraceRow& r = trace.rows[i];
    m.row(i) << r.iter, r.G, r.grad_norm, r.tau, r.cond_H, r.min_eig_M;
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "weighted sum-of-squares interpolation certificates";

  auto err = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", err);
  py::register_exception<NotUnisolvent>(m, "NotUnisolvent", err);
  py::register_exception<WeightDegreeMismatch>(m, "WeightDegreeMismatch", err);
  py::register_exception<OutOfDomain>(m, "OutOfDomain", err);
  py::register_exception<SolveError>(m, "SolveError", err);
  py::register_exception<UnknownPreset>(m, "UnknownPreset", err);
  py::register_exception<InsufficientMargin>(m, "InsufficientMargin", err);

  py::class_<SosProblem>(m, "Problem")
      .def_readonly("n", &SosProblem::n)
      .def_readonly("label", &SosProblem::label)
      .def_readonly("y", &SosProblem::y)
      .def_readonly("epsilon", &SosProblem::epsilon)
      .def_readonly("block_sizes", &SosProblem::block_sizes)
      .def_readonly("block_degrees", &SosProblem::block_degrees)
      .def_readonly("block_sum_waived", &SosProblem::block_sum_waived)
      .def_property_readonly("num_nodes", &SosProblem::num_nodes)
      .def_property_readonly("num_blocks", &SosProblem::num_blocks)
      .def_property_readonly("size", &SosProblem::size)
      .def_property_readonly("dim", [](const SosProblem& p) { return p.basis.dimension(); })
      .def_property_readonly("basis", [](const SosProblem& p) { return basis_name(p.basis); })
      .def_property_readonly("weights",
                             [](const SosProblem& p) {
                               std::vector<std::string> names;
                               for (const Weight& w : p.weights) names.push_back(w.name);
                               return names;
                             })
      .def_property_readonly("nodes",
                             [](const SosProblem& p) {
                               Eigen::MatrixXd pts(p.num_nodes(), 2);
                               for (int r = 0; r < p.num_nodes(); ++r)
                                 pts.row(r) << p.points.nodes[r].x, p.points.nodes[r].y;
                               return pts;
                             })
      .def("__repr__", [](const SosProblem& p) {
        return "<Problem " + (p.label.empty() ? "unnamed" : p.label) + " n=" +
               std::to_string(p.n) + " nodes=" + std::to_string(p.num_nodes()) + ">";
      });

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("lam", &Certificate::lambda)
      .def_readonly("q", &Certificate::q)
      .def_readonly("residual", &Certificate::residual);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("lam", &SolveResult::lambda)
      .def_readonly("certificate", &SolveResult::certificate)
      .def_property_readonly("status",
                             [](const SolveResult& r) { return to_string(r.status); })
      .def_property_readonly("iterations",
                             [](const SolveResult& r) { return r.trace.steps(); })
      .def_property_readonly("final_grad_norm",
                             [](const SolveResult& r) { return r.trace.final_grad_norm(); })
      .def_property_readonly("grad_plateau",
                             [](const SolveResult& r) { return r.trace.grad_plateau(); })
      .def_property_readonly("wall_seconds",
                             [](const SolveResult& r) { return r.trace.wall_seconds; })
      // columns: iter, G, grad_norm, tau, cond_H, min_eig_M (NaN = not recorded)
      .def_property_readonly("trace",
                             [](const SolveResult& r) { return trace_matrix(r.trace); })
      .def("__repr__", [](const SolveResult& r) {
        return "<SolveResult " + to_string(r.status) + " iterations=" +
               std::to_string(r.trace.steps()) + ">";
      });

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("check", &VerificationReport::check)
      .def_readonly("passed", &VerificationReport::pass)
      .def_readonly("metric", &VerificationReport::metric)
      .def_readonly("tolerance", &VerificationReport::tolerance)
      .def_readonly("detail", &VerificationReport::detail)
      .def_readonly("seed", &VerificationReport::seed)
      .def("__bool__", [](const VerificationReport& r) { return r.pass; })
      .def("__repr__", [](const VerificationReport& r) {
        return "<VerificationReport " + r.check + (r.pass ? " pass>" : " FAIL>");
      });

  m.def(
      "preset",
      [](const std::string& name, std::optional<double> alpha, std::optional<int> degree) {
        return problem_from_preset(name, alpha, degree);
      },
      py::arg("name"), py::arg("alpha") = py::none(), py::arg("degree") = py::none());
  m.def("preset_catalog", [] {
    py::list out;
    for (const PresetInfo& info : preset_catalog()) {
      py::dict d;
      d["name"] = info.name;
      d["dimension"] = info.dimension;
      d["degree"] = info.degree;
      d["summary"] = info.summary;
      out.append(d);
    }
    return out;
  });
  m.def(
      "segment_problem",
      [](int n, const Eigen::VectorXd& coeffs, const std::string& basis,
         const std::string& nodes) {
        BasisFamily family = basis == "chebyshev" ? BasisFamily::ShiftedChebyshev1D
                                                  : BasisFamily::Monomial1D;
        if (basis != "chebyshev" && basis != "monomial")
          throw InvalidInput("basis must be monomial or chebyshev");
        NodeScheme scheme =
            nodes == "chebyshev" ? NodeScheme::ChebyshevNodes : NodeScheme::Equispaced;
        if (nodes != "chebyshev" && nodes != "equispaced")
          throw InvalidInput("nodes must be equispaced or chebyshev");
        return build_segment_problem(n, scheme, family,
                                     TargetSpec::coefficients(BasisSpec{family}, n, coeffs));
      },
      py::arg("n"), py::arg("coeffs"), py::arg("basis") = "monomial",
      py::arg("nodes") = "equispaced");
  m.def(
      "triangle_problem",
      [](int n, const Eigen::VectorXd& coeffs) {
        return build_triangle_problem(
            n, TargetSpec::coefficients(BasisSpec::monomial_2d(), n, coeffs));
      },
      py::arg("n"), py::arg("coeffs"));
  m.def("regularize_epsilon", &regularize_epsilon, py::arg("problem"), py::arg("eps"));

  m.def("eval_G", &eval_G, py::arg("problem"), py::arg("lam"));
  m.def("grad_G", &grad_G, py::arg("problem"), py::arg("lam"));
  m.def("hess_G", &hess_G, py::arg("problem"), py::arg("lam"));
  m.def("min_eig_M", &min_eig_M, py::arg("problem"), py::arg("lam"));
  m.def(
      "eval_p_B",
      [](const SosProblem& p, double x, double y) { return eval_p_B(p, {x, y}); },
      py::arg("problem"), py::arg("x"), py::arg("y") = 0.0);

  m.def(
      "solve",
      [](const SosProblem& problem, const std::string& method, double tol, int max_iter,
         double tau0, double tau_min, std::optional<double> tau_cap, bool stall_continue) {
        return solve(problem,
                     make_config(method, tol, max_iter, tau0, tau_min, tau_cap, stall_continue));
      },
      py::arg("problem"), py::arg("method") = "mnewton", py::arg("tol") = 1e-8,
      py::arg("max_iter") = 10000, py::arg("tau0") = 1.0, py::arg("tau_min") = 1e-16,
      py::arg("tau_cap") = py::none(), py::arg("stall_continue") = false,
      py::call_guard<py::gil_scoped_release>());

  m.def("extract_certificate", &extract_certificate, py::arg("problem"), py::arg("lam"));
  m.def(
      "eval_p_lambda",
      [](const SosProblem& p, const Certificate& c, double x, double y) {
        return eval_p_lambda(p, c, {x, y});
      },
      py::arg("problem"), py::arg("certificate"), py::arg("x"), py::arg("y") = 0.0);

  m.def("verify_certificate", &verify_certificate, py::arg("problem"), py::arg("certificate"),
        py::arg("grid") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("fd_gradient_check", &fd_gradient_check, py::arg("problem"), py::arg("lam"),
        py::arg("h") = 1e-6);
  m.def("fd_hessian_check", &fd_hessian_check, py::arg("problem"), py::arg("lam"),
        py::arg("h") = 1e-5);
  m.def("check_linear_independence", &check_linear_independence, py::arg("problem"));
  m.def("lagrange_cone_membership", &lagrange_cone_membership, py::arg("problem"),
        py::arg("samples") = 25, py::arg("seed") = 0);
  m.def("hankel_structure_check", &hankel_structure_check, py::arg("problem"), py::arg("lam"));
  m.def("random_in_domain_lambda", &random_in_domain_lambda, py::arg("problem"),
        py::arg("seed"));

  m.def(
      "certificate_to_json",
      [](const SosProblem& p, const Certificate& c, const std::string& status) {
        return certificate_to_json(p, c, status_from_name(status));
      },
      py::arg("problem"), py::arg("certificate"), py::arg("status") = "Converged");
  m.def(
      "write_certificate_json",
      [](const SosProblem& p, const Certificate& c, const std::string& status,
         const std::string& path) {
        write_certificate_json(p, c, status_from_name(status), path);
      },
      py::arg("problem"), py::arg("certificate"), py::arg("status"), py::arg("path"));
  m.def(
      "read_certificate_json",
      [](const std::string& path) {
        CertificateBundle b = read_certificate_json(path);
        return py::make_tuple(std::move(b.problem), std::move(b.certificate),
                              to_string(b.status));
      },
      py::arg("path"));
  m.def(
      "write_trace_csv",
      [](const SolveResult& res, const std::string& path) { write_trace_csv(res.trace, path); },
      py::arg("result"), py::arg("path"));
}
