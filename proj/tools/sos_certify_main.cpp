// sos-certify: solve preset or inline SOS interpolation problems, verify
// certificates with the independent oracle suite, and sweep parameter families.
#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "soscert/io.hpp"
#include "soscert/oracle.hpp"
#include "soscert/problems.hpp"
#include "soscert/solver.hpp"

using namespace soscert;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::VectorXd parse_csv_doubles(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw InvalidInput("cannot parse number \"" + item + "\"");
    vals.push_back(v);
  }
  if (vals.empty()) throw InvalidInput("empty number list");
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
}

struct SolveOpts {
  std::string preset;
  double alpha = 0.0;
  bool has_alpha = false;
  int dim = 1;
  int degree = 0;
  std::string basis = "monomial";
  std::string nodes = "equispaced";
  std::string coeffs;
  std::string method = "mnewton";
  double tol = 1e-8;
  int max_iter = 10000;
  double tau0 = 1.0;
  double tau_min = 1e-16;
  double tau_cap = 0.0;
  bool has_tau_cap = false;
  double epsilon = 0.0;
  bool stall_continue = false;
  bool has_stall_continue = false;
  std::uint64_t seed = 0;
  std::string out_trace, out_cert;
};

SosProblem build_problem(const SolveOpts& o) {
  SosProblem p = [&] {
    if (!o.preset.empty()) {
      std::optional<double> alpha;
      if (o.has_alpha) alpha = o.alpha;
      std::optional<int> degree;
      if (o.degree > 0) degree = o.degree;
      return problem_from_preset(o.preset, alpha, degree);
    }
    if (o.degree <= 0) throw InvalidInput("inline problems need --degree (or use --preset)");
    if (o.coeffs.empty()) throw InvalidInput("inline problems need --coeffs");
    if (o.dim == 2) {
      if (o.basis == "chebyshev")
        throw InvalidInput("chebyshev basis is 1D only; the triangle uses monomials");
      TargetSpec t = TargetSpec::coefficients(BasisSpec::monomial_2d(), o.degree,
                                              parse_csv_doubles(o.coeffs));
      return build_triangle_problem(o.degree, t);
    }
    BasisFamily family = o.basis == "chebyshev" ? BasisFamily::ShiftedChebyshev1D
                                                : BasisFamily::Monomial1D;
    NodeScheme scheme = o.nodes == "chebyshev" ? NodeScheme::ChebyshevNodes
                                               : NodeScheme::Equispaced;
    TargetSpec t = TargetSpec::coefficients(BasisSpec{family}, o.degree,
                                            parse_csv_doubles(o.coeffs));
    return build_segment_problem(o.degree, scheme, family, t);
  }();
  if (o.epsilon > 0.0) p = regularize_epsilon(p, o.epsilon);
  return p;
}

SolverConfig build_config(const SolveOpts& o) {
  SolverConfig cfg = SolverConfig::for_method(method_from_name(o.method));
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.tau0 = o.tau0;
  cfg.tau_min = o.tau_min;
  if (o.has_tau_cap) cfg.tau_cap = o.tau_cap;
  // the plain-ansatz Motzkin preset exists to exhibit a stall: keep iterating
  // through step underflow so the run reports MaxIterReached with a plateau
  cfg.continue_on_underflow =
      o.has_stall_continue ? o.stall_continue : o.preset == "test6-unweighted";
  return cfg;
}

int cmd_solve(const SolveOpts& o) {
  SosProblem problem = build_problem(o);
  SolveResult result = solve(problem, build_config(o));
  if (!o.out_trace.empty()) write_trace_csv(result.trace, o.out_trace);
  if (!o.out_cert.empty())
    write_certificate_json(problem, result.certificate, result.trace.status, o.out_cert);
  std::cout << (problem.label.empty() ? "inline" : problem.label)
            << " method=" << o.method << " status=" << to_string(result.trace.status)
            << " iterations=" << result.trace.steps()
            << " grad_norm=" << g17(result.trace.final_grad_norm());
  if (result.trace.status != SolveStatus::Converged)
    std::cout << " plateau=" << g17(result.trace.grad_plateau());
  std::cout << "\n";
  return result.trace.status == SolveStatus::Converged ? 0 : 2;
}

struct VerifyOpts {
  std::string cert_path;
  std::string profile = "full";
  int grid = 0;
  int samples = 25;
  std::uint64_t seed = 0;
  std::string out_report;
};

VerificationReport positivity_report(const SosProblem& p, const Certificate& cert,
                                     int grid) {
  double scale = 1.0 + p.y.cwiseAbs().maxCoeff();
  double floor = -1e-10 * scale;
  double lowest = std::numeric_limits<double>::infinity();
  Point argmin{};
  auto visit = [&](Point x) {
    double v = eval_p_lambda(p, cert, x);
    if (v < lowest) {
      lowest = v;
      argmin = x;
    }
  };
  if (p.points.domain == DomainTag::Segment01) {
    int pts = grid > 0 ? grid : 10000;
    for (int i = 0; i < pts; ++i) visit({double(i) / (pts - 1), 0.0});
  } else {
    int N = grid > 0 ? grid : 200;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j + i <= N; ++j) visit({double(i) / N, double(j) / N});
  }
  VerificationReport rep{"positivity", lowest >= floor, std::max(0.0, -lowest),
                         -floor, "", std::nullopt};
  rep.detail = "grid min " + g17(lowest) + " at (" + g17(argmin.x) + "," + g17(argmin.y) +
               "), floor " + g17(floor);
  return rep;
}

VerificationReport interpolation_report(const SosProblem& p, const Certificate& cert) {
  double tol = 1e-6 * (1.0 + p.y.cwiseAbs().maxCoeff());
  double worst = 0.0;
  int at = 0;
  for (int r = 0; r < p.num_nodes(); ++r) {
    double res = std::abs(p.y[r] - eval_p_lambda(p, cert, p.points.nodes[r]));
    if (res > worst) {
      worst = res;
      at = r;
    }
  }
  VerificationReport rep{"interpolation", worst <= tol, worst, tol,
                         "worst residual at node " + std::to_string(at), std::nullopt};
  return rep;
}

int cmd_verify(const VerifyOpts& o) {
  CertificateBundle bundle = read_certificate_json(o.cert_path);
  const SosProblem& p = bundle.problem;
  std::vector<VerificationReport> reports;
  if (o.profile == "positivity") {
    reports.push_back(positivity_report(p, bundle.certificate, o.grid));
  } else if (o.profile == "interpolation") {
    reports.push_back(interpolation_report(p, bundle.certificate));
  } else {
    reports.push_back(verify_certificate(p, bundle.certificate, o.grid));
    reports.push_back(check_linear_independence(p));
    reports.push_back(lagrange_cone_membership(p, o.samples, o.seed));
    Eigen::VectorXd lam = random_in_domain_lambda(p, o.seed);
    reports.push_back(fd_gradient_check(p, lam));
    reports.push_back(fd_hessian_check(p, lam));
    if (p.basis.family == BasisFamily::Monomial1D)
      reports.push_back(hankel_structure_check(p, bundle.certificate.lambda));
  }
  bool all = true;
  for (const VerificationReport& r : reports) {
    all = all && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.check << " metric=" << g17(r.metric)
              << " tolerance=" << g17(r.tolerance) << " (" << r.detail << ")\n";
  }
  if (!o.out_report.empty()) {
    std::ofstream out(o.out_report, std::ios::binary);
    if (!out) throw InvalidInput("cannot open \"" + o.out_report + "\" for writing");
    out << reports_to_json(o.profile, reports) << '\n';
  }
  return all ? 0 : 2;
}

struct SweepOpts {
  std::string axis;
  std::string method = "mnewton";
  std::string preset = "test1";
  std::string values = "1,1e-3,1e-6,1e-9";
  int degree_max = 12;
  double tol = 1e-8;
  int max_iter = 20000;
  std::string out;
};

unsigned sweep_threads(size_t jobs) {
  unsigned t = std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  if (const char* env = std::getenv("SOS_CERTIFY_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) t = static_cast<unsigned>(cap);
  }
  return std::min<unsigned>(t, static_cast<unsigned>(jobs));
}

int cmd_sweep(const SweepOpts& o) {
  struct Job {
    std::string axis_value;
    std::function<SolveResult()> run;
  };
  std::vector<Job> jobs;
  auto config_for = [&](const std::string& method) {
    SolverConfig cfg = SolverConfig::for_method(method_from_name(method));
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    return cfg;
  };
  if (o.axis == "alpha") {
    Eigen::VectorXd alphas = parse_csv_doubles(o.values);
    for (int i = 0; i < alphas.size(); ++i) {
      double a = alphas[i];
      jobs.push_back({g17(a), [=] {
                        return solve(problem_from_preset("test3", a, {}), config_for(o.method));
                      }});
    }
  } else if (o.axis == "degree") {
    for (int n = 1; n <= o.degree_max; ++n)
      jobs.push_back({std::to_string(n), [=] {
                        return solve(problem_from_preset("test4", {}, n), config_for(o.method));
                      }});
  } else {  // method
    for (const char* m : {"gd", "euler", "newton", "mnewton", "bb1", "bb2"})
      jobs.push_back({m, [=] {
                        return solve(problem_from_preset(o.preset, {}, {}), config_for(m));
                      }});
  }

  std::vector<std::string> rows(jobs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        SolveResult res = jobs[i].run();
        double cond = std::numeric_limits<double>::quiet_NaN();
        for (auto it = res.trace.rows.rbegin(); it != res.trace.rows.rend(); ++it)
          if (std::isfinite(it->cond_H)) {
            cond = it->cond_H;
            break;
          }
        std::string row = jobs[i].axis_value + "," + std::to_string(res.trace.steps()) +
                          "," + g17(res.trace.final_grad_norm()) + ",";
        if (!std::isnan(cond)) row += g17(cond);
        row += "," + g17(res.lambda.norm());
        rows[i] = row;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  unsigned T = sweep_threads(jobs.size());
  if (T <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::ostringstream csv;
  csv << "axis_value,iterations,final_grad_norm,cond_H,lambda_norm\n";
  for (const std::string& row : rows) csv << row << '\n';
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw InvalidInput("cannot open \"" + o.out + "\" for writing");
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted sum-of-squares interpolation certificates"};
  app.require_subcommand(1);

  SolveOpts so;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a problem and emit trace/certificate");
  solve_cmd->add_option("--preset", so.preset, "named preset (test1..test6, test6-unweighted)");
  auto* alpha_opt = solve_cmd->add_option("--alpha", so.alpha, "preset parameter (test3)");
  solve_cmd->add_option("--dim", so.dim, "inline problem dimension (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  solve_cmd->add_option("--degree", so.degree, "ansatz degree n");
  solve_cmd->add_option("--basis", so.basis, "polynomial basis")
      ->check(CLI::IsMember({"monomial", "chebyshev"}));
  solve_cmd->add_option("--nodes", so.nodes, "1D node scheme")
      ->check(CLI::IsMember({"equispaced", "chebyshev"}));
  solve_cmd->add_option("--coeffs", so.coeffs, "inline target coefficients, comma separated");
  solve_cmd->add_option("--method", so.method, "gd, euler, newton, mnewton, bb1, bb2");
  solve_cmd->add_option("--tol", so.tol, "gradient-norm stopping tolerance");
  solve_cmd->add_option("--max-iter", so.max_iter, "iteration budget");
  solve_cmd->add_option("--tau0", so.tau0, "initial time step");
  solve_cmd->add_option("--tau-min", so.tau_min, "step underflow threshold");
  auto* cap_opt = solve_cmd->add_option("--tau-cap", so.tau_cap, "upper bound on the base step");
  solve_cmd->add_option("--epsilon", so.epsilon, "extra p_B regularization added to y");
  auto* stall_opt = solve_cmd->add_flag("--stall-continue", so.stall_continue,
                                        "keep iterating after step underflow");
  solve_cmd->add_option("--out-trace", so.out_trace, "write iteration trace CSV here");
  solve_cmd->add_option("--out-cert", so.out_cert, "write certificate JSON here");
  solve_cmd->add_option("--seed", so.seed,
                        "accepted for config compatibility; solves are deterministic");

  VerifyOpts vo;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the oracle suite on a certificate");
  verify_cmd->add_option("--cert", vo.cert_path, "certificate JSON path")->required();
  verify_cmd->add_option("--profile", vo.profile, "full, positivity or interpolation")
      ->check(CLI::IsMember({"full", "positivity", "interpolation"}));
  verify_cmd->add_option("--grid", vo.grid, "positivity grid density (0 = defaults)");
  verify_cmd->add_option("--samples", vo.samples, "cone-membership sample count");
  verify_cmd->add_option("--seed", vo.seed, "seed for randomized checks");
  verify_cmd->add_option("--out-report", vo.out_report, "write JSON report bundle here");

  SweepOpts wo;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter family, one CSV row per run");
  sweep_cmd->add_option("--axis", wo.axis, "alpha, degree or method")
      ->required()
      ->check(CLI::IsMember({"alpha", "degree", "method"}));
  sweep_cmd->add_option("--method", wo.method, "solver for alpha/degree sweeps");
  sweep_cmd->add_option("--preset", wo.preset, "preset for method sweeps");
  sweep_cmd->add_option("--values", wo.values, "alpha values, comma separated");
  sweep_cmd->add_option("--degree-max", wo.degree_max, "degree sweep upper end");
  sweep_cmd->add_option("--tol", wo.tol, "stopping tolerance for every run");
  sweep_cmd->add_option("--max-iter", wo.max_iter, "iteration budget for every run");
  sweep_cmd->add_option("--out", wo.out, "summary CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    so.has_alpha = alpha_opt->count() > 0;
    so.has_tau_cap = cap_opt->count() > 0;
    so.has_stall_continue = stall_opt->count() > 0;
    if (solve_cmd->parsed()) return cmd_solve(so);
    if (verify_cmd->parsed()) return cmd_verify(vo);
    return cmd_sweep(wo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
