#include "soscert/solver.hpp"

#include <chrono>
#include <cmath>

namespace soscert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// max_eig/min_eig with min_eig floored at eps*max_eig: condition numbers past
// ~4.5e15 are not resolvable in double precision anyway.
double cond_from_eigs(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const double maxe = es.eigenvalues().maxCoeff();
  const double mine = es.eigenvalues().minCoeff();
  if (!(maxe > 0.0)) return kNaN;
  return maxe / std::max(mine, maxe * std::numeric_limits<double>::epsilon());
}

}  // namespace

Method method_from_name(const std::string& name) {
  if (name == "gd" || name == "gradient-descent" || name == "gradient_descent")
    return Method::GradientDescent;
  if (name == "euler" || name == "implicit-euler" || name == "implicit_euler" || name == "ie")
    return Method::ImplicitEuler;
  if (name == "newton") return Method::Newton;
  if (name == "mnewton" || name == "modified-newton" || name == "modified_newton" ||
      name == "mn")
    return Method::ModifiedNewton;
  if (name == "bb1") return Method::BB1;
  if (name == "bb2") return Method::BB2;
  throw InvalidInput("unknown method \"" + name +
                     "\" (use gd, euler, newton, mnewton, bb1 or bb2)");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::GradientDescent: return "gd";
    case Method::ImplicitEuler: return "euler";
    case Method::Newton: return "newton";
    case Method::ModifiedNewton: return "mnewton";
    case Method::BB1: return "bb1";
    case Method::BB2: return "bb2";
  }
  return "?";
}

bool method_uses_hessian(Method method) {
  return method == Method::Newton || method == Method::ModifiedNewton ||
         method == Method::ImplicitEuler;
}

SolverConfig SolverConfig::for_method(Method m) {
  SolverConfig config;
  config.method = m;
  config.tau_cap = config.effective_tau_cap();
  return config;
}

double SolverConfig::effective_tau_cap() const {
  if (!std::isnan(tau_cap)) return tau_cap;
  // Newton-type steps rely on the backtracking in-domain check alone and may
  // double past 1; flat near-singular valleys (triangle instances) need the
  // exponential growth to be traversed in a realistic iteration count.
  return kInf;
}

double IterationTrace::final_grad_norm() const {
  return rows.empty() ? kNaN : rows.back().grad_norm;
}

double IterationTrace::grad_plateau() const {
  if (rows.empty()) return kNaN;
  const size_t take = std::min<size_t>(10, rows.size());
  double sum = 0.0;
  for (size_t i = rows.size() - take; i < rows.size(); ++i) sum += rows[i].grad_norm;
  return sum / static_cast<double>(take);
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterReached: return "MaxIterReached";
    case SolveStatus::StepUnderflow: return "StepUnderflow";
  }
  return "?";
}

Eigen::MatrixXd method_matrix(Method method, const Eigen::MatrixXd& hess,
                              const Eigen::VectorXd& grad, double tau_m, double grad0_norm) {
  if (method_uses_hessian(method) && hess.rows() != grad.size())
    throw InvalidInput("method_matrix: Hessian size does not match the gradient");
  const auto n = grad.size();
  switch (method) {
    case Method::GradientDescent:
    case Method::BB1:
    case Method::BB2:
      return Eigen::MatrixXd::Identity(n, n);
    case Method::ImplicitEuler:
      return Eigen::MatrixXd::Identity(n, n) + tau_m * hess;
    case Method::Newton:
      return hess;
    case Method::ModifiedNewton: {
      const double gn = grad.norm();
      const double denom = gn + grad0_norm;
      const double alpha = denom > 0.0 ? gn / denom : 0.0;
      return alpha * (grad * grad.transpose()) + hess;
    }
  }
  throw InvalidInput("method_matrix: unknown method");
}

DirectionResult solve_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& grad,
                                bool want_cond) {
  DirectionResult out;
  if (want_cond) out.cond_H = cond_from_eigs(H);

  const auto n = H.rows();
  double delta = 1e-12 * H.trace() / static_cast<double>(n);
  for (int attempt = 0; attempt <= 8; ++attempt) {
    Eigen::MatrixXd Hs = H;
    if (attempt > 0) {
      Hs.diagonal().array() += delta;
      delta *= 10.0;
      out.regularized = true;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(Hs);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd d = llt.solve(grad);
      if (d.allFinite()) {
        out.d = std::move(d);
        return out;
      }
    }
  }
  throw SolveError("direction solve failed: system matrix stayed singular after 8 shifts");
}

DirectionResult direction(Method method, const SosProblem& problem,
                          const Eigen::VectorXd& lambda, const Eigen::VectorXd& grad,
                          double tau_m, double grad0_norm, bool want_cond) {
  if (!method_uses_hessian(method)) {
    DirectionResult out;
    out.d = grad;
    return out;
  }
  DualEvaluation ev = evaluate_dual(problem, lambda, {.gradient = true, .hessian = true});
  if (!ev.in_domain) throw OutOfDomain("direction: lambda is outside the domain");
  return solve_direction(method_matrix(method, ev.hess, grad, tau_m, grad0_norm), grad,
                         want_cond);
}

double tau_max_cfl(const SosProblem& problem, const Eigen::VectorXd& lambda,
                   const Eigen::VectorXd& d) {
  const double mu = min_eig_M(problem, lambda);
  if (mu <= 0.0) throw OutOfDomain("tau_max_cfl: lambda is not an interior point");
  double radius = 0.0;
  for (int j = 0; j < problem.num_blocks(); ++j) {
    const Eigen::VectorXd scale = d.cwiseProduct(problem.g_at_nodes[j]);
    Eigen::MatrixXd Sj = problem.W[j] * scale.asDiagonal() * problem.W[j].transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sj, Eigen::EigenvaluesOnly);
    radius = std::max(radius, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  if (radius == 0.0) return kInf;
  return mu / radius;
}

StepResult adaptive_tau(const SosProblem& problem, const Eigen::VectorXd& lambda,
                        double grad_norm, const Eigen::VectorXd& d, double tau_m,
                        int k_limit) {
  StepResult out;
  for (int k = 0; k <= k_limit; ++k) {
    const double tau = std::ldexp(tau_m, -k);
    Eigen::VectorXd cand = lambda - tau * d;
    DualEvaluation ev = evaluate_dual(problem, cand, {.gradient = true});
    if (!ev.in_domain) continue;
    const double gn = ev.grad.norm();
    if (gn < grad_norm) {
      out.k = k;
      out.tau_used = tau;
      out.lambda_next = std::move(cand);
      out.G_next = ev.G;
      out.grad_next = std::move(ev.grad);
      out.grad_norm_next = gn;
      return out;
    }
  }
  out.underflow = true;
  out.k = k_limit + 1;
  return out;
}

double next_base_tau(int k, double tau_m, double tau_cap, double tau_min) {
  if (k == 0) return std::min(2.0 * tau_m, tau_cap);
  return std::max(std::ldexp(tau_m, -k), tau_min);
}

double bb_tau(Method variant, const Eigen::VectorXd& lambda_m,
              const Eigen::VectorXd& lambda_prev, const Eigen::VectorXd& grad_m,
              const Eigen::VectorXd& grad_prev) {
  const Eigen::VectorXd s = lambda_m - lambda_prev;
  const Eigen::VectorXd z = grad_m - grad_prev;
  if (variant == Method::BB1) return s.dot(z) / z.dot(z);
  if (variant == Method::BB2) return s.dot(s) / s.dot(z);
  throw InvalidInput("bb_tau: variant must be bb1 or bb2");
}

SolveResult solve(const SosProblem& problem, const SolverConfig& config) {
  if (!(config.tol > 0.0)) throw InvalidInput("solve: tol must be positive");
  if (config.max_iter < 0) throw InvalidInput("solve: max_iter must be >= 0");
  if (!(config.tau0 > 0.0)) throw InvalidInput("solve: tau0 must be positive");
  if (!(config.tau_min > 0.0)) throw InvalidInput("solve: tau_min must be positive");
  if (config.k_limit < 1) throw InvalidInput("solve: k_limit must be >= 1");

  const Method method = config.method;
  const bool hess_needed = method_uses_hessian(method);
  const bool is_bb = method == Method::BB1 || method == Method::BB2;
  const bool first_order = method == Method::GradientDescent || method == Method::ImplicitEuler;
  const bool want_cond = config.record_cond_H && hess_needed;
  const double cap_cfg = config.effective_tau_cap();
  const EvalRequest req{.gradient = true, .hessian = hess_needed, .min_eig = true};

  const auto t_start = std::chrono::steady_clock::now();

  Eigen::VectorXd lam = Eigen::VectorXd::Zero(problem.num_nodes());
  DualEvaluation ev = evaluate_dual(problem, lam, req);
  if (!ev.in_domain) throw SolveError("solve: the origin is not an interior point");
  const double grad0_norm = ev.grad.norm();

  IterationTrace trace;
  double tau_base = config.tau0;
  Eigen::VectorXd lam_prev, grad_prev;
  bool have_prev = false;

  for (int m = 0;; ++m) {
    const double gn = ev.grad.norm();
    TraceRow row;
    row.iter = m;
    row.G = ev.G;
    row.grad_norm = gn;
    row.min_eig_M = ev.min_eig_M;

    // pre-CFL clamp; implicit Euler builds its system matrix from this value
    double tau_m = std::min(tau_base, cap_cfg);
    Eigen::MatrixXd H;
    if (hess_needed) {
      H = method_matrix(method, ev.hess, ev.grad, tau_m, grad0_norm);
      if (want_cond) row.cond_H = cond_from_eigs(H);
    }

    if (gn <= config.tol) {
      trace.rows.push_back(row);
      trace.status = SolveStatus::Converged;
      break;
    }
    if (m >= config.max_iter) {
      trace.rows.push_back(row);
      trace.status = SolveStatus::MaxIterReached;
      break;
    }

    Eigen::VectorXd d;
    if (hess_needed) {
      DirectionResult dir = solve_direction(H, ev.grad, false);
      if (dir.regularized) ++trace.hessian_regularizations;
      d = std::move(dir.d);
    } else {
      d = ev.grad;
    }

    if (is_bb) {
      double safe = 0.99 * tau_max_cfl(problem, lam, d);
      if (!std::isfinite(safe)) safe = config.tau0;
      double tau;
      if (!have_prev) {
        tau = std::min(config.tau0, safe);
      } else {
        const double raw = bb_tau(method, lam, lam_prev, ev.grad, grad_prev);
        tau = (std::isfinite(raw) && raw > 0.0 && raw <= safe) ? raw : safe;
      }
      tau = std::min(tau, cap_cfg);

      // the CFL bound keeps the step inside exactly; halve on the floating-point edge
      int k = 0;
      Eigen::VectorXd cand;
      DualEvaluation evn;
      for (; k <= config.k_limit; ++k) {
        cand = lam - std::ldexp(tau, -k) * d;
        evn = evaluate_dual(problem, cand, req);
        if (evn.in_domain) break;
      }
      if (k > config.k_limit) {
        trace.rows.push_back(row);
        trace.status = SolveStatus::StepUnderflow;
        break;
      }
      row.tau = std::ldexp(tau, -k);
      trace.rows.push_back(row);
      lam_prev = std::move(lam);
      grad_prev = std::move(ev.grad);
      have_prev = true;
      lam = std::move(cand);
      ev = std::move(evn);
      continue;
    }

    // gradient descent / implicit Euler take the per-iteration policy cap
    // min(1, CFL); Newton-type steps rely on the in-domain check of the
    // backtracking instead, so their base step may grow past 1
    double cap_m = cap_cfg;
    if (first_order) cap_m = std::min({cap_cfg, 1.0, tau_max_cfl(problem, lam, d)});
    tau_m = std::min(tau_m, cap_m);

    StepResult step = adaptive_tau(problem, lam, gn, d, tau_m, config.k_limit);
    if (step.underflow) {
      if (!config.continue_on_underflow) {
        trace.rows.push_back(row);
        trace.status = SolveStatus::StepUnderflow;
        break;
      }
      // stall-detection mode: force a tau_min-scale step, domain permitting,
      // accepting a non-decreasing gradient
      const double tf = std::max(config.tau_min, std::ldexp(tau_m, -config.k_limit));
      int k = 0;
      Eigen::VectorXd cand;
      DualEvaluation evn;
      for (; k <= config.k_limit; ++k) {
        cand = lam - std::ldexp(tf, -k) * d;
        evn = evaluate_dual(problem, cand, req);
        if (evn.in_domain) break;
      }
      if (k > config.k_limit) {
        trace.rows.push_back(row);
        trace.status = SolveStatus::StepUnderflow;
        break;
      }
      row.tau = std::ldexp(tf, -k);
      trace.rows.push_back(row);
      tau_base = std::max(row.tau, config.tau_min);
      lam = std::move(cand);
      ev = std::move(evn);
      continue;
    }

    row.tau = step.tau_used;
    trace.rows.push_back(row);
    tau_base = next_base_tau(step.k, tau_m, first_order ? cap_m : cap_cfg, config.tau_min);
    lam = std::move(step.lambda_next);
    ev = evaluate_dual(problem, lam, req);  // full pass: Hessian and min_eig too
  }

  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  SolveResult result;
  result.lambda = std::move(lam);
  result.certificate = extract_certificate(problem, result.lambda);
  result.trace = std::move(trace);
  result.status = result.trace.status;
  return result;
}

}  // namespace soscert
