#pragma once

#include <string>
#include <vector>

#include "soscert/problem.hpp"

namespace soscert {

enum class Method { GradientDescent, ImplicitEuler, Newton, ModifiedNewton, BB1, BB2 };

// Accepts the canonical names gd, euler, newton, mnewton, bb1, bb2 and a few
// spelled-out aliases. Throws InvalidInput otherwise.
Method method_from_name(const std::string& name);
std::string method_name(Method method);
bool method_uses_hessian(Method method);  // newton, mnewton, euler

struct SolverConfig {
  Method method = Method::ModifiedNewton;
  double tol = 1e-8;        // stop once |grad G| <= tol
  int max_iter = 10000;     // maximum number of steps
  double tau0 = 1.0;
  double tau_min = 1e-16;
  // NaN = per-method default: +inf for Newton-type methods (the backtracking
  // in-domain check is the only safeguard, so the base step is free to double
  // through flat regions), +inf policy-capped per iteration by
  // min(1, tau_max_cfl) for gradient descent/implicit Euler.
  double tau_cap = std::numeric_limits<double>::quiet_NaN();
  int k_limit = 60;  // halvings tried per step before declaring underflow
  // Stall-detection runs keep stepping at tau_min, accepting non-decreasing
  // gradients, instead of terminating with StepUnderflow.
  bool continue_on_underflow = false;
  bool record_cond_H = true;  // only meaningful for Hessian-based methods

  static SolverConfig for_method(Method m);
  double effective_tau_cap() const;  // resolves the NaN default
};

enum class SolveStatus { Converged, MaxIterReached, StepUnderflow };
std::string to_string(SolveStatus status);

// One row per iterate m. tau is the step actually taken from this iterate
// (NaN on the terminal row). cond_H is NaN when not recorded for the method.
struct TraceRow {
  int iter = 0;
  double G = 0.0;
  double grad_norm = 0.0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double cond_H = std::numeric_limits<double>::quiet_NaN();
  double min_eig_M = 0.0;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  SolveStatus status = SolveStatus::MaxIterReached;
  double wall_seconds = 0.0;
  int hessian_regularizations = 0;  // direction solves that needed a delta shift

  int steps() const { return rows.empty() ? 0 : static_cast<int>(rows.size()) - 1; }
  double final_grad_norm() const;
  // Mean grad_norm over the last (up to) 10 rows; the stall statistic.
  double grad_plateau() const;
};

struct SolveResult {
  Eigen::VectorXd lambda;
  Certificate certificate;
  IterationTrace trace;
  SolveStatus status = SolveStatus::MaxIterReached;
};

// Minimizes G from lambda = 0 with the configured method. The iterate always
// stays inside the domain; returns the certificate extracted at the final
// iterate regardless of status.
SolveResult solve(const SosProblem& problem, const SolverConfig& config);

// --- pieces of the iteration, exposed for testing and diagnostics ---

// The SPD system matrix H_m of lambda^{m+1} = lambda^m - tau_m H_m^{-1} grad:
//   gd/bb:    I
//   euler:    I + tau_m hess
//   newton:   hess
//   mnewton:  alpha_m grad grad^t + hess,  alpha_m = |g_m| / (|g_m| + grad0_norm)
// grad0_norm is |grad G(0)| frozen at solve start (so alpha_0 = 1/2).
Eigen::MatrixXd method_matrix(Method method, const Eigen::MatrixXd& hess,
                              const Eigen::VectorXd& grad, double tau_m, double grad0_norm);

struct DirectionResult {
  Eigen::VectorXd d;
  double cond_H = std::numeric_limits<double>::quiet_NaN();
  bool regularized = false;
};

// Solves H d = grad by Cholesky; on numerical failure retries with escalating
// Tikhonov shifts delta = 1e-12 tr(H)/dim * 10^k and throws SolveError after 8
// escalations. cond_H (when requested) is max_eig/min_eig of the unshifted H
// with min_eig floored at eps*max_eig.
DirectionResult solve_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& grad,
                                bool want_cond);

// Convenience wrapper evaluating the Hessian as needed.
DirectionResult direction(Method method, const SosProblem& problem,
                          const Eigen::VectorXd& lambda, const Eigen::VectorXd& grad,
                          double tau_m, double grad0_norm, bool want_cond = false);

// Largest provably-safe step along -d: mu_min(M(lambda)) / |sum_r d_r B_r|_2.
// +inf when the direction matrix vanishes. Throws OutOfDomain when lambda is
// not an interior point.
double tau_max_cfl(const SosProblem& problem, const Eigen::VectorXd& lambda,
                   const Eigen::VectorXd& d);

struct StepResult {
  bool underflow = false;
  int k = 0;            // halvings used
  double tau_used = 0.0;
  Eigen::VectorXd lambda_next;
  double G_next = 0.0;
  Eigen::VectorXd grad_next;
  double grad_norm_next = 0.0;
};

// Backtracking step: the smallest k in [0, k_limit] with
// lambda - 2^-k tau_m d inside the domain AND a strictly smaller gradient
// norm. underflow = true when no k qualifies (lambda_next is not filled).
StepResult adaptive_tau(const SosProblem& problem, const Eigen::VectorXd& lambda,
                        double grad_norm, const Eigen::VectorXd& d, double tau_m,
                        int k_limit = 60);

// Base-step update after a step that used k halvings:
// k = 0 -> min(2 tau_m, tau_cap), else max(2^-k tau_m, tau_min).
double next_base_tau(int k, double tau_m, double tau_cap, double tau_min);

// Raw Barzilai-Borwein step from consecutive iterates; may be non-finite or
// non-positive (callers substitute 0.99 * tau_max_cfl then).
double bb_tau(Method variant, const Eigen::VectorXd& lambda_m,
              const Eigen::VectorXd& lambda_prev, const Eigen::VectorXd& grad_m,
              const Eigen::VectorXd& grad_prev);

}  // namespace soscert
