#include "soscert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace soscert {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// uniform in [0, 1) from the raw generator, identical on every platform
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
  double u = 1.0 - uniform01(rng);  // (0, 1], keeps the log finite
  double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

Point random_point(std::mt19937_64& rng, DomainTag domain) {
  if (domain == DomainTag::Segment01) return {uniform01(rng), 0.0};
  double u = uniform01(rng), v = uniform01(rng);
  if (u + v > 1.0) {  // fold the square onto the triangle
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return {u, v};
}

// stencil margin: every lambda +- h e_r stays strictly inside the domain.
// Shrinks h by 10 up to three times before giving up. The base step is scaled
// by the boundary distance min(1, min_eig M): the truncation constant of the
// central difference grows like a power of 1/min_eig, so a fixed h loses
// accuracy precisely where the barrier steepens.
double stencil_h(const SosProblem& problem, const Eigen::VectorXd& lambda, double h) {
  h *= std::min(1.0, min_eig_M(problem, lambda));
  for (int attempt = 0; attempt <= 3; ++attempt, h /= 10.0) {
    bool ok = true;
    Eigen::VectorXd probe = lambda;
    for (int r = 0; r < lambda.size() && ok; ++r) {
      probe[r] = lambda[r] + h;
      ok = in_domain(problem, probe);
      probe[r] = lambda[r] - h;
      ok = ok && in_domain(problem, probe);
      probe[r] = lambda[r];
    }
    if (ok) return h;
  }
  throw InsufficientMargin("finite-difference stencil leaves the domain even at h/1000");
}

}  // namespace

VerificationReport fd_gradient_check(const SosProblem& problem,
                                     const Eigen::VectorXd& lambda, double h) {
  const int R = problem.num_nodes();
  if (lambda.size() != R) throw InvalidInput("fd_gradient_check: lambda has wrong length");
  double h0 = stencil_h(problem, lambda, h * (1.0 + lambda.lpNorm<Eigen::Infinity>()));
  Eigen::VectorXd grad = grad_G(problem, lambda);
  Eigen::VectorXd probe = lambda;
  double scale = 1.0 + grad.lpNorm<Eigen::Infinity>();
  VerificationReport rep{"fd_gradient", false, 0.0, 1e-6, "", std::nullopt};
  int worst = 0;
  for (int r = 0; r < R; ++r) {
    probe[r] = lambda[r] + h0;
    double gp = eval_G(problem, probe);
    probe[r] = lambda[r] - h0;
    double gm = eval_G(problem, probe);
    probe[r] = lambda[r];
    double err = std::abs((gp - gm) / (2.0 * h0) - grad[r]) / scale;
    if (err > rep.metric) {
      rep.metric = err;
      worst = r;
    }
  }
  rep.pass = rep.metric <= rep.tolerance;
  rep.detail = "worst component r=" + std::to_string(worst) + ", h=" + fmt(h0);
  return rep;
}

VerificationReport fd_hessian_check(const SosProblem& problem,
                                    const Eigen::VectorXd& lambda, double h) {
  const int R = problem.num_nodes();
  if (lambda.size() != R) throw InvalidInput("fd_hessian_check: lambda has wrong length");
  double h0 = stencil_h(problem, lambda, h * (1.0 + lambda.lpNorm<Eigen::Infinity>()));
  Eigen::MatrixXd hess = hess_G(problem, lambda);
  Eigen::MatrixXd fd(R, R);
  Eigen::VectorXd probe = lambda;
  for (int r = 0; r < R; ++r) {
    probe[r] = lambda[r] + h0;
    Eigen::VectorXd gp = grad_G(problem, probe);
    probe[r] = lambda[r] - h0;
    Eigen::VectorXd gm = grad_G(problem, probe);
    probe[r] = lambda[r];
    fd.col(r) = (gp - gm) / (2.0 * h0);
  }
  fd = 0.5 * (fd + fd.transpose()).eval();  // the analytic Hessian is symmetric
  double scale = 1.0 + hess.cwiseAbs().maxCoeff();
  VerificationReport rep{"fd_hessian", false, 0.0, 1e-5, "", std::nullopt};
  int wr = 0, ws = 0;
  for (int r = 0; r < R; ++r)
    for (int s = 0; s < R; ++s) {
      double err = std::abs(fd(r, s) - hess(r, s)) / scale;
      if (err > rep.metric) {
        rep.metric = err;
        wr = r;
        ws = s;
      }
    }
  rep.pass = rep.metric <= rep.tolerance;
  rep.detail =
      "worst entry (" + std::to_string(wr) + "," + std::to_string(ws) + "), h=" + fmt(h0);
  return rep;
}

VerificationReport verify_certificate(const SosProblem& problem, const Certificate& cert,
                                      int grid_density) {
  const int R = problem.num_nodes();
  double yscale = 1.0 + (R > 0 ? problem.y.cwiseAbs().maxCoeff() : 0.0);
  double res_tol = 1e-6 * yscale;
  double pos_tol = 1e-10 * yscale;

  double res_max = 0.0;
  int res_worst = 0;
  for (int r = 0; r < R; ++r) {
    double res = std::abs(problem.y[r] - eval_p_lambda(problem, cert, problem.points.nodes[r]));
    if (res > res_max) {
      res_max = res;
      res_worst = r;
    }
  }

  double grid_min = std::numeric_limits<double>::infinity();
  Point grid_argmin{};
  auto visit = [&](Point x) {
    double v = eval_p_lambda(problem, cert, x);
    if (v < grid_min) {
      grid_min = v;
      grid_argmin = x;
    }
  };
  if (problem.points.domain == DomainTag::Segment01) {
    int pts = grid_density > 0 ? grid_density : 10000;
    for (int i = 0; i < pts; ++i) visit({double(i) / (pts - 1), 0.0});
  } else {
    int N = grid_density > 0 ? grid_density : 200;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j + i <= N; ++j) visit({double(i) / N, double(j) / N});
  }

  int shape_excess = 0;
  std::string cols;
  for (int j = 0; j < problem.num_blocks(); ++j) {
    int nonzero = 0;
    for (int i = 0; i < cert.q[j].cols(); ++i)
      if (cert.q[j].col(i).norm() > 0.0) ++nonzero;
    shape_excess = std::max(shape_excess, nonzero - problem.block_sizes[j]);
    cols += (j ? "," : "") + std::to_string(nonzero) + "/" + std::to_string(problem.block_sizes[j]);
  }

  VerificationReport rep{"verify_certificate", false, 0.0, 1.0, "", std::nullopt};
  rep.metric = std::max({res_max / res_tol, std::max(0.0, -grid_min) / pos_tol,
                         double(shape_excess)});
  rep.pass = rep.metric <= rep.tolerance;
  rep.detail = "residual " + fmt(res_max) + " at r=" + std::to_string(res_worst) +
               " (tol " + fmt(res_tol) + "); grid min " + fmt(grid_min) + " at (" +
               fmt(grid_argmin.x) + "," + fmt(grid_argmin.y) + ") (floor -" + fmt(pos_tol) +
               "); block columns " + cols;
  return rep;
}

VerificationReport check_linear_independence(const SosProblem& problem) {
  const int R = problem.num_nodes();
  const int N = problem.size();
  Eigen::MatrixXd stacked(R, N * N);
  for (int r = 0; r < R; ++r)
    stacked.row(r) = Eigen::Map<const Eigen::VectorXd>(problem.B[r].data(), N * N);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  VerificationReport rep{"linear_independence", false, 0.0, 1e-10, "", std::nullopt};
  rep.metric = smax > 0.0 ? smin / smax : 0.0;
  rep.pass = rep.metric > rep.tolerance;
  rep.detail = "sigma_min=" + fmt(smin) + ", sigma_max=" + fmt(smax);
  return rep;
}

VerificationReport lagrange_cone_membership(const SosProblem& problem, int samples,
                                            std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("lagrange_cone_membership: samples must be >= 1");
  std::mt19937_64 rng(seed);
  LagrangeEvaluator lagrange(problem.points, problem.basis, problem.n);
  const double slack = 1e-8;
  int members_failed = 0;
  double worst = -std::numeric_limits<double>::infinity();
  Point worst_x{};
  double worst_t = 0.0;

  std::vector<Eigen::VectorXd> drawn;
  for (int s = 0; s < samples; ++s) {
    Point x = random_point(rng, problem.points.domain);
    Eigen::VectorXd L = lagrange(x);
    drawn.push_back(L);
    if (!in_asymptotic_cone(problem, L)) ++members_failed;
    double px = L.dot(problem.y);  // degree-n reproduction: the interpolant at x
    for (double t : {1.0, 10.0, 100.0}) {
      double viol = eval_G(problem, t * L) - (problem.size() + t * px);
      if (viol > worst) {
        worst = viol;
        worst_x = x;
        worst_t = t;
      }
    }
  }
  // nonnegative combinations stay in the cone
  for (int s = 0; s + 3 <= samples; s += 3) {
    Eigen::VectorXd combo = uniform01(rng) * drawn[s] + uniform01(rng) * drawn[s + 1] +
                            uniform01(rng) * drawn[s + 2];
    if (!in_asymptotic_cone(problem, combo)) ++members_failed;
  }

  VerificationReport rep{"lagrange_cone_membership", false, worst, slack, "", seed};
  if (members_failed > 0) rep.metric = std::numeric_limits<double>::infinity();
  rep.pass = members_failed == 0 && rep.metric <= rep.tolerance;
  rep.detail = std::to_string(samples) + " samples, " + std::to_string(members_failed) +
               " membership failures; worst growth-bound slack " + fmt(worst) + " at x=(" +
               fmt(worst_x.x) + "," + fmt(worst_x.y) + "), t=" + fmt(worst_t);
  return rep;
}

VerificationReport hankel_structure_check(const SosProblem& problem,
                                          const Eigen::VectorXd& lambda) {
  if (problem.basis.family != BasisFamily::Monomial1D)
    throw InvalidInput(
        "hankel_structure_check applies to 1D monomial-basis problems only");
  if (lambda.size() != problem.num_nodes())
    throw InvalidInput("hankel_structure_check: lambda has wrong length");
  Eigen::MatrixXd S = M_of_lambda(problem, lambda);
  S.diagonal().array() -= 1.0;  // S = sum_r lambda_r B_r
  VerificationReport rep{"hankel_structure", false, 0.0, 1e-12, "", std::nullopt};
  int worst_block = 0;
  for (int j = 0; j < problem.num_blocks(); ++j) {
    int off = problem.block_offsets[j], rj = problem.block_sizes[j];
    Eigen::MatrixXd Sj = S.block(off, off, rj, rj);
    double fro = Sj.norm();
    double denom = fro > 0.0 ? fro : 1.0;
    for (int s = 0; s <= 2 * (rj - 1); ++s) {
      double mean = 0.0;
      int count = 0;
      for (int a = std::max(0, s - rj + 1); a <= std::min(rj - 1, s); ++a, ++count)
        mean += Sj(a, s - a);
      mean /= std::max(count, 1);
      for (int a = std::max(0, s - rj + 1); a <= std::min(rj - 1, s); ++a) {
        double dev = std::abs(Sj(a, s - a) - mean) / denom;
        if (dev > rep.metric) {
          rep.metric = dev;
          worst_block = j;
        }
      }
    }
  }
  rep.pass = rep.metric <= rep.tolerance;
  rep.detail = "worst block " + std::to_string(worst_block);
  return rep;
}

Eigen::VectorXd random_in_domain_lambda(const SosProblem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double scale = 0.5 / problem.max_B_norm;
  Eigen::VectorXd lambda(problem.num_nodes());
  for (int attempt = 0; attempt < 20000; ++attempt) {
    for (int r = 0; r < lambda.size(); ++r) lambda[r] = scale * gaussian(rng);
    if (in_domain(problem, lambda)) return lambda;
  }
  throw SolveError("random_in_domain_lambda: rejection sampling failed to find an interior point");
}

}  // namespace soscert
