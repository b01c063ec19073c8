#include "soscert/problem.hpp"

#include <cmath>

namespace soscert {

namespace {

// In-place lower Cholesky with a floor on the Schur pivots. Returns false as
// soon as a pivot drops to or below the floor; *min_pivot tracks the smallest
// pivot seen either way.
bool cholesky_floor(Eigen::MatrixXd& A, double floor, double* min_pivot) {
  const int m = static_cast<int>(A.rows());
  for (int k = 0; k < m; ++k) {
    double d = A(k, k) - A.row(k).head(k).squaredNorm();
    *min_pivot = std::min(*min_pivot, d);
    if (d <= floor) return false;
    const double lkk = std::sqrt(d);
    A(k, k) = lkk;
    if (k + 1 < m) {
      A.col(k).tail(m - k - 1) -=
          A.bottomLeftCorner(m - k - 1, k) * A.row(k).head(k).transpose();
      A.col(k).tail(m - k - 1) /= lkk;
    }
  }
  A.triangularView<Eigen::StrictlyUpper>().setZero();
  return true;
}

double pivot_floor(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  return 1e-13 * (1.0 + lambda.lpNorm<1>() * problem.max_B_norm);
}

// M_j(lambda) = I + W_j diag(lambda .* g_j) W_j^t for one block.
Eigen::MatrixXd block_M(const SosProblem& problem, const Eigen::VectorXd& lambda, int j) {
  const Eigen::VectorXd scale = lambda.cwiseProduct(problem.g_at_nodes[j]);
  Eigen::MatrixXd Mj = Eigen::MatrixXd::Identity(problem.block_sizes[j], problem.block_sizes[j]);
  Mj.noalias() += problem.W[j] * scale.asDiagonal() * problem.W[j].transpose();
  return Mj;
}

void check_lambda_size(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  if (lambda.size() != problem.num_nodes())
    throw InvalidInput("lambda has " + std::to_string(lambda.size()) + " entries, problem has " +
                       std::to_string(problem.num_nodes()) + " nodes");
}

}  // namespace

Weight weight_from_name(const std::string& name) {
  auto mu = [](int i) {
    return [i](Point p) { return barycentric(p)[i]; };
  };
  if (name == "1") return {name, 0, [](Point) { return 1.0; }};
  if (name == "x") return {name, 1, [](Point p) { return p.x; }};
  if (name == "1-x") return {name, 1, [](Point p) { return 1.0 - p.x; }};
  if (name == "x(1-x)") return {name, 2, [](Point p) { return p.x * (1.0 - p.x); }};
  if (name == "mu1") return {name, 1, mu(0)};
  if (name == "mu2") return {name, 1, mu(1)};
  if (name == "mu3") return {name, 1, mu(2)};
  if (name == "mu1*mu2")
    return {name, 2, [](Point p) { auto m = barycentric(p); return m[0] * m[1]; }};
  if (name == "mu2*mu3")
    return {name, 2, [](Point p) { auto m = barycentric(p); return m[1] * m[2]; }};
  if (name == "mu3*mu1")
    return {name, 2, [](Point p) { auto m = barycentric(p); return m[2] * m[0]; }};
  if (name == "mu1*mu2*mu3")
    return {name, 3, [](Point p) { auto m = barycentric(p); return m[0] * m[1] * m[2]; }};
  throw InvalidInput("unknown weight name: \"" + name + "\"");
}

SosProblem assemble_problem(int n, std::vector<Weight> weights, BasisSpec basis,
                            PointSet points, Eigen::VectorXd y, std::string label,
                            bool waive_block_sum) {
  if (n < 1) throw InvalidInput("assemble_problem: n must be >= 1");
  if (weights.empty()) throw InvalidInput("assemble_problem: at least one weight required");
  const bool domain_1d = points.domain == DomainTag::Segment01;
  if (domain_1d != (basis.dimension() == 1))
    throw InvalidInput("basis dimension does not match the point-set domain");
  check_point_set(points, n);
  if (y.size() != points.size())
    throw InvalidInput("y has " + std::to_string(y.size()) + " values for " +
                       std::to_string(points.size()) + " nodes");

  SosProblem problem;
  problem.n = n;
  problem.basis = basis;
  problem.points = std::move(points);
  problem.weights = std::move(weights);
  problem.y = std::move(y);
  problem.label = std::move(label);
  problem.block_sum_waived = waive_block_sum;

  const int r = problem.num_nodes();
  int total = 0;
  for (const Weight& w : problem.weights) {
    if (!w.eval) throw InvalidInput("weight \"" + w.name + "\" has no evaluator");
    if (w.degree < 0 || w.degree > n)
      throw InvalidInput("weight \"" + w.name + "\" has degree " + std::to_string(w.degree) +
                         " outside [0, " + std::to_string(n) + "]");
    const int nj = (n - w.degree) / 2;
    problem.block_degrees.push_back(nj);
    problem.block_offsets.push_back(total);
    const int rj = basis.size(nj);
    problem.block_sizes.push_back(rj);
    total += rj;
  }
  if (total != r && !waive_block_sum)
    throw WeightDegreeMismatch("block sizes sum to " + std::to_string(total) + " but there are " +
                               std::to_string(r) + " nodes; pass waive_block_sum to keep a " +
                               "non-square setup on purpose");

  const int jstar = problem.num_blocks();
  problem.W.resize(jstar);
  problem.g_at_nodes.resize(jstar);
  for (int j = 0; j < jstar; ++j) {
    problem.W[j].resize(problem.block_sizes[j], r);
    problem.g_at_nodes[j].resize(r);
    for (int s = 0; s < r; ++s) {
      problem.W[j].col(s) = eval_basis(basis, problem.block_degrees[j], problem.points.nodes[s]);
      problem.g_at_nodes[j][s] = problem.weights[j].eval(problem.points.nodes[s]);
    }
  }

  problem.B.reserve(r);
  problem.B_norm.resize(r);
  for (int s = 0; s < r; ++s) {
    Eigen::MatrixXd Bs = Eigen::MatrixXd::Zero(total, total);
    double norm = 0.0;
    for (int j = 0; j < jstar; ++j) {
      const auto w = problem.W[j].col(s);
      const double g = problem.g_at_nodes[j][s];
      Bs.block(problem.block_offsets[j], problem.block_offsets[j], problem.block_sizes[j],
               problem.block_sizes[j]) = g * (w * w.transpose());
      norm = std::max(norm, std::abs(g) * w.squaredNorm());  // rank-1 block spectral norm
    }
    problem.B.push_back(std::move(Bs));
    problem.B_norm[s] = norm;
    problem.max_B_norm = std::max(problem.max_B_norm, norm);
  }
  return problem;
}

Eigen::MatrixXd assemble_B(const SosProblem& problem, Point x) {
  const int total = problem.size();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(total, total);
  for (int j = 0; j < problem.num_blocks(); ++j) {
    const Eigen::VectorXd w = eval_basis(problem.basis, problem.block_degrees[j], x);
    B.block(problem.block_offsets[j], problem.block_offsets[j], problem.block_sizes[j],
            problem.block_sizes[j]) = problem.weights[j].eval(x) * (w * w.transpose());
  }
  return B;
}

Eigen::MatrixXd M_of_lambda(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  check_lambda_size(problem, lambda);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(problem.size(), problem.size());
  for (int j = 0; j < problem.num_blocks(); ++j)
    M.block(problem.block_offsets[j], problem.block_offsets[j], problem.block_sizes[j],
            problem.block_sizes[j]) = block_M(problem, lambda, j);
  return M;
}

double BlockCholesky::trace_inverse() const {
  double tr = 0.0;
  for (const Eigen::MatrixXd& Lj : L) {
    const Eigen::MatrixXd X = Lj.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(Lj.rows(), Lj.cols()));
    tr += X.squaredNorm();
  }
  return tr;
}

std::optional<BlockCholesky> factor_M(const SosProblem& problem,
                                      const Eigen::VectorXd& lambda) {
  check_lambda_size(problem, lambda);
  const double floor = pivot_floor(problem, lambda);
  BlockCholesky chol;
  chol.L.reserve(problem.num_blocks());
  bool ok = true;
  for (int j = 0; j < problem.num_blocks() && ok; ++j) {
    Eigen::MatrixXd Mj = block_M(problem, lambda, j);
    ok = cholesky_floor(Mj, floor, &chol.min_pivot);
    if (ok) chol.L.push_back(std::move(Mj));
  }
  if (!ok) return std::nullopt;
  return chol;
}

bool in_domain(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  return factor_M(problem, lambda).has_value();
}

DualEvaluation evaluate_dual(const SosProblem& problem, const Eigen::VectorXd& lambda,
                             EvalRequest req) {
  check_lambda_size(problem, lambda);
  DualEvaluation out;

  auto chol = factor_M(problem, lambda);
  if (chol) {
    out.in_domain = true;
    out.min_pivot = chol->min_pivot;
    out.G = chol->trace_inverse() + lambda.dot(problem.y);
  } else {
    return out;
  }

  const int r = problem.num_nodes();
  if (req.gradient || req.hessian) {
    out.grad = problem.y;
    if (req.hessian) out.hess = Eigen::MatrixXd::Zero(r, r);
    for (int j = 0; j < problem.num_blocks(); ++j) {
      // A_j = M_j^{-1} W_j, so column s is a_js = M_j^{-1} w_j(x_s)
      Eigen::MatrixXd A = chol->L[j].triangularView<Eigen::Lower>().solve(problem.W[j]);
      chol->L[j].transpose().triangularView<Eigen::Upper>().solveInPlace(A);
      // dG/dlambda_s picks up -g_j(x_s) |a_js|^2 from block j
      out.grad -= problem.g_at_nodes[j].cwiseProduct(A.colwise().squaredNorm().transpose());
      if (req.hessian) {
        // H_st += 2 g_j(x_s) g_j(x_t) (w_js . a_jt)(a_js . a_jt)
        const Eigen::MatrixXd P = problem.W[j].transpose() * A;
        const Eigen::MatrixXd Q = A.transpose() * A;
        const Eigen::VectorXd& g = problem.g_at_nodes[j];
        out.hess.noalias() += 2.0 * (g * g.transpose()).cwiseProduct(P.cwiseProduct(Q));
      }
    }
    if (req.hessian) out.hess = 0.5 * (out.hess + out.hess.transpose()).eval();
  }

  if (req.min_eig) {
    double me = std::numeric_limits<double>::infinity();
    for (int j = 0; j < problem.num_blocks(); ++j) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block_M(problem, lambda, j),
                                                        Eigen::EigenvaluesOnly);
      me = std::min(me, es.eigenvalues().minCoeff());
    }
    out.min_eig_M = me;
  }
  return out;
}

double eval_G(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  return evaluate_dual(problem, lambda).G;
}

double eval_G_V(const SosProblem& problem, const Eigen::VectorXd& lambda,
                const Eigen::MatrixXd& V) {
  check_lambda_size(problem, lambda);
  if (V.rows() != problem.size())
    throw InvalidInput("eval_G_V: V must have " + std::to_string(problem.size()) + " rows");
  auto chol = factor_M(problem, lambda);
  if (!chol) return std::numeric_limits<double>::infinity();
  double value = lambda.dot(problem.y);
  for (int j = 0; j < problem.num_blocks(); ++j) {
    const auto Vj = V.middleRows(problem.block_offsets[j], problem.block_sizes[j]);
    value += chol->L[j].triangularView<Eigen::Lower>().solve(Vj).squaredNorm();
  }
  return value;
}

Eigen::VectorXd grad_G(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  DualEvaluation ev = evaluate_dual(problem, lambda, {.gradient = true});
  if (!ev.in_domain) throw OutOfDomain("grad_G: M(lambda) is not positive definite");
  return ev.grad;
}

Eigen::MatrixXd hess_G(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  DualEvaluation ev = evaluate_dual(problem, lambda, {.gradient = true, .hessian = true});
  if (!ev.in_domain) throw OutOfDomain("hess_G: M(lambda) is not positive definite");
  return ev.hess;
}

double min_eig_M(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  check_lambda_size(problem, lambda);
  double me = std::numeric_limits<double>::infinity();
  for (int j = 0; j < problem.num_blocks(); ++j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block_M(problem, lambda, j),
                                                      Eigen::EigenvaluesOnly);
    me = std::min(me, es.eigenvalues().minCoeff());
  }
  return me;
}

Certificate extract_certificate(const SosProblem& problem, const Eigen::VectorXd& lambda) {
  auto chol = factor_M(problem, lambda);
  if (!chol) throw OutOfDomain("extract_certificate: lambda is outside the domain");

  Certificate cert;
  cert.lambda = lambda;
  cert.q.reserve(problem.num_blocks());
  for (int j = 0; j < problem.num_blocks(); ++j) {
    // M_j^{-1} = X^t X with X = L_j^{-1}
    const Eigen::MatrixXd X = chol->L[j].triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(problem.block_sizes[j], problem.block_sizes[j]));
    cert.q.push_back(X.transpose() * X);
  }
  cert.residual = grad_G(problem, lambda);
  return cert;
}

double eval_p_lambda(const SosProblem& problem, const Certificate& cert, Point x) {
  if (static_cast<int>(cert.q.size()) != problem.num_blocks())
    throw InvalidInput("certificate has " + std::to_string(cert.q.size()) + " blocks, problem " +
                       std::to_string(problem.num_blocks()));
  double p = 0.0;
  for (int j = 0; j < problem.num_blocks(); ++j) {
    const Eigen::VectorXd w = eval_basis(problem.basis, problem.block_degrees[j], x);
    if (cert.q[j].rows() != w.size())
      throw InvalidInput("certificate block " + std::to_string(j) + " has wrong row count");
    p += problem.weights[j].eval(x) * (cert.q[j].transpose() * w).squaredNorm();
  }
  return p;
}

double eval_p_B(const SosProblem& problem, Point x) {
  double p = 0.0;
  for (int j = 0; j < problem.num_blocks(); ++j)
    p += problem.weights[j].eval(x) *
         eval_basis(problem.basis, problem.block_degrees[j], x).squaredNorm();
  return p;
}

bool in_asymptotic_cone(const SosProblem& problem, const Eigen::VectorXd& lambda,
                        double tol) {
  check_lambda_size(problem, lambda);
  double min_eig = std::numeric_limits<double>::infinity();
  double spectral = 0.0;
  for (int j = 0; j < problem.num_blocks(); ++j) {
    const Eigen::VectorXd scale = lambda.cwiseProduct(problem.g_at_nodes[j]);
    Eigen::MatrixXd Sj = problem.W[j] * scale.asDiagonal() * problem.W[j].transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sj, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    spectral = std::max(spectral, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  if (spectral == 0.0) return true;
  return min_eig >= -tol * spectral;
}

}  // namespace soscert
