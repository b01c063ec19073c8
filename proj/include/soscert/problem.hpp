#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "soscert/basis.hpp"
#include "soscert/errors.hpp"

namespace soscert {

// One SOS weight g_j: nonnegative on the domain, known degree, evaluable anywhere.
struct Weight {
  std::string name;  // canonical spelling, also used when serializing problems
  int degree = 0;
  std::function<double(Point)> eval;
};

// Weight registry: "1", "x", "1-x", "x(1-x)" on the segment and
// "mu1", "mu2", "mu3", "mu1*mu2", "mu2*mu3", "mu3*mu1", "mu1*mu2*mu3" on the
// triangle (mu = barycentric coordinates). Throws InvalidInput on unknown names.
Weight weight_from_name(const std::string& name);

// Discretized SOS certificate problem for a degree-n target known through its
// values y at the interpolation nodes. Block j of the ansatz collects squares
// of polynomials of degree n_j = floor((n - deg g_j)/2), so each
// B(x) = blockdiag_j( g_j(x) w_j(x) w_j(x)^t )  with  w_j(x) the basis of P^{n_j}
// has one rank-<=1 block per weight. The dual variable lambda has one entry per
// node and M(lambda) = I + sum_r lambda_r B(x_r).
struct SosProblem {
  int n = 0;
  BasisSpec basis;
  PointSet points;
  std::vector<Weight> weights;
  std::vector<int> block_degrees;  // n_j
  std::vector<int> block_sizes;    // r_j = dim P^{n_j}
  std::vector<int> block_offsets;  // prefix sums of block_sizes
  Eigen::VectorXd y;               // target values at the nodes
  double epsilon = 0.0;            // total regularization folded into y (0 = none)
  std::string label;
  bool block_sum_waived = false;   // true when sum_j r_j != #nodes was accepted

  // assembled data, fixed at construction
  std::vector<Eigen::MatrixXd> B;           // B_r = B(x_r), one per node, N x N
  std::vector<Eigen::MatrixXd> W;           // W[j] is r_j x r*: column r = w_j(x_r)
  std::vector<Eigen::VectorXd> g_at_nodes;  // g_at_nodes[j][r] = g_j(x_r)
  Eigen::VectorXd B_norm;                   // spectral norm of each B_r
  double max_B_norm = 0.0;

  int num_nodes() const { return points.size(); }
  int num_blocks() const { return static_cast<int>(weights.size()); }
  int size() const {  // matrix dimension N = sum_j r_j
    return block_offsets.empty() ? 0 : block_offsets.back() + block_sizes.back();
  }
};

// Builds and validates an SosProblem. Throws WeightDegreeMismatch when
// sum_j dim P^{n_j} != #nodes unless waive_block_sum is set (the certificate
// matrix is then larger/smaller than the node count, as in the plain-SOS
// Motzkin setup).
SosProblem assemble_problem(int n, std::vector<Weight> weights, BasisSpec basis,
                            PointSet points, Eigen::VectorXd y, std::string label = {},
                            bool waive_block_sum = false);

// B(x) at an arbitrary point (block-diagonal N x N).
Eigen::MatrixXd assemble_B(const SosProblem& problem, Point x);

// M(lambda) = I + sum_r lambda_r B_r as a dense N x N matrix.
Eigen::MatrixXd M_of_lambda(const SosProblem& problem, const Eigen::VectorXd& lambda);

// Blockwise lower Cholesky factor of M(lambda).
struct BlockCholesky {
  std::vector<Eigen::MatrixXd> L;
  double min_pivot = std::numeric_limits<double>::infinity();

  double trace_inverse() const;  // tr(M^{-1}) = sum_j |L_j^{-1}|_F^2
};

// Factors M(lambda) block by block; nullopt when any Schur pivot falls to or
// below 1e-13 * (1 + |lambda|_1 * max_r |B_r|), which is the domain test.
std::optional<BlockCholesky> factor_M(const SosProblem& problem,
                                      const Eigen::VectorXd& lambda);

bool in_domain(const SosProblem& problem, const Eigen::VectorXd& lambda);

struct EvalRequest {
  bool gradient = false;
  bool hessian = false;
  bool min_eig = false;
};

struct DualEvaluation {
  bool in_domain = false;
  double G = std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;  // dG/dlambda_r = y_r - p[lambda](x_r); empty unless requested
  Eigen::MatrixXd hess;  // empty unless requested
  double min_pivot = 0.0;
  double min_eig_M = std::numeric_limits<double>::quiet_NaN();
};

// Single-pass evaluation of the dual barrier
//   G(lambda) = tr(M(lambda)^{-1}) + <lambda, y>  on the domain, +inf outside.
// Gradient/Hessian use the per-block rank-1 structure of the B_r.
DualEvaluation evaluate_dual(const SosProblem& problem, const Eigen::VectorXd& lambda,
                             EvalRequest req = {});

double eval_G(const SosProblem& problem, const Eigen::VectorXd& lambda);

// Generalized value sum_i <V_i, M^{-1} V_i> + <lambda, y> over the columns of V;
// V = I recovers eval_G. +inf outside the domain.
double eval_G_V(const SosProblem& problem, const Eigen::VectorXd& lambda,
                const Eigen::MatrixXd& V);

// Throw OutOfDomain when M(lambda) is not positive definite.
Eigen::VectorXd grad_G(const SosProblem& problem, const Eigen::VectorXd& lambda);
Eigen::MatrixXd hess_G(const SosProblem& problem, const Eigen::VectorXd& lambda);

// Smallest eigenvalue of M(lambda) (defined for every lambda).
double min_eig_M(const SosProblem& problem, const Eigen::VectorXd& lambda);

// Weighted-SOS certificate extracted from an interior point lambda:
//   p[lambda](x) = sum_j g_j(x) sum_i q_ij(x)^2
// with the q_ij coefficient vectors given by the columns of M_j(lambda)^{-1}.
// lambda need not be a critical point; residual reports y_r - p[lambda](x_r).
struct Certificate {
  Eigen::VectorXd lambda;
  std::vector<Eigen::MatrixXd> q;  // q[j] is r_j x r_j, column i = coeffs of q_ij
  Eigen::VectorXd residual;
};

Certificate extract_certificate(const SosProblem& problem, const Eigen::VectorXd& lambda);

// Evaluates the certified polynomial p[lambda] at x from the stored q coefficients.
double eval_p_lambda(const SosProblem& problem, const Certificate& cert, Point x);

// p_B(x) = tr(B(x)) = sum_j g_j(x) |w_j(x)|^2, the regularization direction.
double eval_p_B(const SosProblem& problem, Point x);

// Membership test for the asymptotic cone {lambda : sum_r lambda_r B_r >= 0}:
// min eig >= -tol * |sum_r lambda_r B_r|_2, with the zero matrix a member.
bool in_asymptotic_cone(const SosProblem& problem, const Eigen::VectorXd& lambda,
                        double tol = 1e-10);

}  // namespace soscert
