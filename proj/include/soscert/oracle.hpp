#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "soscert/problem.hpp"

namespace soscert {

// Outcome of one independent verification. `metric` is the worst-case value
// the check measured and `tolerance` the bound it was held against; for most
// checks fail means metric > tolerance (check_linear_independence is the one
// "larger is better" metric, where fail means the ratio fell to or below the
// tolerance). `detail` locates the worst case. `seed` is recorded whenever
// the check drew random samples.
struct VerificationReport {
  std::string check;
  bool pass = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::string detail;
  std::optional<std::uint64_t> seed;
};

// Central finite differences of G against the analytic gradient at lambda.
// The stencil needs margin: every lambda +- h e_r must stay in the domain;
// h shrinks by 10 up to 3 times if not, then InsufficientMargin is thrown.
// h is scaled by (1 + |lambda|_inf) and by the boundary distance
// min(1, min_eig M(lambda)); the default h = 1e-6 suits lambda near 0.
// Metric: |fd - grad|_inf / (1 + |grad|_inf), tolerance 1e-6.
VerificationReport fd_gradient_check(const SosProblem& problem,
                                     const Eigen::VectorXd& lambda, double h = 1e-6);

// Same stencil applied to grad_G columns against the analytic Hessian
// (symmetric part compared). Default h = 1e-5, tolerance 1e-5 relative.
VerificationReport fd_hessian_check(const SosProblem& problem,
                                    const Eigen::VectorXd& lambda, double h = 1e-5);

// Checks an extracted certificate against its problem:
//  (a) interpolation: max_r |y_r - p[lambda](x_r)| <= 1e-6 * (1 + max|y|),
//  (b) positivity: min of p[lambda] over a dense grid of K is
//      >= -1e-10 * (1 + max|y|)  (1e4 points in 1D; barycentric lattice with
//      grid_density=200 in 2D; pass 0 for the defaults),
//  (c) shape: nonzero q columns per block <= r_j.
// metric is the worst sub-check violation normalized by its tolerance, so the
// report passes iff metric <= 1; detail carries all three sub-results.
VerificationReport verify_certificate(const SosProblem& problem, const Certificate& cert,
                                      int grid_density = 0);

// Numerical linear independence of {B_r}: stacks vec(B_r) as rows, computes
// singular values, passes iff sigma_min > 1e-10 * sigma_max. metric is the
// ratio sigma_min/sigma_max (larger is better), tolerance 1e-10.
VerificationReport check_linear_independence(const SosProblem& problem);

// Draws `samples` random points of K (and random nonnegative combinations of
// their Lagrange vectors) and asserts membership in the asymptotic cone, plus
// the growth bound G(t L(x)) <= N + t <L(x), y> + 1e-8 for t in {1, 10, 100}.
// Deterministic for a fixed seed; the seed is recorded in the report.
VerificationReport lagrange_cone_membership(const SosProblem& problem, int samples,
                                            std::uint64_t seed = 0);

// Asserts each block of sum_r lambda_r B_r is a Hankel matrix: entry (a, b)
// may depend on a + b only. Monomial-basis 1D problems only; anything else
// throws InvalidInput (a Chebyshev basis destroys the structure). Deviations
// are measured against 1e-12 scaled by the block Frobenius norm.
VerificationReport hankel_structure_check(const SosProblem& problem,
                                          const Eigen::VectorXd& lambda);

// Rejection-samples a random interior lambda: centered Gaussian entries with
// scale 0.5 / max_r |B_r|, first draw with M(lambda) positive definite wins.
// Deterministic for a fixed seed.
Eigen::VectorXd random_in_domain_lambda(const SosProblem& problem, std::uint64_t seed);

}  // namespace soscert
