#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "soscert/problem.hpp"

namespace soscert {

// How the target polynomial p is specified.
struct TargetSpec {
  enum class Kind { Coefficients, NamedPreset, NodeValues };

  Kind kind = Kind::Coefficients;
  int degree = 0;          // total degree; presets fill their own
  BasisSpec basis;         // Coefficients only
  Eigen::VectorXd data;    // coefficients or node values
  std::string name;        // NamedPreset only
  double alpha = 1e-3;     // test3 offset parameter

  static TargetSpec coefficients(const BasisSpec& basis, int degree, Eigen::VectorXd coeffs);
  static TargetSpec node_values(int degree, Eigen::VectorXd values);
  // Throws UnknownPreset. alpha applies to test3, degree to test4.
  static TargetSpec preset(const std::string& name, std::optional<double> alpha = {},
                           std::optional<int> degree = {});
};

// Closed-form evaluator for a Coefficients or NamedPreset target
// (null for NodeValues, which carries no off-node information).
std::function<double(Point)> target_evaluator(const TargetSpec& target);

// Target values at the nodes; validates sizes/degrees against the point set.
Eigen::VectorXd target_values(const TargetSpec& target, const PointSet& points, int n);

// Weight sets making every polynomial positive on the domain representable:
//   segment, odd n = 2k+1:  x, 1-x                      (blocks of degree k, k)
//   segment, even n = 2k:   1, x(1-x)                   (k, k-1)
//   triangle, odd n = 2k+1: mu1, mu2, mu3, mu1*mu2*mu3  (k, k, k, k-1)
//   triangle, even n = 2k:  mu2*mu3, mu3*mu1, mu1*mu2, 1 (k-1, k-1, k-1, k)
// Weights whose degree exceeds n (triangle bubble at n < 3) are dropped since
// their block would be empty.
std::vector<Weight> segment_weights(int n);
std::vector<Weight> triangle_weights(int n);

SosProblem build_segment_problem(int n, NodeScheme scheme, BasisFamily family,
                                 const TargetSpec& target);
SosProblem build_triangle_problem(int n, const TargetSpec& target);

// Plain-SOS ansatz: same number of blocks as the weighted triangle setup but
// every weight is 1, so all blocks have degree n/2. The block-dimension sum no
// longer matches the node count; the mismatch is waived on purpose.
SosProblem build_triangle_problem_unweighted(int n, const TargetSpec& target);

// Adds eps * p_B(x_r) to every y_r (the coercivity regularization). epsilon
// accumulates across calls and is recorded on the problem.
SosProblem regularize_epsilon(const SosProblem& problem, double eps);

struct PresetInfo {
  std::string name;
  int dimension = 1;
  int degree = 0;
  std::string summary;
};

// The named experiments: test1..test6 plus test6-unweighted.
std::vector<PresetInfo> preset_catalog();
std::vector<TargetSpec> named_presets();

// One-call resolution of a named preset to a ready problem.
SosProblem problem_from_preset(const std::string& name, std::optional<double> alpha = {},
                               std::optional<int> degree = {});

}  // namespace soscert
