#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "soscert/errors.hpp"

namespace soscert {

// Point in the ambient space. 1D problems only use .x; constructors keep y = 0.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BasisFamily { Monomial1D, ShiftedChebyshev1D, Monomial2D };

// Polynomial basis, ordered so the first size(k) entries span P^k:
//   Monomial1D:          1, x, x^2, ...
//   ShiftedChebyshev1D:  T~_0, T~_1, ... with T~_i(x) = T_i(2x - 1) on [0,1]
//   Monomial2D:          graded lex: 1; x, y; x^2, xy, y^2; ...
struct BasisSpec {
  BasisFamily family = BasisFamily::Monomial1D;

  int dimension() const { return family == BasisFamily::Monomial2D ? 2 : 1; }
  // dim P^k for this family's ambient dimension
  int size(int k) const;

  static BasisSpec monomial_1d() { return {BasisFamily::Monomial1D}; }
  static BasisSpec chebyshev_1d() { return {BasisFamily::ShiftedChebyshev1D}; }
  static BasisSpec monomial_2d() { return {BasisFamily::Monomial2D}; }

  bool operator==(const BasisSpec&) const = default;
};

// Values of the basis functions spanning P^k at x, in the fixed order above.
Eigen::VectorXd eval_basis(const BasisSpec& basis, int k, Point x);

// p(x) = sum_i coeffs[i] * b_i(x).  coeffs.size() must equal basis.size(k).
double eval_poly(const Eigen::VectorXd& coeffs, const BasisSpec& basis, int k, Point x);

// Barycentric coordinates (1 - x - y, x, y) of the unit triangle.
std::array<double, 3> barycentric(Point x);

enum class DomainTag { Segment01, UnitTriangle };
enum class NodeScheme { Equispaced, ChebyshevNodes };

struct PointSet {
  DomainTag domain = DomainTag::Segment01;
  std::vector<Point> nodes;

  int size() const { return static_cast<int>(nodes.size()); }
};

// n+1 nodes on [0,1]: r/n, or Chebyshev-Lobatto (1 - cos(pi r/n))/2. Needs n >= 1.
PointSet make_points_segment(int n, NodeScheme scheme);

// (n+1)(n+2)/2 lattice nodes (i/n, j/n), i + j <= n, on the unit triangle.
PointSet make_points_triangle(int n);

// Throws InvalidInput if the set cannot serve as interpolation nodes for P^n:
// wrong cardinality, duplicate points, or points outside the closed domain.
void check_point_set(const PointSet& points, int n);

// Lagrange basis evaluator for P^n on a node set. Factors the Vandermonde
// V_{rs} = b_s(x_r) once; operator() solves V^t l = b(x) so that
// sum_r l_r(x) p(x_r) = p(x) for every p in P^n.
// Throws NotUnisolvent when sigma_min/sigma_max of V drops below 1e-14.
class LagrangeEvaluator {
 public:
  LagrangeEvaluator(const PointSet& points, const BasisSpec& basis, int n);

  Eigen::VectorXd operator()(Point x) const;
  int size() const { return r_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;  // factors V^t
  BasisSpec basis_;
  int n_ = 0;
  int r_ = 0;
};

// One-shot convenience wrapper around LagrangeEvaluator.
Eigen::VectorXd lagrange_vector(const PointSet& points, const BasisSpec& basis, int n,
                                Point x);

}  // namespace soscert
