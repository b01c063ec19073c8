#include "soscert/basis.hpp"

#include <cmath>
#include <string>

namespace soscert {

int BasisSpec::size(int k) const {
  if (k < 0) throw InvalidInput("basis size: degree must be >= 0, got " + std::to_string(k));
  return dimension() == 1 ? k + 1 : (k + 1) * (k + 2) / 2;
}

Eigen::VectorXd eval_basis(const BasisSpec& basis, int k, Point x) {
  const int m = basis.size(k);  // validates k
  Eigen::VectorXd b(m);
  switch (basis.family) {
    case BasisFamily::Monomial1D: {
      double p = 1.0;
      for (int i = 0; i <= k; ++i) {
        b[i] = p;
        p *= x.x;
      }
      return b;
    }
    case BasisFamily::ShiftedChebyshev1D: {
      const double t = 2.0 * x.x - 1.0;
      b[0] = 1.0;
      if (k >= 1) b[1] = t;
      for (int i = 2; i <= k; ++i) b[i] = 2.0 * t * b[i - 1] - b[i - 2];
      return b;
    }
    case BasisFamily::Monomial2D: {
      std::vector<double> px(k + 1), py(k + 1);
      px[0] = py[0] = 1.0;
      for (int i = 1; i <= k; ++i) {
        px[i] = px[i - 1] * x.x;
        py[i] = py[i - 1] * x.y;
      }
      int idx = 0;
      for (int s = 0; s <= k; ++s)
        for (int a = s; a >= 0; --a) b[idx++] = px[a] * py[s - a];
      return b;
    }
  }
  throw InvalidInput("eval_basis: unknown basis family");
}

double eval_poly(const Eigen::VectorXd& coeffs, const BasisSpec& basis, int k, Point x) {
  if (coeffs.size() != basis.size(k))
    throw InvalidInput("eval_poly: got " + std::to_string(coeffs.size()) +
                       " coefficients, degree " + std::to_string(k) + " needs " +
                       std::to_string(basis.size(k)));
  return coeffs.dot(eval_basis(basis, k, x));
}

std::array<double, 3> barycentric(Point x) { return {1.0 - x.x - x.y, x.x, x.y}; }

PointSet make_points_segment(int n, NodeScheme scheme) {
  if (n < 1) throw InvalidInput("make_points_segment: n must be >= 1");
  PointSet ps;
  ps.domain = DomainTag::Segment01;
  ps.nodes.reserve(n + 1);
  for (int r = 0; r <= n; ++r) {
    double x = scheme == NodeScheme::Equispaced
                   ? static_cast<double>(r) / n
                   : 0.5 * (1.0 - std::cos(M_PI * r / n));
    ps.nodes.push_back({x, 0.0});
  }
  return ps;
}

PointSet make_points_triangle(int n) {
  if (n < 1) throw InvalidInput("make_points_triangle: n must be >= 1");
  PointSet ps;
  ps.domain = DomainTag::UnitTriangle;
  ps.nodes.reserve((n + 1) * (n + 2) / 2);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n - i; ++j)
      ps.nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  return ps;
}

void check_point_set(const PointSet& points, int n) {
  const int r = points.size();
  const int expected = points.domain == DomainTag::Segment01 ? n + 1 : (n + 1) * (n + 2) / 2;
  if (r != expected)
    throw InvalidInput("point set has " + std::to_string(r) + " nodes, degree " +
                       std::to_string(n) + " interpolation needs " + std::to_string(expected));

  constexpr double tol = 1e-12;
  for (const Point& p : points.nodes) {
    if (points.domain == DomainTag::Segment01) {
      if (p.x < -tol || p.x > 1.0 + tol || std::abs(p.y) > tol)
        throw InvalidInput("node outside [0,1]: x=" + std::to_string(p.x));
    } else {
      auto mu = barycentric(p);
      if (mu[0] < -tol || mu[1] < -tol || mu[2] < -tol)
        throw InvalidInput("node outside the unit triangle: (" + std::to_string(p.x) + ", " +
                           std::to_string(p.y) + ")");
    }
  }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      double dx = points.nodes[i].x - points.nodes[j].x;
      double dy = points.nodes[i].y - points.nodes[j].y;
      if (std::sqrt(dx * dx + dy * dy) <= tol)
        throw InvalidInput("duplicate interpolation nodes at index " + std::to_string(i) +
                           " and " + std::to_string(j));
    }
}

LagrangeEvaluator::LagrangeEvaluator(const PointSet& points, const BasisSpec& basis, int n)
    : basis_(basis), n_(n), r_(points.size()) {
  if (basis.size(n) != r_)
    throw InvalidInput("Lagrange basis needs a square Vandermonde: " + std::to_string(r_) +
                       " nodes vs dim P^n = " + std::to_string(basis.size(n)));
  Eigen::MatrixXd V(r_, r_);
  for (int r = 0; r < r_; ++r) V.row(r) = eval_basis(basis, n, points.nodes[r]).transpose();

  // SVD-based unisolvence test; LU would only fail on exact singularity.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) < 1e-14)
    throw NotUnisolvent("node set is not unisolvent for P^" + std::to_string(n) +
                        ": sigma_min/sigma_max = " +
                        std::to_string(sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0));

  lu_.compute(V.transpose());
}

Eigen::VectorXd LagrangeEvaluator::operator()(Point x) const {
  return lu_.solve(eval_basis(basis_, n_, x));
}

Eigen::VectorXd lagrange_vector(const PointSet& points, const BasisSpec& basis, int n,
                                Point x) {
  return LagrangeEvaluator(points, basis, n)(x);
}

}  // namespace soscert
