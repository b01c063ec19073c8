#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "soscert/basis.hpp"

using namespace soscert;

namespace {

// Independent oracle: Horner evaluation of sum_i c_i x^i.
double horner_1d(const Eigen::VectorXd& c, double x) {
  double v = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * x + c[i];
  return v;
}

// Independent oracle for the 2D monomial span: explicit powers, graded lex order.
double monomials_2d_direct(const Eigen::VectorXd& c, int k, double x, double y) {
  double v = 0.0;
  int idx = 0;
  for (int s = 0; s <= k; ++s)
    for (int a = s; a >= 0; --a) v += c[idx++] * std::pow(x, a) * std::pow(y, s - a);
  return v;
}

}  // namespace

TEST_CASE("basis sizes") {
  CHECK(BasisSpec::monomial_1d().size(5) == 6);
  CHECK(BasisSpec::chebyshev_1d().size(0) == 1);
  CHECK(BasisSpec::monomial_2d().size(8) == 45);
  CHECK(BasisSpec::monomial_2d().size(1) == 3);
  CHECK_THROWS_AS((void)BasisSpec::monomial_1d().size(-1), InvalidInput);
}

TEST_CASE("monomial evaluation matches Horner oracle") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto basis = BasisSpec::monomial_1d();
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + static_cast<int>(rng() % 9);
    Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(k + 1, [&] { return U(rng); });
    double x = U(rng) * 0.5 + 0.5;  // stay in [0,1]
    double got = eval_poly(c, basis, k, {x, 0.0});
    double want = horner_1d(c, x);
    CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("shifted Chebyshev matches cos(i theta) oracle") {
  // T~_i((cos t + 1)/2) = cos(i t): independent of the recurrence implementation.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, M_PI);
  auto basis = BasisSpec::chebyshev_1d();
  for (int trial = 0; trial < 30; ++trial) {
    double theta = U(rng);
    double x = 0.5 * (std::cos(theta) + 1.0);
    Eigen::VectorXd b = eval_basis(basis, 12, {x, 0.0});
    for (int i = 0; i <= 12; ++i)
      CHECK(std::abs(b[i] - std::cos(i * theta)) <= 1e-11);
  }
}

TEST_CASE("shifted Chebyshev endpoint values") {
  auto basis = BasisSpec::chebyshev_1d();
  Eigen::VectorXd at0 = eval_basis(basis, 6, {0.0, 0.0});
  Eigen::VectorXd at1 = eval_basis(basis, 6, {1.0, 0.0});
  for (int i = 0; i <= 6; ++i) {
    CHECK(at0[i] == doctest::Approx(i % 2 == 0 ? 1.0 : -1.0).epsilon(1e-14));
    CHECK(at1[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("2D monomial ordering is graded lex") {
  auto basis = BasisSpec::monomial_2d();
  Eigen::VectorXd b1 = eval_basis(basis, 1, {0.5, 0.25});
  REQUIRE(b1.size() == 3);
  CHECK(b1[0] == 1.0);
  CHECK(b1[1] == 0.5);
  CHECK(b1[2] == 0.25);

  Eigen::VectorXd b2 = eval_basis(basis, 2, {2.0, 3.0});
  REQUIRE(b2.size() == 6);
  // 1; x, y; x^2, xy, y^2
  CHECK(b2[3] == doctest::Approx(4.0));
  CHECK(b2[4] == doctest::Approx(6.0));
  CHECK(b2[5] == doctest::Approx(9.0));
}

TEST_CASE("2D monomial evaluation matches direct-powers oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto basis = BasisSpec::monomial_2d();
  for (int trial = 0; trial < 30; ++trial) {
    int k = 1 + static_cast<int>(rng() % 6);
    Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(basis.size(k), [&] { return 2.0 * U(rng) - 1.0; });
    double x = U(rng), y = U(rng) * (1.0 - x);
    double got = eval_poly(c, basis, k, {x, y});
    double want = monomials_2d_direct(c, k, x, y);
    CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("eval_poly validates coefficient count") {
  Eigen::VectorXd c(3);
  c << 1, 2, 3;
  CHECK_THROWS_AS((void)eval_poly(c, BasisSpec::monomial_1d(), 5, {0.5, 0.0}), InvalidInput);
}

TEST_CASE("barycentric coordinates") {
  auto mu = barycentric({0.2, 0.3});
  CHECK(mu[0] == doctest::Approx(0.5));
  CHECK(mu[1] == doctest::Approx(0.2));
  CHECK(mu[2] == doctest::Approx(0.3));
  CHECK(mu[0] + mu[1] + mu[2] == doctest::Approx(1.0));
}

TEST_CASE("segment nodes") {
  PointSet eq = make_points_segment(5, NodeScheme::Equispaced);
  REQUIRE(eq.size() == 6);
  for (int r = 0; r <= 5; ++r) CHECK(eq.nodes[r].x == doctest::Approx(r / 5.0));
  CHECK_NOTHROW(check_point_set(eq, 5));

  PointSet ch = make_points_segment(8, NodeScheme::ChebyshevNodes);
  REQUIRE(ch.size() == 9);
  CHECK(ch.nodes[0].x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ch.nodes[8].x == doctest::Approx(1.0).epsilon(1e-15));
  for (int r = 0; r <= 8; ++r)  // Lobatto points are symmetric about 1/2
    CHECK(ch.nodes[r].x + ch.nodes[8 - r].x == doctest::Approx(1.0));
  CHECK_NOTHROW(check_point_set(ch, 8));

  CHECK_THROWS_AS((void)make_points_segment(0, NodeScheme::Equispaced), InvalidInput);
}

TEST_CASE("triangle lattice nodes") {
  PointSet tr = make_points_triangle(3);
  REQUIRE(tr.size() == 10);
  CHECK_NOTHROW(check_point_set(tr, 3));
  bool has_center_edge = false;
  for (const Point& p : tr.nodes)
    if (std::abs(p.x - 1.0 / 3) < 1e-15 && std::abs(p.y - 1.0 / 3) < 1e-15)
      has_center_edge = true;
  CHECK(has_center_edge);
  for (const Point& p : tr.nodes) {
    auto mu = barycentric(p);
    CHECK(mu[0] >= -1e-15);
    CHECK(mu[1] >= -1e-15);
    CHECK(mu[2] >= -1e-15);
  }
}

TEST_CASE("check_point_set rejects bad sets") {
  PointSet ps = make_points_segment(3, NodeScheme::Equispaced);
  CHECK_THROWS_AS(check_point_set(ps, 4), InvalidInput);  // wrong count

  PointSet dup = ps;
  dup.nodes[2] = dup.nodes[1];
  CHECK_THROWS_AS(check_point_set(dup, 3), InvalidInput);

  PointSet out = ps;
  out.nodes[1].x = 1.5;
  CHECK_THROWS_AS(check_point_set(out, 3), InvalidInput);
}

TEST_CASE("Lagrange vector reproduces degree-n polynomials") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  PointSet ps = make_points_segment(7, NodeScheme::Equispaced);
  auto basis = BasisSpec::chebyshev_1d();
  LagrangeEvaluator lag(ps, basis, 7);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(8, [&] { return 2.0 * U(rng) - 1.0; });
    double x = U(rng);
    Eigen::VectorXd vals(8);
    for (int r = 0; r < 8; ++r) vals[r] = eval_poly(c, basis, 7, ps.nodes[r]);
    double interp = lag({x, 0.0}).dot(vals);
    double direct = eval_poly(c, basis, 7, {x, 0.0});
    CHECK(std::abs(interp - direct) <= 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("Lagrange vector is cardinal at the nodes") {
  PointSet ps = make_points_triangle(3);
  auto basis = BasisSpec::monomial_2d();
  LagrangeEvaluator lag(ps, basis, 3);
  for (int r = 0; r < ps.size(); ++r) {
    Eigen::VectorXd l = lag(ps.nodes[r]);
    for (int s = 0; s < ps.size(); ++s)
      CHECK(std::abs(l[s] - (s == r ? 1.0 : 0.0)) <= 1e-10);
  }
}

TEST_CASE("collinear 2D nodes are not unisolvent") {
  PointSet ps;
  ps.domain = DomainTag::UnitTriangle;
  for (int i = 0; i < 6; ++i) {
    double t = i / 10.0;
    ps.nodes.push_back({t, t});  // all on the line y = x
  }
  CHECK_THROWS_AS(LagrangeEvaluator(ps, BasisSpec::monomial_2d(), 2), NotUnisolvent);
}

TEST_CASE("lagrange_vector free function agrees with evaluator") {
  PointSet ps = make_points_segment(4, NodeScheme::Equispaced);
  auto basis = BasisSpec::monomial_1d();
  LagrangeEvaluator lag(ps, basis, 4);
  Eigen::VectorXd a = lag({0.31, 0.0});
  Eigen::VectorXd b = lagrange_vector(ps, basis, 4, {0.31, 0.0});
  CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);
}
