#include "soscert/problems.hpp"

#include <cmath>

namespace soscert {

namespace {

double cheb_shifted(int k, double x) {
  return eval_basis(BasisSpec::chebyshev_1d(), k, {x, 0.0})[k];
}

struct PresetDef {
  PresetInfo info;
  // evaluator factory, parameterized by (alpha, degree) where applicable
  std::function<std::function<double(Point)>(double alpha, int degree)> make_eval;
  bool triangle = false;
  bool unweighted = false;
  bool takes_degree = false;  // test4: degree is the preset parameter
};

const std::vector<PresetDef>& preset_table() {
  static const std::vector<PresetDef> defs = {
      {{"test1", 1, 5, "x^5 + 1 on [0,1]"},
       [](double, int) {
         return [](Point p) { return std::pow(p.x, 5) + 1.0; };
       }},
      {{"test2", 1, 21, "T21(x) + 1, shifted Chebyshev, nearly singular optimum"},
       [](double, int) {
         return [](Point p) { return cheb_shifted(21, p.x) + 1.0; };
       }},
      {{"test3", 1, 11, "T11(x) + 1 + alpha, distance-to-boundary study"},
       [](double alpha, int) {
         return [alpha](Point p) { return cheb_shifted(11, p.x) + 1.0 + alpha; };
       }},
      {{"test4", 1, 8, "x^n + 1, degree sweep"},
       [](double, int degree) {
         return [degree](Point p) { return std::pow(p.x, degree) + 1.0; };
       },
       false, false, true},
      {{"test5", 2, 8, "(T4(x)+1)(T4(y)+1)/4 + 1e-3 on the unit triangle"},
       [](double, int) {
         return [](Point p) {
           return 0.25 * (cheb_shifted(4, p.x) + 1.0) * (cheb_shifted(4, p.y) + 1.0) + 1e-3;
         };
       },
       true},
      {{"test6", 2, 6, "Motzkin polynomial x^2 y^4 + x^4 y^2 - 3 x^2 y^2 + 1, weighted blocks"},
       [](double, int) {
         return [](Point p) {
           double x2 = p.x * p.x, y2 = p.y * p.y;
           return x2 * y2 * y2 + x2 * x2 * y2 - 3.0 * x2 * y2 + 1.0;
         };
       },
       true},
      {{"test6-unweighted", 2, 6, "Motzkin polynomial with the plain SOS ansatz (no weights)"},
       [](double, int) {
         return [](Point p) {
           double x2 = p.x * p.x, y2 = p.y * p.y;
           return x2 * y2 * y2 + x2 * x2 * y2 - 3.0 * x2 * y2 + 1.0;
         };
       },
       true, true},
  };
  return defs;
}

const PresetDef& find_preset(const std::string& name) {
  for (const PresetDef& def : preset_table())
    if (def.info.name == name) return def;
  std::string known;
  for (const PresetDef& def : preset_table()) known += (known.empty() ? "" : ", ") + def.info.name;
  throw UnknownPreset("unknown preset \"" + name + "\" (known: " + known + ")");
}

}  // namespace

TargetSpec TargetSpec::coefficients(const BasisSpec& basis, int degree,
                                    Eigen::VectorXd coeffs) {
  if (coeffs.size() != basis.size(degree))
    throw InvalidInput("coefficient target: got " + std::to_string(coeffs.size()) +
                       " coefficients, degree " + std::to_string(degree) + " needs " +
                       std::to_string(basis.size(degree)));
  TargetSpec t;
  t.kind = Kind::Coefficients;
  t.degree = degree;
  t.basis = basis;
  t.data = std::move(coeffs);
  return t;
}

TargetSpec TargetSpec::node_values(int degree, Eigen::VectorXd values) {
  TargetSpec t;
  t.kind = Kind::NodeValues;
  t.degree = degree;
  t.data = std::move(values);
  return t;
}

TargetSpec TargetSpec::preset(const std::string& name, std::optional<double> alpha,
                              std::optional<int> degree) {
  const PresetDef& def = find_preset(name);
  TargetSpec t;
  t.kind = Kind::NamedPreset;
  t.name = name;
  t.degree = def.takes_degree ? degree.value_or(def.info.degree) : def.info.degree;
  if (t.degree < 1) throw InvalidInput("preset degree must be >= 1");
  if (alpha) t.alpha = *alpha;
  return t;
}

std::function<double(Point)> target_evaluator(const TargetSpec& target) {
  switch (target.kind) {
    case TargetSpec::Kind::Coefficients: {
      BasisSpec basis = target.basis;
      int degree = target.degree;
      Eigen::VectorXd coeffs = target.data;
      return [=](Point p) { return eval_poly(coeffs, basis, degree, p); };
    }
    case TargetSpec::Kind::NamedPreset:
      return find_preset(target.name).make_eval(target.alpha, target.degree);
    case TargetSpec::Kind::NodeValues:
      return nullptr;
  }
  return nullptr;
}

Eigen::VectorXd target_values(const TargetSpec& target, const PointSet& points, int n) {
  if (target.degree > n)
    throw InvalidInput("target has degree " + std::to_string(target.degree) +
                       " but the ansatz degree is " + std::to_string(n));
  if (target.kind == TargetSpec::Kind::NodeValues) {
    if (target.data.size() != points.size())
      throw InvalidInput("node-value target: " + std::to_string(target.data.size()) +
                         " values for " + std::to_string(points.size()) + " nodes");
    return target.data;
  }
  const int dim = points.domain == DomainTag::Segment01 ? 1 : 2;
  if (target.kind == TargetSpec::Kind::Coefficients && target.basis.dimension() != dim)
    throw InvalidInput("coefficient target basis dimension does not match the domain");
  if (target.kind == TargetSpec::Kind::NamedPreset &&
      find_preset(target.name).info.dimension != dim)
    throw InvalidInput("preset \"" + target.name + "\" lives in dimension " +
                       std::to_string(find_preset(target.name).info.dimension));
  auto eval = target_evaluator(target);
  Eigen::VectorXd y(points.size());
  for (int r = 0; r < points.size(); ++r) y[r] = eval(points.nodes[r]);
  return y;
}

std::vector<Weight> segment_weights(int n) {
  if (n < 1) throw InvalidInput("segment_weights: n must be >= 1");
  if (n % 2 == 1) return {weight_from_name("x"), weight_from_name("1-x")};
  return {weight_from_name("1"), weight_from_name("x(1-x)")};
}

std::vector<Weight> triangle_weights(int n) {
  if (n < 1) throw InvalidInput("triangle_weights: n must be >= 1");
  std::vector<std::string> names =
      n % 2 == 1 ? std::vector<std::string>{"mu1", "mu2", "mu3", "mu1*mu2*mu3"}
                 : std::vector<std::string>{"mu2*mu3", "mu3*mu1", "mu1*mu2", "1"};
  std::vector<Weight> weights;
  for (const std::string& name : names) {
    Weight w = weight_from_name(name);
    if (w.degree <= n) weights.push_back(std::move(w));  // drop empty blocks (n < 3)
  }
  return weights;
}

SosProblem build_segment_problem(int n, NodeScheme scheme, BasisFamily family,
                                 const TargetSpec& target) {
  if (family == BasisFamily::Monomial2D)
    throw InvalidInput("segment problems need a 1D basis family");
  PointSet points = make_points_segment(n, scheme);
  Eigen::VectorXd y = target_values(target, points, n);
  std::string label = target.kind == TargetSpec::Kind::NamedPreset ? target.name : "segment";
  return assemble_problem(n, segment_weights(n), BasisSpec{family}, std::move(points),
                          std::move(y), std::move(label));
}

SosProblem build_triangle_problem(int n, const TargetSpec& target) {
  PointSet points = make_points_triangle(n);
  Eigen::VectorXd y = target_values(target, points, n);
  std::string label = target.kind == TargetSpec::Kind::NamedPreset ? target.name : "triangle";
  return assemble_problem(n, triangle_weights(n), BasisSpec::monomial_2d(), std::move(points),
                          std::move(y), std::move(label));
}

SosProblem build_triangle_problem_unweighted(int n, const TargetSpec& target) {
  PointSet points = make_points_triangle(n);
  Eigen::VectorXd y = target_values(target, points, n);
  std::string label =
      target.kind == TargetSpec::Kind::NamedPreset ? target.name : "triangle-unweighted";
  std::vector<Weight> units(triangle_weights(n).size(), weight_from_name("1"));
  return assemble_problem(n, std::move(units), BasisSpec::monomial_2d(), std::move(points),
                          std::move(y), std::move(label), /*waive_block_sum=*/true);
}

SosProblem regularize_epsilon(const SosProblem& problem, double eps) {
  Eigen::VectorXd y = problem.y;
  for (int r = 0; r < problem.num_nodes(); ++r)
    y[r] += eps * eval_p_B(problem, problem.points.nodes[r]);
  SosProblem out = assemble_problem(problem.n, problem.weights, problem.basis, problem.points,
                                    std::move(y), problem.label, problem.block_sum_waived);
  out.epsilon = problem.epsilon + eps;
  return out;
}

std::vector<PresetInfo> preset_catalog() {
  std::vector<PresetInfo> out;
  for (const PresetDef& def : preset_table()) out.push_back(def.info);
  return out;
}

std::vector<TargetSpec> named_presets() {
  std::vector<TargetSpec> out;
  for (const PresetDef& def : preset_table()) out.push_back(TargetSpec::preset(def.info.name));
  return out;
}

SosProblem problem_from_preset(const std::string& name, std::optional<double> alpha,
                               std::optional<int> degree) {
  const PresetDef& def = find_preset(name);
  TargetSpec target = TargetSpec::preset(name, alpha, degree);
  if (def.unweighted) return build_triangle_problem_unweighted(target.degree, target);
  if (def.triangle) return build_triangle_problem(target.degree, target);
  return build_segment_problem(target.degree, NodeScheme::Equispaced,
                               BasisFamily::ShiftedChebyshev1D, target);
}

}  // namespace soscert
