#include "soscert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace soscert {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// NaN cells stay empty so the CSV stays numeric where values exist
void put_cell(std::ostream& out, double v, bool comma = true) {
  if (comma) out << ',';
  if (!std::isnan(v)) out << g17(v);
}

json metric_json(double v) {
  if (std::isnan(v)) return json("nan");
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open \"" + path + "\" for writing");
  return out;
}

}  // namespace

std::string basis_name(const BasisSpec& basis) {
  switch (basis.family) {
    case BasisFamily::Monomial1D: return "monomial1d";
    case BasisFamily::ShiftedChebyshev1D: return "chebyshev1d";
    case BasisFamily::Monomial2D: return "monomial2d";
  }
  return "?";
}

BasisSpec basis_from_name(const std::string& name) {
  if (name == "monomial1d") return BasisSpec::monomial_1d();
  if (name == "chebyshev1d") return BasisSpec::chebyshev_1d();
  if (name == "monomial2d") return BasisSpec::monomial_2d();
  throw InvalidInput("unknown basis \"" + name +
                     "\" (use monomial1d, chebyshev1d or monomial2d)");
}

SolveStatus status_from_name(const std::string& name) {
  if (name == "Converged") return SolveStatus::Converged;
  if (name == "MaxIterReached") return SolveStatus::MaxIterReached;
  if (name == "StepUnderflow") return SolveStatus::StepUnderflow;
  throw InvalidInput("unknown solve status \"" + name + "\"");
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  out << "iter,G,grad_norm,tau,cond_H,min_eig_M\n";
  for (const TraceRow& row : trace.rows) {
    out << row.iter;
    put_cell(out, row.G);
    put_cell(out, row.grad_norm);
    put_cell(out, row.tau);
    put_cell(out, row.cond_H);
    put_cell(out, row.min_eig_M);
    out << '\n';
  }
}

void write_trace_csv(const IterationTrace& trace, const std::string& path) {
  auto out = open_out(path);
  write_trace_csv(trace, out);
}

std::string certificate_to_json(const SosProblem& problem, const Certificate& cert,
                                SolveStatus status) {
  json doc;
  json prob;
  int dim = problem.basis.dimension();
  prob["dim"] = dim;
  prob["n"] = problem.n;
  prob["basis"] = basis_name(problem.basis);
  json weights = json::array();
  for (const Weight& w : problem.weights) weights.push_back(w.name);
  prob["weights"] = weights;
  json nodes = json::array();
  for (const Point& p : problem.points.nodes) {
    if (dim == 1)
      nodes.push_back(p.x);
    else
      nodes.push_back(json::array({p.x, p.y}));
  }
  prob["nodes"] = nodes;
  prob["y"] = std::vector<double>(problem.y.begin(), problem.y.end());
  doc["problem"] = prob;

  doc["lambda"] = std::vector<double>(cert.lambda.begin(), cert.lambda.end());
  json blocks = json::array();
  for (int j = 0; j < problem.num_blocks(); ++j) {
    json block;
    block["weight_index"] = j;
    json cols = json::array();
    for (int i = 0; i < cert.q[j].cols(); ++i) {
      const auto& col = cert.q[j].col(i);
      cols.push_back(std::vector<double>(col.begin(), col.end()));
    }
    block["q"] = cols;
    blocks.push_back(block);
  }
  doc["blocks"] = blocks;
  doc["residual"] = std::vector<double>(cert.residual.begin(), cert.residual.end());
  doc["status"] = to_string(status);
  return doc.dump(2);
}

void write_certificate_json(const SosProblem& problem, const Certificate& cert,
                            SolveStatus status, const std::string& path) {
  auto out = open_out(path);
  out << certificate_to_json(problem, cert, status) << '\n';
}

CertificateBundle certificate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("certificate JSON malformed: ") + e.what());
  }
  try {
    const json& prob = doc.at("problem");
    int dim = prob.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw InvalidInput("certificate: dim must be 1 or 2");
    int n = prob.at("n").get<int>();
    BasisSpec basis = basis_from_name(prob.at("basis").get<std::string>());
    std::vector<Weight> weights;
    for (const json& w : prob.at("weights")) weights.push_back(weight_from_name(w.get<std::string>()));

    PointSet points;
    points.domain = dim == 1 ? DomainTag::Segment01 : DomainTag::UnitTriangle;
    for (const json& node : prob.at("nodes")) {
      if (dim == 1)
        points.nodes.push_back({node.get<double>(), 0.0});
      else
        points.nodes.push_back({node.at(0).get<double>(), node.at(1).get<double>()});
    }

    std::vector<double> yv = prob.at("y").get<std::vector<double>>();
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), yv.size());

    // infer the block-sum waiver instead of trusting a flag
    int total = 0;
    for (const Weight& w : weights) total += basis.size((n - w.degree) / 2);
    bool waived = total != points.size();
    SosProblem problem =
        assemble_problem(n, std::move(weights), basis, std::move(points), std::move(y),
                         "replay", waived);

    Certificate cert;
    std::vector<double> lv = doc.at("lambda").get<std::vector<double>>();
    if (static_cast<int>(lv.size()) != problem.num_nodes())
      throw InvalidInput("certificate: lambda length does not match the node count");
    cert.lambda = Eigen::Map<const Eigen::VectorXd>(lv.data(), lv.size());

    const json& blocks = doc.at("blocks");
    if (static_cast<int>(blocks.size()) != problem.num_blocks())
      throw InvalidInput("certificate: block count does not match the weights");
    cert.q.resize(blocks.size());
    std::vector<bool> seen(blocks.size(), false);
    for (const json& block : blocks) {
      int j = block.at("weight_index").get<int>();
      if (j < 0 || j >= problem.num_blocks())
        throw InvalidInput("certificate: weight_index out of range");
      if (seen[j]) throw InvalidInput("certificate: duplicate weight_index");
      seen[j] = true;
      int rj = problem.block_sizes[j];
      const json& cols = block.at("q");
      if (static_cast<int>(cols.size()) != rj)
        throw InvalidInput("certificate: block " + std::to_string(j) +
                           " has the wrong number of columns");
      Eigen::MatrixXd q(rj, rj);
      for (int i = 0; i < rj; ++i) {
        std::vector<double> col = cols.at(i).get<std::vector<double>>();
        if (static_cast<int>(col.size()) != rj)
          throw InvalidInput("certificate: column length mismatch in block " +
                             std::to_string(j));
        q.col(i) = Eigen::Map<const Eigen::VectorXd>(col.data(), col.size());
      }
      cert.q[j] = std::move(q);
    }

    std::vector<double> rv = doc.at("residual").get<std::vector<double>>();
    if (static_cast<int>(rv.size()) != problem.num_nodes())
      throw InvalidInput("certificate: residual length does not match the node count");
    cert.residual = Eigen::Map<const Eigen::VectorXd>(rv.data(), rv.size());

    SolveStatus status = status_from_name(doc.at("status").get<std::string>());
    return CertificateBundle{std::move(problem), std::move(cert), status};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("certificate JSON missing or mistyped field: ") + e.what());
  }
}

CertificateBundle read_certificate_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open \"" + path + "\" for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return certificate_from_json(buf.str());
}

std::string reports_to_json(const std::string& profile,
                            const std::vector<VerificationReport>& reports) {
  json doc;
  doc["profile"] = profile;
  bool all = true;
  json arr = json::array();
  for (const VerificationReport& r : reports) {
    all = all && r.pass;
    json item;
    item["check"] = r.check;
    item["pass"] = r.pass;
    item["metric"] = metric_json(r.metric);
    item["tolerance"] = r.tolerance;
    item["detail"] = r.detail;
    if (r.seed) item["seed"] = *r.seed;
    arr.push_back(item);
  }
  doc["pass"] = all;
  doc["reports"] = arr;
  return doc.dump(2);
}

}  // namespace soscert
