#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "soscert/oracle.hpp"
#include "soscert/problem.hpp"
#include "soscert/solver.hpp"

namespace soscert {

// "monomial1d", "chebyshev1d", "monomial2d"
std::string basis_name(const BasisSpec& basis);
BasisSpec basis_from_name(const std::string& name);

// Inverse of to_string(SolveStatus); throws InvalidInput on unknown strings.
SolveStatus status_from_name(const std::string& name);

// Iteration trace as CSV with the exact header
//   iter,G,grad_norm,tau,cond_H,min_eig_M
// Floats carry 17 significant digits; NaN cells are left empty (tau on the
// starting row, cond_H whenever the method never formed a Hessian).
void write_trace_csv(const IterationTrace& trace, std::ostream& out);
void write_trace_csv(const IterationTrace& trace, const std::string& path);

// Self-contained certificate document:
//   {problem: {dim, n, weights, basis, nodes, y},
//    lambda, blocks: [{weight_index, q: [[...], ...]}], residual, status}
// nodes are a flat list of x in 1D and [x, y] pairs in 2D; each q entry lists
// the coefficient columns of one block. Everything needed to rebuild the
// problem and replay the verification is inside.
std::string certificate_to_json(const SosProblem& problem, const Certificate& cert,
                                SolveStatus status);
void write_certificate_json(const SosProblem& problem, const Certificate& cert,
                            SolveStatus status, const std::string& path);

struct CertificateBundle {
  SosProblem problem;
  Certificate certificate;
  SolveStatus status = SolveStatus::Converged;
};

// Rebuilds problem + certificate from the JSON document, re-running the
// assembly validation; the block-sum waiver is inferred from the data
// (sum of block sizes vs. node count). Throws InvalidInput on malformed or
// inconsistent input.
CertificateBundle certificate_from_json(const std::string& text);
CertificateBundle read_certificate_json(const std::string& path);

// Bundle of verification outcomes:
//   {profile, pass, reports: [{check, pass, metric, tolerance, detail, seed?}]}
// Non-finite metrics are serialized as strings ("inf", "-inf", "nan").
std::string reports_to_json(const std::string& profile,
                            const std::vector<VerificationReport>& reports);

}  // namespace soscert
