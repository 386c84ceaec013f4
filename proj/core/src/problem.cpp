#include "rmpc/problem.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "json_matrix.hpp"
#include "rmpc/errors.hpp"

namespace rmpc {
namespace {

std::string shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

void require_spd(const Matrix& M, const char* name) {
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidSpec(std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidSpec(std::string(name) + " is not positive definite");
  }
}

void require_origin_interior(const Vector& lo, const Vector& hi, const char* name) {
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo(i) < 0.0 && 0.0 < hi(i))) {
      throw InvalidSpec(std::string(name) + "[" + std::to_string(i) +
                        "] must satisfy lower < 0 < upper");
    }
  }
}

void read_bounds(const detail::Json& j, const std::string& what, Vector& lo, Vector& hi) {
  const Matrix pairs = detail::matrix_from_json(j, what);
  if (pairs.rows() == 0) {
    lo.resize(0);
    hi.resize(0);
    return;
  }
  if (pairs.cols() != 2) throw FormatError(what + ": each entry must be a [lower, upper] pair");
  lo = pairs.col(0);
  hi = pairs.col(1);
}

const detail::Json& field(const detail::Json& doc, const char* name) {
  if (!doc.contains(name)) throw FormatError(std::string("problem file: missing field '") + name + "'");
  return doc.at(name);
}

}  // namespace

void validate(const ProblemSpec& s) {
  const auto n = s.A.rows();
  const auto m = s.B.cols();
  if (n == 0 || s.A.cols() != n) throw DimensionMismatch("A must be square and non-empty, got " + shape(s.A));
  if (s.B.rows() != n || m == 0) throw DimensionMismatch("B must be " + std::to_string(n) + "xm, got " + shape(s.B));
  if (s.Q.rows() != n || s.Q.cols() != n) throw DimensionMismatch("Q must match A, got " + shape(s.Q));
  if (s.R.rows() != m || s.R.cols() != m) throw DimensionMismatch("R must be " + std::to_string(m) + "x" + std::to_string(m) + ", got " + shape(s.R));
  if (s.x_lower.size() != n || s.x_upper.size() != n) throw DimensionMismatch("x_bounds must have " + std::to_string(n) + " pairs");
  if (s.u_lower.size() != m || s.u_upper.size() != m) throw DimensionMismatch("u_bounds must have " + std::to_string(m) + " pairs");
  for (const Matrix* M : {&s.A, &s.B, &s.Q, &s.R}) {
    if (!M->allFinite()) throw InvalidSpec("problem matrices must be finite");
  }
  if (!s.x_lower.allFinite() || !s.x_upper.allFinite() || !s.u_lower.allFinite() ||
      !s.u_upper.allFinite()) {
    throw InvalidSpec("bounds must be finite");
  }
  if (s.N < 1) throw InvalidSpec("horizon N must be positive");
  if (!(s.lambda > 0.0 && s.lambda <= 1.0)) throw InvalidSpec("lambda must lie in (0, 1]");
  require_spd(s.Q, "Q");
  require_spd(s.R, "R");
  require_origin_interior(s.x_lower, s.x_upper, "x_bounds");
  require_origin_interior(s.u_lower, s.u_upper, "u_bounds");
}

ProblemSpec parse_problem(const std::string& json_text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(json_text);
  } catch (const detail::Json::parse_error& e) {
    throw FormatError(std::string("problem file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("problem file: top level must be an object");

  ProblemSpec s;
  s.A = detail::matrix_from_json(field(doc, "A"), "A");
  s.B = detail::matrix_from_json(field(doc, "B"), "B");
  s.Q = detail::matrix_from_json(field(doc, "Q"), "Q");
  s.R = detail::matrix_from_json(field(doc, "R"), "R");
  const auto& N = field(doc, "N");
  if (!N.is_number_integer()) throw FormatError("problem file: N must be an integer");
  s.N = N.get<int>();
  if (doc.contains("lambda")) {
    if (!doc.at("lambda").is_number()) throw FormatError("problem file: lambda must be a number");
    s.lambda = doc.at("lambda").get<double>();
  }
  read_bounds(field(doc, "x_bounds"), "x_bounds", s.x_lower, s.x_upper);
  read_bounds(field(doc, "u_bounds"), "u_bounds", s.u_lower, s.u_upper);
  validate(s);
  return s;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  return parse_problem(detail::read_text_file(path));
}

std::string problem_to_json(const ProblemSpec& s) {
  detail::Json doc;
  doc["A"] = detail::to_json(s.A);
  doc["B"] = detail::to_json(s.B);
  doc["Q"] = detail::to_json(s.Q);
  doc["R"] = detail::to_json(s.R);
  doc["N"] = s.N;
  doc["lambda"] = s.lambda;
  Matrix xb(s.x_lower.size(), 2);
  xb << s.x_lower, s.x_upper;
  Matrix ub(s.u_lower.size(), 2);
  ub << s.u_lower, s.u_upper;
  doc["x_bounds"] = detail::to_json(xb);
  doc["u_bounds"] = detail::to_json(ub);
  return doc.dump(2) + "\n";
}

std::pair<Matrix, Matrix> discretize_zoh(const Matrix& Ac, const Matrix& Bc, double ts) {
  const auto n = Ac.rows();
  const auto m = Bc.cols();
  if (Ac.cols() != n || Bc.rows() != n) throw DimensionMismatch("discretize_zoh: bad shapes");
  Matrix aug = Matrix::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = Ac * ts;
  aug.topRightCorner(n, m) = Bc * ts;
  const Matrix e = aug.exp();
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

}  // namespace rmpc
