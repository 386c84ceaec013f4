#pragma once

#include <filesystem>
#include <string>

#include "rmpc/polytope.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// Linear MPC problem: x(k+1) = A x(k) + B u(k) with box constraints,
/// quadratic weights, horizon and the cost-decrease factor used by the
/// extended validity regions.
struct ProblemSpec {
  Matrix A;
  Matrix B;
  Matrix Q;
  Matrix R;
  int N = 1;
  Vector x_lower;
  Vector x_upper;
  Vector u_lower;
  Vector u_upper;
  double lambda = 1.0;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }

  Polytope state_box() const { return Polytope::box(x_lower, x_upper); }
  Polytope input_box() const { return Polytope::box(u_lower, u_upper); }
};

/// Throws DimensionMismatch or InvalidSpec describing the first violation.
void validate(const ProblemSpec& spec);

/// Parses the JSON problem document (fields A, B, Q, R, N, lambda, x_bounds,
/// u_bounds). Malformed matrices are reported with row/column position.
ProblemSpec parse_problem(const std::string& json_text);
ProblemSpec load_problem(const std::filesystem::path& path);
std::string problem_to_json(const ProblemSpec& spec);

/// Zero-order-hold discretization of x' = Ac x + Bc u with sample time ts.
std::pair<Matrix, Matrix> discretize_zoh(const Matrix& Ac, const Matrix& Bc, double ts);

}  // namespace rmpc
