#pragma once

#include <string>
#include <vector>

#include "rmpc/polytope.hpp"
#include "rmpc/problem.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

struct DareOptions {
  /// Stop when successive iterates differ by at most this in max-norm.
  double tol = 1e-12;
  int max_iterations = 100000;
};

/// Solves P = Q + A'PA - A'PB (R + B'PB)^-1 B'PA by fixed-point iteration of
/// the Riccati recursion started at P = Q. Throws NoConvergence.
Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                  const DareOptions& opts = {});

/// Relative residual ||Q + A'PA - A'PB(R+B'PB)^-1 B'PA - P|| / ||P||.
double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& P);

/// K = -(R + B'PB)^-1 B'PA, so that u = K x. Throws SingularGainSystem.
Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& R, const Matrix& P);

double spectral_radius(const Matrix& M);

struct TerminalSetOptions {
  int max_steps = 500;
  double redundancy_tol = 1e-9;
};

/// Maximal constraint-admissible positively invariant set of x+ = A_cl x
/// under x in X and K x in U (Gilbert–Tan iteration). The representation
/// keeps every row of X and appends the irredundant remaining rows, so
/// T ⊆ X is explicit. Throws NotFinitelyDetermined on hitting the cap.
Polytope terminal_set(const Matrix& A_cl, const Polytope& X, const Polytope& U, const Matrix& K,
                      const TerminalSetOptions& opts = {});

enum class RowKind { input, state, terminal };

/// Origin of a constraint row of the condensed QP.
struct RowTag {
  int stage = 0;      ///< k of u(k); k of x(k) for state and terminal rows
  RowKind kind = RowKind::input;
  int component = 0;  ///< coordinate index, or terminal facet index
  bool upper = true;  ///< upper bound (box rows only)
};

std::string to_string(RowKind kind);

/// Condensed QP
///   min 1/2 U'HU + x'FU + 1/2 x'Yx   s.t.  G U <= w + E x
/// whose objective equals the MPC cost  x(N)'P x(N) + sum x'Qx + u'Ru.
struct CondensedQP {
  ProblemSpec spec;
  Matrix H;
  Matrix H_inv;
  Matrix F;
  Matrix Y;
  Matrix G;
  Vector w;
  Matrix E;
  Matrix S;  ///< E + G H^-1 F'
  Matrix H_inv_Gt;    ///< H^-1 G'
  Matrix G_H_inv_Gt;  ///< G H^-1 G'
  Matrix P;
  Matrix K_lqr;
  Polytope terminal;
  std::vector<RowTag> row_tags;

  int n() const { return spec.n(); }
  int m() const { return spec.m(); }
  int N() const { return spec.N; }
  int variables() const { return static_cast<int>(H.rows()); }
  int constraints() const { return static_cast<int>(G.rows()); }

  /// 1/2 U'HU + x'FU + 1/2 x'Yx.
  double objective(const Vector& x, const Vector& U) const;
  /// Row-wise G U - w - E x.
  Vector residual(const Vector& x, const Vector& U) const;
};

/// Builds the condensed QP from a spec and its terminal ingredients. Rows are
/// ordered per stage k = 0..N-1: bounds on u(k) (upper then lower), then, for
/// k <= N-2, bounds on x(k+1); the terminal rows on x(N) come last. Bounds on
/// x(0) are not encoded since x(0) is the parameter.
CondensedQP condense(const ProblemSpec& spec, const Matrix& P, const Matrix& K_lqr,
                     const Polytope& terminal);

/// DARE, LQR gain, terminal set and condensing in one call.
CondensedQP synthesize(const ProblemSpec& spec);

/// Serializes the condensed QP and terminal ingredients as JSON.
std::string condensed_qp_to_json(const CondensedQP& qp);

}  // namespace rmpc
