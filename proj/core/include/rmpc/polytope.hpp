#pragma once

#include <cstddef>
#include <vector>

#include "rmpc/types.hpp"

namespace rmpc {

/// H-representation { x : T x <= d }.
///
/// Construction rejects non-finite data and rows that certify emptiness on
/// their own (all-zero T row with negative d). Zero rows with d >= 0 are legal.
class Polytope {
 public:
  Polytope() = default;
  Polytope(Matrix T, Vector d);

  /// Unconstrained set in `dim` dimensions (zero rows).
  static Polytope whole_space(int dim);
  /// Axis-aligned box as [I; -I] x <= [upper; -lower].
  static Polytope box(const Vector& lower, const Vector& upper);

  const Matrix& T() const { return T_; }
  const Vector& d() const { return d_; }
  int dim() const { return static_cast<int>(T_.cols()); }
  int rows() const { return static_cast<int>(T_.rows()); }

  /// T x <= d + tol, row by row.
  bool contains(const Vector& x, double tol = 1e-9) const;
  /// Largest T_i x - d_i over all rows; -inf for zero rows.
  double max_violation(const Vector& x) const;

  /// Row-wise concatenation; both operands must share `dim()`.
  Polytope intersect(const Polytope& other) const;
  /// { x : T (M x + c) <= d }. Rows that become 0 <= -eps with eps within
  /// rounding (1e-9 relative) are read as tautologies.
  Polytope pullback(const Matrix& M, const Vector& c) const;

 private:
  Matrix T_{0, 0};
  Vector d_{0};
};

struct RedundancyOptions {
  /// Row i is redundant when max T_i x over the rest is <= d_i + tol.
  double tol = 1e-9;
};

/// Indices (ascending) of the rows that survive redundancy removal. Of several
/// identical rows only the tightest copy survives. Throws InvalidPolytope if
/// the set is empty.
std::vector<int> irredundant_rows(const Polytope& p, const RedundancyOptions& opts = {});

/// Removes redundant rows; surviving rows keep their relative order and are
/// returned unnormalized.
Polytope remove_redundant(const Polytope& p, const RedundancyOptions& opts = {});

/// Rows `idx` of p, in the given order.
Polytope select_rows(const Polytope& p, const std::vector<int>& idx);

/// Largest amount by which a row of `outer` is exceeded over `inner`,
/// max_i (max_{x in inner} outer.T_i x - outer.d_i). Negative or zero means
/// inner ⊆ outer. +inf if a row is unbounded over inner; -inf if inner is empty.
double containment_violation(const Polytope& outer, const Polytope& inner);

/// LP-certified inner ⊆ outer with row tolerance `tol`.
bool is_subset(const Polytope& inner, const Polytope& outer, double tol = 1e-9);

/// Chebyshev ball: center and radius of the largest inscribed ball
/// (radius capped at `radius_cap` for unbounded sets). Radius < 0 if empty.
struct ChebyshevBall {
  Vector center;
  double radius = -1.0;
};
ChebyshevBall chebyshev_ball(const Polytope& p, double radius_cap = 1e6);

struct EliminationOptions {
  /// Upper bound on rows produced by a single elimination before pruning.
  std::size_t max_rows = 20000;
  RedundancyOptions redundancy{};
};

/// Fourier–Motzkin elimination of coordinate `var`; the result lives in
/// dim() - 1 dimensions with the remaining coordinates in their original
/// order and is pruned with remove_redundant. Throws ProjectionTooLarge.
Polytope eliminate_variable(const Polytope& p, int var, const EliminationOptions& opts = {});

/// Eliminates the trailing `count` coordinates, last one first.
Polytope project_out_trailing(const Polytope& p, int count, const EliminationOptions& opts = {});

}  // namespace rmpc
