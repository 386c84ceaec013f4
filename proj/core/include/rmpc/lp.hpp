#pragma once

#include "rmpc/polytope.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

enum class LpStatus { optimal, unbounded, empty };

struct LpResult {
  LpStatus status = LpStatus::empty;
  double value = 0.0;
  Vector argmax;
};

/// Maximizes c'x over { x : T x <= d } with a dense two-phase simplex using
/// Bland's rule. The polytope may be unbounded or empty.
LpResult lp_max(const Polytope& p, const Vector& c);

/// Dense standard-form LP  min cost'y  s.t.  A y = b, y >= 0.
struct StandardLpResult {
  enum class Status { optimal, infeasible, unbounded } status = Status::infeasible;
  Vector y;
  /// Simplex multipliers pi with A_B' pi = cost_B at the optimal basis.
  Vector multipliers;
  double value = 0.0;
  int pivots = 0;
};

/// Two-phase tableau simplex with Bland's anti-cycling rule.
StandardLpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& cost);

}  // namespace rmpc
