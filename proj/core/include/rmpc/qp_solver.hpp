#pragma once

#include <vector>

#include "rmpc/synthesis.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

enum class QpStatus { optimal, infeasible, max_iterations };

struct QPSolution {
  QpStatus status = QpStatus::infeasible;
  Vector U;            ///< optimal stacked inputs (u(0)', ..., u(N-1)')'
  double value = 0.0;  ///< objective including 1/2 x'Yx
  std::vector<int> active;
  std::vector<int> inactive;
  Vector multipliers;  ///< one per constraint row, zero off the active set
  int iterations = 0;

  bool ok() const { return status == QpStatus::optimal; }
};

/// Default activity tolerance for row i: 1e-8 (1 + |w_i| + ||E_i|| ||x||).
Vector activity_tolerances(const CondensedQP& qp, const Vector& x, double eps = 1e-8);

/// Splits rows into active (|G_i U - w_i - E_i x| <= tol_i) and inactive.
void active_set(const CondensedQP& qp, const Vector& x, const Vector& U, const Vector& tol,
                std::vector<int>& active, std::vector<int>& inactive);

/// Dual active-set (Goldfarb–Idnani) solver for the condensed QP. Starts from
/// the unconstrained minimizer and adds the most violated row (lowest index on
/// ties) until primal feasible. Holds scratch space; use one instance per
/// thread. The referenced QP must outlive the solver.
class QpSolver {
 public:
  explicit QpSolver(const CondensedQP& qp);

  QPSolution solve(const Vector& x);

  /// True when the QP has a solution at x.
  bool feasible(const Vector& x) { return solve(x).ok(); }

 private:
  const CondensedQP& qp_;
  int max_iterations_;
};

}  // namespace rmpc
