#include "rmpc/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmpc {

Vector activity_tolerances(const CondensedQP& qp, const Vector& x, double eps) {
  const double xn = x.norm();
  Vector tol(qp.constraints());
  for (int i = 0; i < qp.constraints(); ++i) {
    tol(i) = eps * (1.0 + std::abs(qp.w(i)) + qp.E.row(i).norm() * xn);
  }
  return tol;
}

void active_set(const CondensedQP& qp, const Vector& x, const Vector& U, const Vector& tol,
                std::vector<int>& active, std::vector<int>& inactive) {
  const Vector r = qp.residual(x, U);
  active.clear();
  inactive.clear();
  for (int i = 0; i < qp.constraints(); ++i) {
    (std::abs(r(i)) <= tol(i) ? active : inactive).push_back(i);
  }
}

QpSolver::QpSolver(const CondensedQP& qp)
    : qp_(qp), max_iterations_(10 * (qp.constraints() + qp.variables()) + 100) {}

QPSolution QpSolver::solve(const Vector& x) {
  const int q = qp_.constraints();
  const Vector b = qp_.w + qp_.E * x;
  const Vector feas_tol = activity_tolerances(qp_, x, 1e-10);
  const Vector& Mdiag = qp_.G_H_inv_Gt.diagonal();

  QPSolution sol;
  sol.multipliers = Vector::Zero(q);
  Vector U = -qp_.H_inv * (qp_.F.transpose() * x);

  std::vector<int> work;  // working set, in insertion order
  Vector mu = Vector::Zero(q);

  auto solve_reduced = [&](int p, Vector& r) {
    const int k = static_cast<int>(work.size());
    if (k == 0) {
      r.resize(0);
      return;
    }
    Matrix M(k, k);
    Vector rhs(k);
    for (int a = 0; a < k; ++a) {
      rhs(a) = qp_.G_H_inv_Gt(work[a], p);
      for (int c = 0; c < k; ++c) M(a, c) = qp_.G_H_inv_Gt(work[a], work[c]);
    }
    r = M.ldlt().solve(rhs);
  };

  int it = 0;
  while (true) {
    // Most violated row, measured in distance units; strict '>' keeps the
    // lowest index on ties.
    int p = -1;
    double worst = 0.0;
    const Vector viol = qp_.G * U - b;
    for (int i = 0; i < q; ++i) {
      if (viol(i) <= feas_tol(i)) continue;
      const double scaled = viol(i) / std::sqrt(std::max(Mdiag(i), 1e-300));
      if (scaled > worst) {
        worst = scaled;
        p = i;
      }
    }
    if (p < 0) break;
    if (qp_.G.row(p).cwiseAbs().maxCoeff() == 0.0) {
      sol.status = QpStatus::infeasible;
      sol.iterations = it;
      return sol;
    }

    // Raise the multiplier of p until p is tight, dropping blocking rows.
    bool added = false;
    while (!added) {
      if (++it > max_iterations_) {
        sol.status = QpStatus::max_iterations;
        sol.iterations = it;
        return sol;
      }
      Vector r;
      solve_reduced(p, r);
      Vector z = qp_.H_inv_Gt.col(p);
      double gz = qp_.G_H_inv_Gt(p, p);
      for (std::size_t a = 0; a < work.size(); ++a) {
        z.noalias() -= r(static_cast<Eigen::Index>(a)) * qp_.H_inv_Gt.col(work[a]);
        gz -= r(static_cast<Eigen::Index>(a)) * qp_.G_H_inv_Gt(p, work[a]);
      }
      const bool primal_step = gz > 1e-12 * qp_.G_H_inv_Gt(p, p);

      double t1 = std::numeric_limits<double>::infinity();
      int block = -1;
      for (std::size_t a = 0; a < work.size(); ++a) {
        const double ra = r(static_cast<Eigen::Index>(a));
        if (ra <= 1e-12) continue;
        const double t = mu(work[a]) / ra;
        if (t < t1) {
          t1 = t;
          block = static_cast<int>(a);
        }
      }
      const double slack = qp_.G.row(p).dot(U) - b(p);
      const double t2 = primal_step ? slack / gz : std::numeric_limits<double>::infinity();

      if (!std::isfinite(t1) && !std::isfinite(t2)) {
        sol.status = QpStatus::infeasible;
        sol.iterations = it;
        return sol;
      }
      const double t = std::min(t1, t2);
      if (primal_step) U.noalias() -= t * z;
      for (std::size_t a = 0; a < work.size(); ++a) {
        mu(work[a]) -= t * r(static_cast<Eigen::Index>(a));
      }
      mu(p) += t;

      if (t2 <= t1) {
        work.push_back(p);
        added = true;
      } else {
        mu(work[static_cast<std::size_t>(block)]) = 0.0;
        work.erase(work.begin() + block);
      }
    }
  }

  sol.status = QpStatus::optimal;
  sol.U = std::move(U);
  for (int i : work) sol.multipliers(i) = std::max(mu(i), 0.0);
  sol.value = qp_.objective(x, sol.U);
  active_set(qp_, x, sol.U, activity_tolerances(qp_, x), sol.active, sol.inactive);
  sol.iterations = it;
  return sol;
}

}  // namespace rmpc
