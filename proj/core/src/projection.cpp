#include "rmpc/projection.hpp"

#include <string>

#include "rmpc/errors.hpp"

namespace rmpc {

ProjectionEngine::ProjectionEngine(const CondensedQP& qp, ProjectionOptions opts)
    : qp_(qp), opts_(opts) {}

const Polytope& ProjectionEngine::tail_set() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (tail_) return *tail_;

  const int n = qp_.n();
  const int m = qp_.m();
  const int tail_inputs = m * (qp_.N() - 1);
  if (tail_inputs > opts_.elim_cap && !opts_.override_cap) {
    throw ProjectionTooLarge("projection would eliminate " + std::to_string(tail_inputs) +
                             " inputs, above the cap of " + std::to_string(opts_.elim_cap));
  }

  const Polytope X = qp_.spec.state_box();
  const Polytope U = qp_.spec.input_box();
  // Rows of U lifted to (z, u) coordinates.
  Matrix TU = Matrix::Zero(U.rows(), n + m);
  TU.rightCols(m) = U.T();

  Matrix AB(n, n + m);
  AB << qp_.spec.A, qp_.spec.B;

  // W_N = T; W_k = X ∩ { z : exists u in U with A z + B u in W_{k+1} }.
  Polytope W = qp_.terminal;
  for (int stage = qp_.N() - 1; stage >= 1; --stage) {
    Matrix T(W.rows() + U.rows(), n + m);
    Vector d(W.rows() + U.rows());
    T.topRows(W.rows()) = W.T() * AB;
    d.head(W.rows()) = W.d();
    T.bottomRows(U.rows()) = TU;
    d.tail(U.rows()) = U.d();
    const Polytope lifted(std::move(T), std::move(d));
    const Polytope projected = project_out_trailing(lifted, m, opts_.elimination);
    W = remove_redundant(X.intersect(projected), opts_.elimination.redundancy);
  }
  tail_ = std::move(W);
  return *tail_;
}

Polytope ProjectionEngine::region_C(const AffineLaw& law) {
  const Polytope& W = tail_set();
  const Matrix Acl = qp_.spec.A + qp_.spec.B * law.K;
  const Vector offset = qp_.spec.B * law.b;
  const Polytope C = qp_.spec.input_box()
                         .pullback(law.K, law.b)
                         .intersect(W.pullback(Acl, offset));
  return remove_redundant(C, opts_.elimination.redundancy);
}

Polytope projection_region_C(const CondensedQP& qp, const AffineLaw& law,
                             const ProjectionOptions& opts) {
  ProjectionEngine engine(qp, opts);
  return engine.region_C(law);
}

std::optional<Vector> complete_sequence(const CondensedQP& qp, const AffineLaw& law,
                                        const Vector& x) {
  const int m = qp.m();
  const int p = qp.variables();
  const Vector u0 = law.input(x);
  Vector rhs = qp.w + qp.E * x - qp.G.leftCols(m) * u0;
  const double tol = 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff());
  // Rows that only bound the first input are settled by u0 already.
  for (Eigen::Index i = 0; i < rhs.size(); ++i) {
    if (p > m && qp.G.row(i).tail(p - m).cwiseAbs().maxCoeff() == 0.0) {
      if (rhs(i) < -tol) return std::nullopt;
      rhs(i) = std::max(rhs(i), 0.0);
    }
  }

  Vector U(p);
  U.head(m) = u0;
  if (p > m) {
    const ChebyshevBall ball = chebyshev_ball(Polytope(qp.G.rightCols(p - m), rhs));
    if (ball.center.size() == 0) return std::nullopt;
    U.tail(p - m) = ball.center;
  } else if ((-rhs).maxCoeff() > tol) {
    return std::nullopt;
  }
  if (qp.residual(x, U).maxCoeff() > tol) return std::nullopt;
  return U;
}

}  // namespace rmpc
