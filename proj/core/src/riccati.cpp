#include <cmath>
#include <string>

#include "rmpc/errors.hpp"
#include "rmpc/synthesis.hpp"

namespace rmpc {
namespace {

Matrix riccati_map(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                   const Matrix& P) {
  const Matrix BtP = B.transpose() * P;
  const Matrix gain = (R + BtP * B).ldlt().solve(BtP * A);
  Matrix next = Q + A.transpose() * P * A - (BtP * A).transpose() * gain;
  return 0.5 * (next + next.transpose());
}

}  // namespace

Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                  const DareOptions& opts) {
  const auto n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols()) {
    throw DimensionMismatch("solve_dare: inconsistent shapes");
  }
  Matrix P = Q;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Matrix next = riccati_map(A, B, Q, R, P);
    if (!next.allFinite()) break;
    const double step = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (step <= opts.tol) return P;
  }
  throw NoConvergence("solve_dare: Riccati recursion did not converge in " +
                      std::to_string(opts.max_iterations) +
                      " iterations; (A, B) may not be stabilizable");
}

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& P) {
  return (riccati_map(A, B, Q, R, P) - P).norm() / std::max(P.norm(), 1e-300);
}

Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& R, const Matrix& P) {
  const Matrix BtP = B.transpose() * P;
  const Matrix M = R + BtP * B;
  Eigen::FullPivLU<Matrix> lu(M);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularGainSystem("lqr_gain: R + B'PB is singular");
  return -lu.solve(BtP * A);
}

double spectral_radius(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace rmpc
