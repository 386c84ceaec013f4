#include <string>
#include <vector>

#include "rmpc/errors.hpp"
#include "rmpc/lp.hpp"
#include "rmpc/synthesis.hpp"

namespace rmpc {

Polytope terminal_set(const Matrix& A_cl, const Polytope& X, const Polytope& U, const Matrix& K,
                      const TerminalSetOptions& opts) {
  const int n = X.dim();
  if (A_cl.rows() != n || A_cl.cols() != n || K.cols() != n || K.rows() != U.dim()) {
    throw DimensionMismatch("terminal_set: inconsistent shapes");
  }
  if (spectral_radius(A_cl) >= 1.0) {
    throw NotFinitelyDetermined("terminal_set: closed loop is not strictly stable");
  }

  // Output constraints H x <= h at t = 0: the state box and the input box
  // seen through the terminal controller.
  const Polytope output = X.intersect(Polytope(U.T() * K, U.d()));
  const Matrix& Hc = output.T();
  const Vector& hc = output.d();

  Matrix T = Hc;
  Vector d = hc;
  Matrix power = Matrix::Identity(n, n);
  bool determined = false;
  for (int t = 1; t <= opts.max_steps; ++t) {
    power = A_cl * power;
    const Matrix candidates = Hc * power;
    const Polytope current(T, d);
    std::vector<int> fresh;
    for (int i = 0; i < candidates.rows(); ++i) {
      if (candidates.row(i).cwiseAbs().maxCoeff() == 0.0) continue;
      const LpResult r = lp_max(current, candidates.row(i).transpose());
      if (r.status == LpStatus::empty) throw InvalidPolytope("terminal_set: constraint set is empty");
      if (r.status == LpStatus::unbounded || r.value > hc(i) + opts.redundancy_tol) {
        fresh.push_back(i);
      }
    }
    if (fresh.empty()) {
      determined = true;
      break;
    }
    const auto old_rows = T.rows();
    T.conservativeResize(old_rows + static_cast<Eigen::Index>(fresh.size()), n);
    d.conservativeResize(old_rows + static_cast<Eigen::Index>(fresh.size()));
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      T.row(old_rows + static_cast<Eigen::Index>(k)) = candidates.row(fresh[k]);
      d(old_rows + static_cast<Eigen::Index>(k)) = hc(fresh[k]);
    }
  }
  if (!determined) {
    throw NotFinitelyDetermined("terminal_set: not finitely determined within " +
                                std::to_string(opts.max_steps) + " steps");
  }

  // Keep the state box verbatim, then the irredundant non-box rows.
  const Polytope all(T, d);
  std::vector<int> rows;
  for (int i = 0; i < X.rows(); ++i) rows.push_back(i);
  for (int i : irredundant_rows(all, {opts.redundancy_tol})) {
    if (i >= X.rows()) rows.push_back(i);
  }
  return select_rows(all, rows);
}

}  // namespace rmpc
