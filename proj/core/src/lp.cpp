#include "rmpc/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rmpc {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Dense tableau with the objective stored in the last row and the right-hand
// side in the last column. Column indices [0, n) are structural variables,
// [n, n + m) artificials.
class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b)
      : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())),
        tab_(Matrix::Zero(m_ + 1, n_ + m_ + 1)), basis_(m_), active_row_(m_, true) {
    for (int i = 0; i < m_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      tab_.row(i).head(n_) = sign * A.row(i);
      tab_(i, n_ + i) = 1.0;
      tab_(i, rhs()) = sign * b(i);
      basis_[i] = n_ + i;
    }
  }

  int rhs() const { return n_ + m_; }

  void pivot(int row, int col) {
    tab_.row(row) /= tab_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = tab_(i, col);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(row);
    }
    basis_[row] = col;
    ++pivots_;
  }

  // Bland's rule over columns [0, col_limit). Returns false when unbounded.
  bool optimize(int col_limit) {
    const int max_pivots = 50 * (m_ + n_ + 10);
    while (pivots_ < max_pivots) {
      int enter = -1;
      for (int j = 0; j < col_limit; ++j) {
        if (tab_(m_, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (!active_row_[i]) continue;
        const double a = tab_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = tab_(i, rhs()) / a;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    // Bland's rule cannot cycle; hitting the cap means numerical trouble.
    return true;
  }

  bool phase_one() {
    // Objective: minimize the sum of artificials, expressed in reduced costs.
    tab_.row(m_).setZero();
    for (int i = 0; i < m_; ++i) {
      tab_.row(m_).head(n_) -= tab_.row(i).head(n_);
      tab_(m_, rhs()) -= tab_(i, rhs());
    }
    optimize(n_);
    const double infeasibility = -tab_(m_, rhs());
    double scale = 1.0;
    for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(tab_(i, rhs())));
    if (infeasibility > 1e-9 * scale) return false;

    // Drive zero-level artificials out of the basis or retire their rows.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      double best = 1e-9;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(tab_(i, j)) > best) {
          best = std::abs(tab_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        active_row_[i] = false;
      }
    }
    return true;
  }

  bool phase_two(const Vector& cost) {
    tab_.row(m_).setZero();
    tab_.row(m_).head(n_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      if (!active_row_[i]) continue;
      const double cb = cost(basis_[i]);
      if (cb != 0.0) tab_.row(m_) -= cb * tab_.row(i);
    }
    return optimize(n_);
  }

  Vector primal() const {
    Vector y = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (active_row_[i] && basis_[i] < n_) y(basis_[i]) = tab_(i, rhs());
    }
    return y;
  }

  // Solves B' pi = c_B on the rows that survived phase one.
  Vector multipliers(const Matrix& A, const Vector& cost) const {
    std::vector<int> rows;
    for (int i = 0; i < m_; ++i) {
      if (active_row_[i]) rows.push_back(i);
    }
    const int k = static_cast<int>(rows.size());
    Matrix Bt(k, k);
    Vector cb(k);
    for (int r = 0; r < k; ++r) {
      const int col = basis_[rows[r]];
      cb(r) = cost(col);
      for (int c = 0; c < k; ++c) Bt(r, c) = A(rows[c], col);
    }
    Vector pi = Vector::Zero(m_);
    if (k > 0) {
      const Vector sol = Bt.fullPivLu().solve(cb);
      for (int c = 0; c < k; ++c) pi(rows[c]) = sol(c);
    }
    return pi;
  }

  int pivots() const { return pivots_; }

 private:
  int m_;
  int n_;
  Matrix tab_;
  std::vector<int> basis_;
  std::vector<bool> active_row_;
  int pivots_ = 0;
};

}  // namespace

StandardLpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& cost) {
  StandardLpResult result;
  Tableau tab(A, b);
  if (!tab.phase_one()) {
    result.status = StandardLpResult::Status::infeasible;
    result.pivots = tab.pivots();
    return result;
  }
  if (!tab.phase_two(cost)) {
    result.status = StandardLpResult::Status::unbounded;
    result.pivots = tab.pivots();
    return result;
  }
  result.status = StandardLpResult::Status::optimal;
  result.y = tab.primal();
  result.value = cost.dot(result.y);
  result.multipliers = tab.multipliers(A, cost);
  result.pivots = tab.pivots();
  return result;
}

LpResult lp_max(const Polytope& p, const Vector& c) {
  const int n = p.dim();
  LpResult out;

  // Normalize rows; zero rows are either tautologies or certify emptiness.
  std::vector<int> keep;
  keep.reserve(p.rows());
  Vector norms(p.rows());
  for (int i = 0; i < p.rows(); ++i) norms(i) = p.T().row(i).norm();
  // Rows at rounding level relative to the largest one carry no direction;
  // normalizing them would inflate their constants by the inverse noise.
  const double zero_cut = 1e-12 * std::max(1.0, p.rows() > 0 ? norms.maxCoeff() : 0.0);
  for (int i = 0; i < p.rows(); ++i) {
    if (norms(i) <= zero_cut) {
      if (p.d()(i) < -1e-9 * std::max(1.0, norms.maxCoeff())) return out;
      continue;
    }
    keep.push_back(i);
  }
  const int r = static_cast<int>(keep.size());
  Matrix At(n, r);
  Vector dn(r);
  for (int k = 0; k < r; ++k) {
    const int i = keep[k];
    At.col(k) = p.T().row(i).transpose() / norms(i);
    dn(k) = p.d()(i) / norms(i);
  }

  // Dual: min d'y  s.t.  T'y = c, y >= 0. Its multipliers are the primal vertex.
  const StandardLpResult dual = solve_standard_lp(At, c, dn);
  if (dual.status == StandardLpResult::Status::optimal) {
    out.status = LpStatus::optimal;
    out.argmax = dual.multipliers;
    out.value = c.dot(out.argmax);
    return out;
  }
  if (dual.status == StandardLpResult::Status::unbounded) {
    out.status = LpStatus::empty;
    return out;
  }

  // Dual infeasible: the primal is unbounded unless it is empty. Farkas:
  // empty iff some y >= 0 with T'y = 0, sum(y) = 1 has d'y < 0.
  Matrix Af(n + 1, r);
  Af.topRows(n) = At;
  Af.row(n).setOnes();
  Vector bf = Vector::Zero(n + 1);
  bf(n) = 1.0;
  const StandardLpResult farkas = solve_standard_lp(Af, bf, dn);
  if (farkas.status == StandardLpResult::Status::optimal && farkas.value < -1e-9) {
    out.status = LpStatus::empty;
  } else {
    out.status = LpStatus::unbounded;
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace rmpc
