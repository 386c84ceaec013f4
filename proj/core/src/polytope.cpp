#include "rmpc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rmpc/errors.hpp"
#include "rmpc/lp.hpp"

namespace rmpc {

Polytope::Polytope(Matrix T, Vector d) : T_(std::move(T)), d_(std::move(d)) {
  if (T_.rows() != d_.size()) {
    throw DimensionMismatch("polytope: T has " + std::to_string(T_.rows()) + " rows but d has " +
                            std::to_string(d_.size()) + " entries");
  }
  if (!T_.allFinite() || !d_.allFinite()) {
    throw InvalidPolytope("polytope: non-finite entry");
  }
  for (int i = 0; i < T_.rows(); ++i) {
    if (d_(i) < 0.0 && (T_.cols() == 0 || T_.row(i).cwiseAbs().maxCoeff() == 0.0)) {
      throw InvalidPolytope("polytope: row " + std::to_string(i) + " reads 0 <= " +
                            std::to_string(d_(i)));
    }
  }
}

Polytope Polytope::whole_space(int dim) { return Polytope(Matrix(0, dim), Vector(0)); }

Polytope Polytope::box(const Vector& lower, const Vector& upper) {
  const auto n = lower.size();
  if (upper.size() != n) throw DimensionMismatch("box: bound vectors differ in length");
  Matrix T(2 * n, n);
  T << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector d(2 * n);
  d << upper, -lower;
  return Polytope(std::move(T), std::move(d));
}

bool Polytope::contains(const Vector& x, double tol) const {
  if (rows() == 0) return true;
  return ((T_ * x - d_).array() <= tol).all();
}

double Polytope::max_violation(const Vector& x) const {
  if (rows() == 0) return -std::numeric_limits<double>::infinity();
  return (T_ * x - d_).maxCoeff();
}

Polytope Polytope::intersect(const Polytope& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("intersect: dimension mismatch");
  Matrix T(rows() + other.rows(), dim());
  T << T_, other.T_;
  Vector d(rows() + other.rows());
  d << d_, other.d_;
  return Polytope(std::move(T), std::move(d));
}

Polytope Polytope::pullback(const Matrix& M, const Vector& c) const {
  if (M.rows() != dim() || c.size() != dim()) throw DimensionMismatch("pullback: bad map");
  Matrix T = T_ * M;
  Vector d = d_ - T_ * c;
  // A map that annihilates a row turns it into 0 <= d_i - T_i c, which
  // rounding can push just below zero for a tight constant part.
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    const bool zero = T.cols() == 0 || T.row(i).cwiseAbs().maxCoeff() == 0.0;
    if (zero && d(i) < 0.0 && d(i) >= -1e-9 * (1.0 + std::abs(d_(i)))) d(i) = 0.0;
  }
  return Polytope(std::move(T), std::move(d));
}

namespace {

struct NormalizedRows {
  Matrix T;
  Vector d;
  std::vector<int> origin;  // index in the input polytope
};

// Scales rows to unit norm, drops tautological zero rows and exact duplicates
// (keeping the tighter copy). Throws if a zero row certifies emptiness.
NormalizedRows normalize(const Polytope& p, double tol) {
  const int n = p.dim();
  double max_norm = 0.0;
  Vector norms(p.rows());
  for (int i = 0; i < p.rows(); ++i) {
    norms(i) = n > 0 ? p.T().row(i).norm() : 0.0;
    max_norm = std::max(max_norm, norms(i));
  }
  const double zero_cut = 1e-12 * std::max(1.0, max_norm);

  std::map<std::vector<long long>, int> seen;
  std::vector<int> kept;
  std::vector<double> kept_d;
  std::vector<RowVector> kept_rows;
  for (int i = 0; i < p.rows(); ++i) {
    if (norms(i) <= zero_cut) {
      if (p.d()(i) < -tol * std::max(1.0, norms(i))) {
        throw InvalidPolytope("polytope is empty (row " + std::to_string(i) + ")");
      }
      continue;
    }
    RowVector row = p.T().row(i) / norms(i);
    const double di = p.d()(i) / norms(i);
    std::vector<long long> key(n);
    for (int j = 0; j < n; ++j) key[j] = std::llround(row(j) * 1e10);
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(kept.size()));
    if (!inserted) {
      const int slot = it->second;
      if (di < kept_d[slot]) {
        kept_d[slot] = di;
        kept[slot] = i;
        kept_rows[slot] = row;
      }
      continue;
    }
    kept.push_back(i);
    kept_d.push_back(di);
    kept_rows.push_back(std::move(row));
  }

  NormalizedRows out;
  out.T.resize(static_cast<Eigen::Index>(kept.size()), n);
  out.d.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.T.row(static_cast<Eigen::Index>(k)) = kept_rows[k];
    out.d(static_cast<Eigen::Index>(k)) = kept_d[k];
  }
  out.origin = std::move(kept);
  return out;
}

Polytope subset_rows(const Matrix& T, const Vector& d, const std::vector<int>& idx) {
  Matrix Ts(static_cast<Eigen::Index>(idx.size()), T.cols());
  Vector ds(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    Ts.row(static_cast<Eigen::Index>(k)) = T.row(idx[k]);
    ds(static_cast<Eigen::Index>(k)) = d(idx[k]);
  }
  return Polytope(std::move(Ts), std::move(ds));
}

// max T_k x over { rows in `others` } ∩ { T_k x <= d_k + 1 }.
LpResult probe_row(const Matrix& T, const Vector& d, const std::vector<int>& others, int k) {
  Polytope p = subset_rows(T, d, others);
  Matrix Tp(p.rows() + 1, T.cols());
  Tp << p.T(), T.row(k);
  Vector dp(p.rows() + 1);
  dp << p.d(), d(k) + 1.0;
  return lp_max(Polytope(std::move(Tp), std::move(dp)), T.row(k).transpose());
}

// Redundancy check of every row against all others; used when no interior
// point exists (flat or empty sets).
std::vector<int> prune_sequential(const Matrix& T, const Vector& d, double tol) {
  std::vector<int> alive(static_cast<std::size_t>(T.rows()));
  std::iota(alive.begin(), alive.end(), 0);
  std::size_t pos = 0;
  while (pos < alive.size()) {
    const int k = alive[pos];
    std::vector<int> others;
    others.reserve(alive.size());
    for (int j : alive) {
      if (j != k) others.push_back(j);
    }
    const LpResult r = probe_row(T, d, others, k);
    if (r.status == LpStatus::empty) throw InvalidPolytope("polytope is empty");
    if (r.status == LpStatus::optimal && r.value <= d(k) + tol) {
      alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      ++pos;
    }
  }
  return alive;
}

// Clarkson's output-sensitive scheme: each LP only carries rows already known
// to be irredundant; ray shooting from an interior point certifies new ones.
std::vector<int> prune_clarkson(const Matrix& T, const Vector& d, const Vector& z, double tol) {
  const int r = static_cast<int>(T.rows());
  std::vector<char> state(static_cast<std::size_t>(r), 0);  // 0 unknown, 1 kept, 2 redundant
  std::vector<int> irredundant;
  const Vector slack = d - T * z;

  for (int k = 0; k < r; ++k) {
    while (state[k] == 0) {
      const LpResult res = probe_row(T, d, irredundant, k);
      if (res.status == LpStatus::optimal && res.value <= d(k) + tol) {
        state[k] = 2;
        break;
      }
      if (res.status != LpStatus::optimal) {
        // Cannot happen for a bounded relaxation; keep the row conservatively.
        state[k] = 1;
        irredundant.push_back(k);
        break;
      }
      const Vector dir = res.argmax - z;
      int hit = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < r; ++j) {
        if (state[j] != 0) continue;
        const double a = T.row(j).dot(dir);
        if (a <= 0.0) continue;
        const double t = slack(j) / a;
        if (t < best * (1.0 - 1e-12)) {
          best = t;
          hit = j;
        }
      }
      if (hit < 0) hit = k;
      state[hit] = 1;
      irredundant.push_back(hit);
    }
  }

  std::sort(irredundant.begin(), irredundant.end());
  // Rows admitted through a tie at a lower-dimensional face may be weakly
  // redundant; re-test them against the irredundant core.
  std::vector<int> result = irredundant;
  std::size_t pos = 0;
  while (pos < result.size()) {
    const int k = result[pos];
    std::vector<int> others;
    for (int j : result) {
      if (j != k) others.push_back(j);
    }
    const LpResult res = probe_row(T, d, others, k);
    if (res.status == LpStatus::optimal && res.value <= d(k) + tol) {
      result.erase(result.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      ++pos;
    }
  }
  return result;
}

}  // namespace

std::vector<int> irredundant_rows(const Polytope& p, const RedundancyOptions& opts) {
  const NormalizedRows nr = normalize(p, opts.tol);
  if (nr.T.rows() == 0) return {};

  std::vector<int> keep;
  const ChebyshevBall ball = chebyshev_ball(Polytope(nr.T, nr.d));
  if (ball.radius < 0.0) throw InvalidPolytope("polytope is empty");
  if (ball.radius > 1e-9) {
    keep = prune_clarkson(nr.T, nr.d, ball.center, opts.tol);
  } else {
    keep = prune_sequential(nr.T, nr.d, opts.tol);
  }

  std::vector<int> original;
  original.reserve(keep.size());
  for (int k : keep) original.push_back(nr.origin[static_cast<std::size_t>(k)]);
  std::sort(original.begin(), original.end());
  return original;
}

Polytope remove_redundant(const Polytope& p, const RedundancyOptions& opts) {
  return subset_rows(p.T(), p.d(), irredundant_rows(p, opts));
}

Polytope select_rows(const Polytope& p, const std::vector<int>& idx) {
  return subset_rows(p.T(), p.d(), idx);
}

double containment_violation(const Polytope& outer, const Polytope& inner) {
  if (outer.dim() != inner.dim()) throw DimensionMismatch("containment: dimension mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < outer.rows(); ++i) {
    const double norm = outer.T().row(i).norm();
    if (norm == 0.0) {
      worst = std::max(worst, -outer.d()(i));
      continue;
    }
    const LpResult r = lp_max(inner, outer.T().row(i).transpose());
    if (r.status == LpStatus::empty) return -std::numeric_limits<double>::infinity();
    if (r.status == LpStatus::unbounded) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, (r.value - outer.d()(i)) / norm);
  }
  return worst;
}

bool is_subset(const Polytope& inner, const Polytope& outer, double tol) {
  return containment_violation(outer, inner) <= tol;
}

ChebyshevBall chebyshev_ball(const Polytope& p, double radius_cap) {
  const int n = p.dim();
  Matrix T(p.rows() + 1, n + 1);
  Vector d(p.rows() + 1);
  for (int i = 0; i < p.rows(); ++i) {
    const double norm = p.T().row(i).norm();
    T.row(i).head(n) = p.T().row(i);
    T(i, n) = norm;
    d(i) = p.d()(i);
  }
  T.row(p.rows()).setZero();
  T(p.rows(), n) = 1.0;
  d(p.rows()) = radius_cap;

  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  const LpResult r = lp_max(Polytope(std::move(T), std::move(d)), c);
  ChebyshevBall ball;
  if (r.status != LpStatus::optimal) return ball;
  ball.center = r.argmax.head(n);
  ball.radius = r.argmax(n);
  return ball;
}

Polytope eliminate_variable(const Polytope& p, int var, const EliminationOptions& opts) {
  const int n = p.dim();
  if (var < 0 || var >= n) throw DimensionMismatch("eliminate_variable: index out of range");

  std::vector<int> zero, pos, neg;
  for (int i = 0; i < p.rows(); ++i) {
    const double c = p.T()(i, var);
    const double scale = p.T().row(i).cwiseAbs().maxCoeff();
    if (std::abs(c) <= 1e-13 * scale) {
      zero.push_back(i);
    } else if (c > 0.0) {
      pos.push_back(i);
    } else {
      neg.push_back(i);
    }
  }
  const std::size_t produced = zero.size() + pos.size() * neg.size();
  if (produced > opts.max_rows) {
    throw ProjectionTooLarge("Fourier-Motzkin step would produce " + std::to_string(produced) +
                             " rows (limit " + std::to_string(opts.max_rows) + ")");
  }

  auto drop_column = [&](const RowVector& row) {
    RowVector out(n - 1);
    out << row.head(var), row.tail(n - 1 - var);
    return out;
  };

  Matrix T(static_cast<Eigen::Index>(produced), n - 1);
  Vector d(static_cast<Eigen::Index>(produced));
  Eigen::Index r = 0;
  for (int i : zero) {
    RowVector row = p.T().row(i);
    row(var) = 0.0;
    T.row(r) = drop_column(row);
    d(r++) = p.d()(i);
  }
  for (int i : pos) {
    const double ci = p.T()(i, var);
    for (int j : neg) {
      const double cj = -p.T()(j, var);
      RowVector row = p.T().row(i) / ci + p.T().row(j) / cj;
      row(var) = 0.0;
      T.row(r) = drop_column(row);
      d(r++) = p.d()(i) / ci + p.d()(j) / cj;
    }
  }
  // Combinations may leave numerically tiny rows; normalize() in the pruning
  // pass treats them as tautologies or emptiness certificates.
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    if (T.row(i).cwiseAbs().maxCoeff() == 0.0 && d(i) < 0.0 && d(i) > -opts.redundancy.tol) {
      d(i) = 0.0;
    }
  }
  if (T.rows() > 0 && T.cols() > 0) {
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if (T.row(i).cwiseAbs().maxCoeff() == 0.0 && d(i) < 0.0) {
        throw InvalidPolytope("projection is empty");
      }
    }
  }
  if (n - 1 == 0) {
    // Projection onto a point: nonempty iff no row reads 0 <= negative.
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) < -opts.redundancy.tol) throw InvalidPolytope("projection is empty");
    }
    return Polytope::whole_space(0);
  }
  return remove_redundant(Polytope(std::move(T), std::move(d)), opts.redundancy);
}

Polytope project_out_trailing(const Polytope& p, int count, const EliminationOptions& opts) {
  if (count < 0 || count > p.dim()) throw DimensionMismatch("project_out_trailing: bad count");
  Polytope cur = p;
  for (int k = 0; k < count; ++k) cur = eliminate_variable(cur, cur.dim() - 1, opts);
  return cur;
}

}  // namespace rmpc
