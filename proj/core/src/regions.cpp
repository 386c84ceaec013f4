#include "rmpc/regions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "rmpc/errors.hpp"

namespace rmpc {
namespace {

constexpr double kRankTol = 1e-10;
constexpr double kPolytopeTol = 1e-9;

Matrix rows_of(const Matrix& M, const std::vector<int>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), M.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = M.row(idx[r]);
  return out;
}

Vector entries_of(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) out(static_cast<Eigen::Index>(r)) = v(idx[r]);
  return out;
}

std::vector<int> checked_active(const CondensedQP& qp, const std::vector<int>& active) {
  std::vector<int> out = active;
  for (int i : out) {
    if (i < 0 || i >= qp.constraints()) {
      throw DimensionMismatch("active set index " + std::to_string(i) + " out of range");
    }
  }
  return out;
}

std::vector<int> complement(int q, const std::vector<int>& active) {
  std::vector<bool> in(static_cast<std::size_t>(q), false);
  for (int i : active) in[static_cast<std::size_t>(i)] = true;
  std::vector<int> out;
  for (int i = 0; i < q; ++i) {
    if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

void require_full_row_rank(const Matrix& GA) {
  const Eigen::Index k = GA.rows();
  if (k == 0) return;
  if (k > GA.cols()) throw DegenerateActiveSet("more active rows than decision variables");
  const Eigen::ColPivHouseholderQR<Matrix> qr(GA.transpose());
  const double threshold = kRankTol * GA.norm();
  const auto diag = qr.matrixR().diagonal().cwiseAbs();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(diag(i) > threshold)) {
      throw DegenerateActiveSet("active constraint rows are linearly dependent (rank " +
                                std::to_string(i) + " of " + std::to_string(k) + ")");
    }
  }
}

// Pieces shared by the law, P* and F: Lambda = (G_A H^-1 G_A')^-1 applied to
// S_A and w_A, plus H^-1 G_A'.
struct Solved {
  std::vector<int> inactive;
  Matrix Hinv_GAt;    // p x k
  Matrix Lambda_SA;   // k x n
  Vector Lambda_wA;   // k
};

Solved solve_active(const CondensedQP& qp, const std::vector<int>& active) {
  Solved s;
  s.inactive = complement(qp.constraints(), active);
  require_full_row_rank(rows_of(qp.G, active));
  const auto k = static_cast<Eigen::Index>(active.size());
  s.Hinv_GAt.resize(qp.variables(), k);
  Matrix GHG(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    s.Hinv_GAt.col(c) = qp.H_inv_Gt.col(active[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < k; ++r) {
      GHG(r, c) = qp.G_H_inv_Gt(active[static_cast<std::size_t>(r)], active[static_cast<std::size_t>(c)]);
    }
  }
  if (k > 0) {
    const Eigen::LDLT<Matrix> ldlt(0.5 * (GHG + GHG.transpose()));
    s.Lambda_SA = ldlt.solve(rows_of(qp.S, active));
    s.Lambda_wA = ldlt.solve(entries_of(qp.w, active));
  } else {
    s.Lambda_SA = Matrix::Zero(0, qp.n());
    s.Lambda_wA = Vector::Zero(0);
  }
  return s;
}

// Inactive rows of P*: G_I H^-1 G_A' Lambda S_A - S_I  and  w_I - G_I H^-1 G_A' Lambda w_A.
Polytope inactive_rows(const CondensedQP& qp, const Solved& s) {
  const Matrix GI = rows_of(qp.G, s.inactive);
  const Matrix GI_Hinv_GAt = GI * s.Hinv_GAt;
  Matrix T = GI_Hinv_GAt * s.Lambda_SA - rows_of(qp.S, s.inactive);
  Vector d = entries_of(qp.w, s.inactive) - GI_Hinv_GAt * s.Lambda_wA;
  return Polytope(std::move(T), std::move(d));
}

}  // namespace

std::vector<int> independent_subset(const CondensedQP& qp, const std::vector<int>& active) {
  std::vector<int> sorted = checked_active(qp, active);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const double threshold = kRankTol * rows_of(qp.G, sorted).norm();

  std::vector<int> keep;
  std::vector<Vector> basis;
  for (int i : sorted) {
    Vector v = qp.G.row(i).transpose();
    // Two passes of modified Gram-Schmidt keep the residual honest.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) v -= b.dot(v) * b;
    }
    const double r = v.norm();
    if (r > threshold && static_cast<Eigen::Index>(keep.size()) < qp.variables()) {
      keep.push_back(i);
      basis.push_back(v / r);
    }
  }
  return keep;
}

LawAndPolytope law_and_polytope(const CondensedQP& qp, const std::vector<int>& active_in) {
  const std::vector<int> active = checked_active(qp, active_in);
  const Solved s = solve_active(qp, active);
  const int m = qp.m();

  LawAndPolytope out;
  AffineLaw& law = out.law;
  law.active = active;
  law.K_bar = s.Hinv_GAt * s.Lambda_SA - qp.H_inv * qp.F.transpose();
  law.b_bar = s.Hinv_GAt * s.Lambda_wA;
  law.K = law.K_bar.topRows(m);
  law.b = law.b_bar.head(m);

  const Polytope inact = inactive_rows(qp, s);
  const auto ni = inact.rows();
  const auto k = static_cast<Eigen::Index>(active.size());
  Matrix T(ni + k, qp.n());
  Vector d(ni + k);
  T.topRows(ni) = inact.T();
  d.head(ni) = inact.d();
  // Multiplier sign: mu_A(x) = -Lambda (w_A + S_A x) >= 0.
  T.bottomRows(k) = s.Lambda_SA;
  d.tail(k) = -s.Lambda_wA;
  out.optimal = Polytope(std::move(T), std::move(d));
  return out;
}

Polytope feasibility_polytope_F(const CondensedQP& qp, const std::vector<int>& active_in) {
  const std::vector<int> active = checked_active(qp, active_in);
  return inactive_rows(qp, solve_active(qp, active));
}

double law_cost(const CondensedQP& qp, const AffineLaw& law, const Vector& x) {
  return qp.objective(x, law.sequence(x));
}

StabilityQuadric stability_quadric(const CondensedQP& qp, const AffineLaw& law, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidSpec("lambda must lie in (0, 1]");
  const Matrix& A = qp.spec.A;
  const Matrix& B = qp.spec.B;
  const Matrix Acl = A + B * law.K;
  const Eigen::JacobiSVD<Matrix> svd(Acl);
  const auto& sv = svd.singularValues();
  if (!(sv.minCoeff() > 1e-10 * sv.maxCoeff()) || sv.maxCoeff() == 0.0) {
    throw SingularClosedLoop("A + B K is singular (sigma_min = " + std::to_string(sv.minCoeff()) + ")");
  }

  StabilityQuadric v;
  v.lambda = lambda;
  const Matrix HK = qp.H * law.K_bar;
  Matrix M1 = 0.5 * law.K_bar.transpose() * HK + qp.F * law.K_bar + 0.5 * qp.Y;
  v.M1 = 0.5 * (M1 + M1.transpose());
  v.M2 = law.b_bar.transpose() * HK + (qp.F * law.b_bar).transpose();
  v.M5 = 0.5 * law.b_bar.dot(qp.H * law.b_bar);
  v.M3 = Acl.fullPivLu().inverse();
  v.M4 = -v.M3 * B * law.b;

  const Matrix M1M3 = v.M1 * v.M3;
  Matrix T3 = v.M1 - lambda * v.M3.transpose() * M1M3;
  v.T3 = 0.5 * (T3 + T3.transpose());
  v.T2 = v.M2 - lambda * (2.0 * v.M4.transpose() * M1M3 + v.M2 * v.M3);
  v.d2 = lambda * (v.M4.dot(v.M1 * v.M4) + v.M2.dot(v.M4) + v.M5) - v.M5;
  return v;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::optimal:
      return "optimal";
    case Provenance::closed_form_F:
      return "closed_form_F";
    case Provenance::projected_C:
      return "projected_C";
  }
  return "unknown";
}

const Polytope& ValidityRegion::polytope() const {
  if (const auto* e = std::get_if<ExtendedRegion>(&shape)) return e->feas;
  return std::get<OptimalRegion>(shape).poly;
}

long long membership_flops(bool extended, int n, int rows) {
  const long long nn = n;
  const long long q = rows;
  return extended ? 2 * nn * nn + 3 * nn + 2 * q * nn : 2 * q * nn;
}

Membership membership(const ValidityRegion& region, const Vector& x) {
  Membership out;
  const Polytope& poly = region.polytope();
  out.flops = membership_flops(region.is_extended(), static_cast<int>(x.size()), poly.rows());
  out.member = poly.contains(x, kPolytopeTol);
  if (out.member) {
    if (const auto* e = std::get_if<ExtendedRegion>(&region.shape)) out.member = e->stab.contains(x);
  }
  return out;
}

bool is_saturated(const AffineLaw& law, const Vector& u_lower, const Vector& u_upper) {
  for (Eigen::Index i = 0; i < law.K.rows(); ++i) {
    if (law.K.row(i).cwiseAbs().maxCoeff() > 1e-12) return false;
    const double b = law.b(i);
    if (std::abs(b - u_upper(i)) > 1e-9 && std::abs(b - u_lower(i)) > 1e-9) return false;
  }
  return law.K.rows() > 0;
}

}  // namespace rmpc
