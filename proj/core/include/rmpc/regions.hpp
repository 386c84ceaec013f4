#pragma once

#include <variant>
#include <vector>

#include "rmpc/polytope.hpp"
#include "rmpc/synthesis.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// Affine law U = K_bar x + b_bar valid for one active set; (K, b) are the
/// rows of the first input u(0).
struct AffineLaw {
  Matrix K_bar;
  Vector b_bar;
  Matrix K;
  Vector b;
  std::vector<int> active;

  Vector sequence(const Vector& x) const { return K_bar * x + b_bar; }
  Vector input(const Vector& x) const { return K * x + b; }
};

struct LawAndPolytope {
  AffineLaw law;
  /// Optimal polytope: inactive rows (ascending) first, then the
  /// multiplier-sign rows of the active set in `law.active` order.
  Polytope optimal;
};

/// Explicit law and optimal polytope for an active set with full row rank.
/// Throws DegenerateActiveSet when the active rows of G are dependent.
LawAndPolytope law_and_polytope(const CondensedQP& qp, const std::vector<int>& active);

/// Maximal linearly independent subset of the active rows, preferring lower
/// indices. Returned ascending.
std::vector<int> independent_subset(const CondensedQP& qp, const std::vector<int>& active);

/// Region where the full sequence K_bar x + b_bar satisfies every constraint
/// (the inactive rows; active rows hold with equality along the law).
Polytope feasibility_polytope_F(const CondensedQP& qp, const std::vector<int>& active);

/// QP objective along the law: V(x) = 1/2 U'HU + x'FU + 1/2 x'Yx at U = K_bar x + b_bar.
double law_cost(const CondensedQP& qp, const AffineLaw& law, const Vector& x);

/// { x : x'T3 x + T2 x < d2 }, the states whose cost along the law is below
/// lambda times the cost at the predecessor x- = M3 x + M4.
struct StabilityQuadric {
  Matrix T3;
  RowVector T2;
  double d2 = 0.0;
  double lambda = 1.0;
  Matrix M1;    ///< symmetric quadratic coefficient of V
  RowVector M2; ///< linear coefficient of V
  Matrix M3;    ///< (A + B K)^-1
  Vector M4;    ///< -M3 B b
  double M5 = 0.0;  ///< constant term of V, 1/2 b_bar' H b_bar

  double cost(const Vector& x) const { return x.dot(M1 * x) + M2.dot(x) + M5; }
  Vector predecessor(const Vector& x) const { return M3 * x + M4; }
  double lhs(const Vector& x) const { return x.dot(T3 * x) + T2.dot(x); }
  bool contains(const Vector& x) const { return lhs(x) < d2; }
};

/// Throws SingularClosedLoop if sigma_min(A + B K) <= 1e-10 ||A + B K||.
StabilityQuadric stability_quadric(const CondensedQP& qp, const AffineLaw& law, double lambda);

enum class Provenance { optimal, closed_form_F, projected_C };

const char* to_string(Provenance p);

struct OptimalRegion {
  Polytope poly;
};

struct ExtendedRegion {
  Polytope feas;
  StabilityQuadric stab;
};

/// Where a law may be reused: its optimal polytope, or the intersection of a
/// feasibility polytope with the stability quadric.
struct ValidityRegion {
  std::variant<OptimalRegion, ExtendedRegion> shape;
  Provenance provenance = Provenance::optimal;

  bool is_extended() const { return std::holds_alternative<ExtendedRegion>(shape); }
  const Polytope& polytope() const;
  int polytope_rows() const { return polytope().rows(); }
};

struct Membership {
  bool member = false;
  long long flops = 0;
};

/// Local-node flop count for one membership test: 2 q n for a polytope with q
/// rows, 2 n^2 + 3 n + 2 q n for an extended region whose polytope has q rows.
long long membership_flops(bool extended, int n, int rows);

/// Polytope rows are tested as T x <= d + 1e-9; the quadric strictly.
Membership membership(const ValidityRegion& region, const Vector& x);

/// True iff every component of u(0) is pinned to an input bound: the row of
/// K is zero (<= 1e-12) and b equals a bound (<= 1e-9).
bool is_saturated(const AffineLaw& law, const Vector& u_lower, const Vector& u_upper);

}  // namespace rmpc
