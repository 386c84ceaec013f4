#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rmpc/lp.hpp"

namespace rmpc {
namespace {

Polytope make(std::initializer_list<std::initializer_list<double>> rows,
              std::initializer_list<double> rhs) {
  const int r = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.begin()->size());
  Matrix T(r, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) T(i, j++) = v;
    ++i;
  }
  Vector d(r);
  i = 0;
  for (double v : rhs) d(i++) = v;
  return Polytope(T, d);
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(LpMax, UnitBox) {
  const Polytope p = Polytope::box(vec({0, 0}), vec({1, 1}));
  const LpResult r = lp_max(p, vec({1, 1}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_NEAR(r.argmax(0), 1.0, 1e-12);
  EXPECT_NEAR(r.argmax(1), 1.0, 1e-12);
}

TEST(LpMax, TriangleVertex) {
  const Polytope p = make({{-1, 0}, {0, -1}, {1, 1}}, {0, 0, 1});
  const LpResult r = lp_max(p, vec({1, 2}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_NEAR(r.argmax(1), 1.0, 1e-12);
}

TEST(LpMax, UnboundedHalfPlane) {
  const Polytope p = make({{1, 0}}, {1});
  EXPECT_EQ(lp_max(p, vec({0, 1})).status, LpStatus::unbounded);
  EXPECT_EQ(lp_max(p, vec({1, 0})).status, LpStatus::optimal);
}

TEST(LpMax, EmptySet) {
  const Polytope p = make({{1, 0}, {-1, 0}, {0, 1}}, {-1, 0, 1});
  EXPECT_EQ(lp_max(p, vec({0, 1})).status, LpStatus::empty);
  // Empty and unbounded in the objective direction at once.
  EXPECT_EQ(lp_max(make({{1, 0}, {-1, 0}}, {-1, 0}), vec({0, 1})).status, LpStatus::empty);
}

TEST(LpMax, DegenerateVertexWithDuplicates) {
  // Square plus a duplicate row and x + y <= 2 through the optimal vertex.
  const Polytope p = make({{1, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}}, {1, 1, 1, 0, 0, 2});
  const LpResult r = lp_max(p, vec({1, 1}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_TRUE(p.contains(r.argmax, 1e-12));
}

TEST(LpMax, ZeroRows) {
  EXPECT_EQ(lp_max(Polytope(Matrix::Zero(1, 2), vec({1})), vec({1, 0})).status, LpStatus::unbounded);
  EXPECT_EQ(lp_max(Polytope::whole_space(2), vec({0, 0})).status, LpStatus::optimal);
}

TEST(LpMax, MatchesVertexEnumerationOnRandomPolygons) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = 3 + trial % 8;
    Matrix T(rows + 4, 2);
    Vector d(rows + 4);
    for (int i = 0; i < rows; ++i) {
      T(i, 0) = g(rng);
      T(i, 1) = g(rng);
      d(i) = pos(rng);
    }
    T.bottomRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    d.tail(4).setConstant(5.0);
    const Polytope p(T, d);
    const Vector c = vec({g(rng), g(rng)});
    const LpResult r = lp_max(p, c);
    const auto ref = testing::vertex_max_2d(p, c);
    ASSERT_TRUE(ref.has_value());
    ASSERT_EQ(r.status, LpStatus::optimal) << trial;
    ASSERT_NEAR(r.value, *ref, 1e-9) << trial;
    ASSERT_TRUE(p.contains(r.argmax, 1e-9));
  }
}

TEST(StandardLp, SmallProblem) {
  // min -x1 - x2  s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6.
  Matrix A(2, 4);
  A << 1, 2, 1, 0, 3, 1, 0, 1;
  const StandardLpResult r = solve_standard_lp(A, vec({4, 6}), vec({-1, -1, 0, 0}));
  ASSERT_EQ(r.status, StandardLpResult::Status::optimal);
  EXPECT_NEAR(r.value, -2.8, 1e-12);
  EXPECT_NEAR(r.y(0), 1.6, 1e-12);
  EXPECT_NEAR(r.y(1), 1.2, 1e-12);
}

TEST(StandardLp, InfeasibleAndUnbounded) {
  Matrix A(1, 2);
  A << 1, 1;
  EXPECT_EQ(solve_standard_lp(A, vec({-1}), vec({1, 1})).status, StandardLpResult::Status::infeasible);
  Matrix B(1, 2);
  B << 1, -1;
  EXPECT_EQ(solve_standard_lp(B, vec({1}), vec({-1, 0})).status, StandardLpResult::Status::unbounded);
}

}  // namespace
}  // namespace rmpc
