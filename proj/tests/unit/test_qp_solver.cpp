#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rmpc/experiment.hpp"
#include "rmpc/qp_solver.hpp"

namespace rmpc {
namespace {

class QpSolverTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { qp_ = new CondensedQP(synthesize(testing::load_example(1))); }
  static void TearDownTestSuite() { delete qp_; }
  static CondensedQP* qp_;
};
CondensedQP* QpSolverTest::qp_ = nullptr;

void expect_kkt(const CondensedQP& qp, const Vector& x, const QPSolution& sol) {
  const Vector grad = qp.H * sol.U + qp.F.transpose() * x + qp.G.transpose() * sol.multipliers;
  EXPECT_LT(grad.cwiseAbs().maxCoeff(), 1e-8 * (1.0 + x.norm()));
  EXPECT_GE(sol.multipliers.minCoeff(), -1e-10);
  const Vector r = qp.residual(x, sol.U);
  EXPECT_LE(r.maxCoeff(), 1e-9);
  for (int i = 0; i < qp.constraints(); ++i) {
    EXPECT_LT(std::abs(sol.multipliers(i) * r(i)), 1e-8);
  }
}

TEST_F(QpSolverTest, OriginIsUnconstrained) {
  QpSolver solver(*qp_);
  const QPSolution sol = solver.solve(Vector::Zero(2));
  ASSERT_TRUE(sol.ok());
  EXPECT_TRUE(sol.active.empty());
  EXPECT_EQ(sol.inactive.size(), 32u);
  EXPECT_LT(sol.U.norm(), 1e-14);
  EXPECT_EQ(sol.value, 0.0);
}

TEST_F(QpSolverTest, MatchesEnumerationOracle) {
  QpSolver solver(*qp_);
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 60) {
    const Vector x = testing::uniform_in_box(rng, qp_->spec.x_lower, qp_->spec.x_upper);
    const auto ref = testing::enumerate_qp(*qp_, x);
    const QPSolution sol = solver.solve(x);
    ASSERT_EQ(ref.has_value(), sol.ok()) << x.transpose();
    if (!ref) continue;
    EXPECT_NEAR(sol.value, ref->value, 1e-8 * (1.0 + std::abs(ref->value)));
    EXPECT_LT((sol.U - ref->U).cwiseAbs().maxCoeff(), 1e-6);
    expect_kkt(*qp_, x, sol);
    ++checked;
  }
}

TEST_F(QpSolverTest, ReportsInfeasibility) {
  QpSolver solver(*qp_);
  // Far outside the state box no admissible input sequence exists.
  const QPSolution sol = solver.solve(Vector::Constant(2, 50.0));
  EXPECT_EQ(sol.status, QpStatus::infeasible);
  EXPECT_FALSE(solver.feasible(Vector::Constant(2, 50.0)));
  EXPECT_FALSE(testing::enumerate_qp(*qp_, Vector::Constant(2, 50.0)).has_value());
}

TEST_F(QpSolverTest, ActiveSetSplitsEveryRow) {
  QpSolver solver(*qp_);
  const Vector x = sample_initial_states(*qp_, 1, 12).front();
  const QPSolution sol = solver.solve(x);
  ASSERT_TRUE(sol.ok());
  EXPECT_EQ(sol.active.size() + sol.inactive.size(), 32u);
  std::vector<int> a, ia;
  active_set(*qp_, x, sol.U, activity_tolerances(*qp_, x), a, ia);
  EXPECT_EQ(a, sol.active);
  EXPECT_EQ(ia, sol.inactive);
  for (int i : sol.inactive) EXPECT_EQ(sol.multipliers(i), 0.0);
}

TEST(QpSolver, ExampleTwoKkt) {
  const CondensedQP qp = synthesize(testing::load_example(2));
  QpSolver solver(qp);
  int solved = 0;
  for (const Vector& x : sample_initial_states(qp, 8, 4)) {
    const QPSolution sol = solver.solve(x);
    if (!sol.ok()) continue;
    expect_kkt(qp, x, sol);
    ++solved;
  }
  EXPECT_EQ(solved, 8);
}

}  // namespace
}  // namespace rmpc
