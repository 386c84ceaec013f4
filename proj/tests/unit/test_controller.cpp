#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rmpc/controller.hpp"
#include "rmpc/errors.hpp"
#include "rmpc/experiment.hpp"
#include "rmpc/qp_solver.hpp"

namespace rmpc {
namespace {

class ControllerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    qp_ = new CondensedQP(synthesize(testing::load_example(1)));
    starts_ = new std::vector<Vector>(sample_initial_states(*qp_, 12, 77));
  }
  static void TearDownTestSuite() {
    delete qp_;
    delete starts_;
  }
  static CondensedQP* qp_;
  static std::vector<Vector>* starts_;
};
CondensedQP* ControllerTest::qp_ = nullptr;
std::vector<Vector>* ControllerTest::starts_ = nullptr;

TEST(Mode, Names) {
  for (Mode m : {Mode::optimal, Mode::suboptimal, Mode::suboptimal_proj}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_EQ(to_string(Mode::suboptimal_proj), "suboptimal-proj");
  EXPECT_THROW(parse_mode("fast"), InvalidSpec);
}

TEST_F(ControllerTest, StartAtOrigin) {
  const Trajectory t = run_trajectory(*qp_, {}, Vector::Zero(2));
  EXPECT_EQ(t.qp_count, 1);
  EXPECT_EQ(t.steps(), 0);
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.law_active.size(), 1u);
  EXPECT_TRUE(t.law_active.front().empty());
}

TEST_F(ControllerTest, OptimalModeTracksTheQp) {
  QpSolver solver(*qp_);
  for (const Vector& x0 : *starts_) {
    const Trajectory t = run_trajectory(*qp_, {}, x0);
    ASSERT_TRUE(t.converged);
    for (int k = 0; k < t.steps(); ++k) {
      const QPSolution sol = solver.solve(t.states[static_cast<std::size_t>(k)]);
      ASSERT_TRUE(sol.ok());
      ASSERT_LT((t.inputs[static_cast<std::size_t>(k)] - sol.U.head(1)).cwiseAbs().maxCoeff(), 1e-6);
      ASSERT_NEAR(t.costs[static_cast<std::size_t>(k)], sol.value, 1e-8 * (1.0 + sol.value));
    }
  }
}

TEST_F(ControllerTest, EventsAndFlops) {
  for (Mode mode : {Mode::optimal, Mode::suboptimal}) {
    ControllerOptions opts;
    opts.mode = mode;
    const Trajectory t = run_trajectory(*qp_, opts, starts_->front());
    ASSERT_GE(t.steps(), 1);
    EXPECT_EQ(t.events.front(), 1);
    EXPECT_EQ(t.flops.front(), 0);
    long long events = 0;
    for (int e : t.events) events += e;
    EXPECT_EQ(events, t.qp_count);
    EXPECT_EQ(static_cast<long long>(t.law_active.size()), t.qp_count);
    for (std::size_t k = 1; k < t.flops.size(); ++k) {
      EXPECT_EQ(t.flops[k], membership_flops(t.tested_extended[k] != 0, 2, t.tested_rows[k]));
    }
  }
}

TEST_F(ControllerTest, SuboptimalReuseDecreasesCost) {
  for (double lambda : {1.0, 0.8}) {
    ControllerOptions opts;
    opts.mode = Mode::suboptimal;
    opts.lambda = lambda;
    for (const Vector& x0 : *starts_) {
      const Trajectory t = run_trajectory(*qp_, opts, x0);
      ASSERT_TRUE(t.converged);
      for (std::size_t k = 1; k < t.costs.size(); ++k) {
        if (t.events[k]) continue;
        ASSERT_LT(t.costs[k], lambda * t.costs[k - 1]) << "k=" << k;
      }
    }
  }
}

TEST_F(ControllerTest, EmptyCacheProjModeEqualsSuboptimal) {
  const RegionCache empty;
  ControllerOptions a;
  a.mode = Mode::suboptimal;
  ControllerOptions b = a;
  b.mode = Mode::suboptimal_proj;
  for (const Vector& x0 : *starts_) {
    const Trajectory ta = run_trajectory(*qp_, a, x0);
    const Trajectory tb = run_trajectory(*qp_, b, x0, &empty);
    const Trajectory tc = run_trajectory(*qp_, b, x0);
    ASSERT_EQ(trajectory_csv(ta, 2, 1), trajectory_csv(tb, 2, 1));
    ASSERT_EQ(trajectory_csv(ta, 2, 1), trajectory_csv(tc, 2, 1));
  }
}

TEST_F(ControllerTest, StatesStayAdmissible) {
  for (Mode mode : {Mode::optimal, Mode::suboptimal}) {
    ControllerOptions opts;
    opts.mode = mode;
    for (const Vector& x0 : *starts_) {
      const Trajectory t = run_trajectory(*qp_, opts, x0);
      for (const Vector& x : t.states) ASSERT_TRUE(qp_->spec.state_box().contains(x, 1e-9));
      for (const Vector& u : t.inputs) ASSERT_TRUE(qp_->spec.input_box().contains(u, 1e-9));
    }
  }
}

TEST_F(ControllerTest, TrajectoryCsvLayout) {
  const Trajectory t = run_trajectory(*qp_, {}, starts_->front());
  const std::string csv = trajectory_csv(t, 2, 1);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,x_1,x_2,u_1,e,flops,cost");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, t.steps() + 1);
  EXPECT_EQ(last.substr(last.size() - 4), ",,,,");
  EXPECT_EQ(std::count(last.begin(), last.end(), ','), 6);
}

TEST_F(ControllerTest, InfeasibleStart) {
  EXPECT_THROW(run_trajectory(*qp_, {}, Vector::Constant(2, 40.0)), InfeasibleState);
  EXPECT_THROW(run_trajectory(*qp_, {}, Vector::Zero(3)), DimensionMismatch);
  ControllerOptions bad;
  bad.lambda = 0.0;
  EXPECT_THROW(Controller(*qp_, bad), InvalidSpec);
}

TEST_F(ControllerTest, StepCapStopsUnconverged) {
  ControllerOptions opts;
  opts.max_steps = 2;
  const Trajectory t = run_trajectory(*qp_, opts, starts_->front());
  EXPECT_EQ(t.steps(), 2);
  EXPECT_FALSE(t.converged);
}

}  // namespace
}  // namespace rmpc
