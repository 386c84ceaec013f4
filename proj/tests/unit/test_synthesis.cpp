#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rmpc/errors.hpp"
#include "rmpc/lp.hpp"
#include "rmpc/synthesis.hpp"

namespace rmpc {
namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

TEST(Dare, ScalarGoldenRatio) {
  // P^2 - P - 1 = 0 for A = B = Q = R = 1.
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const Matrix P = solve_dare(scalar(1), scalar(1), scalar(1), scalar(1));
  EXPECT_NEAR(P(0, 0), phi, 1e-10);
  const Matrix K = lqr_gain(scalar(1), scalar(1), scalar(1), P);
  EXPECT_NEAR(K(0, 0), -1.0 / phi, 1e-10);
}

TEST(Dare, ZeroDynamicsGivesQ) {
  Matrix Q(2, 2);
  Q << 2.0, 0.5, 0.5, 1.0;
  const Matrix B = Matrix::Identity(2, 1);
  const Matrix P = solve_dare(Matrix::Zero(2, 2), B, Q, scalar(0.3));
  EXPECT_LT((P - Q).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(lqr_gain(Matrix::Zero(2, 2), B, scalar(0.3), P).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Dare, ExampleResidualsAndStability) {
  for (int which : {1, 2}) {
    const ProblemSpec s = testing::load_example(which);
    const Matrix P = solve_dare(s.A, s.B, s.Q, s.R);
    EXPECT_LT(dare_residual(s.A, s.B, s.Q, s.R, P), 1e-11) << which;
    EXPECT_LT((P - P.transpose()).cwiseAbs().maxCoeff(), 1e-9 * P.norm());
    const Matrix K = lqr_gain(s.A, s.B, s.R, P);
    EXPECT_LT(spectral_radius(s.A + s.B * K), 1.0);
  }
}

TEST(Dare, LqrGainRejectsSingularSystem) {
  EXPECT_THROW(lqr_gain(scalar(1), scalar(0), scalar(0), scalar(1)), SingularGainSystem);
}

TEST(Dare, UnstabilizableDoesNotConverge) {
  DareOptions opts;
  opts.max_iterations = 200;
  EXPECT_THROW(solve_dare(scalar(2), scalar(0), scalar(1), scalar(1), opts), NoConvergence);
}

TEST(SpectralRadius, RotationAndDiagonal) {
  Matrix Rot(2, 2);
  Rot << 0.0, -1.0, 1.0, 0.0;
  EXPECT_NEAR(spectral_radius(0.5 * Rot), 0.5, 1e-14);
  EXPECT_NEAR(spectral_radius(Eigen::Vector3d(0.1, -0.7, 0.3).asDiagonal().toDenseMatrix()), 0.7, 1e-15);
}

TEST(TerminalSet, ScalarClosedForm) {
  // x+ = 0.5 x, |x| <= 1, |-0.8 x| <= 0.5  =>  |x| <= 0.625.
  const Polytope X = Polytope::box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  const Polytope U = Polytope::box(Vector::Constant(1, -0.5), Vector::Constant(1, 0.5));
  const Polytope T = terminal_set(scalar(0.5), X, U, scalar(-0.8));
  EXPECT_NEAR(lp_max(T, Vector::Constant(1, 1.0)).value, 0.625, 1e-12);
  EXPECT_NEAR(lp_max(T, Vector::Constant(1, -1.0)).value, 0.625, 1e-12);
}

TEST(TerminalSet, ExampleOneInvariantBySampling) {
  const ProblemSpec s = testing::load_example(1);
  const CondensedQP qp = synthesize(s);
  const Matrix A_cl = s.A + s.B * qp.K_lqr;
  const Polytope& T = qp.terminal;
  // X rows are carried verbatim ahead of the rest.
  const Polytope X = s.state_box();
  ASSERT_GE(T.rows(), X.rows());
  EXPECT_EQ(T.T().topRows(X.rows()), X.T());
  EXPECT_EQ(T.d().head(X.rows()), X.d());

  std::mt19937_64 rng(7);
  const auto pts = testing::sample_interior(T, s.x_lower, s.x_upper, 5000, rng, 0.0);
  ASSERT_EQ(pts.size(), 5000u);
  for (const Vector& x : pts) {
    ASSERT_TRUE(T.contains(A_cl * x, 1e-9)) << x.transpose();
    const Vector u = qp.K_lqr * x;
    ASSERT_TRUE((u.array() <= s.u_upper.array() + 1e-9).all());
    ASSERT_TRUE((u.array() >= s.u_lower.array() - 1e-9).all());
  }
}

TEST(TerminalSet, ShrinkingInputBoundsShrinksTheSet) {
  const ProblemSpec s = testing::load_example(1);
  const CondensedQP qp = synthesize(s);
  const Matrix A_cl = s.A + s.B * qp.K_lqr;
  const Polytope small_U = Polytope::box(0.25 * s.u_lower, 0.25 * s.u_upper);
  const Polytope T_small = terminal_set(A_cl, s.state_box(), small_U, qp.K_lqr);
  EXPECT_TRUE(is_subset(T_small, qp.terminal));
  EXPECT_FALSE(is_subset(qp.terminal, T_small));
}

TEST(TerminalSet, UnstableLoopRejected) {
  const Polytope X = Polytope::box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  EXPECT_THROW(terminal_set(scalar(1.2), X, X, scalar(0.0)), NotFinitelyDetermined);
}

TEST(Condense, ExampleOneDimensions) {
  const CondensedQP qp = synthesize(testing::load_example(1));
  EXPECT_EQ(qp.variables(), 4);
  EXPECT_EQ(qp.constraints(), 32);
  EXPECT_EQ(qp.constraints(), 2 * 1 * 4 + 2 * 2 * 3 + qp.terminal.rows());
  ASSERT_EQ(qp.row_tags.size(), 32u);
  // Stage 0: u(0) upper, u(0) lower, x(1) upper (2), x(1) lower (2).
  EXPECT_EQ(qp.row_tags[0].kind, RowKind::input);
  EXPECT_TRUE(qp.row_tags[0].upper);
  EXPECT_FALSE(qp.row_tags[1].upper);
  EXPECT_EQ(qp.row_tags[2].kind, RowKind::state);
  EXPECT_EQ(qp.row_tags[2].stage, 1);
  EXPECT_EQ(qp.row_tags[4].kind, RowKind::state);
  EXPECT_FALSE(qp.row_tags[4].upper);
  EXPECT_EQ(qp.row_tags[32 - qp.terminal.rows()].kind, RowKind::terminal);
}

TEST(Condense, ExampleTwoStageRows) {
  const CondensedQP qp = synthesize(testing::load_example(2));
  EXPECT_EQ(qp.variables(), 80);
  int input = 0, state = 0, terminal = 0;
  for (const RowTag& t : qp.row_tags) {
    input += t.kind == RowKind::input;
    state += t.kind == RowKind::state;
    terminal += t.kind == RowKind::terminal;
  }
  EXPECT_EQ(input, 160);
  EXPECT_EQ(state, 468);
  EXPECT_EQ(terminal, qp.terminal.rows());
}

TEST(Condense, CostIdentityOnRandomPairs) {
  const ProblemSpec s = testing::load_example(1);
  const CondensedQP qp = synthesize(s);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector x(2), U(4);
    for (auto& v : x) v = g(rng);
    for (auto& v : U) v = g(rng);
    const double ref = testing::simulated_cost(s, qp.P, x, U);
    ASSERT_NEAR(qp.objective(x, U), ref, 1e-11 * (1.0 + std::abs(ref)));
  }
}

TEST(Condense, ConstraintIdentityOnRandomPairs) {
  const ProblemSpec s = testing::load_example(1);
  const CondensedQP qp = synthesize(s);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector x(2), U(4);
    for (auto& v : x) v = g(rng);
    for (auto& v : U) v = g(rng);
    // Row by row against the simulated prediction.
    std::vector<Vector> xs{x};
    for (int k = 0; k < s.N; ++k) xs.push_back(s.A * xs.back() + s.B * U.segment(k, 1));
    const Vector r = qp.residual(x, U);
    for (int i = 0; i < qp.constraints(); ++i) {
      const RowTag& t = qp.row_tags[static_cast<std::size_t>(i)];
      double ref = 0.0;
      if (t.kind == RowKind::input) {
        const double u = U(t.stage * s.m() + t.component);
        ref = t.upper ? u - s.u_upper(t.component) : s.u_lower(t.component) - u;
      } else if (t.kind == RowKind::state) {
        const double v = xs[static_cast<std::size_t>(t.stage)](t.component);
        ref = t.upper ? v - s.x_upper(t.component) : s.x_lower(t.component) - v;
      } else {
        ref = qp.terminal.T().row(t.component).dot(xs.back()) - qp.terminal.d()(t.component);
      }
      ASSERT_NEAR(r(i), ref, 1e-11 * (1.0 + std::abs(ref))) << "row " << i;
    }
  }
}

TEST(Condense, DerivedBlocksConsistent) {
  const CondensedQP qp = synthesize(testing::load_example(1));
  EXPECT_LT((qp.H * qp.H_inv - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((qp.S - (qp.E + qp.G * qp.H_inv * qp.F.transpose())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Condense, JsonCarriesDimensions) {
  const std::string text = condensed_qp_to_json(synthesize(testing::load_example(1)));
  EXPECT_NE(text.find("\"q\": 32"), std::string::npos);
  EXPECT_NE(text.find("\"variables\": 4"), std::string::npos);
}

}  // namespace
}  // namespace rmpc
