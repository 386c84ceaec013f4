#include <string>

#include "json_matrix.hpp"
#include "rmpc/errors.hpp"
#include "rmpc/synthesis.hpp"

namespace rmpc {

std::string to_string(RowKind kind) {
  switch (kind) {
    case RowKind::input:
      return "input";
    case RowKind::state:
      return "state";
    case RowKind::terminal:
      return "terminal";
  }
  return "unknown";
}

double CondensedQP::objective(const Vector& x, const Vector& U) const {
  return 0.5 * U.dot(H * U) + x.dot(F * U) + 0.5 * x.dot(Y * x);
}

Vector CondensedQP::residual(const Vector& x, const Vector& U) const {
  return G * U - w - E * x;
}

CondensedQP condense(const ProblemSpec& spec, const Matrix& P, const Matrix& K_lqr,
                     const Polytope& terminal) {
  validate(spec);
  const int n = spec.n();
  const int m = spec.m();
  const int N = spec.N;
  if (P.rows() != n || P.cols() != n) throw DimensionMismatch("condense: P must be n x n");
  if (K_lqr.rows() != m || K_lqr.cols() != n) throw DimensionMismatch("condense: K must be m x n");
  if (terminal.dim() != n) throw DimensionMismatch("condense: terminal set dimension");

  // Prediction x(k) = Sx_k x0 + Su_k U for k = 1..N, stacked.
  Matrix Sx(n * N, n);
  Matrix Su = Matrix::Zero(n * N, m * N);
  Matrix Ak = Matrix::Identity(n, n);
  for (int k = 1; k <= N; ++k) {
    Ak = spec.A * Ak;
    Sx.middleRows((k - 1) * n, n) = Ak;
    if (k == 1) {
      Su.block(0, 0, n, m) = spec.B;
    } else {
      Su.block((k - 1) * n, 0, n, m * (k - 1)) =
          spec.A * Su.block((k - 2) * n, 0, n, m * (k - 1));
      Su.block((k - 1) * n, m * (k - 1), n, m) = spec.B;
    }
  }

  Matrix Qbar = Matrix::Zero(n * N, n * N);
  for (int k = 0; k < N - 1; ++k) Qbar.block(k * n, k * n, n, n) = spec.Q;
  Qbar.block((N - 1) * n, (N - 1) * n, n, n) = P;
  Matrix Rbar = Matrix::Zero(m * N, m * N);
  for (int k = 0; k < N; ++k) Rbar.block(k * m, k * m, m, m) = spec.R;

  CondensedQP qp;
  qp.spec = spec;
  qp.P = P;
  qp.K_lqr = K_lqr;
  qp.terminal = terminal;

  // Factor 2: the QP carries 1/2 on the quadratic terms, the MPC cost does not.
  const Matrix QSu = Qbar * Su;
  qp.H = 2.0 * (Su.transpose() * QSu + Rbar);
  qp.H = 0.5 * (qp.H + qp.H.transpose()).eval();
  qp.F = 2.0 * Sx.transpose() * QSu;
  qp.Y = 2.0 * (spec.Q + Sx.transpose() * Qbar * Sx);
  qp.Y = 0.5 * (qp.Y + qp.Y.transpose()).eval();

  const int q = 2 * m * N + 2 * n * (N - 1) + terminal.rows();
  qp.G = Matrix::Zero(q, m * N);
  qp.w = Vector::Zero(q);
  qp.E = Matrix::Zero(q, n);
  qp.row_tags.reserve(static_cast<std::size_t>(q));

  int row = 0;
  for (int k = 0; k < N; ++k) {
    for (int side = 0; side < 2; ++side) {
      const bool upper = side == 0;
      for (int i = 0; i < m; ++i) {
        qp.G(row, k * m + i) = upper ? 1.0 : -1.0;
        qp.w(row) = upper ? spec.u_upper(i) : -spec.u_lower(i);
        qp.row_tags.push_back({k, RowKind::input, i, upper});
        ++row;
      }
    }
    if (k <= N - 2) {
      const auto Sxk = Sx.middleRows(k * n, n);
      const auto Suk = Su.middleRows(k * n, n);
      for (int side = 0; side < 2; ++side) {
        const bool upper = side == 0;
        const double sign = upper ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
          qp.G.row(row) = sign * Suk.row(i);
          qp.E.row(row) = -sign * Sxk.row(i);
          qp.w(row) = upper ? spec.x_upper(i) : -spec.x_lower(i);
          qp.row_tags.push_back({k + 1, RowKind::state, i, upper});
          ++row;
        }
      }
    }
  }
  const auto SxN = Sx.middleRows((N - 1) * n, n);
  const auto SuN = Su.middleRows((N - 1) * n, n);
  for (int i = 0; i < terminal.rows(); ++i) {
    qp.G.row(row) = terminal.T().row(i) * SuN;
    qp.E.row(row) = -terminal.T().row(i) * SxN;
    qp.w(row) = terminal.d()(i);
    qp.row_tags.push_back({N, RowKind::terminal, i, true});
    ++row;
  }

  Eigen::LLT<Matrix> llt(qp.H);
  if (llt.info() != Eigen::Success) throw InvalidSpec("condense: H is not positive definite");
  qp.H_inv = llt.solve(Matrix::Identity(m * N, m * N));
  qp.H_inv = 0.5 * (qp.H_inv + qp.H_inv.transpose()).eval();
  qp.S = qp.E + qp.G * qp.H_inv * qp.F.transpose();
  qp.H_inv_Gt = qp.H_inv * qp.G.transpose();
  qp.G_H_inv_Gt = qp.G * qp.H_inv_Gt;
  return qp;
}

CondensedQP synthesize(const ProblemSpec& spec) {
  validate(spec);
  const Matrix P = solve_dare(spec.A, spec.B, spec.Q, spec.R);
  const Matrix K = lqr_gain(spec.A, spec.B, spec.R, P);
  const Matrix A_cl = spec.A + spec.B * K;
  if (spectral_radius(A_cl) >= 1.0) {
    throw NoConvergence("synthesize: LQR closed loop is not stable; (A, B) not stabilizable");
  }
  const Polytope T = terminal_set(A_cl, spec.state_box(), spec.input_box(), K);
  return condense(spec, P, K, T);
}

std::string condensed_qp_to_json(const CondensedQP& qp) {
  using detail::to_json;
  detail::Json doc;
  doc["n"] = qp.n();
  doc["m"] = qp.m();
  doc["N"] = qp.N();
  doc["q"] = qp.constraints();
  doc["variables"] = qp.variables();
  doc["H"] = to_json(qp.H);
  doc["F"] = to_json(qp.F);
  doc["Y"] = to_json(qp.Y);
  doc["G"] = to_json(qp.G);
  doc["w"] = to_json(qp.w);
  doc["E"] = to_json(qp.E);
  doc["S"] = to_json(qp.S);
  doc["P"] = to_json(qp.P);
  doc["K_lqr"] = to_json(qp.K_lqr);
  doc["terminal_set"] = {{"T", to_json(qp.terminal.T())}, {"d", to_json(qp.terminal.d())}};
  detail::Json tags = detail::Json::array();
  for (const RowTag& t : qp.row_tags) {
    tags.push_back({{"stage", t.stage},
                    {"kind", to_string(t.kind)},
                    {"component", t.component},
                    {"upper", t.upper}});
  }
  doc["row_tags"] = std::move(tags);
  return doc.dump(1) + "\n";
}

}  // namespace rmpc
