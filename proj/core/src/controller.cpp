#include "rmpc/controller.hpp"

#include <cstdio>
#include <numeric>

#include "rmpc/errors.hpp"

namespace rmpc {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::optimal:
      return "optimal";
    case Mode::suboptimal:
      return "suboptimal";
    case Mode::suboptimal_proj:
      return "suboptimal-proj";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "optimal") return Mode::optimal;
  if (text == "suboptimal") return Mode::suboptimal;
  if (text == "suboptimal-proj") return Mode::suboptimal_proj;
  throw InvalidSpec("unknown mode '" + text + "' (expected optimal, suboptimal or suboptimal-proj)");
}

RegionBuilder::RegionBuilder(const CondensedQP& qp, Mode mode, double lambda,
                             const RegionCache* cache)
    : qp_(qp), mode_(mode), lambda_(lambda), cache_(cache), solver_(qp) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidSpec("lambda must lie in (0, 1]");
}

LawAndPolytope RegionBuilder::regular_law(const CondensedQP& qp, const std::vector<int>& active) {
  try {
    return law_and_polytope(qp, active);
  } catch (const DegenerateActiveSet&) {
    return law_and_polytope(qp, independent_subset(qp, active));
  }
}

RegionBuild RegionBuilder::build(const Vector& x) {
  const QPSolution sol = solver_.solve(x);
  if (!sol.ok()) throw InfeasibleState("QP has no solution at the current state");
  return build_from(sol);
}

RegionBuild RegionBuilder::build_from(const QPSolution& sol) const {
  LawAndPolytope lp = regular_law(qp_, sol.active);
  RegionBuild out;
  out.law = std::move(lp.law);
  if (mode_ == Mode::optimal) {
    out.region = {OptimalRegion{std::move(lp.optimal)}, Provenance::optimal};
    return out;
  }

  StabilityQuadric stab;
  try {
    stab = stability_quadric(qp_, out.law, lambda_);
  } catch (const SingularClosedLoop&) {
    out.region = {OptimalRegion{std::move(lp.optimal)}, Provenance::optimal};
    return out;
  }

  if (mode_ == Mode::suboptimal_proj && cache_ != nullptr &&
      is_saturated(out.law, qp_.spec.u_lower, qp_.spec.u_upper)) {
    std::optional<CacheEntry> hit = cache_->find(out.law.active);
    if (!hit) hit = cache_->find_by_law(out.law.K, out.law.b);
    if (hit) {
      out.region = {ExtendedRegion{std::move(hit->region), std::move(stab)}, Provenance::projected_C};
      return out;
    }
  }

  // F is the inactive block of P*, which sits first.
  const int inactive = lp.optimal.rows() - static_cast<int>(out.law.active.size());
  std::vector<int> rows(static_cast<std::size_t>(inactive));
  std::iota(rows.begin(), rows.end(), 0);
  out.region = {ExtendedRegion{select_rows(lp.optimal, rows), std::move(stab)}, Provenance::closed_form_F};
  return out;
}

Controller::Controller(const CondensedQP& qp, const ControllerOptions& opts, const RegionCache* cache)
    : qp_(qp), opts_(opts), builder_(qp, opts.mode, opts.lambda, cache) {}

void Controller::install(const Vector& x) {
  current_ = builder_.build(x);
  ++qp_count_;
}

Controller::Step Controller::step(const Vector& x) {
  Step s;
  if (current_) {
    const Membership mem = membership(current_->region, x);
    s.flops = mem.flops;
    if (!mem.member) {
      install(x);
      s.event = true;
    }
  } else {
    install(x);
    s.event = true;
  }
  s.u = current_->law.input(x);
  s.cost = law_cost(qp_, current_->law, x);
  return s;
}

double Trajectory::total_cost() const { return std::accumulate(costs.begin(), costs.end(), 0.0); }

long long Trajectory::total_flops() const {
  return std::accumulate(flops.begin(), flops.end(), 0LL);
}

Trajectory run_trajectory(const CondensedQP& qp, const ControllerOptions& opts, const Vector& x0,
                          const RegionCache* cache) {
  if (x0.size() != qp.n()) throw DimensionMismatch("initial state has wrong dimension");
  Controller ctl(qp, opts, cache);
  Trajectory traj;
  traj.states.push_back(x0);
  Vector x = x0;

  if (x.norm() <= opts.conv_tol) {
    ctl.install(x);
    traj.law_active.push_back(ctl.law().active);
    traj.qp_count = ctl.qp_count();
    traj.converged = true;
    return traj;
  }

  for (int k = 0; k < opts.max_steps; ++k) {
    if (ctl.has_law()) {
      traj.tested_provenance.push_back(ctl.region().provenance);
      traj.tested_rows.push_back(ctl.region().polytope_rows());
      traj.tested_extended.push_back(ctl.region().is_extended() ? 1 : 0);
    } else {
      traj.tested_provenance.push_back(Provenance::optimal);
      traj.tested_rows.push_back(0);
      traj.tested_extended.push_back(0);
    }
    const Controller::Step s = ctl.step(x);
    traj.inputs.push_back(s.u);
    traj.events.push_back(s.event ? 1 : 0);
    traj.flops.push_back(s.flops);
    traj.costs.push_back(s.cost);
    traj.provenance.push_back(ctl.region().provenance);
    if (s.event) traj.law_active.push_back(ctl.law().active);
    x = qp.spec.A * x + qp.spec.B * s.u;
    traj.states.push_back(x);
    if (x.norm() <= opts.conv_tol) {
      traj.converged = true;
      break;
    }
  }
  traj.qp_count = ctl.qp_count();
  return traj;
}

std::string trajectory_csv(const Trajectory& traj, int n, int m) {
  std::string out = "k";
  for (int i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (int i = 1; i <= m; ++i) out += ",u_" + std::to_string(i);
  out += ",e,flops,cost\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out += std::to_string(k);
    for (int i = 0; i < n; ++i) {
      out += ',';
      num(traj.states[k](i));
    }
    if (k < traj.inputs.size()) {
      for (int i = 0; i < m; ++i) {
        out += ',';
        num(traj.inputs[k](i));
      }
      out += ',' + std::to_string(traj.events[k]) + ',' + std::to_string(traj.flops[k]) + ',';
      num(traj.costs[k]);
    } else {
      out += std::string(static_cast<std::size_t>(m) + 3, ',');
    }
    out += '\n';
  }
  return out;
}

}  // namespace rmpc
