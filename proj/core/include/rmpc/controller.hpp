#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmpc/qp_solver.hpp"
#include "rmpc/region_cache.hpp"
#include "rmpc/regions.hpp"
#include "rmpc/synthesis.hpp"

namespace rmpc {

enum class Mode { optimal, suboptimal, suboptimal_proj };

std::string to_string(Mode mode);
/// Accepts "optimal", "suboptimal", "suboptimal-proj". Throws InvalidSpec.
Mode parse_mode(const std::string& text);

/// Law plus the region it may be reused on, as produced after a QP event.
struct RegionBuild {
  AffineLaw law;
  ValidityRegion region;
};

/// Builds the law and validity region for the optimizer at x. Used by the
/// controller and by the central node of the networked simulation.
class RegionBuilder {
 public:
  RegionBuilder(const CondensedQP& qp, Mode mode, double lambda,
                const RegionCache* cache = nullptr);

  /// Solves the QP at x. Throws InfeasibleState when it has no solution.
  RegionBuild build(const Vector& x);
  /// Law and region for a given QP solution.
  RegionBuild build_from(const QPSolution& sol) const;

  /// Law for an active set, repairing rank deficiency by keeping a maximal
  /// independent subset (lower indices first).
  static LawAndPolytope regular_law(const CondensedQP& qp, const std::vector<int>& active);

  Mode mode() const { return mode_; }
  double lambda() const { return lambda_; }

 private:
  const CondensedQP& qp_;
  Mode mode_;
  double lambda_;
  const RegionCache* cache_;
  QpSolver solver_;
};

struct ControllerOptions {
  Mode mode = Mode::optimal;
  double lambda = 1.0;
  double conv_tol = 1e-2;
  int max_steps = 1000;
};

/// Event-triggered controller: reuses the current law while the state stays
/// in its validity region and solves a QP otherwise.
class Controller {
 public:
  Controller(const CondensedQP& qp, const ControllerOptions& opts,
             const RegionCache* cache = nullptr);

  struct Step {
    Vector u;
    bool event = false;      ///< a QP was solved
    long long flops = 0;     ///< membership test cost
    double cost = 0.0;       ///< objective of the applied law at x
  };

  /// The first call always solves a QP; later calls test membership first.
  Step step(const Vector& x);
  /// Solve a QP at x and install the resulting law without applying it.
  void install(const Vector& x);

  bool has_law() const { return current_.has_value(); }
  const AffineLaw& law() const { return current_->law; }
  const ValidityRegion& region() const { return current_->region; }
  const ControllerOptions& options() const { return opts_; }
  long long qp_count() const { return qp_count_; }

 private:
  const CondensedQP& qp_;
  ControllerOptions opts_;
  RegionBuilder builder_;
  std::optional<RegionBuild> current_;
  long long qp_count_ = 0;
};

/// Closed-loop run. Index k runs over applied inputs: states has K+1 entries,
/// the per-step vectors K entries. The QP at x(0) is always solved, so a run
/// that starts converged still reports one QP and zero steps.
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  std::vector<int> events;
  std::vector<long long> flops;
  std::vector<double> costs;
  /// Region tested at step k (the one installed before x(k) arrived); only
  /// meaningful for k >= 1.
  std::vector<Provenance> tested_provenance;
  std::vector<int> tested_rows;
  std::vector<int> tested_extended;
  /// Region in force after step k.
  std::vector<Provenance> provenance;
  /// Generating active set of every law installed, in order.
  std::vector<std::vector<int>> law_active;
  long long qp_count = 0;
  bool converged = false;

  int steps() const { return static_cast<int>(inputs.size()); }
  double total_cost() const;
  long long total_flops() const;
};

/// Throws InfeasibleState if x0 or a visited state admits no feasible QP.
Trajectory run_trajectory(const CondensedQP& qp, const ControllerOptions& opts, const Vector& x0,
                          const RegionCache* cache = nullptr);

/// CSV with header k,x_1..x_n,u_1..u_m,e,flops,cost. The final state row has
/// empty input, event, flop and cost fields.
std::string trajectory_csv(const Trajectory& traj, int n, int m);

}  // namespace rmpc
