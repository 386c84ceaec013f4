#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rmpc/controller.hpp"
#include "rmpc/netsim.hpp"
#include "rmpc/projection.hpp"
#include "rmpc/qp_solver.hpp"
#include "rmpc/region_cache.hpp"

namespace rmpc {

/// Uniform draws over the state box, kept only where the QP is feasible.
/// Throws SamplingExhausted once 10^6 draws have been made with an
/// acceptance rate below 0.1%.
class StateSampler {
 public:
  StateSampler(const CondensedQP& qp, std::uint64_t seed);

  Vector next();
  long long draws() const { return draws_; }
  long long accepted() const { return accepted_; }

 private:
  double uniform01();

  const CondensedQP& qp_;
  QpSolver solver_;
  std::mt19937_64 rng_;
  long long draws_ = 0;
  long long accepted_ = 0;
};

std::vector<Vector> sample_initial_states(const CondensedQP& qp, int count, std::uint64_t seed);

struct BatchOptions {
  Mode mode = Mode::optimal;
  double lambda = 1.0;
  int count = 1;
  std::uint64_t seed = 1;
  double conv_tol = 1e-2;
  int max_steps = 1000;
  /// Start every trajectory at the origin instead of sampling.
  bool zero_state = false;
};

struct TrajectorySummary {
  int index = 0;
  Vector x0;
  int steps = 0;
  bool converged = false;
  long long qps = 0;
  long long flops = 0;
  long long bytes = 0;
  long long messages = 0;
  double cost = 0.0;
  std::string error;  ///< non-empty if the trajectory aborted
};

struct BatchResult {
  BatchOptions options;
  std::vector<TrajectorySummary> runs;
  long long qps = 0;
  long long flops = 0;
  long long bytes = 0;
  long long messages = 0;
  double cost = 0.0;
  int not_converged = 0;
  int aborted = 0;
  long long draws = 0;
};

/// Runs every trajectory through the networked simulation and reduces the
/// telemetry in trajectory order.
BatchResult run_batch(const CondensedQP& qp, const BatchOptions& opts,
                      const RegionCache* cache = nullptr);
BatchResult run_batch(const CondensedQP& qp, const BatchOptions& opts,
                      const std::vector<Vector>& initial_states, const RegionCache* cache = nullptr);

/// One row per trajectory: index,x0_1..x0_n,steps,converged,qps,flops,bytes,messages,cost,error.
std::string batch_csv(const BatchResult& result, int n);
std::string batch_summary_json(const BatchResult& result);

struct ModeSummary {
  std::string label;
  Mode mode = Mode::optimal;
  double lambda = 1.0;
  int count = 0;
  std::uint64_t seed = 0;
  double qps = 0.0;
  double flops = 0.0;
  double costs = 0.0;
  double bytes = 0.0;
};

std::string mode_label(Mode mode, double lambda);
ModeSummary summarize(const BatchResult& result);
ModeSummary parse_summary_json(const std::string& text);

/// 100 (value - baseline) / baseline; 0 when both are zero.
double delta_pct(double value, double baseline);

struct ReportRow {
  ModeSummary summary;
  double d_qps_pct = 0.0;
  double d_flops_pct = 0.0;
  double d_costs_pct = 0.0;
};

/// Deltas against the first optimal-mode entry. Throws MissingBaseline.
std::vector<ReportRow> make_report(const std::vector<ModeSummary>& runs);
/// Header mode,qps,flops,costs,d_qps_pct,d_flops_pct,d_costs_pct.
std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_text(const std::vector<ReportRow>& rows);

struct ScoutOptions {
  int count = 200;
  std::uint64_t seed = 0x5eed;
  double lambda = 1.0;
  double conv_tol = 1e-2;
  int max_steps = 1000;
  ProjectionOptions projection{};
};

struct ScoutResult {
  RegionCache cache;
  int laws_seen = 0;
  int saturated = 0;
  int skipped = 0;
  std::vector<std::string> log;
};

/// Offline scouting: runs trajectories in every mode from fresh random
/// states, collects the laws they install, and computes C for each saturated
/// one. Projections that exceed the size bound are logged and skipped.
ScoutResult build_projection_cache(const CondensedQP& qp, const ScoutOptions& opts);

}  // namespace rmpc
