// rmpc: synthesize, simulate and compare event-triggered explicit MPC runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmpc/controller.hpp"
#include "rmpc/errors.hpp"
#include "rmpc/experiment.hpp"
#include "rmpc/netsim.hpp"
#include "rmpc/problem.hpp"
#include "rmpc/projection.hpp"
#include "rmpc/region_cache.hpp"
#include "rmpc/synthesis.hpp"

namespace fs = std::filesystem;
using namespace rmpc;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vector parse_state(const std::string& text, int n) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw FormatError("--x0 entry '" + item + "' is not a number");
    }
  }
  if (static_cast<int>(values.size()) != n) {
    throw InvalidSpec("--x0 needs " + std::to_string(n) + " comma-separated values");
  }
  return Eigen::Map<Vector>(values.data(), n);
}

struct Common {
  std::string problem;
  double lambda = -1.0;  // negative: take the problem file's value
};

CondensedQP load_qp(const Common& c) {
  ProblemSpec spec = load_problem(c.problem);
  if (c.lambda > 0.0) spec.lambda = c.lambda;
  validate(spec);
  return synthesize(spec);
}

// ProjectionTooLarge on the tail set makes every entry unavailable; the run
// then behaves as plain suboptimal mode.
RegionCache scout_cache(const CondensedQP& qp, int count, std::uint64_t seed, bool verbose) {
  ScoutOptions so;
  so.count = count;
  so.seed = seed;
  so.lambda = qp.spec.lambda;
  ScoutResult r = build_projection_cache(qp, so);
  if (verbose) {
    std::cerr << "scouting: laws=" << r.laws_seen << " saturated=" << r.saturated
              << " cached=" << r.cache.size() << " skipped=" << r.skipped << "\n";
    for (const std::string& line : r.log) std::cerr << "  " << line << "\n";
  }
  return r.cache;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered regional MPC toolkit"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", common.problem, "problem JSON file")->required();
  };

  // synth
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "condense a problem and write its QP data");
  add_common(synth);
  synth->add_option("--out", synth_out, "output directory for qp.json");

  // run
  std::string run_mode = "optimal", run_x0, run_out, run_cache;
  double conv_tol = 1e-2;
  int max_steps = 1000;
  CLI::App* run = app.add_subcommand("run", "simulate one closed-loop trajectory");
  add_common(run);
  run->add_option("--mode", run_mode)->check(CLI::IsMember({"optimal", "suboptimal", "suboptimal-proj"}));
  run->add_option("--lambda", common.lambda, "cost-decrease factor in (0, 1]");
  run->add_option("--x0", run_x0, "initial state, comma separated")->required();
  run->add_option("--conv-tol", conv_tol);
  run->add_option("--max-steps", max_steps);
  run->add_option("--cache", run_cache, "projection cache file");
  run->add_option("--out", run_out, "trajectory CSV path (default: stdout)");

  // batch
  std::string batch_mode = "optimal", batch_out, batch_cache;
  int count = 100;
  std::uint64_t seed = 1;
  int scout_count = 200;
  bool zero_state = false;
  CLI::App* batch = app.add_subcommand("batch", "run many random initial states");
  add_common(batch);
  batch->add_option("--mode", batch_mode)->check(CLI::IsMember({"optimal", "suboptimal", "suboptimal-proj"}));
  batch->add_option("--lambda", common.lambda, "cost-decrease factor in (0, 1]");
  batch->add_option("--count", count)->check(CLI::PositiveNumber);
  batch->add_option("--seed", seed);
  batch->add_option("--conv-tol", conv_tol);
  batch->add_option("--max-steps", max_steps);
  batch->add_option("--cache", batch_cache, "projection cache file (suboptimal-proj)");
  batch->add_option("--scout-count", scout_count, "scouting trajectories when no cache is given");
  batch->add_flag("--zero-state", zero_state, "start every trajectory at the origin");
  batch->add_option("--out", batch_out, "output directory")->required();

  // project
  std::string project_cache;
  int project_count = 200;
  std::uint64_t project_seed = 0x5eed;
  CLI::App* project = app.add_subcommand("project", "compute projection regions for saturated laws");
  add_common(project);
  project->add_option("--lambda", common.lambda);
  project->add_option("--count", project_count, "scouting trajectories")->check(CLI::PositiveNumber);
  project->add_option("--seed", project_seed);
  project->add_option("cache", project_cache, "output cache file")->required();

  // report
  std::vector<std::string> report_dirs;
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "compare batch runs against the optimal one");
  report->add_option("runs", report_dirs, "batch output directories")->required()->expected(2, -1);
  report->add_option("--out", report_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const CondensedQP qp = load_qp(common);
      if (!synth_out.empty()) write_file(fs::path(synth_out) / "qp.json", condensed_qp_to_json(qp));
      std::cout << "q=" << qp.constraints() << " vars=" << qp.variables() << "\n";
      std::cout << "terminal_rows=" << qp.terminal.rows() << " spectral_radius="
                << spectral_radius(qp.spec.A + qp.spec.B * qp.K_lqr) << "\n";
    } else if (run->parsed()) {
      const CondensedQP qp = load_qp(common);
      RegionCache cache;
      if (!run_cache.empty()) cache = RegionCache::load(run_cache);
      const ControllerOptions opts{parse_mode(run_mode), qp.spec.lambda, conv_tol, max_steps};
      const NetworkedRun r = run_networked(qp, opts, parse_state(run_x0, qp.n()), &cache);
      const std::string csv = trajectory_csv(r.trajectory, qp.n(), qp.m());
      if (run_out.empty()) {
        std::cout << csv;
      } else {
        write_file(run_out, csv);
      }
      std::cerr << "steps=" << r.telemetry.steps << " qps=" << r.telemetry.qp_count
                << " flops=" << r.telemetry.local_flops << " bytes=" << r.telemetry.bytes_tx
                << " cost=" << r.telemetry.total_cost << " converged=" << r.telemetry.converged << "\n";
    } else if (batch->parsed()) {
      const CondensedQP qp = load_qp(common);
      BatchOptions opts;
      opts.mode = parse_mode(batch_mode);
      opts.lambda = qp.spec.lambda;
      opts.count = count;
      opts.seed = seed;
      opts.conv_tol = conv_tol;
      opts.max_steps = max_steps;
      opts.zero_state = zero_state;
      RegionCache cache;
      if (!batch_cache.empty()) {
        cache = RegionCache::load(batch_cache);
      } else if (opts.mode == Mode::suboptimal_proj) {
        // Offline scouting on a seed stream disjoint from the batch's own.
        cache = scout_cache(qp, scout_count, seed ^ 0x9e3779b97f4a7c15ULL, true);
      }
      const BatchResult result = run_batch(qp, opts, &cache);
      const fs::path dir(batch_out);
      write_file(dir / "batch.csv", batch_csv(result, qp.n()));
      write_file(dir / "summary.json", batch_summary_json(result));
      std::cout << "mode=" << mode_label(opts.mode, opts.lambda) << " count=" << count
                << " qps=" << result.qps << " flops=" << result.flops << " bytes=" << result.bytes
                << " costs=" << result.cost << " not_converged=" << result.not_converged << "\n";
    } else if (project->parsed()) {
      const CondensedQP qp = load_qp(common);
      const RegionCache cache = scout_cache(qp, project_count, project_seed, true);
      cache.save(project_cache, qp.n(), qp.m());
      std::cout << "entries=" << cache.size() << "\n";
    } else if (report->parsed()) {
      std::vector<ModeSummary> runs;
      for (const std::string& dir : report_dirs) {
        runs.push_back(parse_summary_json(read_file(fs::path(dir) / "summary.json")));
      }
      const std::vector<ReportRow> rows = make_report(runs);
      const std::string csv = report_csv(rows);
      if (!report_out.empty()) write_file(report_out, csv);
      std::cout << report_text(rows);
      std::cout << "(byte totals are available per run in summary.json)\n";
    }
  } catch (const InvalidSpec& e) {
    std::cerr << "invalid problem: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "invalid problem: " << e.what() << "\n";
    return 2;
  } catch (const MissingBaseline& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
