#include "rmpc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "json_matrix.hpp"
#include "rmpc/errors.hpp"

namespace rmpc {
namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

StateSampler::StateSampler(const CondensedQP& qp, std::uint64_t seed)
    : qp_(qp), solver_(qp), rng_(seed) {}

// Top 53 bits of one draw; the standard distributions leave the mapping
// implementation-defined, which would break cross-platform reproducibility.
double StateSampler::uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

Vector StateSampler::next() {
  const Vector& lo = qp_.spec.x_lower;
  const Vector& hi = qp_.spec.x_upper;
  Vector x(lo.size());
  while (true) {
    if (draws_ >= 1000000 && static_cast<double>(accepted_) < 1e-3 * static_cast<double>(draws_)) {
      throw SamplingExhausted("feasible initial-state acceptance below 0.1% after " +
                              std::to_string(draws_) + " draws");
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = lo(i) + (hi(i) - lo(i)) * uniform01();
    ++draws_;
    if (solver_.feasible(x)) {
      ++accepted_;
      return x;
    }
  }
}

std::vector<Vector> sample_initial_states(const CondensedQP& qp, int count, std::uint64_t seed) {
  StateSampler sampler(qp, seed);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

BatchResult run_batch(const CondensedQP& qp, const BatchOptions& opts, const RegionCache* cache) {
  if (opts.count < 1) throw InvalidSpec("batch count must be at least 1");
  std::vector<Vector> states;
  long long draws = 0;
  if (opts.zero_state) {
    states.assign(static_cast<std::size_t>(opts.count), Vector::Zero(qp.n()));
  } else {
    StateSampler sampler(qp, opts.seed);
    for (int i = 0; i < opts.count; ++i) states.push_back(sampler.next());
    draws = sampler.draws();
  }
  BatchResult r = run_batch(qp, opts, states, cache);
  r.draws = draws;
  return r;
}

BatchResult run_batch(const CondensedQP& qp, const BatchOptions& opts,
                      const std::vector<Vector>& initial_states, const RegionCache* cache) {
  BatchResult result;
  result.options = opts;
  const ControllerOptions copts{opts.mode, opts.lambda, opts.conv_tol, opts.max_steps};
  int index = 0;
  for (const Vector& x0 : initial_states) {
    TrajectorySummary s;
    s.index = index++;
    s.x0 = x0;
    try {
      const NetworkedRun run = run_networked(qp, copts, x0, cache);
      const Telemetry& t = run.telemetry;
      s.steps = t.steps;
      s.converged = t.converged;
      s.qps = t.qp_count;
      s.flops = t.local_flops;
      s.bytes = t.bytes_tx;
      s.messages = t.messages;
      s.cost = t.total_cost;
    } catch (const InfeasibleState& e) {
      s.error = e.what();
      ++result.aborted;
    }
    if (!s.converged) ++result.not_converged;
    result.qps += s.qps;
    result.flops += s.flops;
    result.bytes += s.bytes;
    result.messages += s.messages;
    result.cost += s.cost;
    result.runs.push_back(std::move(s));
  }
  return result;
}

std::string batch_csv(const BatchResult& result, int n) {
  std::string out = "index";
  for (int i = 1; i <= n; ++i) out += ",x0_" + std::to_string(i);
  out += ",steps,converged,qps,flops,bytes,messages,cost,error\n";
  for (const TrajectorySummary& s : result.runs) {
    out += std::to_string(s.index);
    for (int i = 0; i < n; ++i) out += ',' + fmt(s.x0(i));
    out += ',' + std::to_string(s.steps) + ',' + (s.converged ? "1" : "0") + ',' +
           std::to_string(s.qps) + ',' + std::to_string(s.flops) + ',' + std::to_string(s.bytes) +
           ',' + std::to_string(s.messages) + ',' + fmt(s.cost) + ',';
    if (!s.error.empty()) out += '"' + s.error + '"';
    out += '\n';
  }
  return out;
}

std::string mode_label(Mode mode, double lambda) {
  if (mode == Mode::optimal) return "optimal";
  return to_string(mode) + "@" + fmt(lambda, "%g");
}

std::string batch_summary_json(const BatchResult& r) {
  detail::Json doc;
  doc["label"] = mode_label(r.options.mode, r.options.lambda);
  doc["mode"] = to_string(r.options.mode);
  doc["lambda"] = r.options.lambda;
  doc["count"] = r.options.count;
  doc["seed"] = r.options.seed;
  doc["conv_tol"] = r.options.conv_tol;
  doc["max_steps"] = r.options.max_steps;
  doc["qps"] = r.qps;
  doc["flops"] = r.flops;
  doc["bytes"] = r.bytes;
  doc["messages"] = r.messages;
  doc["costs"] = r.cost;
  doc["not_converged"] = r.not_converged;
  doc["aborted"] = r.aborted;
  doc["draws"] = r.draws;
  return doc.dump(1) + "\n";
}

ModeSummary summarize(const BatchResult& r) {
  ModeSummary s;
  s.label = mode_label(r.options.mode, r.options.lambda);
  s.mode = r.options.mode;
  s.lambda = r.options.lambda;
  s.count = r.options.count;
  s.seed = r.options.seed;
  s.qps = static_cast<double>(r.qps);
  s.flops = static_cast<double>(r.flops);
  s.costs = r.cost;
  s.bytes = static_cast<double>(r.bytes);
  return s;
}

ModeSummary parse_summary_json(const std::string& text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(text);
  } catch (const detail::Json::parse_error& e) {
    throw FormatError(std::string("run summary: ") + e.what());
  }
  ModeSummary s;
  try {
    s.mode = parse_mode(doc.at("mode").get<std::string>());
    s.lambda = doc.at("lambda").get<double>();
    s.label = doc.value("label", mode_label(s.mode, s.lambda));
    s.count = doc.at("count").get<int>();
    s.seed = doc.at("seed").get<std::uint64_t>();
    s.qps = doc.at("qps").get<double>();
    s.flops = doc.at("flops").get<double>();
    s.costs = doc.at("costs").get<double>();
    s.bytes = doc.value("bytes", 0.0);
  } catch (const detail::Json::exception& e) {
    throw FormatError(std::string("run summary: ") + e.what());
  }
  return s;
}

double delta_pct(double value, double baseline) {
  if (baseline == 0.0) return value == 0.0 ? 0.0 : std::copysign(INFINITY, value);
  return 100.0 * (value - baseline) / baseline;
}

std::vector<ReportRow> make_report(const std::vector<ModeSummary>& runs) {
  const ModeSummary* base = nullptr;
  for (const ModeSummary& s : runs) {
    if (s.mode == Mode::optimal) {
      base = &s;
      break;
    }
  }
  if (base == nullptr) throw MissingBaseline("report needs one run in optimal mode");
  std::vector<ReportRow> rows;
  for (const ModeSummary& s : runs) {
    rows.push_back({s, delta_pct(s.qps, base->qps), delta_pct(s.flops, base->flops),
                    delta_pct(s.costs, base->costs)});
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "mode,qps,flops,costs,d_qps_pct,d_flops_pct,d_costs_pct\n";
  for (const ReportRow& r : rows) {
    out += r.summary.label + ',' + fmt(r.summary.qps, "%.0f") + ',' + fmt(r.summary.flops, "%.0f") +
           ',' + fmt(r.summary.costs, "%.10g") + ',' + fmt(r.d_qps_pct, "%.4f") + ',' +
           fmt(r.d_flops_pct, "%.4f") + ',' + fmt(r.d_costs_pct, "%.4f") + '\n';
  }
  return out;
}

std::string report_text(const std::vector<ReportRow>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %10s %14s %16s %9s %9s %9s\n", "mode", "QPs", "flops",
                "costs", "dQPs%", "dflops%", "dcosts%");
  out += line;
  for (const ReportRow& r : rows) {
    std::snprintf(line, sizeof line, "%-22s %10.0f %14.0f %16.6g %9.2f %9.2f %9.2f\n",
                  r.summary.label.c_str(), r.summary.qps, r.summary.flops, r.summary.costs, r.d_qps_pct,
                  r.d_flops_pct, r.d_costs_pct);
    out += line;
  }
  return out;
}

ScoutResult build_projection_cache(const CondensedQP& qp, const ScoutOptions& opts) {
  ScoutResult out;
  ProjectionEngine engine(qp, opts.projection);
  const std::vector<Vector> states = sample_initial_states(qp, opts.count, opts.seed);

  std::set<std::vector<int>> seen;
  bool tail_failed = false;
  for (Mode mode : {Mode::optimal, Mode::suboptimal}) {
    const ControllerOptions copts{mode, opts.lambda, opts.conv_tol, opts.max_steps};
    for (const Vector& x0 : states) {
      Trajectory traj;
      try {
        traj = run_trajectory(qp, copts, x0);
      } catch (const InfeasibleState& e) {
        out.log.push_back(std::string("scouting trajectory aborted: ") + e.what());
        continue;
      }
      for (const std::vector<int>& active : traj.law_active) {
        if (!seen.insert(active).second) continue;
        ++out.laws_seen;
        const AffineLaw law = law_and_polytope(qp, active).law;
        if (!is_saturated(law, qp.spec.u_lower, qp.spec.u_upper)) continue;
        ++out.saturated;
        if (tail_failed) {
          ++out.skipped;
          continue;
        }
        CacheEntry entry{active, law.K, law.b, Polytope()};
        if (auto same = out.cache.find_by_law(law.K, law.b)) {
          entry.region = same->region;
        } else {
          try {
            entry.region = engine.region_C(law);
          } catch (const ProjectionTooLarge& e) {
            out.log.push_back("projection skipped for [" + RegionCache::key_of(active) + "]: " + e.what());
            ++out.skipped;
            tail_failed = true;
            continue;
          }
        }
        out.cache.insert(std::move(entry));
      }
    }
  }
  return out;
}

}  // namespace rmpc
