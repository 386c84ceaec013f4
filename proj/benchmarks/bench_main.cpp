#include <benchmark/benchmark.h>

#include <string>

#include "rmpc/controller.hpp"
#include "rmpc/experiment.hpp"
#include "rmpc/netsim.hpp"
#include "rmpc/projection.hpp"
#include "rmpc/qp_solver.hpp"

namespace {

const rmpc::CondensedQP& problem(int which) {
  static const rmpc::CondensedQP e1 =
      rmpc::synthesize(rmpc::load_problem(std::string(RMPC_PROBLEMS_DIR) + "/example1.json"));
  static const rmpc::CondensedQP e2 =
      rmpc::synthesize(rmpc::load_problem(std::string(RMPC_PROBLEMS_DIR) + "/example2.json"));
  return which == 1 ? e1 : e2;
}

void BM_Synthesize(benchmark::State& state) {
  const rmpc::ProblemSpec spec =
      rmpc::load_problem(std::string(RMPC_PROBLEMS_DIR) + "/example" + std::to_string(state.range(0)) + ".json");
  for (auto _ : state) benchmark::DoNotOptimize(rmpc::synthesize(spec));
}
BENCHMARK(BM_Synthesize)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SolveQp(benchmark::State& state) {
  const rmpc::CondensedQP& qp = problem(static_cast<int>(state.range(0)));
  const auto xs = rmpc::sample_initial_states(qp, 64, 3);
  rmpc::QpSolver solver(qp);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.solve(xs[i++ % xs.size()]));
  }
}
BENCHMARK(BM_SolveQp)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_BuildRegion(benchmark::State& state) {
  const rmpc::CondensedQP& qp = problem(static_cast<int>(state.range(0)));
  const auto xs = rmpc::sample_initial_states(qp, 64, 4);
  rmpc::RegionBuilder builder(qp, rmpc::Mode::suboptimal, 0.8);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(builder.build(xs[i++ % xs.size()]));
}
BENCHMARK(BM_BuildRegion)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_Membership(benchmark::State& state) {
  const rmpc::CondensedQP& qp = problem(static_cast<int>(state.range(0)));
  const auto xs = rmpc::sample_initial_states(qp, 64, 5);
  rmpc::RegionBuilder builder(qp, rmpc::Mode::suboptimal, 0.8);
  const rmpc::RegionBuild b = builder.build(xs.front());
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rmpc::membership(b.region, xs[i++ % xs.size()]));
}
BENCHMARK(BM_Membership)->Arg(1)->Arg(2);

void BM_PacketRoundTrip(benchmark::State& state) {
  const rmpc::CondensedQP& qp = problem(2);
  rmpc::RegionBuilder builder(qp, rmpc::Mode::suboptimal, 0.8);
  const rmpc::LawPacket p = rmpc::make_packet(builder.build(rmpc::sample_initial_states(qp, 1, 6).front()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmpc::deserialize_packet(rmpc::serialize_packet(p)));
  }
}
BENCHMARK(BM_PacketRoundTrip);

void BM_TailProjection(benchmark::State& state) {
  const rmpc::CondensedQP& qp = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    rmpc::ProjectionEngine engine(qp);
    benchmark::DoNotOptimize(engine.tail_set());
  }
}
BENCHMARK(BM_TailProjection)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Trajectory(benchmark::State& state) {
  const rmpc::CondensedQP& qp = problem(1);
  const auto xs = rmpc::sample_initial_states(qp, 32, 7);
  rmpc::ControllerOptions opts;
  opts.mode = static_cast<rmpc::Mode>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rmpc::run_networked(qp, opts, xs[i++ % xs.size()]));
}
BENCHMARK(BM_Trajectory)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
