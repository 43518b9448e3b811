// Serial against parallel paths of the two hot kernels.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "gbcost/gru.hpp"
#include "gbcost/pipeline.hpp"
#include "gbcost/rng.hpp"

using namespace gbcost;

namespace {

// One thread, plus all threads when the machine has more than one.
void thread_counts(benchmark::internal::Benchmark* b) {
  b->Arg(1);
  if (omp_get_max_threads() > 1) b->Arg(omp_get_max_threads());
}

void BM_GenerateRecords(benchmark::State& state) {
  GenerateOptions o;
  o.dist = parse_dist("3-20-10-weighted");
  o.count = 256;
  o.base_seed = 7;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_records(o));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(o.count));
}
BENCHMARK(BM_GenerateRecords)->Apply(thread_counts)->Unit(benchmark::kMillisecond);

struct Batch {
  GruParams params;
  std::vector<Sequence> xs;
  std::vector<double> ys;
};

const Batch& batch() {
  static const Batch b = [] {
    Batch r;
    r.params = init_params({6, 128, 10, 1});
    Rng rng(2);
    for (int i = 0; i < 64; ++i) {
      Sequence x(10, 6);
      for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform();
      r.xs.push_back(x);
      r.ys.push_back(rng.uniform(0, 200));
    }
    return r;
  }();
  return b;
}

void BM_LossGradReference(benchmark::State& state) {
  const Batch& b = batch();
  std::vector<double> g;
  for (auto _ : state) benchmark::DoNotOptimize(loss_grad_reference(b.params, b.xs, b.ys, g));
}
BENCHMARK(BM_LossGradReference)->Unit(benchmark::kMillisecond);

void BM_LossGradBatched(benchmark::State& state) {
  const Batch& b = batch();
  std::vector<double> g;
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loss_grad_batched(b.params, b.xs, b.ys, g));
}
BENCHMARK(BM_LossGradBatched)->Apply(thread_counts)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
