// Timings of the simulator's hot paths: analog MVM, crossbar DFT, detection,
// array programming and one small frame.
//
// Build in Release; pass --benchmark_min_time=2 for steadier numbers.

#include <benchmark/benchmark.h>

#include "rrambb/channel.hpp"
#include "rrambb/linmap.hpp"
#include "rrambb/mimo.hpp"
#include "rrambb/ofdm.hpp"
#include "rrambb/pipeline.hpp"

using namespace rrambb;

namespace {

ComplexVector random_vector(int n, Rng& rng) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v[i] = {rng.normal(), rng.normal()};
  return v;
}

}  // namespace

static void BM_MvmRead(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const ComplexMatrix h = channel::sample_matrix(n, n, rng);
  const DeviceModel m = preset("ta_taox_pt");
  CrossbarArray array(2 * n, 2 * n, m);
  program(array, encode_targets(linmap::real_map_matrix(h), m, 1.0 / std::sqrt(2.0)), {}, rng);
  const RealVector v = linmap::real_map_vector(random_vector(n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(mvm_read(array, v, rng));
  state.SetItemsProcessed(state.iterations() * 4LL * n * n);
}
BENCHMARK(BM_MvmRead)->RangeMultiplier(4)->Range(4, 256);

static void BM_CrossbarDft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  ProgramOptions exact;
  exact.exact = true;
  const auto built = ofdm::build_dft_operator(n, ofdm::Direction::forward, preset("ta_taox_pt"), exact, rng);
  const ComplexVector x = random_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ofdm::dft_apply(built.op, x, rng));
}
BENCHMARK(BM_CrossbarDft)->RangeMultiplier(4)->Range(16, 1024);

static void BM_ExactDft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const ComplexVector x = random_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ofdm::exact_dft(x));
}
BENCHMARK(BM_ExactDft)->RangeMultiplier(4)->Range(16, 1024);

static void BM_DetectDigital(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const ComplexMatrix h = channel::sample_matrix(n, n, rng);
  const ComplexVector y = random_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mimo::detect_digital(h, y, 20, mimo::DetectorMode::lmmse));
}
BENCHMARK(BM_DetectDigital)->RangeMultiplier(2)->Range(2, 32);

static void BM_DetectCrossbar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  const ComplexMatrix h = channel::sample_matrix(n, n, rng);
  const auto built = mimo::build_detector_bank(h, 20, mimo::DetectorMode::lmmse, preset("ta_taox_pt"), {}, 1, rng);
  const ComplexVector y = random_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mimo::detect_crossbar(built.bank, y, rng));
}
BENCHMARK(BM_DetectCrossbar)->RangeMultiplier(2)->Range(2, 32);

static void BM_ProgramArray(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Scheme scheme = state.range(1) ? Scheme::with_verification : Scheme::without_verification;
  Rng rng(6);
  const ComplexMatrix h = channel::sample_matrix(n, n, rng);
  const DeviceModel m = preset("ta_taox_pt");
  const ConductanceTargets targets = encode_targets(linmap::real_map_matrix(h), m, 1.0 / std::sqrt(2.0));
  ProgramOptions options;
  options.scheme = scheme;
  for (auto _ : state) {
    CrossbarArray array(2 * n, 2 * n, m);
    benchmark::DoNotOptimize(program(array, targets, options, rng));
  }
  state.SetLabel(to_string(scheme));
}
BENCHMARK(BM_ProgramArray)->ArgsProduct({{4, 16, 64}, {0, 1}});

static void BM_SmallFrame(benchmark::State& state) {
  FrameConfig cfg;
  cfg.n_c = 64;
  cfg.symbols = 64;
  cfg.backend = state.range(0) ? Backend::rram : Backend::digital;
  Rng rng(7);
  const StaticOperators ops = prepare_operators(cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(run_frame(cfg, rng, {&ops}));
  state.SetLabel(to_string(cfg.backend));
}
BENCHMARK(BM_SmallFrame)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
