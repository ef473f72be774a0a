#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "regulab/dual.hpp"
#include "regulab/ekeland.hpp"
#include "regulab/oracle.hpp"
#include "regulab/slope.hpp"

using namespace regulab;

namespace {

Vec s(double a) { return Vec::Constant(1, a); }

RegularityQuery query(double alpha) {
  RegularityQuery q;
  q.xbar = s(0);
  q.ybar = s(0);
  q.pbar = s(0);
  q.alpha = alpha;
  q.delta = Extent(0.5);
  q.mu = Extent(0.5);
  q.eta = Extent(0.5);
  return q;
}

ScanGrids grids(int xres, int pres) {
  ScanGrids g;
  g.x = GridSpec(s(-1), s(1), xres);
  g.p = GridSpec(s(-1), s(1), pres);
  return g;
}

void BM_Oracle(benchmark::State& st) {
  const auto f = SetValuedMap::linear_diff(1);
  const auto g = grids(static_cast<int>(st.range(0)), 21);
  for (auto _ : st) benchmark::DoNotOptimize(check_subreg_uniform(f, query(0.5), g).margin);
}
BENCHMARK(BM_Oracle)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_Modulus(benchmark::State& st) {
  const auto f = SetValuedMap::square_diff();
  const auto g = grids(static_cast<int>(st.range(0)), 21);
  for (auto _ : st) benchmark::DoNotOptimize(estimate_modulus(f, query(0.5), g).value);
}
BENCHMARK(BM_Modulus)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_LocalSlopeCheck(benchmark::State& st) {
  const auto f = SetValuedMap::linear_diff(1);
  const auto g = grids(static_cast<int>(st.range(0)), 11);
  for (auto _ : st) benchmark::DoNotOptimize(check_corollary_C22(f, query(0.5), g).margin);
}
BENCHMARK(BM_LocalSlopeCheck)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_NonlocalSlopeCheck(benchmark::State& st) {
  const auto f = SetValuedMap::linear_diff(1);
  const auto g = grids(static_cast<int>(st.range(0)), 11);
  for (auto _ : st) benchmark::DoNotOptimize(check_theorem_P1(f, query(0.5), g).margin);
}
BENCHMARK(BM_NonlocalSlopeCheck)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_SubdifferentialCheck(benchmark::State& st) {
  const auto f = SetValuedMap::square_diff();
  const auto g = grids(static_cast<int>(st.range(0)), 11);
  for (auto _ : st) benchmark::DoNotOptimize(check_P5(f, query(0.5), g, {}, ConeKind::Frechet).margin);
}
BENCHMARK(BM_SubdifferentialCheck)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_NormalConeCheck(benchmark::State& st) {
  const auto f = SetValuedMap::square_diff();
  const auto g = grids(static_cast<int>(st.range(0)), 11);
  for (auto _ : st) benchmark::DoNotOptimize(check_T2(f, query(0.5), g).margin);
}
BENCHMARK(BM_NormalConeCheck)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_CoderivativeCheck(benchmark::State& st) {
  const auto f = SetValuedMap::square_diff();
  const auto g = grids(static_cast<int>(st.range(0)), 11);
  for (auto _ : st) {
    benchmark::DoNotOptimize(check_C33_C34(f, query(0.5), g, CoderivativeForm::Ball, 0.5).margin);
  }
}
BENCHMARK(BM_CoderivativeCheck)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_Evp(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec> pts;
  std::vector<double> vals;
  for (int i = 0; i < n; ++i) {
    Vec x(3);
    x << u(rng), u(rng), u(rng);
    pts.push_back(x);
    vals.push_back(x.squaredNorm() + 0.1 * std::sin(9 * x[0]));
  }
  double lo = vals[0];
  for (double v : vals) lo = std::min(lo, v);
  const double eps = vals[0] - lo + 1e-9;
  for (auto _ : st) benchmark::DoNotOptimize(evp_search(pts, vals, 0, eps, 0.5).xhat_index);
}
BENCHMARK(BM_Evp)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
