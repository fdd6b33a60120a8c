#include <benchmark/benchmark.h>

#include "pendinv/actions.hpp"
#include "pendinv/dynamics.hpp"
#include "pendinv/normalform.hpp"
#include "pendinv/pendulum.hpp"

using namespace pendinv;

static void BM_SeriesProduct(benchmark::State& st) {
  const Series2 J = J1_series(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(J * J);
}
BENCHMARK(BM_SeriesProduct)->Arg(10)->Arg(20)->Arg(40);

static void BM_LieNormalize(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(lie_normalize(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_LieNormalize)->Arg(10)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_BirkhoffByInversion(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(birkhoff_by_inversion(static_cast<int>(st.range(0)), false));
}
BENCHMARK(BM_BirkhoffByInversion)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_J1Series(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(J1_series(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_J1Series)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ActionI1(benchmark::State& st) {
  const auto m = static_cast<ActionMethod>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(action_I1(0.1, 0.2, m));
  st.SetLabel(to_string(m));
}
BENCHMARK(BM_ActionI1)
    ->Arg(static_cast<int>(ActionMethod::legendre_form))
    ->Arg(static_cast<int>(ActionMethod::lambda0_form))
    ->Arg(static_cast<int>(ActionMethod::quadrature));

static void BM_ActionI1Mpfr(benchmark::State& st) {
  PrecisionScope p(256);
  const Real h("0.1"), j2("0.2");
  for (auto _ : st) benchmark::DoNotOptimize(action_I1_legendre(h, j2));
}
BENCHMARK(BM_ActionI1Mpfr)->Unit(benchmark::kMicrosecond);

static void BM_RotationW(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(rotation_W_numeric(0.1, 0.2));
}
BENCHMARK(BM_RotationW);

static void BM_ModelW(benchmark::State& st) {
  const InvariantModel m = InvariantModel::displayed();
  for (auto _ : st) benchmark::DoNotOptimize(m.rotation_W(0.1, 0.2));
}
BENCHMARK(BM_ModelW);

static void BM_OrbitPeriod(benchmark::State& st) {
  IntegrateOptions o;
  o.record = false;
  const PhaseState s = turning_point_state(0.1, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(integrate_periods(s, 1, o));
}
BENCHMARK(BM_OrbitPeriod)->Unit(benchmark::kMicrosecond);

static void BM_NomeTheta(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(pendulum_S_from_theta(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_NomeTheta)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_InvariantFitSmall(benchmark::State& st) {
  FitOptions o;
  o.degree = 6;
  o.precision_bits = 128;
  for (auto _ : st) benchmark::DoNotOptimize(fit_invariant_S(o));
}
BENCHMARK(BM_InvariantFitSmall)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK_MAIN();
