#include <benchmark/benchmark.h>

#include "heateta/geometry.hpp"
#include "heateta/heat.hpp"
#include "heateta/parametrix.hpp"
#include "heateta/symbol.hpp"

using namespace heateta;

namespace {

// Curved, twisted 3-dimensional input: one curvature plane plus a constant
// skew-Hermitian endomorphism on every coordinate plane.  Small numerators
// keep the rationals from ballooning so the numbers measure the algebra, not
// GMP reallocation pathology.
CurvatureInput sample_input(int p) {
  CurvatureInput in(3, p);
  set_riemann(in, 0, 1, 0, 1, Rational(1));
  set_riemann(in, 0, 2, 1, 2, Rational(-1, 2));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Mat m(p);
      for (int r = 0; r < p; ++r) m.at(r, r) = ExactScalar(Rational(0), Rational(1 + r, 3));
      if (p > 1) {
        m.at(0, 1) = ExactScalar(Rational(1, 2), Rational(1, 5));
        m.at(1, 0) = -m.at(0, 1).conj();
      }
      in.f(i, j) = m;
      in.f(j, i) = -m;
    }
  return in;
}

// Fully dense element of the n = 3 Clifford algebra with p x p matrix slots.
CliffordCoef dense_element(int p) {
  CliffordCoef g = CliffordCoef::zero(3, p);
  for (uint32_t mask = 0; mask < 8; ++mask) {
    Mat m(p);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c)
        m.at(r, c) = ExactScalar(Rational(1 + (int)mask + r, 2 + c), Rational(r - c, 3));
    g += CliffordCoef::word(3, p, mask, m);
  }
  return g;
}

void BM_clifford_product(benchmark::State& state) {
  const int p = (int)state.range(0);
  CliffordCoef a = dense_element(p);
  CliffordCoef b = a * ExactScalar(Rational(2, 7));
  for (auto _ : state) {
    CliffordCoef c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_clifford_product)->Arg(1)->Arg(2)->Arg(4);

void BM_spinor_trace(benchmark::State& state) {
  CliffordCoef a = dense_element((int)state.range(0));
  for (auto _ : state) {
    ExactScalar t = spinor_trace(a);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_spinor_trace)->Arg(1)->Arg(4);

// Dirac square at increasing jet depth: composition cost is driven by the
// number of retained (key, coefficient) pairs, which grows with the depth of
// the x-jet truncation.
void BM_compose_dirac_square(benchmark::State& state) {
  const int depth = (int)state.range(0);
  auto S = synchronous_jets(sample_input(1), depth);
  auto d = dirac_symbol(S);
  for (auto _ : state) {
    auto sq = compose(d, d);
    benchmark::DoNotOptimize(sq);
  }
  state.SetComplexityN(depth);
}
BENCHMARK(BM_compose_dirac_square)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

// Parametrix recursion down to symbol degree -k.  Each extra degree composes
// the full generator against everything found so far, so the growth here is
// the growth of the whole pipeline.
void BM_parametrix(benchmark::State& state) {
  const int k = (int)state.range(0);
  auto S = synchronous_jets(sample_input(1), k);
  auto h = heat_generator_symbol(S);
  for (auto _ : state) {
    auto q = parametrix(h, -k, -k);
    benchmark::DoNotOptimize(q);
  }
  state.SetComplexityN(k);
}
BENCHMARK(BM_parametrix)->DenseRange(4, 6, 1)->Unit(benchmark::kMillisecond);

// End-to-end cancellation check: jets, Dirac composite, diagonal integrals,
// spinor traces.  l_max = 1 is the depth the odd-trace theorem needs.
void BM_cancellation_check(benchmark::State& state) {
  CurvatureInput in = sample_input((int)state.range(0));
  for (auto _ : state) {
    BismutFreedReport rep = bismut_freed_check(in, 1);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_cancellation_check)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
