#include "heateta/heat.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "heateta/oracle.hpp"

using namespace heateta;

namespace {

struct Lcg {
  uint64_t s = 0x4CF5AD432745937FULL;
  uint32_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return (uint32_t)(s >> 33);
  }
  Rational rat() {
    Rational r((long)(next() % 7) - 3, 1 + (long)(next() % 3));
    r.canonicalize();
    return r;
  }
};

CurvatureInput random_curvature3(Lcg& rng, int p, int nonzero) {
  CurvatureInput in(3, p);
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int t = 0; t < nonzero; ++t) {
    int P = (int)(rng.next() % 3), Q = (int)(rng.next() % 3);
    if (P > Q) std::swap(P, Q);
    Rational v = rng.rat();
    if (v == 0) continue;
    int i = pairs[P][0], j = pairs[P][1], k = pairs[Q][0], l = pairs[Q][1];
    if (in.riem(i, j, k, l) != 0) continue;
    set_riemann(in, i, j, k, l, v);
  }
  return in;
}

Mat skewh(int p, Lcg& rng) {
  Mat m(p);
  for (int r = 0; r < p; ++r) {
    m.at(r, r) = ExactScalar(Rational(0), rng.rat());
    for (int c = r + 1; c < p; ++c) {
      ExactScalar v(rng.rat(), rng.rat());
      m.at(r, c) = v;
      m.at(c, r) = -v.conj();
    }
  }
  return m;
}

void add_twist(CurvatureInput& in, Lcg& rng) {
  for (int i = 0; i < in.n; ++i)
    for (int j = i + 1; j < in.n; ++j) {
      Mat m = skewh(in.p, rng);
      in.f(i, j) = m;
      in.f(j, i) = -m;
    }
}

// xi^2 + i tau + V on the line, with the potential handed over as a jet
// trusted through x^valid.
CliffordExpansion line_generator(const ScalarJet& v, int valid) {
  CliffordExpansion e(1, 1);
  TermKey k2;
  k2.beta[0] = 2;
  e.add_term(k2, CliffordCoef::unit(1, 1));
  e += CliffordExpansion::time_partial(1, 1);
  e += jet_symbol(1, 1, v, valid, CliffordCoef::unit(1, 1));
  return e;
}

}  // namespace

TEST_CASE("flat generator has the bare resolvent expansion") {
  CurvatureInput in(3, 1);
  auto S = synchronous_jets(in, 4);
  auto gen = heat_generator_symbol(S);
  auto cs = heat_coefficients(gen, 2);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].degree == -2);
  CHECK(cs[0].value == CliffordCoef::unit(3, 1));
  CHECK(cs[1].value.is_zero());
  CHECK(cs[2].value.is_zero());
}

TEST_CASE("line potential reproduces the classical corrections") {
  // K(x,x,t) = (4 pi t)^{-1/2} (1 - V t + (V^2/2 - V''/6) t^2 + ...), so with
  // V(0) = 5/3 and V''(0) = 7 the first values are 1, -5/3, 25/18 - 7/6 = 2/9.
  ScalarJet v;
  MultiIndex m{};
  v[m] = Rational(5, 3);
  m[0] = 1;
  v[m] = Rational(-2);
  m[0] = 2;
  v[m] = Rational(7, 2);
  auto cs = heat_coefficients(line_generator(v, 6), 4);
  REQUIRE(cs.size() == 5);
  CHECK(cs[0].value == CliffordCoef::unit(1, 1));
  CHECK(cs[1].value.is_zero());
  CHECK(cs[2].value == CliffordCoef::scalar(1, 1, ExactScalar(Rational(-5, 3))));
  CHECK(cs[3].value.is_zero());
  CHECK(cs[4].value == CliffordCoef::scalar(1, 1, ExactScalar(Rational(2, 9))));
}

TEST_CASE("second coefficient is the Lichnerowicz potential combination") {
  // nu_{-4} of exp(-t D^2) equals kappa/6 - E at the base point, where E is
  // the endomorphism kappa/4 + (1/2) c^k c^l F_kl of the squared operator.
  Lcg rng;
  for (int rep = 0; rep < 2; ++rep) {
    auto in = random_curvature3(rng, 2, 3);
    add_twist(in, rng);
    Rational kappa;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) kappa += in.riem(i, j, j, i);
    CAPTURE(to_string(kappa));

    auto S = synchronous_jets(in, 4);
    auto cs = heat_coefficients(heat_generator_symbol(S), 2);
    CHECK(cs[0].value == CliffordCoef::unit(3, 2));
    CHECK(cs[1].value.is_zero());

    CliffordCoef expected =
        CliffordCoef::scalar(3, 2, ExactScalar(Rational(kappa / -12)));
    for (int k = 0; k < 3; ++k)
      for (int l = k + 1; l < 3; ++l) {
        Mat f = in.f(k, l);
        f *= ExactScalar(-1);
        expected += CliffordCoef::word(3, 2, (1u << k) | (1u << l), f);
      }
    CHECK(cs[2].value == expected);
  }
}

TEST_CASE("circle potential matches the spectral oracle") {
  // V(x) = 1/4 + cos(2x)/2 on the circle of circumference 2 pi. The engine
  // integrates its pointwise coefficients over the eight-point grid
  // x_j = pi j / 4 (trapezoid sums are exact below frequency eight); the
  // oracle diagonalizes the operator in Fourier modes and fits powers of t.
  const int cosq[4] = {1, 0, -1, 0};  // cos(pi r / 2)
  Rational braw[3];
  for (int j = 0; j < 8; ++j) {
    ScalarJet v;
    for (int d = 0; d <= 6; ++d) {
      // d-th derivative of V at x_j, divided by d!.
      Rational c = d == 0 ? Rational(Rational(1, 4) + Rational(1, 2) * cosq[j % 4])
                          : Rational(Rational(1L << d, 2) / factorial(d) * cosq[(j + d) % 4]);
      if (c == 0) continue;
      MultiIndex m{};
      m[0] = (uint8_t)d;
      v[m] = c;
    }
    auto cs = heat_coefficients(line_generator(v, 6), 4);
    for (const auto& dv : cs) {
      if (dv.degree % 2 != 0) {
        CHECK(dv.value.is_zero());
        continue;
      }
      braw[(-dv.degree - 2) / 2] += dv.value.as_scalar()->re();
    }
  }
  // Grid sums of 1, -V, V^2/2 - V''/6 for this V.
  CHECK(braw[0] == 8);
  CHECK(braw[1] == -2);
  CHECK(braw[2] == Rational(3, 4));

  const double pref = (2.0 * M_PI / 8.0) / std::sqrt(4.0 * M_PI);
  const double b0 = pref * braw[0].get_d();
  const double b1 = pref * braw[1].get_d();
  const double b2 = pref * braw[2].get_d();
  CHECK(b0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));

  std::vector<double> ts, ys;
  for (int i = 0; i < 10; ++i) {
    double t = 0.003 * std::pow(1.4, i);
    ts.push_back(t);
    ys.push_back(oracle::circle_heat_trace({0.25, 0.0, 0.5}, t));
  }
  // The extra exponent 5/2 absorbs the next order of the expansion.
  auto fit = oracle::fit_power_law(ts, ys, {-0.5, 0.5, 1.5, 2.5});
  CHECK(std::fabs(fit[0] - b0) < 1e-7);
  CHECK(std::fabs(fit[1] - b1) < 1e-5);
  CHECK(std::fabs(fit[2] - b2) < 2e-3);
}

TEST_CASE("odd-trace cancellation in dimension three") {
  auto check_report = [](const CurvatureInput& in) {
    auto rep = bismut_freed_check(in, 1);
    CHECK(rep.cancels);
    REQUIRE(rep.traces.size() == 2);
    CHECK(rep.traces[0].is_zero());
    CHECK(rep.traces[1].is_zero());
    REQUIRE(rep.diag.size() == 4);
    // The polynomial-metric representative is even and the operator odd
    // under (x, xi) -> (-x, -xi), so the diagonal values themselves vanish;
    // the trace statement is the part that survives on general geometries.
    for (const auto& dv : rep.diag) CHECK(dv.value.is_zero());
  };

  SUBCASE("flat") { check_report(CurvatureInput(3, 1)); }
  SUBCASE("single curvature plane") {
    CurvatureInput in(3, 1);
    set_riemann(in, 0, 1, 0, 1, Rational(1));
    check_report(in);
  }
  SUBCASE("flat with constant twist") {
    Lcg rng;
    CurvatureInput in(3, 2);
    add_twist(in, rng);
    check_report(in);
  }
  SUBCASE("curvature and twist together") {
    Lcg rng;
    rng.s ^= 0x2545F4914F6CDD1DULL;
    auto in = random_curvature3(rng, 2, 3);
    add_twist(in, rng);
    check_report(in);
  }
}

TEST_CASE("rejects even dimensions and negative orders") {
  CHECK_THROWS_AS(bismut_freed_check(CurvatureInput(2, 1), 1), ValidationError);
  CHECK_THROWS_AS(eta_diagonal(CurvatureInput(3, 1), -1), ValidationError);
}

TEST_CASE("shallow jets exhaust the budget") {
  CurvatureInput in(3, 1);
  set_riemann(in, 0, 1, 0, 1, Rational(1));
  auto S = synchronous_jets(in, 3);
  auto gen = heat_generator_symbol(S);
  CHECK_THROWS_AS(heat_coefficients(gen, 2), BudgetError);
}

TEST_CASE("rescaled model comparison") {
  SUBCASE("flat model generator is the bare phase") {
    auto hm = model_heat_generator(CurvatureInput(3, 1));
    FormExpansion phase(3, 1);
    for (int i = 1; i <= 3; ++i) {
      TermKey k;
      k.beta = mi_unit(i - 1);
      k.beta[i - 1] = 2;
      phase.add_term(k, FormCoef::unit(3, 1));
    }
    phase += FormExpansion::time_partial(3, 1);
    CHECK(!trusted_diff(hm, phase));
  }
  SUBCASE("curved and twisted input") {
    Lcg rng;
    rng.s ^= 0x94D049BB133111EBULL;
    auto in = random_curvature3(rng, 2, 3);
    add_twist(in, rng);
    auto rep = model_resolvent_check(in);
    CAPTURE(rep.detail);
    CHECK(rep.heat_top_weight == 2);
    CHECK(rep.parametrix_top_weight == -2);
    CHECK(rep.heat_model_matches);
    CHECK(rep.parametrix_model_matches);
    CHECK(rep.ok());
  }
}

TEST_CASE("eta singularity bookkeeping") {
  SUBCASE("synthetic trace data") {
    // A t^{-3/2} trace coefficient in n = 3 puts a pole at s = 2; a t^{-1/2}
    // one at s = 0. Zero values contribute nothing and poles come sorted.
    std::vector<DiagValue<Basis::Clifford>> diag;
    diag.push_back({-2, CliffordCoef::scalar(3, 1, ExactScalar(Rational(3, 2)))});
    diag.push_back({-3, CliffordCoef::zero(3, 1)});
    diag.push_back({-4, CliffordCoef::scalar(3, 1, ExactScalar(Rational(0), Rational(1, 4)))});
    auto sing = eta_singularities(3, diag);
    REQUIRE(sing.size() == 2);
    CHECK(sing[0].pole == 2);
    // spinor trace of a scalar is 2^{[n/2]} p times it.
    CHECK(sing[0].residue == ExactScalar(Rational(6)));
    CHECK(sing[1].pole == 0);
    CHECK(sing[1].residue == ExactScalar(Rational(0), Rational(1)));
  }
  SUBCASE("flat operator is locally holomorphic in the checked range") {
    auto sing = eta_singularities(3, eta_diagonal(CurvatureInput(3, 1), 1));
    CHECK(sing.empty());
  }
  SUBCASE("single plane, one level deeper") {
    CurvatureInput in(3, 1);
    set_riemann(in, 0, 1, 0, 1, Rational(1));
    auto sing = eta_singularities(3, eta_diagonal(in, 2));
    CHECK(sing.empty());
  }
}
