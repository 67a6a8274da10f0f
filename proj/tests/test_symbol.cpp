#include "heateta/symbol.hpp"

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>

#include "doctest.h"

using namespace heateta;

namespace {

struct Lcg {
  uint64_t s = 0x9E3779B97F4A7C15ULL;
  uint32_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return (uint32_t)(s >> 33);
  }
  ExactScalar scalar() {
    long re = (long)(next() % 5) - 2;
    long im = (long)(next() % 5) - 2;
    return ExactScalar(Rational(re), Rational(im));
  }
  CliffordCoef coef(int n, int p) {
    CliffordCoef g(n, p);
    for (int w = 0; w < 2; ++w) {
      Mat m(p);
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) m.at(r, c) = scalar();
      g += CliffordCoef::word(n, p, next() % (1u << n), std::move(m));
    }
    return g;
  }
  // Random differential symbol: polynomial in x and xi, optional i*tau term.
  CliffordExpansion diff_symbol(int n, int p, bool with_tau) {
    CliffordExpansion e(n, p);
    for (int t = 0; t < 4; ++t) {
      TermKey key;
      for (int i = 0; i < n; ++i) {
        key.alpha[i] = (uint8_t)(next() % 3);
        key.beta[i] = (uint8_t)(next() % 3);
      }
      e.add_term(key, coef(n, p));
    }
    if (with_tau) {
      TermKey key;
      key.tau = 1;
      e.add_term(key, coef(n, p));
    }
    return e;
  }
};

// Polynomials in (x, t) with graded coefficients: the quantization oracle.
// A symbol term x^alpha xi^beta (i tau)^tau quantizes to the operator
// x^alpha D_x^beta d_t^tau with D = -i d/dx, acting on the left.
using Poly = std::map<std::pair<MultiIndex, int>, CliffordCoef>;

void poly_add(Poly& p, const std::pair<MultiIndex, int>& mono, const CliffordCoef& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

Poly apply_operator(const CliffordExpansion& sym, const Poly& u) {
  const int n = sym.n();
  Poly out;
  for (const auto& [d, slot] : sym.components())
    for (const auto& [key, c] : slot) {
      REQUIRE(key.k == 0);  // differential symbols only
      for (const auto& [mono, g] : u) {
        const auto& [mu, mt] = mono;
        if (!mi_leq(key.beta, mu)) continue;
        ExactScalar f(1);
        MultiIndex nu = mu;
        for (int i = 0; i < n; ++i)
          for (int s = 0; s < key.beta[i]; ++s) {
            f *= ExactScalar((long)nu[i]);
            nu[i] -= 1;
          }
        f *= i_pow(-mi_order(key.beta));
        int t_out = mt;
        if (key.tau) {
          if (mt == 0) continue;
          f *= ExactScalar((long)mt);
          t_out -= 1;
        }
        if (f.is_zero()) continue;
        poly_add(out, {mi_add(nu, key.alpha), t_out}, (c * f) * g);
      }
    }
  return out;
}

Poly random_poly(Lcg& rng, int n, int p) {
  Poly u;
  for (int t = 0; t < 4; ++t) {
    MultiIndex mu{};
    for (int i = 0; i < n; ++i) mu[i] = (uint8_t)(rng.next() % 4);
    poly_add(u, {mu, (int)(rng.next() % 3)}, rng.coef(n, p));
  }
  return u;
}

}  // namespace

TEST_CASE("term grading") {
  TermKey k;
  k.alpha = mi_unit(0);
  k.beta = mi_add(mi_unit(1), mi_unit(1));
  CHECK(k.xdeg() == 1);
  CHECK(k.pdeg() == 2);
  CHECK(k.w() == 1);
  k.k = 2;
  CHECK(k.pdeg() == -2);
  TermKey t;
  t.tau = 1;
  CHECK(t.pdeg() == 2);
  CHECK(to_string(t) == "(i tau)");
  CHECK(to_string(k) == "x1 xi2^2 R^-2");
}

TEST_CASE("expansions merge and prune") {
  CliffordExpansion e(2, 1);
  TermKey key;
  key.beta = mi_unit(0);
  e.add_term(key, CliffordCoef::unit(2, 1));
  e.add_term(key, CliffordCoef::scalar(2, 1, ExactScalar(-1)));
  CHECK(e.is_zero());
  TermKey bad;
  bad.tau = 1;
  bad.k = 1;
  CHECK_THROWS_AS(e.add_term(bad, CliffordCoef::unit(2, 1)), CheckError);
}

TEST_CASE("xi derivative of the resolvent") {
  // d/dxi_1 R^{-1} = -2 xi_1 R^{-2}.
  auto r = CliffordExpansion::resolvent_power(3, 1, 1);
  auto d = deriv_xi(r, 1);
  TermKey expect;
  expect.beta = mi_unit(0);
  expect.k = 2;
  REQUIRE(d.term_count() == 1);
  const TermMap<Basis::Clifford>* slot = d.component(-3);
  REQUIRE(slot);
  REQUIRE(slot->count(expect));
  CHECK(slot->at(expect) == CliffordCoef::scalar(3, 1, ExactScalar(-2)));
  CHECK(check_homogeneity(d));
}

TEST_CASE("tau against a resolvent rewrites exactly") {
  // (i tau) R^{-1} = 1 - |xi|^2 R^{-1}, an identity in the phase variables.
  const int n = 2;
  auto tau = CliffordExpansion::time_partial(n, 1);
  auto r = CliffordExpansion::resolvent_power(n, 1, 1);
  auto prod = mul(tau, r);
  CHECK(check_homogeneity(prod));
  CliffordExpansion expect(n, 1);
  expect.add_term(TermKey{}, CliffordCoef::unit(n, 1));
  for (int i = 0; i < n; ++i) {
    TermKey sq;
    sq.beta[i] = 2;
    sq.k = 1;
    expect.add_term(sq, CliffordCoef::scalar(n, 1, ExactScalar(-1)));
  }
  CHECK(!trusted_diff(prod, expect));
  // Two time factors cannot be represented.
  CHECK_THROWS_AS(mul(tau, tau), CheckError);
}

TEST_CASE("composition matches operator application on polynomials") {
  Lcg rng;
  const int n = 2, p = 2;
  for (int rep = 0; rep < 8; ++rep) {
    auto a = rng.diff_symbol(n, p, rep % 2 == 0);
    auto b = rng.diff_symbol(n, p, false);
    auto ab = compose(a, b);
    CHECK(check_homogeneity(ab));
    for (int urep = 0; urep < 3; ++urep) {
      Poly u = random_poly(rng, n, p);
      Poly direct = apply_operator(ab, u);
      Poly nested = apply_operator(a, apply_operator(b, u));
      CHECK(direct == nested);
    }
  }
}

TEST_CASE("composition is associative") {
  Lcg rng;
  const int n = 2, p = 2;
  for (int rep = 0; rep < 6; ++rep) {
    auto a = rng.diff_symbol(n, p, false);
    auto b = rng.diff_symbol(n, p, false);
    auto c = rng.diff_symbol(n, p, false);
    auto left = compose(compose(a, b), c);
    auto right = compose(a, compose(b, c));
    auto diff = trusted_diff(left, right);
    CAPTURE(diff ? *diff : "equal");
    CHECK(!diff);
  }
}

TEST_CASE("composition reduces to the pointwise product without x dependence") {
  Lcg rng;
  const int n = 2, p = 2;
  auto a = rng.diff_symbol(n, p, false);
  // Strip x dependence from b.
  auto braw = rng.diff_symbol(n, p, false);
  CliffordExpansion b(n, p);
  for (const auto& [d, slot] : braw.components())
    for (const auto& [key, c] : slot) {
      TermKey k2 = key;
      k2.alpha = MultiIndex{};
      b.add_term(k2, c);
    }
  CHECK(!trusted_diff(compose(a, b), mul(a, b)));
}

TEST_CASE("floors certify and refuse over-asking") {
  const int n = 2;
  CliffordExpansion a(n, 1);
  a.add_term(TermKey{}, CliffordCoef::unit(n, 1));
  TermKey xxi;
  xxi.alpha = mi_unit(0);
  xxi.beta = mi_unit(0);
  a.add_term(xxi, CliffordCoef::unit(n, 1));
  a.restrict_floors(kNoFloor, -1);  // claim: exact only for w >= -1
  CHECK(a.floor_w() == -1);

  CliffordExpansion b(n, 1);
  TermKey sq;
  sq.beta[0] = 2;
  b.add_term(sq, CliffordCoef::unit(n, 1));  // w = 2

  auto prod = compose(a, b);
  CHECK(prod.floor_w() == 1);  // -1 + max_w(b)
  ComposeOptions opts;
  opts.want_floor_w = 0;
  CHECK_THROWS_AS(compose(a, b, opts), BudgetError);
  opts.want_floor_w = 2;
  CHECK(compose(a, b, opts).floor_w() == 2);
}

TEST_CASE("homogeneity scale checks") {
  TermKey k;
  k.beta[0] = 2;
  k.k = 2;
  CHECK(parabolic_scale_check(k, -2, Rational(2)));
  CHECK(parabolic_scale_check(k, -2, Rational(-1)));
  CHECK(!parabolic_scale_check(k, -1, Rational(2)));
  // Parity: odd xi degree flips under lambda = -1.
  TermKey odd;
  odd.beta[0] = 1;
  odd.k = 1;
  CHECK(parabolic_scale_check(odd, -1, Rational(-1)));
  CHECK(!parabolic_scale_check(odd, 0, Rational(2)));
}

TEST_CASE("exact gaussian moments") {
  CHECK(gaussian_moment_exact({}) == Rational(1));
  CHECK(gaussian_moment_exact({0, 0}) == Rational(1));
  CHECK(gaussian_moment_exact({2}) == Rational(1, 2));
  CHECK(gaussian_moment_exact({4}) == Rational(3, 4));
  CHECK(gaussian_moment_exact({6}) == Rational(15, 8));
  CHECK(gaussian_moment_exact({1}) == Rational(0));
  CHECK(gaussian_moment_exact({2, 4, 1}) == Rational(0));
  CHECK(gaussian_moment_exact({2, 2}) == Rational(1, 4));
}

TEST_CASE("diagonal inverse transform") {
  const int n = 3;
  auto r = CliffordExpansion::resolvent_power(n, 1, 1);
  auto v = inverse_fourier_diag(r, -2);
  CHECK(v.value == CliffordCoef::unit(n, 1));
  CHECK(inverse_fourier_diag(r, -4).value.is_zero());

  // xi_1^2 R^{-2} at t = 1: (1!!) 2^{-1} / 1! = 1/2.
  CliffordExpansion e(n, 1);
  TermKey k;
  k.beta[0] = 2;
  k.k = 2;
  e.add_term(k, CliffordCoef::unit(n, 1));
  CHECK(inverse_fourier_diag(e, -2).value == CliffordCoef::scalar(n, 1, ExactScalar(Rational(1, 2))));

  // Odd xi exponents and x factors vanish on the diagonal; k = 0 lives at t = 0.
  CliffordExpansion dead(n, 1);
  TermKey odd;
  odd.beta[0] = 1;
  odd.beta[1] = 1;
  odd.k = 2;
  dead.add_term(odd, CliffordCoef::unit(n, 1));
  TermKey xk;
  xk.alpha = mi_unit(0);
  xk.beta[0] = 2;
  xk.k = 2;
  dead.add_term(xk, CliffordCoef::unit(n, 1));
  CHECK(inverse_fourier_diag(dead, -2).value.is_zero());
  CliffordExpansion poly(n, 1);
  poly.add_term(TermKey{}, CliffordCoef::unit(n, 1));
  CHECK(inverse_fourier_diag(poly, 0).value.is_zero());

  // Scaling: R^{-1} at t = s^2 carries s^{2-2-n} = s^{-3} for n = 3.
  Rational s(2);
  auto vs = inverse_fourier_diag_at(r, -2, s);
  CHECK(vs.value == CliffordCoef::scalar(n, 1, ExactScalar(Rational(1, 8))));

  // Floor protection.
  CliffordExpansion trunc = r;
  trunc.restrict_floors(-2, kNoFloor);
  CHECK_THROWS_AS(inverse_fourier_diag(trunc, -3), BudgetError);
}

TEST_CASE("trusted comparison reports first mismatch") {
  const int n = 2;
  auto a = CliffordExpansion::resolvent_power(n, 1, 1);
  auto b = CliffordExpansion::resolvent_power(n, 1, 1);
  CHECK(!trusted_diff(a, b));
  b.add_term(TermKey{}, CliffordCoef::unit(n, 1));
  auto d = trusted_diff(a, b);
  REQUIRE(d);
  CHECK(d->find("right") != std::string::npos);
  // Below-floor content is ignored.
  CliffordExpansion c = a;
  c.restrict_floors(0, kNoFloor);  // drops the R^{-1} term entirely
  CHECK(!trusted_diff(c, CliffordExpansion::zero(n, 1)));
}

TEST_CASE("left and right coefficient multiplication") {
  const int n = 3, p = 1;
  auto e1 = CliffordCoef::generator(n, p, 1);
  auto e2 = CliffordCoef::generator(n, p, 2);
  auto base = CliffordExpansion::constant(n, p, e1);
  auto lm = base.left_mul(e2);
  auto rm = base.right_mul(e2);
  auto lv = lm.component(0)->begin()->second;
  auto rv = rm.component(0)->begin()->second;
  CHECK(lv == e2 * e1);
  CHECK(rv == e1 * e2);
  CHECK(lv == -rv);
}

TEST_CASE("composition is worker-count independent") {
  Lcg rng;
  rng.s ^= 0xD1B54A32D192ED03ULL;
  CliffordExpansion a(3, 2), b(3, 2);
  for (int t = 0; t < 24; ++t) {
    a += rng.diff_symbol(3, 2, t == 0);
    b += rng.diff_symbol(3, 2, false);
  }
  REQUIRE(a.term_count() >= 64);  // crosses the slicing threshold

  const char* old = std::getenv("HEATETA_THREADS");
  std::string saved = old ? old : "";
  setenv("HEATETA_THREADS", "7", 1);
  auto c7 = compose(a, b);
  setenv("HEATETA_THREADS", "1", 1);
  auto c1 = compose(a, b);
  if (old)
    setenv("HEATETA_THREADS", saved.c_str(), 1);
  else
    unsetenv("HEATETA_THREADS");

  CHECK(c1.components() == c7.components());
  CHECK(c1.floor_deg() == c7.floor_deg());
  CHECK(c1.floor_w() == c7.floor_w());
  CHECK(c1.top() == c7.top());
}
