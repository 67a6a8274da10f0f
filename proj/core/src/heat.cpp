#include "heateta/heat.hpp"

#include <algorithm>
#include <string>

#include "heateta/parametrix.hpp"

namespace heateta {

namespace {

std::vector<DiagValue<Basis::Clifford>> diag_range(const CliffordExpansion& a, int d_top,
                                                   int d_bot) {
  std::vector<DiagValue<Basis::Clifford>> out;
  for (int d = d_top; d >= d_bot; --d) out.push_back(inverse_fourier_diag(a, d));
  return out;
}

}  // namespace

std::vector<DiagValue<Basis::Clifford>> heat_coefficients(const CliffordExpansion& generator,
                                                          int l_max) {
  if (l_max < 0) throw ValidationError("expansion order must be nonnegative");
  auto q = parametrix(generator, -2 - l_max, -2 - l_max);
  return diag_range(q, -2, -2 - l_max);
}

std::vector<DiagValue<Basis::Clifford>> composite_heat_coefficients(
    const CliffordExpansion& left, const CliffordExpansion& generator, int l_max) {
  if (l_max < 0) throw ValidationError("expansion order must be nonnegative");
  auto q = parametrix(generator, -2 - l_max, -2 - l_max);
  return diag_range(compose(left, q), -1, -1 - l_max);
}

FormExpansion model_heat_generator(const CurvatureInput& in) {
  validate_curvature(in);
  const int n = in.n, p = in.p;
  // Theta_{ib} = 1/8 R_{ibkl} dx^k dx^l: the two-form valued antisymmetric
  // matrix behind the rescaled connection coefficients.
  const ExactScalar eighth(Rational(1, 8));
  std::vector<FormCoef> theta(n * n, FormCoef::zero(n, p));
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (k == l) continue;
          const Rational& v = in.riem(i, b, k, l);
          if (v == 0) continue;
          theta[i * n + b] += FormCoef::generator(n, p, k + 1) * FormCoef::generator(n, p, l + 1) *
                              (eighth * ExactScalar(v));
        }

  // H = i tau - sum_i s_i # s_i with s_i = i xi_i - Theta_{ib} x^b. The
  // composition correction term carries Theta_{ii} = 0, so this expands to
  // |xi|^2 + i tau + 2i xi_i Theta_{ib} x^b - (Theta_{ib} x^b)(Theta_{ic} x^c).
  FormExpansion h = FormExpansion::time_partial(n, p);
  for (int i = 0; i < n; ++i) {
    FormExpansion s = FormExpansion::partial(n, p, i + 1);
    for (int b = 0; b < n; ++b) {
      if (theta[i * n + b].is_zero()) continue;
      TermKey key;
      key.alpha = mi_unit(b);
      s.add_term(key, -theta[i * n + b]);
    }
    h -= compose(s, s);
  }

  // Twist contribution 1/2 F_ab(0) dx^a dx^b.
  FormCoef fw = FormCoef::zero(n, p);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) fw += FormCoef::word(n, p, (1u << a) | (1u << b), in.f(a, b));
  if (!fw.is_zero()) h += FormExpansion::constant(n, p, fw);
  return h;
}

namespace {

// Diagonal data of D exp(-t D^2) through stored degree -2-2*l_max. The
// deepest trace level pins the parametrix floors (-3-2*l_max) and those pin
// the jet depth: the generator's w floor is 2 - depth and must certify two
// above the parametrix floor.
std::vector<DiagValue<Basis::Clifford>> dirac_composite_diag(const CurvatureInput& in, int l_max,
                                                             int depth_hint) {
  if (l_max < 0) throw ValidationError("expansion order must be nonnegative");
  const int depth = depth_hint >= 2 ? depth_hint : 2 * l_max + 3;
  auto S = synchronous_jets(in, depth);
  auto d = dirac_symbol(S);
  auto h = heat_generator_symbol(S);
  return composite_heat_coefficients(d, h, 2 * l_max + 1);
}

}  // namespace

BismutFreedReport bismut_freed_check(const CurvatureInput& in, int l_max, int depth_hint) {
  validate_curvature(in);
  if ((in.n & 1) == 0)
    throw ValidationError("the cancellation statement concerns odd dimensions; got n = " +
                          std::to_string(in.n));

  BismutFreedReport rep;
  rep.n = in.n;
  rep.p = in.p;
  rep.l_max = l_max;
  rep.diag = dirac_composite_diag(in, l_max, depth_hint);
  rep.cancels = true;
  for (const auto& dv : rep.diag) {
    if (dv.degree % 2 != 0) {
      // Odd stored degree forces an odd xi exponent somewhere, so the
      // Gaussian moments vanish; a survivor means the machinery is broken.
      if (!dv.value.is_zero())
        throw CheckError("parity violation: nonzero diagonal value at degree " +
                         std::to_string(dv.degree));
      continue;
    }
    ExactScalar tr = spinor_trace(dv.value);
    // Trace level l sits at degree -2-2l and multiplies t^{l - n/2}; the
    // cancellation statement covers exponents below 1/2.
    const int l = (-dv.degree - 2) / 2;
    if (2 * l < in.n && !tr.is_zero()) rep.cancels = false;
    rep.traces.push_back(std::move(tr));
  }
  return rep;
}

ModelReport model_resolvent_check(const CurvatureInput& in) {
  validate_curvature(in);
  const int depth = 5;
  auto S = synchronous_jets(in, depth);
  auto h = heat_generator_symbol(S);

  ModelReport rep;
  rep.heat_top_weight = getzler_top(h);
  auto hm = model_heat_generator(in);
  if (auto diff = trusted_diff(getzler_model(h), hm)) {
    rep.detail = "generator: " + *diff;
  } else {
    rep.heat_model_matches = true;
  }

  auto q = parametrix(h, -4, -5);
  rep.parametrix_top_weight = getzler_top(q);
  // The model generator has an x-independent leading part, so its parametrix
  // terminates without a w floor and the comparison window is set by q alone.
  auto qm = parametrix(hm, -4, kNoFloor);
  if (auto diff = trusted_diff(getzler_bucket(q, -2), qm)) {
    if (rep.detail.empty()) rep.detail = "parametrix: " + *diff;
  } else {
    rep.parametrix_model_matches = true;
  }
  return rep;
}

std::vector<EtaSingularity> eta_singularities(
    int n, const std::vector<DiagValue<Basis::Clifford>>& diag) {
  std::vector<EtaSingularity> out;
  for (const auto& dv : diag) {
    ExactScalar c = spinor_trace(dv.value);
    if (c.is_zero()) continue;
    // The trace term c t^{(-d-2-n)/2} meets t^{(s-1)/2} in the Mellin
    // integral, whose t->0 end contributes 2/(s - d - n - 1).
    out.push_back({dv.degree + n + 1, c * ExactScalar(2)});
  }
  std::sort(out.begin(), out.end(),
            [](const EtaSingularity& a, const EtaSingularity& b) { return a.pole > b.pole; });
  return out;
}

std::vector<DiagValue<Basis::Clifford>> eta_diagonal(const CurvatureInput& in, int l_max,
                                                     int depth_hint) {
  validate_curvature(in);
  return dirac_composite_diag(in, l_max, depth_hint);
}

}  // namespace heateta
