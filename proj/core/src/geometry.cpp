#include "heateta/geometry.hpp"

#include <string>
#include <utility>

namespace heateta {

namespace {

std::string idx2(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }
std::string idx4(int i, int j, int k, int l) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
         "," + std::to_string(l + 1) + ")";
}

void jadd_to(ScalarJet& a, const ScalarJet& b, const Rational& s) {
  for (const auto& [mi, v] : b) {
    auto it = a.emplace(mi, Rational(0)).first;
    it->second += s * v;
    if (it->second == 0) a.erase(it);
  }
}

ScalarJet jmul(const ScalarJet& a, const ScalarJet& b, int cap) {
  ScalarJet out;
  for (const auto& [ma, va] : a) {
    int oa = mi_order(ma);
    if (oa > cap) continue;
    for (const auto& [mb, vb] : b) {
      if (oa + mi_order(mb) > cap) continue;
      auto it = out.emplace(mi_add(ma, mb), Rational(0)).first;
      it->second += va * vb;
      if (it->second == 0) out.erase(it);
    }
  }
  return out;
}

ScalarJet jderiv(const ScalarJet& a, int i) {
  ScalarJet out;
  for (const auto& [mi, v] : a) {
    if (mi[i] == 0) continue;
    MultiIndex m = mi;
    m[i] -= 1;
    out[m] = v * mi[i];
  }
  return out;
}

Rational jat0(const ScalarJet& a) {
  auto it = a.find(MultiIndex{});
  return it == a.end() ? Rational(0) : it->second;
}

ScalarJet jpart(const ScalarJet& a, int deg) {
  ScalarJet out;
  for (const auto& [mi, v] : a)
    if (mi_order(mi) == deg) out.emplace(mi, v);
  return out;
}

// Row-major n x n matrix of jets.
ScalarJet& mat_at(std::vector<ScalarJet>& m, int n, int i, int j) { return m[i * n + j]; }
const ScalarJet& mat_at(const std::vector<ScalarJet>& m, int n, int i, int j) {
  return m[i * n + j];
}

std::vector<ScalarJet> matjet_mul(const std::vector<ScalarJet>& a, const std::vector<ScalarJet>& b,
                                  int n, int cap) {
  std::vector<ScalarJet> out(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        jadd_to(mat_at(out, n, i, j), jmul(mat_at(a, n, i, m), mat_at(b, n, m, j), cap),
                Rational(1));
  return out;
}

}  // namespace

CurvatureInput::CurvatureInput(int n_, int p_) : n(n_), p(p_) {
  if (n < 1 || n > kMaxDim) throw ValidationError("space dimension must be between 1 and 8");
  if (p < 1) throw ValidationError("twisting rank must be positive");
  riemann.assign((size_t)n * n * n * n, Rational(0));
  twist.assign((size_t)n * n, Mat(p));
}

Rational& CurvatureInput::riem(int i, int j, int k, int l) {
  return riemann[(size_t)(((i * n + j) * n + k) * n + l)];
}
const Rational& CurvatureInput::riem(int i, int j, int k, int l) const {
  return riemann[(size_t)(((i * n + j) * n + k) * n + l)];
}
Mat& CurvatureInput::f(int i, int j) { return twist[(size_t)(i * n + j)]; }
const Mat& CurvatureInput::f(int i, int j) const { return twist[(size_t)(i * n + j)]; }

void set_riemann(CurvatureInput& in, int i, int j, int k, int l, const Rational& v) {
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= in.n || j >= in.n || k >= in.n || l >= in.n)
    throw ValidationError("curvature index out of range");
  const int sl[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                        {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}};
  const int sg[8] = {1, -1, -1, 1, 1, -1, -1, 1};
  for (int t = 0; t < 8; ++t) {
    Rational tv = sg[t] > 0 ? v : Rational(-v);
    Rational& slot = in.riem(sl[t][0], sl[t][1], sl[t][2], sl[t][3]);
    if (slot != 0 && slot != tv)
      throw CheckError("conflicting curvature assignment at " +
                       idx4(sl[t][0], sl[t][1], sl[t][2], sl[t][3]));
    slot = tv;
  }
}

void validate_curvature(const CurvatureInput& in) {
  if (in.n < 1 || in.n > kMaxDim) throw ValidationError("space dimension must be between 1 and 8");
  if (in.p < 1) throw ValidationError("twisting rank must be positive");
  if ((int)in.riemann.size() != in.n * in.n * in.n * in.n || (int)in.twist.size() != in.n * in.n)
    throw ValidationError("curvature arrays have the wrong size");
  const int n = in.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (in.riem(i, j, k, l) != -in.riem(j, i, k, l))
            throw ValidationError("curvature is not antisymmetric in its first pair at " +
                                  idx4(i, j, k, l));
          if (in.riem(i, j, k, l) != -in.riem(i, j, l, k))
            throw ValidationError("curvature is not antisymmetric in its second pair at " +
                                  idx4(i, j, k, l));
          if (in.riem(i, j, k, l) != in.riem(k, l, i, j))
            throw ValidationError("curvature is not pair symmetric at " + idx4(i, j, k, l));
          if (in.riem(i, j, k, l) + in.riem(j, k, i, l) + in.riem(k, i, j, l) != 0)
            throw ValidationError("curvature fails the first Bianchi identity at " +
                                  idx4(i, j, k, l));
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Mat& m = in.f(i, j);
      if (m.p() != in.p) throw ValidationError("twist matrix has the wrong size at " + idx2(i, j));
      if (!(m + in.f(j, i)).is_zero())
        throw ValidationError("twist curvature is not antisymmetric at " + idx2(i, j));
      if (!(m.adjoint() + m).is_zero())
        throw ValidationError("twist matrix is not skew-Hermitian at " + idx2(i, j));
    }
}

SynchronousJets synchronous_jets(const CurvatureInput& in, int depth) {
  validate_curvature(in);
  if (depth < 2) throw ValidationError("jet depth must be at least 2");
  const int n = in.n;
  const Rational third(1, 3);

  SynchronousJets S;
  S.n = n;
  S.p = in.p;
  S.depth = depth;

  // Metric: exact degree-2 polynomial.
  S.metric.assign((size_t)n * n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ScalarJet& g = mat_at(S.metric, n, i, j);
      if (i == j) g[MultiIndex{}] = 1;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Rational& r = in.riem(i, k, j, l);
          if (r == 0) continue;
          auto it = g.emplace(mi_add(mi_unit(k), mi_unit(l)), Rational(0)).first;
          it->second += third * r;
          if (it->second == 0) g.erase(it);
        }
    }

  // Radial gauge: g_ij x^j = x_i exactly.
  for (int i = 0; i < n; ++i) {
    ScalarJet acc;
    for (int j = 0; j < n; ++j)
      for (const auto& [mi, v] : mat_at(S.metric, n, i, j)) {
        auto it = acc.emplace(mi_add(mi, mi_unit(j)), Rational(0)).first;
        it->second += v;
        if (it->second == 0) acc.erase(it);
      }
    ScalarJet expect;
    expect[mi_unit(i)] = 1;
    if (acc != expect) throw CheckError("metric violates the radial gauge identity in row " +
                                        std::to_string(i + 1));
  }

  // Inverse metric by the finite Neumann series of the degree >= 2 part.
  {
    std::vector<ScalarJet> h((size_t)n * n), acc((size_t)n * n), pw;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        h[i * n + j] = mat_at(S.metric, n, i, j);
        h[i * n + j].erase(MultiIndex{});
        if (i == j) acc[i * n + j][MultiIndex{}] = 1;
      }
    pw = h;
    int sign = -1;
    while (true) {
      bool any = false;
      for (int e = 0; e < n * n; ++e)
        if (!pw[e].empty()) any = true;
      if (!any) break;
      for (int e = 0; e < n * n; ++e) jadd_to(acc[e], pw[e], Rational(sign));
      pw = matjet_mul(pw, h, n, depth);
      sign = -sign;
    }
    S.metric_inv = std::move(acc);
    auto prod = matjet_mul(S.metric, S.metric_inv, n, depth);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ScalarJet expect;
        if (i == j) expect[MultiIndex{}] = 1;
        if (mat_at(prod, n, i, j) != expect)
          throw CheckError("inverse metric check failed at " + idx2(i, j));
      }
  }

  // Christoffel symbols.
  S.christoffel.assign((size_t)n * n * n, {});
  {
    const Rational half(1, 2);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          ScalarJet sum;
          for (int m = 0; m < n; ++m) {
            ScalarJet br = jderiv(mat_at(S.metric, n, m, j), i);
            jadd_to(br, jderiv(mat_at(S.metric, n, m, i), j), Rational(1));
            jadd_to(br, jderiv(mat_at(S.metric, n, i, j), m), Rational(-1));
            jadd_to(sum, jmul(mat_at(S.metric_inv, n, k, m), br, depth), half);
          }
          S.christoffel[(size_t)((k * n + i) * n + j)] = std::move(sum);
        }
  }
  auto gamma = [&](int k, int i, int j) -> const ScalarJet& {
    return S.christoffel[(size_t)((k * n + i) * n + j)];
  };

  // Radially parallel frame: degree d of e_k solves
  //   d E^(d) = -[x^j Gamma^i_jm e_k^m]^(d),
  // which only consumes degrees <= d - 2 of e_k.
  S.frame.assign((size_t)n * n, {});
  for (int k = 0; k < n; ++k) mat_at(S.frame, n, k, k)[MultiIndex{}] = 1;
  {
    std::vector<ScalarJet> xg((size_t)n * n);
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m) {
        ScalarJet& t = mat_at(xg, n, i, m);
        for (int j = 0; j < n; ++j)
          for (const auto& [mi, v] : gamma(i, j, m)) {
            if (mi_order(mi) + 1 > depth) continue;
            auto it = t.emplace(mi_add(mi, mi_unit(j)), Rational(0)).first;
            it->second += v;
            if (it->second == 0) t.erase(it);
          }
      }
    for (int d = 1; d <= depth; ++d)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          ScalarJet sum;
          for (int m = 0; m < n; ++m)
            jadd_to(sum, jmul(mat_at(xg, n, i, m), mat_at(S.frame, n, k, m), d), Rational(1));
          jadd_to(mat_at(S.frame, n, k, i), jpart(sum, d), Rational(-1, d));
        }
  }

  // frame_low[l][m] = g_mj e_l^j; orthonormality sum_m e_k^m frame_low[l][m].
  S.frame_low.assign((size_t)n * n, {});
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      ScalarJet sum;
      for (int j = 0; j < n; ++j)
        jadd_to(sum, jmul(mat_at(S.metric, n, m, j), mat_at(S.frame, n, l, j), depth),
                Rational(1));
      mat_at(S.frame_low, n, l, m) = std::move(sum);
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      ScalarJet sum;
      for (int m = 0; m < n; ++m)
        jadd_to(sum, jmul(mat_at(S.frame, n, k, m), mat_at(S.frame_low, n, l, m), depth),
                Rational(1));
      ScalarJet expect;
      if (k == l) expect[MultiIndex{}] = 1;
      if (sum != expect) throw CheckError("frame is not orthonormal at " + idx2(k, l));
    }

  // Connection form of the frame.
  S.spin.assign((size_t)n * n * n, {});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        ScalarJet sum;
        for (int m = 0; m < n; ++m) {
          ScalarJet cov = jderiv(mat_at(S.frame, n, k, m), i);
          for (int a = 0; a < n; ++a)
            jadd_to(cov, jmul(gamma(m, i, a), mat_at(S.frame, n, k, a), depth - 1), Rational(1));
          jadd_to(sum, jmul(cov, mat_at(S.frame_low, n, l, m), depth - 1), Rational(1));
        }
        S.spin[(size_t)((i * n + k) * n + l)] = std::move(sum);
      }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const ScalarJet& a = S.spin[(size_t)((i * n + k) * n + l)];
        ScalarJet b = S.spin[(size_t)((i * n + l) * n + k)];
        for (auto& [mi, v] : b) v = -v;
        if (a != b)
          throw CheckError("frame connection is not antisymmetric at " +
                           idx2(k, l) + " along direction " + std::to_string(i + 1));
        if (jat0(a) != 0)
          throw CheckError("frame connection does not vanish at the base point");
      }

  // Twisting connection in radial gauge and its curvature field.
  S.gauge.assign((size_t)n, {});
  const Rational mhalf(-1, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (in.f(i, j).is_zero()) continue;
      S.gauge[i][mi_unit(j)] = in.f(i, j) * ExactScalar(mhalf);
    }
  S.twist_field.assign((size_t)n * n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MatJet field;
      auto acc = [&](const MultiIndex& mi, Mat m) {
        auto it = field.find(mi);
        if (it == field.end()) {
          if (!m.is_zero()) field.emplace(mi, std::move(m));
          return;
        }
        it->second += m;
        if (it->second.is_zero()) field.erase(it);
      };
      // d_i A_j - d_j A_i for linear A is a constant.
      for (const auto& [mi, m] : S.gauge[j])
        if (mi[i] == 1) acc(MultiIndex{}, m);
      for (const auto& [mi, m] : S.gauge[i])
        if (mi[j] == 1) acc(MultiIndex{}, -m);
      for (const auto& [ma, va] : S.gauge[i])
        for (const auto& [mb, vb] : S.gauge[j]) acc(mi_add(ma, mb), va * vb - vb * va);
      if (!field.empty() || !in.f(i, j).is_zero()) {
        auto it = field.find(MultiIndex{});
        Mat at0 = it == field.end() ? Mat(in.p) : it->second;
        if (!(at0 == in.f(i, j))) throw CheckError("twist curvature mismatch at " + idx2(i, j));
      }
      S.twist_field[(size_t)(i * n + j)] = std::move(field);
    }

  // Curvature field of the metric, lowered, then traced.
  S.riemann_field.assign((size_t)n * n * n * n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::vector<ScalarJet> up(n);
        for (int m = 0; m < n; ++m) {
          ScalarJet t = jderiv(gamma(m, j, k), i);
          jadd_to(t, jderiv(gamma(m, i, k), j), Rational(-1));
          for (int a = 0; a < n; ++a) {
            jadd_to(t, jmul(gamma(m, i, a), gamma(a, j, k), depth - 1), Rational(1));
            jadd_to(t, jmul(gamma(m, j, a), gamma(a, i, k), depth - 1), Rational(-1));
          }
          up[m] = std::move(t);
        }
        for (int l = 0; l < n; ++l) {
          ScalarJet low;
          for (int m = 0; m < n; ++m)
            jadd_to(low, jmul(up[m], mat_at(S.metric, n, m, l), depth - 1), Rational(1));
          if (jat0(low) != in.riem(i, j, k, l))
            throw CheckError("curvature recovery failed at " + idx4(i, j, k, l));
          S.riemann_field[(size_t)(((i * n + j) * n + k) * n + l)] = std::move(low);
        }
      }
  S.ricci.assign((size_t)n * n, {});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      ScalarJet sum;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
          jadd_to(sum,
                  jmul(mat_at(S.metric_inv, n, i, l),
                       S.riemann_field[(size_t)(((i * n + j) * n + k) * n + l)], depth - 1),
                  Rational(1));
      mat_at(S.ricci, n, j, k) = std::move(sum);
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      jadd_to(S.scal, jmul(mat_at(S.metric_inv, n, j, k), mat_at(S.ricci, n, j, k), depth - 1),
              Rational(1));

  return S;
}

CliffordExpansion jet_symbol(int n, int p, const ScalarJet& jet, int valid_deg,
                             const CliffordCoef& coef) {
  CliffordExpansion e(n, p);
  if (valid_deg >= 0) e.declare_floors(kNoFloor, -valid_deg);
  for (const auto& [mi, v] : jet) {
    TermKey key;
    key.alpha = mi;
    e.add_term(key, coef * ExactScalar(v));
  }
  return e;
}

CliffordExpansion jet_symbol(int n, int p, const MatJet& jet, int valid_deg,
                             const CliffordCoef& left) {
  CliffordExpansion e(n, p);
  if (valid_deg >= 0) e.declare_floors(kNoFloor, -valid_deg);
  for (const auto& [mi, m] : jet) {
    TermKey key;
    key.alpha = mi;
    e.add_term(key, left * CliffordCoef::word(n, p, 0, m));
  }
  return e;
}

CliffordExpansion covariant_symbol(const SynchronousJets& S, int i) {
  const int n = S.n, p = S.p;
  if (i < 1 || i > n) throw ValidationError("direction index out of range");
  CliffordExpansion e(n, p);
  TermKey xi;
  xi.beta[i - 1] = 1;
  e.add_term(xi, CliffordCoef::scalar(n, p, ExactScalar::i()));
  const ExactScalar quarter(Rational(1, 4));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const ScalarJet& w = S.spin[(size_t)(((i - 1) * n + k) * n + l)];
      if (w.empty()) continue;
      CliffordCoef cc = CliffordCoef::generator(n, p, k + 1) * CliffordCoef::generator(n, p, l + 1);
      e += jet_symbol(n, p, w, S.depth - 1, cc * quarter);
    }
  e += jet_symbol(n, p, S.gauge[i - 1], -1, CliffordCoef::unit(n, p));
  return e;
}

CliffordExpansion dirac_symbol(const SynchronousJets& S) {
  const int n = S.n, p = S.p;
  CliffordExpansion d(n, p);
  for (int i = 1; i <= n; ++i) {
    CliffordExpansion cov = covariant_symbol(S, i);
    for (int k = 0; k < n; ++k) {
      const ScalarJet& ef = mat_at(S.frame, n, k, i - 1);
      if (ef.empty()) continue;
      d += compose(jet_symbol(n, p, ef, S.depth, CliffordCoef::generator(n, p, k + 1)), cov);
    }
  }
  return d;
}

CliffordExpansion heat_generator_symbol(const SynchronousJets& S) {
  CliffordExpansion d = dirac_symbol(S);
  CliffordExpansion h = compose(d, d);
  h += CliffordExpansion::time_partial(S.n, S.p);
  return h;
}

CliffordExpansion lichnerowicz_symbol(const SynchronousJets& S) {
  const int n = S.n, p = S.p;
  std::vector<CliffordExpansion> cov;
  cov.reserve(n);
  for (int i = 1; i <= n; ++i) cov.push_back(covariant_symbol(S, i));

  CliffordExpansion total(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CliffordExpansion inner = compose(cov[i], cov[j]);
      for (int k = 0; k < n; ++k) {
        const ScalarJet& gm = S.christoffel[(size_t)((k * n + i) * n + j)];
        if (gm.empty()) continue;
        inner -= compose(jet_symbol(n, p, gm, S.depth, CliffordCoef::unit(n, p)), cov[k]);
      }
      total -= compose(jet_symbol(n, p, mat_at(S.metric_inv, n, i, j), S.depth,
                                  CliffordCoef::unit(n, p)),
                       inner);
    }

  // Clifford contraction of the twisting curvature in the orthonormal frame.
  const ExactScalar half(Rational(1, 2));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      MatJet fr;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const MatJet& fab = S.twist_field[(size_t)(a * n + b)];
          if (fab.empty()) continue;
          ScalarJet ee = jmul(mat_at(S.frame, n, k, a), mat_at(S.frame, n, l, b), S.depth);
          for (const auto& [ms, vs] : ee)
            for (const auto& [mm, vm] : fab) {
              MultiIndex mi = mi_add(ms, mm);
              if (mi_order(mi) > S.depth) continue;
              auto it = fr.find(mi);
              if (it == fr.end())
                fr.emplace(mi, vm * ExactScalar(vs));
              else {
                it->second += vm * ExactScalar(vs);
                if (it->second.is_zero()) fr.erase(it);
              }
            }
        }
      if (fr.empty()) continue;
      CliffordCoef cc =
          CliffordCoef::generator(n, p, k + 1) * CliffordCoef::generator(n, p, l + 1) * half;
      total += jet_symbol(n, p, fr, S.depth, cc);
    }

  total += jet_symbol(n, p, S.scal, S.depth - 1,
                      CliffordCoef::scalar(n, p, ExactScalar(Rational(1, 4))));
  return total;
}

}  // namespace heateta
