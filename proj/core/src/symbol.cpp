#include "heateta/symbol.hpp"

#include <sstream>
#include <vector>

#include "heateta/parallel.hpp"

namespace heateta {

MultiIndex mi_unit(int i) {
  MultiIndex m{};
  m[i] = 1;
  return m;
}

Rational mi_factorial(const MultiIndex& a) {
  Rational f(1);
  for (auto v : a) f *= factorial(v);
  return f;
}

std::string to_string(const TermKey& key) {
  std::ostringstream os;
  auto mono = [&](const char* stem, const MultiIndex& m) {
    for (int i = 0; i < kMaxDim; ++i) {
      if (!m[i]) continue;
      os << stem << i + 1;
      if (m[i] > 1) os << "^" << (int)m[i];
      os << " ";
    }
  };
  mono("x", key.alpha);
  mono("xi", key.beta);
  if (key.tau) os << "(i tau) ";
  if (key.k) os << "R^-" << key.k << " ";
  std::string s = os.str();
  if (s.empty()) return "1";
  s.pop_back();
  return s;
}

namespace {

// Clamped floor arithmetic: kNoFloor is "minus infinity".
int floor_shift(int f, int delta) { return f == kNoFloor ? kNoFloor : f + delta; }

// Certified floor of a product given each operand's floor and the other
// operand's largest stored value of the same grading.
int product_floor(int floor_a, int max_b, int floor_b, int max_a) {
  int f = kNoFloor;
  if (floor_a != kNoFloor && max_b != kNoFloor) f = std::max(f, floor_a + max_b);
  if (floor_b != kNoFloor && max_a != kNoFloor) f = std::max(f, floor_b + max_a);
  return f;
}

template <Basis B>
void apply_requested_floors(SymbolExpansion<B>& e, int certified_deg, int certified_w,
                            const ComposeOptions& opts) {
  int fd = certified_deg, fw = certified_w;
  if (opts.want_floor_deg != kNoFloor) {
    if (opts.want_floor_deg < certified_deg)
      throw BudgetError("requested degree floor " + std::to_string(opts.want_floor_deg) +
                        " is below the certified floor; first dropped degree is " +
                        std::to_string(certified_deg - 1));
    fd = opts.want_floor_deg;
  }
  if (opts.want_floor_w != kNoFloor) {
    if (opts.want_floor_w < certified_w)
      throw BudgetError("requested w floor " + std::to_string(opts.want_floor_w) +
                        " is below the certified floor; first dropped w degree is " +
                        std::to_string(certified_w - 1));
    fw = opts.want_floor_w;
  }
  e.restrict_floors(fd, fw);
}

}  // namespace

template <Basis B>
SymbolExpansion<B> deriv_xi(const SymbolExpansion<B>& e, int i) {
  SymbolExpansion<B> out(e.n(), e.p());
  int ix = i - 1;
  for (const auto& [d, slot] : e.components())
    for (const auto& [key, c] : slot) {
      if (key.beta[ix] > 0) {
        TermKey k2 = key;
        k2.beta[ix] -= 1;
        out.add_term(k2, c * ExactScalar((long)key.beta[ix]));
      }
      if (key.k > 0) {
        TermKey k2 = key;
        k2.beta[ix] += 1;
        k2.k += 1;
        out.add_term(k2, c * ExactScalar(-2L * key.k));
      }
    }
  out.declare_floors(floor_shift(e.floor_deg(), -1), floor_shift(e.floor_w(), -1));
  out.declare_top(e.top() == kNoFloor ? kNoFloor : e.top() - 1);
  return out;
}

template <Basis B>
SymbolExpansion<B> deriv_x(const SymbolExpansion<B>& e, int i) {
  SymbolExpansion<B> out(e.n(), e.p());
  int ix = i - 1;
  const ExactScalar minus_i = -ExactScalar::i();
  for (const auto& [d, slot] : e.components())
    for (const auto& [key, c] : slot) {
      if (key.alpha[ix] == 0) continue;
      TermKey k2 = key;
      k2.alpha[ix] -= 1;
      out.add_term(k2, c * (minus_i * ExactScalar((long)key.alpha[ix])));
    }
  out.declare_floors(e.floor_deg(), floor_shift(e.floor_w(), +1));
  out.declare_top(e.top());
  return out;
}

template <Basis B>
std::vector<std::pair<TermKey, Graded<B>>> term_mul(int n, const TermKey& ka,
                                                    const Graded<B>& ca, const TermKey& kb,
                                                    const Graded<B>& cb) {
  std::vector<std::pair<TermKey, Graded<B>>> out;
  Graded<B> c = ca * cb;
  if (c.is_zero()) return out;
  TermKey key;
  key.alpha = mi_add(ka.alpha, kb.alpha);
  key.beta = mi_add(ka.beta, kb.beta);
  key.k = (uint16_t)(ka.k + kb.k);
  int taus = ka.tau + kb.tau;
  if (taus == 0) {
    out.push_back({key, std::move(c)});
  } else if (taus == 1 && key.k == 0) {
    key.tau = 1;
    out.push_back({key, std::move(c)});
  } else if (taus == 1) {
    // i tau R^{-k} = R^{-(k-1)} - sum_i xi_i^2 R^{-k}
    TermKey lower = key;
    lower.k -= 1;
    out.push_back({lower, c});
    for (int i = 0; i < n; ++i) {
      TermKey sq = key;
      sq.beta[i] += 2;
      out.push_back({sq, -c});
    }
  } else {
    throw CheckError("product carries two time-derivative factors; not representable");
  }
  return out;
}

template <Basis B>
SymbolExpansion<B> mul(const SymbolExpansion<B>& a, const SymbolExpansion<B>& b,
                       const ComposeOptions& opts) {
  SymbolExpansion<B> out(a.n(), a.p());
  for (const auto& [da, slota] : a.components())
    for (const auto& [ka, ca] : slota)
      for (const auto& [db, slotb] : b.components())
        for (const auto& [kb, cb] : slotb)
          for (auto& [key, c] : term_mul(a.n(), ka, ca, kb, cb)) out.add_term(key, std::move(c));
  int cd = product_floor(a.floor_deg(), b.max_stored_pdeg(), b.floor_deg(), a.max_stored_pdeg());
  int cw = product_floor(a.floor_w(), b.max_stored_w(), b.floor_w(), a.max_stored_w());
  if (a.top() != kNoFloor && b.top() != kNoFloor) out.declare_top(a.top() + b.top());
  apply_requested_floors(out, cd, cw, opts);
  return out;
}

namespace {

// All derivatives d_xi^gamma u / gamma! for one source term, cached by gamma.
template <Basis B>
class XiDerivatives {
 public:
  XiDerivatives(int n, const TermKey& key, const Graded<B>& coef) : n_(n) {
    cache_[MultiIndex{}] = {{key, coef}};
  }

  const std::vector<std::pair<TermKey, Graded<B>>>& get(const MultiIndex& gamma) {
    auto it = cache_.find(gamma);
    if (it != cache_.end()) return it->second;
    int j = 0;
    while (gamma[j] == 0) ++j;
    MultiIndex prev = gamma;
    prev[j] -= 1;
    const auto& lower = get(prev);
    std::vector<std::pair<TermKey, Graded<B>>> result;
    // Divided derivative: each step divides by the running order in slot j,
    // accumulating 1/gamma! on the fly.
    Rational div((long)gamma[j]);
    for (const auto& [key, c] : lower) {
      if (key.beta[j] > 0) {
        TermKey k2 = key;
        k2.beta[j] -= 1;
        result.push_back({k2, c * ExactScalar(Rational((long)key.beta[j]) / div)});
      }
      if (key.k > 0) {
        TermKey k2 = key;
        k2.beta[j] += 1;
        k2.k += 1;
        result.push_back({k2, c * ExactScalar(Rational(-2L * key.k) / div)});
      }
    }
    // Merge duplicate keys to keep the lists small.
    std::map<TermKey, Graded<B>> merged;
    for (auto& [key, c] : result) {
      auto [mit, ins] = merged.try_emplace(key, c);
      if (!ins) mit->second += c;
    }
    std::vector<std::pair<TermKey, Graded<B>>> out;
    for (auto& [key, c] : merged)
      if (!c.is_zero()) out.push_back({key, std::move(c)});
    return cache_[gamma] = std::move(out);
  }

 private:
  int n_;
  std::map<MultiIndex, std::vector<std::pair<TermKey, Graded<B>>>> cache_;
};

// Enumerates gamma <= bound (componentwise), calling f(gamma).
template <typename F>
void for_each_sub_multiindex(int n, const MultiIndex& bound, F&& f) {
  MultiIndex g{};
  while (true) {
    f(g);
    int i = 0;
    while (i < n && g[i] == bound[i]) {
      g[i] = 0;
      ++i;
    }
    if (i == n) return;
    g[i] += 1;
  }
}

}  // namespace

template <Basis B>
SymbolExpansion<B> compose(const SymbolExpansion<B>& a, const SymbolExpansion<B>& b,
                           const ComposeOptions& opts) {
  const int n = a.n();
  std::vector<const std::pair<const TermKey, Graded<B>>*> aterms;
  for (const auto& [da, slota] : a.components())
    for (const auto& term : slota) aterms.push_back(&term);

  auto accumulate = [&](size_t lo, size_t hi, SymbolExpansion<B>& acc) {
    for (size_t t = lo; t < hi; ++t) {
      XiDerivatives<B> derivs(n, aterms[t]->first, aterms[t]->second);
      for (const auto& [db, slotb] : b.components()) {
        for (const auto& [kb, cb] : slotb) {
          for_each_sub_multiindex(n, kb.alpha, [&](const MultiIndex& gamma) {
            // D_x^gamma applied to x^alpha: falling factorials and (1/i)^|g|.
            TermKey kv = kb;
            ExactScalar factor(1);
            for (int i = 0; i < n; ++i) {
              for (int s = 0; s < gamma[i]; ++s) {
                factor *= ExactScalar((long)(kv.alpha[i]));
                kv.alpha[i] -= 1;
              }
            }
            int g = mi_order(gamma);
            factor *= i_pow(-g);
            Graded<B> cv = cb * factor;
            for (const auto& [ku, cu] : derivs.get(gamma))
              for (auto& [key, c] : term_mul(n, ku, cu, kv, cv)) acc.add_term(key, std::move(c));
          });
        }
      }
    }
  };

  SymbolExpansion<B> out(a.n(), a.p());
  const size_t count = aterms.size();
  const int workers = worker_count();
  if (workers <= 1 || count < 64) {
    accumulate(0, count, out);
  } else {
    // Slices merge in index order and every coefficient is exact, so the
    // result does not depend on the worker count or the split.
    const size_t slices = std::min(count, (size_t)workers * 4);
    auto parts = parallel_map<SymbolExpansion<B>>((int)slices, [&](int s) {
      SymbolExpansion<B> part(a.n(), a.p());
      accumulate(count * (size_t)s / slices, count * (size_t)(s + 1) / slices, part);
      return part;
    });
    for (const auto& part : parts)
      for (const auto& [d, slot] : part.components())
        for (const auto& [key, c] : slot) out.add_term(key, c);
  }
  int cd = product_floor(a.floor_deg(), b.max_stored_pdeg(), b.floor_deg(), a.max_stored_pdeg());
  int cw = product_floor(a.floor_w(), b.max_stored_w(), b.floor_w(), a.max_stored_w());
  if (a.top() != kNoFloor && b.top() != kNoFloor) out.declare_top(a.top() + b.top());
  apply_requested_floors(out, cd, cw, opts);
  return out;
}

bool parabolic_scale_check(const TermKey& key, int stored_degree, const Rational& lambda) {
  if (lambda == 0) throw CheckError("scale check requires nonzero lambda");
  // Scale each factor of the term independently.
  Rational factor = pow(lambda, mi_order(key.beta));  // xi^beta
  factor *= pow(lambda * lambda, (long)key.tau);      // i tau
  factor *= pow(lambda * lambda, -(long)key.k);       // resolvent power
  return factor == pow(lambda, stored_degree);
}

template <Basis B>
bool check_homogeneity(const SymbolExpansion<B>& e) {
  const Rational lambdas[] = {Rational(2), Rational(3), Rational(-1)};
  for (const auto& [d, slot] : e.components())
    for (const auto& [key, c] : slot) {
      if (key.pdeg() != d) return false;
      for (const auto& l : lambdas)
        if (!parabolic_scale_check(key, d, l)) return false;
    }
  return true;
}

namespace {

// t-exponent of the diagonal value of xi^beta R^{-k} at t = s^2 relative to
// its t = 1 value: s^(2k - 2 - n - |beta|).
template <Basis B>
DiagValue<B> diag_impl(const SymbolExpansion<B>& q, int degree, const Rational* s) {
  if (degree < q.floor_deg() || degree < q.floor_w())
    throw BudgetError("diagonal value at degree " + std::to_string(degree) +
                      " is below the certified floors");
  DiagValue<B> out;
  out.degree = degree;
  out.value = Graded<B>::zero(q.n(), q.p());
  const TermMap<B>* slot = q.component(degree);
  if (!slot) return out;
  for (const auto& [key, c] : *slot) {
    if (key.xdeg() > 0) continue;  // x^alpha vanishes on the diagonal
    if (key.k == 0) continue;      // differential operators live at t = 0
    bool odd = false;
    Rational m(1);
    for (int i = 0; i < q.n(); ++i) {
      int b = key.beta[i];
      if (b & 1) {
        odd = true;
        break;
      }
      m *= double_factorial(b - 1) / pow(Rational(2), b / 2);
    }
    if (odd) continue;
    m /= factorial(key.k - 1);
    if (s) m *= pow(*s, 2L * key.k - 2 - q.n() - mi_order(key.beta));
    out.value += c * ExactScalar(m);
  }
  return out;
}

}  // namespace

template <Basis B>
DiagValue<B> inverse_fourier_diag(const SymbolExpansion<B>& q, int degree) {
  return diag_impl(q, degree, nullptr);
}

template <Basis B>
DiagValue<B> inverse_fourier_diag_at(const SymbolExpansion<B>& q, int degree, const Rational& s) {
  if (s <= 0) throw CheckError("diagonal evaluation requires s > 0");
  return diag_impl(q, degree, &s);
}

Rational gaussian_moment_exact(const std::vector<int>& beta) {
  Rational m(1);
  for (int b : beta) {
    if (b < 0) throw CheckError("negative moment exponent");
    if (b & 1) return Rational(0);
    m *= double_factorial(b - 1) / pow(Rational(2), b / 2);
  }
  return m;
}

template <Basis B>
std::optional<std::string> trusted_diff(const SymbolExpansion<B>& a, const SymbolExpansion<B>& b) {
  int fd = std::max(a.floor_deg(), b.floor_deg());
  int fw = std::max(a.floor_w(), b.floor_w());
  auto filter = [&](const SymbolExpansion<B>& e) {
    std::map<int, TermMap<B>> kept;
    for (const auto& [d, slot] : e.components()) {
      if (d < fd) continue;
      for (const auto& [key, c] : slot)
        if (key.w() >= fw) kept[d].emplace(key, c);
    }
    return kept;
  };
  auto ma = filter(a), mb = filter(b);
  if (ma == mb) return std::nullopt;
  for (const auto& [d, slot] : ma) {
    auto it = mb.find(d);
    for (const auto& [key, c] : slot) {
      if (it == mb.end() || !it->second.count(key))
        return "term only on left at degree " + std::to_string(d) + ": " + to_string(key);
      if (!(it->second.at(key) == c))
        return "coefficient mismatch at degree " + std::to_string(d) + ": " + to_string(key);
    }
  }
  for (const auto& [d, slot] : mb) {
    auto it = ma.find(d);
    for (const auto& [key, c] : slot)
      if (it == ma.end() || !it->second.count(key))
        return "term only on right at degree " + std::to_string(d) + ": " + to_string(key);
  }
  return "expansion mismatch";
}

#define HEATETA_INSTANTIATE(B)                                                               \
  template SymbolExpansion<B> deriv_xi<B>(const SymbolExpansion<B>&, int);                   \
  template SymbolExpansion<B> deriv_x<B>(const SymbolExpansion<B>&, int);                    \
  template std::vector<std::pair<TermKey, Graded<B>>> term_mul<B>(                           \
      int, const TermKey&, const Graded<B>&, const TermKey&, const Graded<B>&);              \
  template SymbolExpansion<B> mul<B>(const SymbolExpansion<B>&, const SymbolExpansion<B>&,   \
                                     const ComposeOptions&);                                 \
  template SymbolExpansion<B> compose<B>(const SymbolExpansion<B>&, const SymbolExpansion<B>&, \
                                         const ComposeOptions&);                             \
  template bool check_homogeneity<B>(const SymbolExpansion<B>&);                             \
  template DiagValue<B> inverse_fourier_diag<B>(const SymbolExpansion<B>&, int);             \
  template DiagValue<B> inverse_fourier_diag_at<B>(const SymbolExpansion<B>&, int,           \
                                                   const Rational&);                         \
  template std::optional<std::string> trusted_diff<B>(const SymbolExpansion<B>&,             \
                                                      const SymbolExpansion<B>&);

HEATETA_INSTANTIATE(Basis::Form)
HEATETA_INSTANTIATE(Basis::Clifford)
#undef HEATETA_INSTANTIATE

}  // namespace heateta
