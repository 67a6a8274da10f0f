#include "heateta/parametrix.hpp"

#include <memory>
#include <vector>

namespace heateta {

namespace {

// Lazily materialized derivatives of a fixed base expansion, keyed by the
// derivative multi-index. xi = true takes d_xi, otherwise D_x.
template <Basis B>
class DerivCache {
 public:
  DerivCache(SymbolExpansion<B> base, bool xi) : xi_(xi) {
    cache_.emplace(MultiIndex{}, std::move(base));
  }

  const SymbolExpansion<B>& get(const MultiIndex& gamma) {
    auto it = cache_.find(gamma);
    if (it != cache_.end()) return it->second;
    int j = 0;
    while (gamma[j] == 0) ++j;
    MultiIndex prev = gamma;
    prev[j] -= 1;
    const SymbolExpansion<B>& lower = get(prev);
    SymbolExpansion<B> d = xi_ ? deriv_xi(lower, j + 1) : deriv_x(lower, j + 1);
    return cache_.emplace(gamma, std::move(d)).first->second;
  }

 private:
  bool xi_;
  std::map<MultiIndex, SymbolExpansion<B>> cache_;
};

template <typename F>
void compositions_rec(int n, int g, MultiIndex& m, int i, F& f) {
  if (i == n - 1) {
    m[i] = (uint8_t)g;
    f(const_cast<const MultiIndex&>(m));
    m[i] = 0;
    return;
  }
  for (int v = 0; v <= g; ++v) {
    m[i] = (uint8_t)v;
    compositions_rec(n, g - v, m, i + 1, f);
  }
  m[i] = 0;
}

// All gamma >= 0 with |gamma| = g supported on the first n slots.
template <typename F>
void for_each_of_order(int n, int g, F&& f) {
  MultiIndex m{};
  compositions_rec(n, g, m, 0, f);
}

}  // namespace

template <Basis B>
SymbolExpansion<B> parametrix(const SymbolExpansion<B>& a, int pdeg_min, int floor_w) {
  const int n = a.n(), p = a.p();
  if (n < 1) throw ValidationError("parametrix requires at least one space dimension");
  if (a.top() != 2) throw ValidationError("parametrix requires a symbol of parabolic order 2");
  if (pdeg_min > -2) throw ValidationError("parametrix components start at degree -2");
  if (a.floor_deg() != kNoFloor && a.floor_deg() > pdeg_min + 2)
    throw BudgetError("input symbol is not certified deep enough in degree for degree " +
                      std::to_string(pdeg_min) + "; its degree floor is " +
                      std::to_string(a.floor_deg()));

  // Split the leading component into the model phase |xi|^2 + i tau (required
  // verbatim, identity coefficient) and the x-dependent remainder h.
  const TermMap<B>* comp2 = a.component(2);
  if (!comp2) throw ValidationError("leading component of order 2 is empty");
  TermMap<B> phase;
  for (int i = 0; i < n; ++i) {
    TermKey k;
    k.beta[i] = 2;
    phase.emplace(k, Graded<B>::unit(n, p));
  }
  {
    TermKey k;
    k.tau = 1;
    phase.emplace(k, Graded<B>::unit(n, p));
  }
  SymbolExpansion<B> h(n, p);
  for (const auto& [key, c] : *comp2) {
    if (key.xdeg() == 0) {
      auto it = phase.find(key);
      if (it == phase.end() || !(it->second == c))
        throw ValidationError("x-independent leading part must be |xi|^2 + i tau exactly");
      phase.erase(it);
      continue;
    }
    if (key.k || key.tau)
      throw ValidationError("x-dependent leading terms must be polynomial in xi");
    h.add_term(key, c);
  }
  if (!phase.empty())
    throw ValidationError("x-independent leading part must be |xi|^2 + i tau exactly");
  h.declare_floors(a.floor_deg(), a.floor_w());

  int fw = floor_w;
  if (fw == kNoFloor) {
    if (!h.is_zero())
      throw BudgetError(
          "the leading symbol depends on x, so its inverse is an infinite series; "
          "pass a finite w floor");
    fw = a.floor_w() == kNoFloor ? kNoFloor : a.floor_w() - 2;
  }
  if (a.floor_w() != kNoFloor && (fw == kNoFloor || a.floor_w() > fw + 2))
    throw BudgetError("input symbol is not certified deep enough in w for floor " +
                      std::to_string(fw) + "; its w floor is " + std::to_string(a.floor_w()));

  // q_{-2} = (|xi|^2 + i tau + h)^{-1} = sum_s (-1)^s h^s R^{-(s+1)}: every
  // stage multiplies by h R^{-1} (w <= -1), so both the series and the effect
  // of anything dropped at the floor sink strictly in w.
  SymbolExpansion<B> r(n, p);
  r.declare_floors(kNoFloor, fw);
  {
    SymbolExpansion<B> term = SymbolExpansion<B>::resolvent_power(n, p, 1);
    term.restrict_floors(kNoFloor, fw);
    bool negate = false;
    while (!term.is_zero()) {
      if (negate)
        r -= term;
      else
        r += term;
      negate = !negate;
      // No floor here: the k bump transiently lowers w by 2 before the h
      // factor raises it again, so pruning is only legal after the product.
      SymbolExpansion<B> bumped(n, p);
      for (const auto& [d, slot] : term.components())
        for (const auto& [key, c] : slot) {
          TermKey k2 = key;
          k2.k += 1;
          bumped.add_term(k2, c);
        }
      SymbolExpansion<B> next(n, p);
      next.declare_floors(kNoFloor, fw);
      for (const auto& [dh, sloth] : h.components())
        for (const auto& [kh, ch] : sloth)
          for (const auto& [db, slotb] : bumped.components())
            for (const auto& [kb, cb] : slotb)
              for (auto& [key, c] : term_mul(n, kh, ch, kb, cb)) next.add_term(key, std::move(c));
      term = std::move(next);
    }
  }
  r.declare_floors(kNoFloor, fw);

  // Recursion: at output degree -l the composition equation isolates
  // a_2 q_{-2-l} against S_l = sum over built components j < l and all gamma
  // with |gamma| = d - 2 + l - j of (1/gamma!) (d_xi^gamma a_d)(D_x^gamma
  // q_{-2-j}); then q_{-2-l} = -(q_{-2} * S_l) pointwise. The diagonal pair
  // (d = 2, gamma = 0) never appears because j < l forces |gamma| >= 1 there.
  DerivCache<B> da(a, /*xi=*/true);
  std::vector<std::unique_ptr<DerivCache<B>>> dq;
  std::vector<SymbolExpansion<B>> comps;
  comps.push_back(r);
  dq.push_back(std::make_unique<DerivCache<B>>(r, /*xi=*/false));

  const int levels = -2 - pdeg_min;
  for (int l = 1; l <= levels; ++l) {
    SymbolExpansion<B> S(n, p);
    S.declare_floors(kNoFloor, fw);
    for (int j = 0; j < l; ++j) {
      for (const auto& [d, slot_d] : a.components()) {
        int g = d - 2 + l - j;
        if (g < 0) continue;
        for_each_of_order(n, g, [&](const MultiIndex& gamma) {
          const SymbolExpansion<B>& ag = da.get(gamma);
          const TermMap<B>* au = ag.component(d - g);
          if (!au) return;
          const SymbolExpansion<B>& qg = dq[j]->get(gamma);
          const ExactScalar scale(Rational(1) / mi_factorial(gamma));
          for (const auto& [ku, cu] : *au) {
            Graded<B> cus = cu * scale;
            for (const auto& [dv, slotv] : qg.components())
              for (const auto& [kv, cv] : slotv)
                for (auto& [key, c] : term_mul(n, ku, cus, kv, cv))
                  S.add_term(key, std::move(c));
          }
        });
      }
    }
    SymbolExpansion<B> ql(n, p);
    ql.declare_floors(kNoFloor, fw);
    for (const auto& [dr, slotr] : r.components())
      for (const auto& [kr, cr] : slotr)
        for (const auto& [ds, slots] : S.components())
          for (const auto& [ks, cs] : slots)
            for (auto& [key, c] : term_mul(n, kr, cr, ks, cs)) ql.add_term(key, -c);
    comps.push_back(ql);
    dq.push_back(std::make_unique<DerivCache<B>>(std::move(ql), /*xi=*/false));
  }

  SymbolExpansion<B> q(n, p);
  q.declare_floors(pdeg_min, fw);
  for (const auto& c : comps) q += c;
  q.declare_top(-2);
  return q;
}

template SymbolExpansion<Basis::Form> parametrix<Basis::Form>(
    const SymbolExpansion<Basis::Form>&, int, int);
template SymbolExpansion<Basis::Clifford> parametrix<Basis::Clifford>(
    const SymbolExpansion<Basis::Clifford>&, int, int);

}  // namespace heateta
