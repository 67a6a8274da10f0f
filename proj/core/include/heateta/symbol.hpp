#ifndef HEATETA_SYMBOL_HPP
#define HEATETA_SYMBOL_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heateta/algebra.hpp"

namespace heateta {

inline constexpr int kMaxDim = 8;

// Exponent vector over x_1..x_n or xi_1..xi_n (entries beyond n stay 0).
using MultiIndex = std::array<uint8_t, kMaxDim>;

inline int mi_order(const MultiIndex& a) {
  int s = 0;
  for (auto v : a) s += v;
  return s;
}
inline MultiIndex mi_add(MultiIndex a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] = (uint8_t)(a[i] + b[i]);
  return a;
}
inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i)
    if (a[i] > b[i]) return false;
  return true;
}
MultiIndex mi_unit(int i);  // e_i, 0-based
Rational mi_factorial(const MultiIndex& a);

// One monomial factor x^alpha xi^beta (|xi|^2 + i tau)^{-k}, with an optional
// distinguished factor i*tau (only legal when k = 0; it is the one place tau
// appears outside of the resolvent). The coefficient lives next to the key in
// the expansion map.
struct TermKey {
  MultiIndex alpha{};
  MultiIndex beta{};
  uint16_t k = 0;
  uint8_t tau = 0;

  friend auto operator<=>(const TermKey&, const TermKey&) = default;

  int xdeg() const { return mi_order(alpha); }
  // Parabolic degree: xi weighs 1, tau weighs 2, x weighs 0.
  int pdeg() const { return mi_order(beta) + 2 * (int)tau - 2 * (int)k; }
  // w = pdeg - xdeg is additive under composition and bounds the parabolic
  // degree at which a term can still influence a diagonal (x = 0) value.
  int w() const { return pdeg() - xdeg(); }
};

std::string to_string(const TermKey& key);

// Sentinel floor meaning "no truncation happened below".
inline constexpr int kNoFloor = std::numeric_limits<int>::min() / 4;

template <Basis B>
using TermMap = std::map<TermKey, Graded<B>>;

// Graded-coefficient symbol expansion: finitely many parabolic-homogeneous
// components, each a finite sum of terms. Truncation state is carried as two
// floors: floor_deg (lowest retained parabolic degree) and floor_w (lowest
// retained w). Stored terms at or above both floors are exact.
template <Basis B>
class SymbolExpansion {
 public:
  SymbolExpansion() = default;
  SymbolExpansion(int n, int p) : n_(n), p_(p) {}

  static SymbolExpansion zero(int n, int p) { return SymbolExpansion(n, p); }
  static SymbolExpansion constant(int n, int p, Graded<B> c) {
    SymbolExpansion e(n, p);
    e.add_term(TermKey{}, std::move(c));
    return e;
  }
  // Symbol of d/dx_i: i*xi_i.
  static SymbolExpansion partial(int n, int p, int i) {
    SymbolExpansion e(n, p);
    TermKey key;
    key.beta = mi_unit(i - 1);
    e.add_term(key, Graded<B>::scalar(n, p, ExactScalar::i()));
    return e;
  }
  // Symbol of d/dt: the distinguished i*tau term.
  static SymbolExpansion time_partial(int n, int p) {
    SymbolExpansion e(n, p);
    TermKey key;
    key.tau = 1;
    e.add_term(key, Graded<B>::unit(n, p));
    return e;
  }
  // (|xi|^2 + i tau)^{-k}.
  static SymbolExpansion resolvent_power(int n, int p, int k) {
    SymbolExpansion e(n, p);
    TermKey key;
    key.k = (uint16_t)k;
    e.add_term(key, Graded<B>::unit(n, p));
    return e;
  }

  int n() const { return n_; }
  int p() const { return p_; }
  int top() const { return top_; }
  int floor_deg() const { return floor_deg_; }
  int floor_w() const { return floor_w_; }
  bool is_zero() const { return comp_.empty(); }

  const std::map<int, TermMap<B>>& components() const { return comp_; }
  const TermMap<B>* component(int degree) const {
    auto it = comp_.find(degree);
    return it == comp_.end() ? nullptr : &it->second;
  }

  // Inserts coef * key into its true degree bucket; silently drops content
  // below the floors, merges and prunes zeros.
  void add_term(const TermKey& key, Graded<B> coef) {
    if (coef.is_zero()) return;
    if (key.tau && key.k) throw CheckError("tau flag requires k = 0");
    int d = key.pdeg();
    if (d < floor_deg_ || key.w() < floor_w_) return;
    top_ = std::max(top_, d);
    auto& slot = comp_[d];
    auto [it, inserted] = slot.try_emplace(key, std::move(coef));
    if (!inserted) {
      it->second += coef;
      if (it->second.is_zero()) {
        slot.erase(it);
        if (slot.empty()) comp_.erase(d);
      }
    }
  }

  void declare_top(int top) { top_ = std::max(top_, top); }

  // Tightens the truncation floors (never loosens) and drops terms below.
  void restrict_floors(int floor_deg, int floor_w) {
    floor_deg_ = std::max(floor_deg_, floor_deg);
    floor_w_ = std::max(floor_w_, floor_w);
    for (auto it = comp_.begin(); it != comp_.end();) {
      if (it->first < floor_deg_) {
        it = comp_.erase(it);
        continue;
      }
      auto& slot = it->second;
      for (auto jt = slot.begin(); jt != slot.end();)
        jt = jt->first.w() < floor_w_ ? slot.erase(jt) : std::next(jt);
      it = slot.empty() ? comp_.erase(it) : std::next(it);
    }
  }
  // Declares inherited floors without re-filtering (used by constructions
  // whose inputs were already truncated).
  void declare_floors(int floor_deg, int floor_w) {
    floor_deg_ = std::max(floor_deg_, floor_deg);
    floor_w_ = std::max(floor_w_, floor_w);
  }

  int max_stored_pdeg() const { return comp_.empty() ? kNoFloor : comp_.rbegin()->first; }
  int max_stored_w() const {
    int m = kNoFloor;
    for (const auto& [d, slot] : comp_)
      for (const auto& [key, c] : slot) m = std::max(m, key.w());
    return m;
  }
  size_t term_count() const {
    size_t s = 0;
    for (const auto& [d, slot] : comp_) s += slot.size();
    return s;
  }

  SymbolExpansion& operator+=(const SymbolExpansion& o) {
    // The sum is trusted only above the union of the floors.
    restrict_floors(o.floor_deg_, o.floor_w_);
    for (const auto& [d, slot] : o.comp_)
      for (const auto& [key, c] : slot) add_term(key, c);
    return *this;
  }
  SymbolExpansion& operator-=(const SymbolExpansion& o) { return *this += -o; }
  SymbolExpansion operator-() const {
    SymbolExpansion e = *this;
    for (auto& [d, slot] : e.comp_)
      for (auto& [key, c] : slot) c = -c;
    return e;
  }
  friend SymbolExpansion operator+(SymbolExpansion a, const SymbolExpansion& b) { return a += b; }
  friend SymbolExpansion operator-(SymbolExpansion a, const SymbolExpansion& b) { return a -= b; }

  SymbolExpansion& operator*=(const ExactScalar& s) {
    if (s.is_zero()) {
      comp_.clear();
      return *this;
    }
    for (auto& [d, slot] : comp_)
      for (auto& [key, c] : slot) c *= s;
    return *this;
  }
  friend SymbolExpansion operator*(SymbolExpansion a, const ExactScalar& s) { return a *= s; }

  // Coefficient-algebra multiplication of every term by a constant, on the
  // chosen side (coefficients need not commute).
  SymbolExpansion left_mul(const Graded<B>& g) const {
    SymbolExpansion e(n_, p_);
    e.declare_floors(floor_deg_, floor_w_);
    for (const auto& [d, slot] : comp_)
      for (const auto& [key, c] : slot) e.add_term(key, g * c);
    return e;
  }
  SymbolExpansion right_mul(const Graded<B>& g) const {
    SymbolExpansion e(n_, p_);
    e.declare_floors(floor_deg_, floor_w_);
    for (const auto& [d, slot] : comp_)
      for (const auto& [key, c] : slot) e.add_term(key, c * g);
    return e;
  }

 private:
  int n_ = 0, p_ = 1;
  int top_ = kNoFloor;
  int floor_deg_ = kNoFloor;
  int floor_w_ = kNoFloor;
  std::map<int, TermMap<B>> comp_;
};

using CliffordExpansion = SymbolExpansion<Basis::Clifford>;
using FormExpansion = SymbolExpansion<Basis::Form>;

// d/dxi_i applied termwise (product rule over xi^beta and the resolvent).
template <Basis B>
SymbolExpansion<B> deriv_xi(const SymbolExpansion<B>& e, int i);

// D_{x_i} = (1/i) d/dx_i applied termwise.
template <Basis B>
SymbolExpansion<B> deriv_x(const SymbolExpansion<B>& e, int i);

// Product of two single terms in the closed representation. A tau factor
// meeting a resolvent power is rewritten through
// i tau * R^{-k} = R^{-(k-1)} - |xi|^2 R^{-k}; two tau factors are rejected.
template <Basis B>
std::vector<std::pair<TermKey, Graded<B>>> term_mul(int n, const TermKey& ka,
                                                    const Graded<B>& ca, const TermKey& kb,
                                                    const Graded<B>& cb);

struct ComposeOptions {
  // Optional extra truncation (must lie at or above what the operands
  // certify; asking below the certified floor raises BudgetError).
  int want_floor_deg = kNoFloor;
  int want_floor_w = kNoFloor;
};

// Pointwise symbol product a*b (no derivatives).
template <Basis B>
SymbolExpansion<B> mul(const SymbolExpansion<B>& a, const SymbolExpansion<B>& b,
                       const ComposeOptions& opts = {});

// Volterra composition a # b = sum_gamma (1/gamma!) (d_xi^gamma a)(D_x^gamma b),
// the symbol of the operator product A o B. The gamma sum is finite because
// D_x^gamma kills every term of b once gamma exceeds its x-exponent.
template <Basis B>
SymbolExpansion<B> compose(const SymbolExpansion<B>& a, const SymbolExpansion<B>& b,
                           const ComposeOptions& opts = {});

// Substitutes (xi, tau) -> (lambda xi, lambda^2 tau) in the single term and
// checks that the result is lambda^stored_degree times the term. lambda is a
// nonzero rational; lambda = -1 is the parity workhorse.
bool parabolic_scale_check(const TermKey& key, int stored_degree, const Rational& lambda);

// Every stored term sits in its true degree bucket and scales correctly for
// lambda in {2, 3, -1}.
template <Basis B>
bool check_homogeneity(const SymbolExpansion<B>& e);

// Diagonal value of the inverse Fourier transform of one homogeneous
// component at x = 0, y = 0, t = 1, carrying an implicit (4 pi)^{-n/2}:
// polynomial (k = 0) terms are supported away from t = 1 and contribute 0;
// x^alpha factors vanish at the diagonal; a term xi^beta R^{-k} contributes
// prod_i (beta_i - 1)!! 2^{-beta_i/2} / (k-1)! when every beta_i is even.
template <Basis B>
struct DiagValue {
  int degree = 0;
  Graded<B> value;  // times (4 pi)^{-n/2}
};

template <Basis B>
DiagValue<B> inverse_fourier_diag(const SymbolExpansion<B>& q, int degree);

// Same at t = s^2 (s rational > 0): each term picks up the exact factor
// s^(2k - 2 - n - |beta|). Used by the scaling cross-checks.
template <Basis B>
DiagValue<B> inverse_fourier_diag_at(const SymbolExpansion<B>& q, int degree, const Rational& s);

// Exact normalized Gaussian moment (2 pi)^{-n} int xi^beta e^{-|xi|^2} d xi
// as a multiple of (4 pi)^{-n/2}.
Rational gaussian_moment_exact(const std::vector<int>& beta);

// Compares the parts of a and b that both sides certify; returns a
// description of the first mismatch, or nullopt when equal.
template <Basis B>
std::optional<std::string> trusted_diff(const SymbolExpansion<B>& a, const SymbolExpansion<B>& b);

}  // namespace heateta

#endif
