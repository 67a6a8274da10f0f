#ifndef HEATETA_ALGEBRA_HPP
#define HEATETA_ALGEBRA_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "heateta/scalar.hpp"

namespace heateta {

// Dense p x p matrix over Q(i); the auxiliary (twisting) factor of a
// coefficient. p is tiny, so everything is by value.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int p) : p_(p), a_(p * p) {}
  static Mat identity(int p) {
    Mat m(p);
    for (int r = 0; r < p; ++r) m.at(r, r) = ExactScalar(1);
    return m;
  }
  static Mat scalar(int p, const ExactScalar& v) {
    Mat m(p);
    for (int r = 0; r < p; ++r) m.at(r, r) = v;
    return m;
  }

  int p() const { return p_; }
  ExactScalar& at(int r, int c) { return a_[r * p_ + c]; }
  const ExactScalar& at(int r, int c) const { return a_[r * p_ + c]; }

  bool is_zero() const {
    for (const auto& v : a_)
      if (!v.is_zero()) return false;
    return true;
  }
  ExactScalar trace() const {
    ExactScalar t;
    for (int r = 0; r < p_; ++r) t += at(r, r);
    return t;
  }
  Mat adjoint() const {
    Mat m(p_);
    for (int r = 0; r < p_; ++r)
      for (int c = 0; c < p_; ++c) m.at(r, c) = at(c, r).conj();
    return m;
  }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(const ExactScalar& s);
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, const ExactScalar& s) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b);
  Mat operator-() const;
  friend bool operator==(const Mat& a, const Mat& b) { return a.p_ == b.p_ && a.a_ == b.a_; }

 private:
  int p_ = 0;
  std::vector<ExactScalar> a_;
};

enum class Basis { Form, Clifford };

// Element of M_p(Q(i)) tensored with either the exterior algebra on n
// generators or the Clifford algebra Cl(n) for the Euclidean inner product
// (c(u)c(v) + c(v)c(u) = -2<u,v>). The basis in both cases is indexed by
// strictly increasing index words, stored as bitmasks over {1..n}.
template <Basis B>
class Graded {
 public:
  Graded() = default;
  Graded(int n, int p) : n_(n), p_(p) {}

  static Graded zero(int n, int p) { return Graded(n, p); }
  static Graded scalar(int n, int p, const ExactScalar& v) {
    Graded g(n, p);
    g.add(0u, Mat::scalar(p, v));
    return g;
  }
  static Graded unit(int n, int p) { return scalar(n, p, ExactScalar(1)); }
  // Basis word e_{i1}...e_{ik} (increasing) with matrix part m.
  static Graded word(int n, int p, uint32_t mask, Mat m) {
    Graded g(n, p);
    g.add(mask, std::move(m));
    return g;
  }
  static Graded word(int n, int p, uint32_t mask, const ExactScalar& v = ExactScalar(1)) {
    return word(n, p, mask, Mat::scalar(p, v));
  }
  // Generator e_i, 1-based.
  static Graded generator(int n, int p, int i) { return word(n, p, 1u << (i - 1)); }

  int n() const { return n_; }
  int p() const { return p_; }
  bool is_zero() const { return c_.empty(); }
  const std::map<uint32_t, Mat>& table() const { return c_; }

  void add(uint32_t mask, Mat m) {
    if (m.is_zero()) return;
    auto [it, inserted] = c_.try_emplace(mask, std::move(m));
    if (!inserted) {
      it->second += m;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  Graded& operator+=(const Graded& o) {
    for (const auto& [mask, m] : o.c_) add(mask, m);
    return *this;
  }
  Graded& operator-=(const Graded& o) {
    for (const auto& [mask, m] : o.c_) add(mask, -m);
    return *this;
  }
  Graded operator-() const {
    Graded g(n_, p_);
    for (const auto& [mask, m] : c_) g.c_.emplace(mask, -m);
    return g;
  }
  Graded& operator*=(const ExactScalar& s) {
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& [mask, m] : c_) m *= s;
    return *this;
  }
  friend Graded operator+(Graded a, const Graded& b) { return a += b; }
  friend Graded operator-(Graded a, const Graded& b) { return a -= b; }
  friend Graded operator*(Graded a, const ExactScalar& s) { return a *= s; }

  // Basis-dependent product: wedge for Form, Clifford product for Clifford.
  // Matrix parts multiply left-to-right alongside the word parts.
  friend Graded operator*(const Graded& a, const Graded& b) {
    Graded out(a.n_, a.p_);
    for (const auto& [ma, xa] : a.c_)
      for (const auto& [mb, xb] : b.c_) {
        auto [mask, sign, vanish] = word_mul(ma, mb);
        if (vanish) continue;
        Mat prod = xa * xb;
        if (sign < 0) prod = -prod;
        out.add(mask, std::move(prod));
      }
    return out;
  }
  friend bool operator==(const Graded& a, const Graded& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.c_ == b.c_;
  }

  // The value v when the element is v times the identity (empty word, scalar
  // matrix); nullopt otherwise. Such elements are central in both bases.
  std::optional<ExactScalar> as_scalar() const {
    if (c_.empty()) return ExactScalar(0);
    if (c_.size() != 1 || c_.begin()->first != 0u) return std::nullopt;
    const Mat& m = c_.begin()->second;
    ExactScalar v = m.at(0, 0);
    if (!(m == Mat::scalar(p_, v))) return std::nullopt;
    return v;
  }

  // Part of the given word length (form degree).
  Graded component(int degree) const {
    Graded g(n_, p_);
    for (const auto& [mask, m] : c_)
      if (std::popcount(mask) == degree) g.c_.emplace(mask, m);
    return g;
  }
  int max_word_length() const {
    int d = -1;
    for (const auto& [mask, m] : c_) d = std::max(d, (int)std::popcount(mask));
    return d;
  }

  // Product of one basis word with another: resulting word, overall sign,
  // and whether the product vanishes (Form case with a repeated index).
  static std::tuple<uint32_t, int, bool> word_mul(uint32_t a, uint32_t b) {
    int sign = 1;
    if constexpr (B == Basis::Form) {
      if (a & b) return {0u, 1, true};
      for (uint32_t rest = b; rest;) {
        uint32_t j = (uint32_t)std::countr_zero(rest);
        rest &= rest - 1;
        if (std::popcount(a >> (j + 1)) & 1u) sign = -sign;
      }
      return {a | b, sign, false};
    } else {
      uint32_t word = a;
      for (uint32_t rest = b; rest;) {
        uint32_t j = (uint32_t)std::countr_zero(rest);
        rest &= rest - 1;
        if (std::popcount(word >> (j + 1)) & 1u) sign = -sign;
        uint32_t bit = 1u << j;
        if (word & bit) {
          sign = -sign;  // e_j e_j = -1
          word &= ~bit;
        } else {
          word |= bit;
        }
      }
      return {word, sign, false};
    }
  }

 private:
  int n_ = 0, p_ = 1;
  std::map<uint32_t, Mat> c_;
};

using FormCoef = Graded<Basis::Form>;
using CliffordCoef = Graded<Basis::Clifford>;

// Quantization map: on canonical basis words c(dx^{i1} ^ ... ^ dx^{ik}) =
// c(dx^{i1})...c(dx^{ik}), so both directions are label-identities on the
// stored tables. symbolize is the two-sided inverse of quantize.
CliffordCoef quantize(const FormCoef& u);
FormCoef symbolize(const CliffordCoef& u);

// Normalized trace over the spinor factor for odd n: words of length 0 trace
// to 2^[n/2], words of length n to (-i)^([n/2]+1) 2^[n/2], everything in
// between to 0. Exposed for the trace table checks.
ExactScalar spinor_trace_word_constant(int n, int word_length);

// spinor trace tensored with the matrix trace over C^p.
ExactScalar spinor_trace(const CliffordCoef& u);

// Rendering of a basis word, e.g. "c1c3" / "dx1^dx3"; "1" for the empty word.
std::string word_to_string(Basis b, uint32_t mask);

template <Basis B>
std::string to_string(const Graded<B>& g);

}  // namespace heateta

#endif
