#ifndef HEATETA_SCALAR_HPP
#define HEATETA_SCALAR_HPP

#include <gmpxx.h>

#include <string>

#include "heateta/error.hpp"

namespace heateta {

using Rational = mpq_class;

// Parses a rational from a decimal string "p", "-p/q". Accepts the unicode
// minus sign and surrounding whitespace; the result is canonicalized.
Rational parse_rational(const std::string& text);

// Canonical form "p" or "p/q" with q > 0 and gcd(p, q) = 1, ASCII minus.
std::string to_string(const Rational& r);

// r^e for integer e; e < 0 requires r != 0.
Rational pow(const Rational& r, long e);

// n!, (2k-1)!! style helpers used by the diagonal Fourier evaluation.
Rational factorial(unsigned long n);
Rational double_factorial(long n);  // n!! with (-1)!! = 1

// Element of Q(i). All arithmetic is exact; there is no floating point
// anywhere in this layer.
class ExactScalar {
 public:
  ExactScalar() : re_(0), im_(0) {}
  ExactScalar(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(Rational re) : re_(std::move(re)), im_(0) {}  // NOLINT
  ExactScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static ExactScalar i() { return ExactScalar(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  ExactScalar conj() const { return ExactScalar(re_, -im_); }

  ExactScalar operator-() const { return ExactScalar(-re_, -im_); }
  ExactScalar& operator+=(const ExactScalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ExactScalar& operator*=(const ExactScalar& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = re;
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  ExactScalar inverse() const;
  ExactScalar pow(long e) const;

 private:
  Rational re_, im_;
};

// Parses "a", "bi", "a+bi", "a-bi" where a and b are rationals and the
// imaginary unit may sit before or after the fraction bar ("i/2", "3i/4",
// "3/4i"). A bare "i" or "-i" is accepted. Unicode minus is normalized.
ExactScalar parse_exact(const std::string& text);

// Canonical printing, inverse of parse_exact: "0", "-1/3", "i", "-3i/4",
// "1/2+3i/4", "1-i".
std::string to_string(const ExactScalar& v);

// i^e, exact.
ExactScalar i_pow(long e);

}  // namespace heateta

#endif
