#include "heateta/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace heateta {

namespace {

// Strips whitespace and rewrites the UTF-8 minus sign U+2212 to '-'.
std::string normalize(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size();) {
    unsigned char c = text[i];
    if (c == 0xE2 && i + 2 < text.size() && (unsigned char)text[i + 1] == 0x88 &&
        (unsigned char)text[i + 2] == 0x92) {
      out.push_back('-');
      i += 3;
      continue;
    }
    if (!std::isspace(c)) out.push_back(text[i]);
    ++i;
  }
  return out;
}

bool is_rational_literal(const std::string& s) {
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  size_t digits = 0;
  while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i, ++digits;
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != '/') return false;
  ++i;
  digits = 0;
  while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i, ++digits;
  return digits > 0 && i == s.size();
}

Rational parse_normalized_rational(const std::string& s, const std::string& original) {
  if (!is_rational_literal(s))
    throw ParseError("invalid rational literal: '" + original + "'");
  Rational r;
  // GMP rejects an explicit leading plus.
  if (r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
    throw ParseError("invalid rational literal: '" + original + "'");
  if (r.get_den() == 0)
    throw ParseError("zero denominator in rational literal: '" + original + "'");
  r.canonicalize();
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  return parse_normalized_rational(normalize(text), text);
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational pow(const Rational& r, long e) {
  if (e == 0) return Rational(1);
  if (r == 0 && e < 0) throw CheckError("zero raised to a negative power");
  Rational base = e > 0 ? r : Rational(1) / r;
  unsigned long k = e > 0 ? (unsigned long)e : (unsigned long)(-e);
  Rational acc(1);
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

Rational factorial(unsigned long n) {
  mpz_class z;
  mpz_fac_ui(z.get_mpz_t(), n);
  return Rational(z);
}

Rational double_factorial(long n) {
  if (n <= 0) return Rational(1);  // (-1)!! = 0!! = 1
  mpz_class z;
  mpz_2fac_ui(z.get_mpz_t(), (unsigned long)n);
  return Rational(z);
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  if (o.is_zero()) throw CheckError("division by zero scalar");
  Rational n = o.re_ * o.re_ + o.im_ * o.im_;
  Rational re = (re_ * o.re_ + im_ * o.im_) / n;
  im_ = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = re;
  return *this;
}

ExactScalar ExactScalar::inverse() const {
  ExactScalar one(1);
  return one /= *this;
}

ExactScalar ExactScalar::pow(long e) const {
  if (e == 0) return ExactScalar(1);
  ExactScalar base = e > 0 ? *this : inverse();
  unsigned long k = e > 0 ? (unsigned long)e : (unsigned long)(-e);
  ExactScalar acc(1);
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

ExactScalar i_pow(long e) {
  long m = ((e % 4) + 4) % 4;
  switch (m) {
    case 0: return ExactScalar(1);
    case 1: return ExactScalar::i();
    case 2: return ExactScalar(-1);
    default: return -ExactScalar::i();
  }
}

ExactScalar parse_exact(const std::string& text) {
  std::string s = normalize(text);
  if (s.empty()) throw ParseError("empty scalar literal");

  // Split into at most two signed terms.
  std::vector<std::string> terms;
  size_t start = 0;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] == '+' || s[i] == '-') {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  terms.push_back(s.substr(start));
  if (terms.size() > 2) throw ParseError("invalid scalar literal: '" + text + "'");

  bool have_re = false, have_im = false;
  Rational re(0), im(0);
  for (std::string term : terms) {
    size_t ipos = term.find('i');
    if (ipos != std::string::npos) {
      if (have_im || term.find('i', ipos + 1) != std::string::npos)
        throw ParseError("invalid scalar literal: '" + text + "'");
      term.erase(ipos, 1);
      if (term.empty() || term == "+" || term == "-") term += "1";
      // "i/2" leaves "/2" behind; restore the implicit unit numerator.
      size_t head = (term[0] == '+' || term[0] == '-') ? 1 : 0;
      if (head < term.size() && term[head] == '/') term.insert(head, "1");
      im = parse_normalized_rational(term, text);
      have_im = true;
    } else {
      if (have_re) throw ParseError("invalid scalar literal: '" + text + "'");
      re = parse_normalized_rational(term, text);
      have_re = true;
    }
  }
  return ExactScalar(re, im);
}

namespace {

// Prints b*i with the unit numerator suppressed: "i", "-i", "2i", "i/2", "-3i/4".
std::string imag_to_string(const Rational& b) {
  std::string out;
  Rational a = abs(b);
  if (sgn(b) < 0) out += "-";
  if (a.get_num() != 1) out += a.get_num().get_str();
  out += "i";
  if (a.get_den() != 1) out += "/" + a.get_den().get_str();
  return out;
}

}  // namespace

std::string to_string(const ExactScalar& v) {
  if (v.is_zero()) return "0";
  if (v.im() == 0) return to_string(v.re());
  if (v.re() == 0) return imag_to_string(v.im());
  std::string out = to_string(v.re());
  if (sgn(v.im()) > 0) out += "+";
  return out + imag_to_string(v.im());
}

}  // namespace heateta
