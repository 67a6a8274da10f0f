#include "heateta/scalar.hpp"

#include "doctest.h"

using namespace heateta;

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(parse_rational("4/6")) == "2/3");
  CHECK(to_string(parse_rational(" -8/2 ")) == "-4");
  CHECK(to_string(parse_rational("0/7")) == "0");
  CHECK(to_string(parse_rational("−3/5")) == "-3/5");  // unicode minus
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational("2/"), ParseError);
  CHECK_THROWS_AS(parse_rational("--2"), ParseError);
}

TEST_CASE("rational powers and factorials") {
  CHECK(pow(Rational(2), 10) == Rational(1024));
  CHECK(pow(Rational(2), -3) == Rational(1, 8));
  CHECK(pow(Rational(-3, 2), 3) == Rational(-27, 8));
  CHECK(pow(Rational(5), 0) == Rational(1));
  CHECK_THROWS_AS(pow(Rational(0), -1), CheckError);
  CHECK(factorial(0) == Rational(1));
  CHECK(factorial(6) == Rational(720));
  CHECK(double_factorial(-1) == Rational(1));
  CHECK(double_factorial(0) == Rational(1));
  CHECK(double_factorial(5) == Rational(15));
  CHECK(double_factorial(6) == Rational(48));
  CHECK(double_factorial(7) == Rational(105));
}

TEST_CASE("gaussian-integer arithmetic") {
  ExactScalar a(Rational(1, 2), Rational(3, 4));
  ExactScalar b(Rational(2), Rational(-1));
  CHECK((a + b) == ExactScalar(Rational(5, 2), Rational(-1, 4)));
  CHECK((a * b) == ExactScalar(Rational(7, 4), Rational(1)));
  CHECK((a - a).is_zero());
  CHECK((a / a) == ExactScalar(1));
  CHECK((ExactScalar(1) / b) * b == ExactScalar(1));
  CHECK(a.conj() == ExactScalar(Rational(1, 2), Rational(-3, 4)));
  CHECK((a * a.conj()).is_real());
  CHECK_THROWS_AS(ExactScalar(0).inverse(), CheckError);
  CHECK(ExactScalar::i() * ExactScalar::i() == ExactScalar(-1));
}

TEST_CASE("powers of i") {
  CHECK(i_pow(0) == ExactScalar(1));
  CHECK(i_pow(1) == ExactScalar::i());
  CHECK(i_pow(2) == ExactScalar(-1));
  CHECK(i_pow(3) == -ExactScalar::i());
  CHECK(i_pow(4) == ExactScalar(1));
  CHECK(i_pow(-1) == -ExactScalar::i());
  CHECK(i_pow(-2) == ExactScalar(-1));
  CHECK(i_pow(-7) == ExactScalar::i());
  ExactScalar x(Rational(2, 3), Rational(-1, 5));
  CHECK(x.pow(3) == x * x * x);
  CHECK(x.pow(-2) * x.pow(2) == ExactScalar(1));
  CHECK(x.pow(0) == ExactScalar(1));
}

TEST_CASE("complex parsing round trips") {
  const char* cases[] = {"0",      "1",        "-1",   "2/3",   "-5/7", "i",    "-i",
                         "i/2",    "-i/2",     "3i/4", "-3i/4", "2i",   "1+i",  "1-i",
                         "1/2+3i/4", "-2/3-i", "5-2i/7"};
  for (const char* s : cases) {
    CAPTURE(s);
    CHECK(to_string(parse_exact(s)) == s);
  }
  // Non-canonical spellings normalize.
  CHECK(to_string(parse_exact("3/4i")) == "3i/4");
  CHECK(to_string(parse_exact("0+0i")) == "0");
  CHECK(to_string(parse_exact("1+0i")) == "1");
  CHECK(to_string(parse_exact("0+2i")) == "2i");
  CHECK(to_string(parse_exact(" 1 + i ")) == "1+i");
  CHECK(to_string(parse_exact("−3i")) == "-3i");
  CHECK_THROWS_AS(parse_exact("1+1"), ParseError);
  CHECK_THROWS_AS(parse_exact("i+i"), ParseError);
  CHECK_THROWS_AS(parse_exact("1+2j"), ParseError);
  CHECK_THROWS_AS(parse_exact(""), ParseError);
}
