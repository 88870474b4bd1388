#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace plhvcsp {

// Arbitrary-precision rational, always kept in lowest terms with a positive
// denominator. Arithmetic results of mpq_class are canonical; values built
// from numerator/denominator pairs go through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

// Accepts "p" or "p/q" with optional leading '-'; no decimals, no spaces.
Rational parse_rational(std::string_view text);

// Canonical "p" or "p/q".
std::string to_string(const Rational& q);

Rational abs(const Rational& q);

std::strong_ordering compare(const Rational& a, const Rational& b);

// Rational or +infinity. +inf absorbs addition and exceeds every rational.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational v) : value_(std::move(v)) {}  // NOLINT(implicit)
  ExtRational(long v) : value_(v) {}                 // NOLINT(implicit)

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  // Precondition: is_finite().
  const Rational& value() const { return value_; }

  ExtRational& operator+=(const ExtRational& o);
  friend ExtRational operator+(ExtRational a, const ExtRational& b) { return a += b; }

  // Scaling by a strictly positive rational; +inf stays +inf.
  ExtRational scaled(const Rational& positive) const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

 private:
  Rational value_{0};
  bool infinite_ = false;
};

// "+inf" or canonical rational.
std::string to_string(const ExtRational& q);
ExtRational parse_ext_rational(std::string_view text);

}  // namespace plhvcsp
