#pragma once

#include <array>
#include <compare>
#include <string>

#include "plhvcsp/rational.hpp"

namespace plhvcsp {

// Truncated formal Laurent polynomial in a positive infinitesimal eps,
//   sum_{j=-1}^{4} a_j eps^j,
// ordered lexicographically by increasing exponent (0 < eps << 1).
// Only the operations the sampler needs are provided: addition, negation,
// scaling by rationals and multiplication by an eps monomial.
class LaurentNum {
 public:
  static constexpr int kMinExponent = -1;
  static constexpr int kMaxExponent = 4;
  static constexpr int kSpan = kMaxExponent - kMinExponent + 1;

  LaurentNum() = default;
  LaurentNum(const Rational& constant) { coeffs_[index(0)] = constant; }  // NOLINT(implicit)
  LaurentNum(long constant) { coeffs_[index(0)] = constant; }             // NOLINT(implicit)

  // c * eps^exponent. Throws ExponentOverflow outside [-1, 4].
  static LaurentNum monomial(const Rational& c, int exponent);
  static LaurentNum epsilon() { return monomial(Rational(1), 1); }

  const Rational& coeff(int exponent) const;
  bool is_zero() const;
  int sign() const;
  // Lowest exponent with a nonzero coefficient; kMaxExponent + 1 for zero.
  int leading_exponent() const;

  LaurentNum operator-() const;
  LaurentNum& operator+=(const LaurentNum& o);
  LaurentNum& operator-=(const LaurentNum& o);
  friend LaurentNum operator+(LaurentNum a, const LaurentNum& b) { return a += b; }
  friend LaurentNum operator-(LaurentNum a, const LaurentNum& b) { return a -= b; }
  friend LaurentNum operator*(const Rational& c, const LaurentNum& a);

  // eps^k * a. Throws ExponentOverflow if a nonzero coefficient leaves [-1, 4].
  LaurentNum shifted(int k) const;

  friend bool operator==(const LaurentNum& a, const LaurentNum& b);
  friend std::strong_ordering operator<=>(const LaurentNum& a, const LaurentNum& b);

 private:
  static constexpr std::size_t index(int exponent) {
    return static_cast<std::size_t>(exponent - kMinExponent);
  }
  std::array<Rational, kSpan> coeffs_{};
};

LaurentNum abs(const LaurentNum& a);

// c * eps^shift * a, exact.
LaurentNum laurent_affine(const LaurentNum& a, const Rational& c, int shift);

std::strong_ordering laurent_compare(const LaurentNum& a, const LaurentNum& b);

// Substitutes a concrete rational for eps: sum_j a_j * eps_value^j.
Rational laurent_eval(const LaurentNum& a, const Rational& eps_value);

// e.g. "2e-1 + 1 - 3e3"; "0" for zero.
std::string to_string(const LaurentNum& a);

}  // namespace plhvcsp
