#include "plhvcsp/laurent.hpp"

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

namespace {

void check_exponent(int e) {
  if (e < LaurentNum::kMinExponent || e > LaurentNum::kMaxExponent)
    throw ExponentOverflow("exponent " + std::to_string(e) + " outside [-1, 4]");
}

}  // namespace

LaurentNum LaurentNum::monomial(const Rational& c, int exponent) {
  check_exponent(exponent);
  LaurentNum r;
  r.coeffs_[index(exponent)] = c;
  return r;
}

const Rational& LaurentNum::coeff(int exponent) const {
  check_exponent(exponent);
  return coeffs_[index(exponent)];
}

bool LaurentNum::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

int LaurentNum::leading_exponent() const {
  for (int e = kMinExponent; e <= kMaxExponent; ++e)
    if (coeffs_[index(e)] != 0) return e;
  return kMaxExponent + 1;
}

int LaurentNum::sign() const {
  const int e = leading_exponent();
  if (e > kMaxExponent) return 0;
  return sgn(coeffs_[index(e)]);
}

LaurentNum LaurentNum::operator-() const {
  LaurentNum r;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = -coeffs_[i];
  return r;
}

LaurentNum& LaurentNum::operator+=(const LaurentNum& o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

LaurentNum& LaurentNum::operator-=(const LaurentNum& o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

LaurentNum operator*(const Rational& c, const LaurentNum& a) {
  LaurentNum r;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r.coeffs_[i] = c * a.coeffs_[i];
  return r;
}

LaurentNum LaurentNum::shifted(int k) const {
  LaurentNum r;
  for (int e = kMinExponent; e <= kMaxExponent; ++e) {
    const Rational& c = coeffs_[index(e)];
    if (c == 0) continue;
    check_exponent(e + k);
    r.coeffs_[index(e + k)] = c;
  }
  return r;
}

bool operator==(const LaurentNum& a, const LaurentNum& b) { return a.coeffs_ == b.coeffs_; }

std::strong_ordering operator<=>(const LaurentNum& a, const LaurentNum& b) {
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    const auto c = compare(a.coeffs_[i], b.coeffs_[i]);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

LaurentNum abs(const LaurentNum& a) { return a.sign() < 0 ? -a : a; }

LaurentNum laurent_affine(const LaurentNum& a, const Rational& c, int shift) {
  return (c * a).shifted(shift);
}

std::strong_ordering laurent_compare(const LaurentNum& a, const LaurentNum& b) { return a <=> b; }

Rational laurent_eval(const LaurentNum& a, const Rational& eps_value) {
  // Horner in eps over exponents 0..4, then the eps^-1 term.
  Rational acc = 0;
  for (int e = LaurentNum::kMaxExponent; e >= 0; --e) acc = acc * eps_value + a.coeff(e);
  const Rational& inv = a.coeff(-1);
  if (inv != 0) acc += inv / eps_value;
  return acc;
}

std::string to_string(const LaurentNum& a) {
  std::string out;
  for (int e = LaurentNum::kMinExponent; e <= LaurentNum::kMaxExponent; ++e) {
    const Rational& c = a.coeff(e);
    if (c == 0) continue;
    std::string term = e == 0 ? to_string(abs(c)) : (abs(c) == 1 ? "" : to_string(abs(c))) + "e" +
                                                        (e == 1 ? "" : std::to_string(e));
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace plhvcsp
