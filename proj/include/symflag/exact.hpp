#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace symflag {

using Rational = mpq_class;

/// An element of a multiquadratic field Q(sqrt(d1), ..., sqrt(dm)).
///
/// The value is a rational part plus a sorted list of terms q*sqrt(d) with d a
/// squarefree integer > 1. The basis {sqrt(d) : d squarefree} is linearly
/// independent over Q, so equality and zero tests are exact coefficient
/// comparisons. Products reduce through sqrt(a)*sqrt(b) = g*sqrt(ab/g^2) with
/// g = gcd(a, b); the set of reachable radicands is therefore closed under
/// multiplication without fixing it up front.
class Exact {
public:
  struct Term {
    std::uint64_t radicand;
    Rational coef;
  };

  Exact() = default;
  template <std::integral I>
  Exact(I v) : rational_(static_cast<long>(v)) {}
  Exact(const Rational& q) : rational_(q) {}
  Exact(long num, long den);

  /// sqrt(q) for q >= 0. Throws std::domain_error for q < 0 and
  /// std::overflow_error when the squarefree part does not fit in 64 bits.
  static Exact sqrt(const Rational& q);
  /// The exact binary value of a finite double.
  static Exact from_double(double v);
  /// Parses the canonical text form, e.g. "3/2 - 1/4*sqrt(5)".
  static Exact parse(std::string_view text);

  bool is_zero() const { return terms_.empty() && sgn(rational_) == 0; }
  bool is_rational() const { return terms_.empty(); }
  const Rational& rational_part() const { return rational_; }
  const std::vector<Term>& radical_terms() const { return terms_; }
  std::vector<std::uint64_t> radicands() const;

  int sign() const;
  double to_double() const;
  Exact inverse() const;
  Exact abs() const { return sign() < 0 ? -*this : *this; }
  std::string to_string() const;

  Exact operator-() const;
  Exact& operator+=(const Exact& o);
  Exact& operator-=(const Exact& o);
  Exact& operator*=(const Exact& o);
  Exact& operator/=(const Exact& o) { return *this *= o.inverse(); }

  friend Exact operator+(Exact a, const Exact& b) { return a += b; }
  friend Exact operator-(Exact a, const Exact& b) { return a -= b; }
  friend Exact operator*(const Exact& a, const Exact& b);
  friend Exact operator/(const Exact& a, const Exact& b) { return a * b.inverse(); }

  friend bool operator==(const Exact& a, const Exact& b);
  friend bool operator<(const Exact& a, const Exact& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Exact& a, const Exact& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Exact& a, const Exact& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Exact& a, const Exact& b) { return (a - b).sign() >= 0; }

private:
  void normalize();
  // Lower/upper rational bounds with radicals approximated to `bits` binary digits.
  void bounds(unsigned bits, Rational& lo, Rational& hi) const;

  Rational rational_;
  std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const Exact& x);

std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);

/// Squarefree decomposition n = square^2 * squarefree for n >= 1.
void squarefree_split(const mpz_class& n, mpz_class& square, mpz_class& squarefree);

} // namespace symflag
