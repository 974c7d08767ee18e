#pragma once

#include "symflag/exact.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <type_traits>

namespace symflag {

/// Float comparison thresholds: |x| <= abs + rel * scale counts as zero.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

enum class Backend { Exact, Float };

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Exact> {
  static constexpr bool exact = true;
  static constexpr Backend backend = Backend::Exact;
  static constexpr const char* name = "exact";
  static bool is_zero(const Exact& x, double /*scale*/, const Tolerance& /*tol*/) { return x.is_zero(); }
  static double magnitude(const Exact& x) { return std::fabs(x.to_double()); }
  static double to_double(const Exact& x) { return x.to_double(); }
  static Exact from_rational(const Rational& q) { return Exact(q); }
  static int sign(const Exact& x) { return x.sign(); }
  static std::string to_string(const Exact& x) { return x.to_string(); }
  static Exact parse(const std::string& s) { return Exact::parse(s); }
  static Exact sqrt_of_rational(const Rational& q) { return Exact::sqrt(q); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr Backend backend = Backend::Float;
  static constexpr const char* name = "float";
  static bool is_zero(double x, double scale, const Tolerance& tol) {
    return std::fabs(x) <= tol.abs + tol.rel * scale;
  }
  static double magnitude(double x) { return std::fabs(x); }
  static double to_double(double x) { return x; }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static int sign(double x) { return (x > 0) - (x < 0); }
  static std::string to_string(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  static double parse(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed float entry '" + s + "'");
    return v;
  }
  static double sqrt_of_rational(const Rational& q) { return std::sqrt(q.get_d()); }
};

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

template <class T>
T from_rational(const Rational& q) {
  return scalar_traits<T>::from_rational(q);
}

template <class T>
T from_ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return scalar_traits<T>::from_rational(q);
}

} // namespace symflag
