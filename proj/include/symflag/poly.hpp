#pragma once

#include "symflag/matrix.hpp"
#include "symflag/scalar.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace symflag {

/// Univariate polynomial, coefficients stored low degree first with no
/// trailing exact zeros.
template <class C>
class UniPoly {
public:
  UniPoly() = default;
  UniPoly(int c) : coef_{C(c)} { trim(); }
  UniPoly(const C& c) : coef_{c} { trim(); }
  explicit UniPoly(std::vector<C> coef) : coef_(std::move(coef)) { trim(); }

  static UniPoly monomial(const C& c, std::size_t degree) {
    std::vector<C> v(degree + 1, C(0));
    v[degree] = c;
    return UniPoly(std::move(v));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  bool is_zero() const { return coef_.empty(); }
  const std::vector<C>& coefficients() const { return coef_; }
  C coefficient(std::size_t k) const { return k < coef_.size() ? coef_[k] : C(0); }
  const C& leading() const {
    if (coef_.empty()) throw std::domain_error("UniPoly: leading coefficient of zero polynomial");
    return coef_.back();
  }

  template <class V>
  V evaluate(const V& x) const {
    V acc(0);
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + V(*it);
    return acc;
  }

  UniPoly derivative() const {
    if (coef_.size() <= 1) return {};
    std::vector<C> d(coef_.size() - 1, C(0));
    for (std::size_t k = 1; k < coef_.size(); ++k) d[k - 1] = coef_[k] * C(static_cast<long>(k));
    return UniPoly(std::move(d));
  }

  UniPoly operator-() const {
    UniPoly out(*this);
    for (auto& c : out.coef_) c = -c;
    return out;
  }
  UniPoly& operator+=(const UniPoly& o) {
    if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), C(0));
    for (std::size_t k = 0; k < o.coef_.size(); ++k) coef_[k] += o.coef_[k];
    trim();
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) { return *this += -o; }
  UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> out(a.coef_.size() + b.coef_.size() - 1, C(0));
    for (std::size_t i = 0; i < a.coef_.size(); ++i) {
      if (zero_entry(a.coef_[i])) continue;
      for (std::size_t j = 0; j < b.coef_.size(); ++j) out[i + j] += a.coef_[i] * b.coef_[j];
    }
    return UniPoly(std::move(out));
  }
  friend UniPoly operator*(UniPoly a, const C& s) {
    for (auto& c : a.coef_) c *= s;
    a.trim();
    return a;
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coef_ == b.coef_; }

  /// Euclidean division over a field: a = q*b + r with deg r < deg b.
  friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw std::domain_error("UniPoly: division by zero polynomial");
    std::vector<C> rem = a.coef_;
    const int db = b.degree();
    if (a.degree() < db) return {UniPoly{}, a};
    std::vector<C> quot(a.degree() - db + 1, C(0));
    const C lead_inv = C(1) / b.leading();
    for (int k = a.degree(); k >= db; --k) {
      if (zero_entry(rem[k])) continue;
      const C f = rem[k] * lead_inv;
      quot[k - db] = f;
      for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.coef_[j];
      rem[k] = C(0);
    }
    return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
  }

private:
  void trim() {
    while (!coef_.empty() && zero_entry(coef_.back())) coef_.pop_back();
  }
  std::vector<C> coef_;
};

/// Real polynomial in two variables (alpha, beta); coefficient of
/// alpha^a beta^b stored under key (a, b). No exact zeros are stored.
template <class C>
class BivarPoly {
public:
  using Key = std::pair<int, int>;

  BivarPoly() = default;
  BivarPoly(int c) { add_term(0, 0, C(c)); }
  BivarPoly(const C& c) { add_term(0, 0, c); }

  static BivarPoly alpha() {
    BivarPoly p;
    p.add_term(1, 0, C(1));
    return p;
  }
  static BivarPoly beta() {
    BivarPoly p;
    p.add_term(0, 1, C(1));
    return p;
  }

  const std::map<Key, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  C coefficient(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(int a, int b, const C& c) {
    if (zero_entry(c)) return;
    auto [it, inserted] = terms_.emplace(Key{a, b}, c);
    if (!inserted) {
      it->second += c;
      if (zero_entry(it->second)) terms_.erase(it);
    }
  }

  /// -1 for the zero polynomial.
  int total_degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }
  int degree_in_beta() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.second);
    return d;
  }

  /// Sum of the terms of maximal total degree.
  BivarPoly leading_form() const {
    BivarPoly out;
    const int d = total_degree();
    for (const auto& [k, c] : terms_)
      if (k.first + k.second == d) out.add_term(k.first, k.second, c);
    return out;
  }

  /// Terms of total degree exactly d.
  BivarPoly homogeneous_part(int d) const {
    BivarPoly out;
    for (const auto& [k, c] : terms_)
      if (k.first + k.second == d) out.add_term(k.first, k.second, c);
    return out;
  }

  template <class V>
  V evaluate(const V& a, const V& b) const {
    V acc(0);
    for (const auto& [k, c] : terms_) {
      V m(c);
      for (int i = 0; i < k.first; ++i) m = m * a;
      for (int i = 0; i < k.second; ++i) m = m * b;
      acc += m;
    }
    return acc;
  }

  BivarPoly d_alpha() const {
    BivarPoly out;
    for (const auto& [k, c] : terms_)
      if (k.first > 0) out.add_term(k.first - 1, k.second, c * C(k.first));
    return out;
  }
  BivarPoly d_beta() const {
    BivarPoly out;
    for (const auto& [k, c] : terms_)
      if (k.second > 0) out.add_term(k.first, k.second - 1, c * C(k.second));
    return out;
  }

  /// Coefficients as a polynomial in beta whose coefficients are polynomials in alpha.
  std::vector<UniPoly<C>> as_poly_in_beta() const {
    std::vector<std::vector<C>> rows(std::max(0, degree_in_beta() + 1));
    for (const auto& [k, c] : terms_) {
      auto& r = rows[k.second];
      if (r.size() <= static_cast<std::size_t>(k.first)) r.resize(k.first + 1, C(0));
      r[k.first] += c;
    }
    std::vector<UniPoly<C>> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.emplace_back(std::move(r));
    return out;
  }

  template <class F>
  auto map_coefficients(F f) const -> BivarPoly<decltype(f(std::declval<const C&>()))> {
    BivarPoly<decltype(f(std::declval<const C&>()))> out;
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, f(c));
    return out;
  }

  BivarPoly operator-() const {
    BivarPoly out(*this);
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
  }
  BivarPoly& operator+=(const BivarPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  BivarPoly& operator-=(const BivarPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
  }
  BivarPoly& operator*=(const BivarPoly& o) { return *this = *this * o; }
  BivarPoly& operator*=(const C& s) {
    if (zero_entry(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
    BivarPoly out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
  }
  friend BivarPoly operator*(BivarPoly a, const C& s) { return a *= s; }
  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.terms_ == b.terms_; }

private:
  std::map<Key, C> terms_;
};

} // namespace symflag
