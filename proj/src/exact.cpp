#include "symflag/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace symflag {

namespace {

std::uint64_t checked_product(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > static_cast<unsigned __int128>(UINT64_MAX))
    throw std::overflow_error("Exact: radicand product exceeds 64 bits");
  return static_cast<std::uint64_t>(p);
}

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

std::uint64_t to_u64(const mpz_class& z) {
  if (sgn(z) < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64)
    throw std::overflow_error("Exact: radicand exceeds 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

// Refines a list of squarefree integers > 1 into pairwise coprime factors such
// that every input is a product of distinct factors.
std::vector<std::uint64_t> coprime_base(std::vector<std::uint64_t> xs) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.erase(std::remove(xs.begin(), xs.end(), std::uint64_t{1}), xs.end());
    for (std::size_t i = 0; i < xs.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < xs.size() && !changed; ++j) {
        std::uint64_t g = std::gcd(xs[i], xs[j]);
        if (g > 1) {
          std::uint64_t a = xs[i] / g, b = xs[j] / g;
          xs[i] = a;
          xs[j] = b;
          xs.push_back(g);
          changed = true;
        }
      }
    }
  }
  return xs;
}

} // namespace

void squarefree_split(const mpz_class& n, mpz_class& square, mpz_class& squarefree) {
  if (sgn(n) <= 0) throw std::domain_error("squarefree_split: n must be positive");
  mpz_class rest = n;
  square = 1;
  squarefree = 1;
  mpz_class limit;
  mpz_root(limit.get_mpz_t(), n.get_mpz_t(), 3);
  limit += 1;
  if (mpz_sizeinbase(limit.get_mpz_t(), 2) > 40)
    throw std::overflow_error("squarefree_split: integer too large to factor");
  for (unsigned long p = 2; p <= limit.get_ui(); p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    for (unsigned k = 0; k < e / 2; ++k) square *= p;
    if (e % 2 == 1) squarefree *= p;
  }
  // No prime factor of `rest` is <= cbrt(n), so rest is 1, p, p^2 or p*q.
  if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
    square *= r;
  } else {
    squarefree *= rest;
  }
}

Exact::Exact(long num, long den) : rational_(num, den) {
  if (den == 0) throw std::domain_error("Exact: zero denominator");
  rational_.canonicalize();
}

Exact Exact::sqrt(const Rational& q) {
  if (sgn(q) < 0) throw std::domain_error("Exact::sqrt: negative argument");
  if (sgn(q) == 0) return Exact{};
  mpz_class n = q.get_num() * q.get_den();
  mpz_class sq, sf;
  squarefree_split(n, sq, sf);
  Rational coef(sq, q.get_den());
  coef.canonicalize();
  Exact out;
  if (sf == 1) {
    out.rational_ = coef;
  } else {
    out.terms_.push_back({to_u64(sf), coef});
  }
  return out;
}

Exact Exact::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("Exact::from_double: non-finite value");
  return Exact(Rational(v));
}

std::vector<std::uint64_t> Exact::radicands() const {
  std::vector<std::uint64_t> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.radicand);
  return out;
}

void Exact::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.radicand < b.radicand; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.radicand == 1) {
      rational_ += t.coef;
      continue;
    }
    if (!merged.empty() && merged.back().radicand == t.radicand) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(std::move(t));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return sgn(t.coef) == 0; }),
               merged.end());
  terms_ = std::move(merged);
}

Exact Exact::operator-() const {
  Exact out(*this);
  out.rational_ = -out.rational_;
  for (auto& t : out.terms_) t.coef = -t.coef;
  return out;
}

Exact& Exact::operator+=(const Exact& o) {
  rational_ += o.rational_;
  if (o.terms_.empty()) return *this;
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

Exact& Exact::operator-=(const Exact& o) {
  rational_ -= o.rational_;
  if (o.terms_.empty()) return *this;
  for (const auto& t : o.terms_) terms_.push_back({t.radicand, -t.coef});
  normalize();
  return *this;
}

Exact& Exact::operator*=(const Exact& o) {
  *this = *this * o;
  return *this;
}

Exact operator*(const Exact& a, const Exact& b) {
  Exact out;
  out.rational_ = a.rational_ * b.rational_;
  if (a.terms_.empty() && b.terms_.empty()) return out;
  std::vector<Exact::Term> terms;
  terms.reserve(a.terms_.size() + b.terms_.size() + a.terms_.size() * b.terms_.size());
  if (sgn(a.rational_) != 0)
    for (const auto& t : b.terms_) terms.push_back({t.radicand, a.rational_ * t.coef});
  if (sgn(b.rational_) != 0)
    for (const auto& t : a.terms_) terms.push_back({t.radicand, b.rational_ * t.coef});
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      std::uint64_t g = std::gcd(s.radicand, t.radicand);
      std::uint64_t r = checked_product(s.radicand / g, t.radicand / g);
      Rational c = s.coef * t.coef;
      c *= to_mpz(g);
      terms.push_back({r, std::move(c)});
    }
  }
  out.terms_ = std::move(terms);
  out.normalize();
  return out;
}

bool operator==(const Exact& a, const Exact& b) {
  if (a.rational_ != b.rational_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].radicand != b.terms_[i].radicand || a.terms_[i].coef != b.terms_[i].coef)
      return false;
  }
  return true;
}

Exact Exact::inverse() const {
  if (is_zero()) throw std::domain_error("Exact::inverse: division by zero");
  if (terms_.empty()) {
    Exact out;
    out.rational_ = 1 / rational_;
    return out;
  }
  // Split off one coprime generator g: x = a + b*sqrt(g) with a, b free of g.
  // Then x * (a - b*sqrt(g)) = a^2 - g*b^2 lies in a smaller field.
  const std::uint64_t g = coprime_base(radicands()).front();
  Exact a, b;
  a.rational_ = rational_;
  for (const auto& t : terms_) {
    if (t.radicand % g == 0) {
      if (t.radicand == g) {
        b.rational_ += t.coef;
      } else {
        b.terms_.push_back({t.radicand / g, t.coef});
      }
    } else {
      a.terms_.push_back(t);
    }
  }
  b.normalize();
  Exact root;
  root.terms_.push_back({g, Rational(1)});
  Exact conj = a - b * root;
  Exact norm = a * a - Exact(Rational(to_mpz(g))) * b * b;
  return conj * norm.inverse();
}

void Exact::bounds(unsigned bits, Rational& lo, Rational& hi) const {
  lo = rational_;
  hi = rational_;
  mpz_class scale = 1;
  scale <<= bits;
  for (const auto& t : terms_) {
    mpz_class s = to_mpz(t.radicand);
    s <<= 2 * bits;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    Rational l(r, scale), h(r + 1, scale);
    l.canonicalize();
    h.canonicalize();
    if (sgn(t.coef) > 0) {
      lo += t.coef * l;
      hi += t.coef * h;
    } else {
      lo += t.coef * h;
      hi += t.coef * l;
    }
  }
}

int Exact::sign() const {
  if (terms_.empty()) return sgn(rational_);
  Rational lo, hi;
  for (unsigned bits = 32; bits <= (1u << 20); bits *= 2) {
    bounds(bits, lo, hi);
    if (sgn(lo) > 0) return 1;
    if (sgn(hi) < 0) return -1;
  }
  throw std::logic_error("Exact::sign: refinement did not separate a nonzero value from 0");
}

double Exact::to_double() const {
  if (terms_.empty()) return rational_.get_d();
  Rational lo, hi;
  for (unsigned bits = 64; bits <= (1u << 20); bits *= 2) {
    bounds(bits, lo, hi);
    Rational width = hi - lo;
    Rational mag = ::abs(lo) > ::abs(hi) ? Rational(::abs(lo)) : Rational(::abs(hi));
    if (sgn(lo) * sgn(hi) > 0 && width * (Rational(1) << 60) <= mag) {
      Rational mid = (lo + hi) / 2;
      return mid.get_d();
    }
  }
  throw std::logic_error("Exact::to_double: refinement did not converge");
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw std::invalid_argument("parse_rational: malformed rational '" + s + "'");
  }
  if (s.front() == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("parse_rational: malformed rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator");
  q.canonicalize();
  return q;
}

std::string Exact::to_string() const {
  std::string out;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& suffix) {
    if (first) {
      out += rational_to_string(c) + suffix;
      first = false;
    } else if (sgn(c) < 0) {
      out += " - " + rational_to_string(Rational(-c)) + suffix;
    } else {
      out += " + " + rational_to_string(c) + suffix;
    }
  };
  if (sgn(rational_) != 0 || terms_.empty()) emit(rational_, "");
  for (const auto& t : terms_) emit(t.coef, "*sqrt(" + std::to_string(t.radicand) + ")");
  return out;
}

Exact Exact::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("Exact::parse: empty string");
  Exact out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw std::invalid_argument("Exact::parse: expected '+' or '-' in '" + s + "'");
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    if (term.empty()) throw std::invalid_argument("Exact::parse: empty term in '" + s + "'");
    Rational coef(1);
    std::string radical;
    auto star = term.find('*');
    if (star != std::string::npos) {
      coef = parse_rational(term.substr(0, star));
      radical = term.substr(star + 1);
    } else if (term.rfind("sqrt(", 0) == 0) {
      radical = term;
    } else {
      coef = parse_rational(term);
    }
    if (sign < 0) coef = -coef;
    if (radical.empty()) {
      out += Exact(coef);
      continue;
    }
    if (radical.rfind("sqrt(", 0) != 0 || radical.back() != ')')
      throw std::invalid_argument("Exact::parse: malformed radical '" + radical + "'");
    std::string digits = radical.substr(5, radical.size() - 6);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("Exact::parse: malformed radicand '" + digits + "'");
    out += Exact(coef) * Exact::sqrt(Rational(mpz_class(digits)));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Exact& x) { return os << x.to_string(); }

} // namespace symflag
