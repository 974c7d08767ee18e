#include "symflag/roots.hpp"

#include <algorithm>
#include <cmath>

namespace symflag {

namespace {

QPoly monic(const QPoly& p) {
  if (p.is_zero()) return p;
  return p * Rational(1 / p.leading());
}

int sign_at(const QPoly& p, const Rational& x) { return sgn(p.evaluate(x)); }

Rational abs_q(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

// Strict bound on the absolute value of every real root.
Rational cauchy_bound(const QPoly& p) {
  Rational m = 0;
  const auto& c = p.coefficients();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, Rational(abs_q(c[i] / p.leading())));
  return m + 1;
}

QPoly exact_quotient(const QPoly& a, const QPoly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw root_error("resultant: inexact division in fraction-free elimination");
  return q;
}

void isolate(const QPoly& p, const std::vector<QPoly>& seq, Rational lo, Rational hi, int count,
             std::vector<RootInterval>& out, int depth) {
  if (count <= 0) return;
  if (count == 1) {
    out.push_back({lo, hi});
    return;
  }
  if (depth > 4000) throw root_error("isolate_real_roots: no separation, polynomial is not squarefree");
  // Split away from roots so that every piece is half-open with a nonzero endpoint.
  static const int num[] = {1, 3, 2, 5, 4, 7};
  static const int den[] = {2, 7, 5, 11, 9, 13};
  Rational mid;
  bool found = false;
  for (int i = 0; i < 6 && !found; ++i) {
    mid = lo + (hi - lo) * Rational(num[i], den[i]);
    found = sign_at(p, mid) != 0;
  }
  if (!found) throw root_error("isolate_real_roots: could not find a split point");
  const int vlo = sign_changes(seq, lo), vmid = sign_changes(seq, mid), vhi = sign_changes(seq, hi);
  isolate(p, seq, lo, mid, vlo - vmid, out, depth + 1);
  isolate(p, seq, mid, hi, vmid - vhi, out, depth + 1);
}

} // namespace

QPoly poly_gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

QPoly squarefree_part(const QPoly& p) {
  if (p.degree() <= 0) return monic(p);
  return monic(divmod(p, poly_gcd(p, p.derivative())).first);
}

QPoly resultant_in_beta(const QBivar& f, const QBivar& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const auto fc = f.as_poly_in_beta();
  const auto gc = g.as_poly_in_beta();
  const std::size_t m = fc.size() - 1, n = gc.size() - 1;
  const std::size_t size = m + n;
  if (size == 0) return QPoly(Rational(1));
  // Rows 0..n-1: shifts of f; rows n..n+m-1: shifts of g. Coefficients in
  // descending beta-degree.
  std::vector<std::vector<QPoly>> s(size, std::vector<QPoly>(size));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) s[r][r + k] = fc[m - k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) s[n + r][r + k] = gc[n - k];
  int sign = 1;
  QPoly prev(Rational(1));
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (s[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < size && s[p][k].is_zero()) ++p;
      if (p == size) return {};
      std::swap(s[k], s[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) s[i][j] = exact_quotient(s[k][k] * s[i][j] - s[i][k] * s[k][j], prev);
      s[i][k] = QPoly();
    }
    prev = s[k][k];
  }
  QPoly det = s[size - 1][size - 1];
  return sign < 0 ? -det : det;
}

std::vector<QPoly> sturm_sequence(const QPoly& p) {
  std::vector<QPoly> seq{p};
  if (p.degree() <= 0) return seq;
  seq.push_back(p.derivative());
  while (seq.back().degree() > 0) {
    auto r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

int sign_changes(const std::vector<QPoly>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& q : seq) {
    const int s = sign_at(q, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<RootInterval> isolate_real_roots(const QPoly& p) {
  if (p.is_zero()) throw root_error("isolate_real_roots: zero polynomial");
  std::vector<RootInterval> out;
  if (p.degree() == 0) return out;
  const auto seq = sturm_sequence(p);
  const Rational b = cauchy_bound(p);
  isolate(p, seq, -b, b, sign_changes(seq, -b) - sign_changes(seq, b), out, 0);
  return out;
}

RootInterval refine_root(const QPoly& p, RootInterval iv, int bits) {
  if (iv.exact()) return iv;
  if (sign_at(p, iv.hi) == 0) return {iv.hi, iv.hi};
  const int slo = sign_at(p, iv.lo);
  if (slo == 0 || slo == sign_at(p, iv.hi)) throw root_error("refine_root: interval does not bracket a simple root");
  Rational width;
  mpq_set_ui(width.get_mpq_t(), 1, 1);
  mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), static_cast<unsigned long>(bits));
  while (iv.hi - iv.lo > width) {
    const Rational mid = iv.midpoint();
    const int s = sign_at(p, mid);
    if (s == 0) return {mid, mid};
    (s == slo ? iv.lo : iv.hi) = mid;
  }
  return iv;
}

std::vector<Rational> real_roots(const QPoly& p, int bits) {
  const QPoly sf = squarefree_part(p);
  std::vector<Rational> out;
  for (const auto& iv : isolate_real_roots(sf)) out.push_back(refine_root(sf, iv, bits).midpoint());
  return out;
}

QPoly specialize_alpha(const QBivar& f, const Rational& alpha0) {
  const auto rows = f.as_poly_in_beta();
  std::vector<Rational> c;
  for (const auto& r : rows) c.push_back(r.evaluate(alpha0));
  return QPoly(std::move(c));
}

QBivar rationalize(const BivarPoly<double>& f) {
  return f.map_coefficients([](double x) { return Rational(x); });
}

std::optional<CommonRoot> common_real_root(const BivarPoly<double>& f, const BivarPoly<double>& g, double accept) {
  const QBivar fq = rationalize(f), gq = rationalize(g);
  const QPoly res = resultant_in_beta(fq, gq);
  CommonRoot out;
  out.resultant_degree = res.degree();
  if (res.is_zero() || res.degree() < 1) return std::nullopt;
  const QPoly sf = squarefree_part(res);
  const auto intervals = isolate_real_roots(sf);
  out.isolation_intervals = intervals.size();
  out.real_alpha_roots = intervals.size();

  double coef_scale = 0.0;
  for (const auto* p : {&f, &g})
    for (const auto& [k, c] : p->terms()) coef_scale = std::max(coef_scale, std::fabs(c));
  const int deg = std::max(f.total_degree(), g.total_degree());
  const auto fa = f.d_alpha(), fb = f.d_beta(), ga = g.d_alpha(), gb = g.d_beta();
  auto residual = [&](long double a, long double b) {
    return std::max(std::fabs(f.evaluate(a, b)), std::fabs(g.evaluate(a, b)));
  };

  std::optional<CommonRoot> best;
  for (const auto& iv : intervals) {
    const Rational a0 = refine_root(sf, iv, 60).midpoint();
    std::vector<Rational> betas;
    for (const auto* p : {&fq, &gq}) {
      const QPoly h = specialize_alpha(*p, a0);
      if (h.degree() >= 1)
        for (const auto& b : real_roots(h)) betas.push_back(b);
    }
    for (const auto& b0 : betas) {
      long double a = a0.get_d(), b = b0.get_d();
      int steps = 0;
      long double r = residual(a, b);
      for (; steps < 30 && r > 0; ++steps) {
        const long double fv = f.evaluate(a, b), gv = g.evaluate(a, b);
        const long double j11 = fa.evaluate(a, b), j12 = fb.evaluate(a, b);
        const long double j21 = ga.evaluate(a, b), j22 = gb.evaluate(a, b);
        const long double det = j11 * j22 - j12 * j21;
        if (det == 0) break;
        const long double na = a - (j22 * fv - j12 * gv) / det;
        const long double nb = b - (j11 * gv - j21 * fv) / det;
        const long double nr = residual(na, nb);
        if (!(nr < r)) break;
        a = na;
        b = nb;
        r = nr;
      }
      const double scale = std::max(1.0, coef_scale) * std::pow(std::max(1.0L, std::max(std::fabs(a), std::fabs(b))), deg);
      if (r > accept * scale) continue;
      if (!best || r < best->residual) {
        out.alpha = static_cast<double>(a);
        out.beta = static_cast<double>(b);
        out.residual = static_cast<double>(r);
        out.newton_steps = steps;
        best = out;
      }
    }
    if (best) break;
  }
  return best;
}

} // namespace symflag
