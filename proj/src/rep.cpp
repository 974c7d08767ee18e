#include "symflag/rep.hpp"

#include "symflag/matrix_io.hpp"

#include <set>

namespace symflag {

namespace {

std::vector<std::uint64_t> collect_radicands(const std::vector<const Matrix<Exact>*>& ms) {
  std::set<std::uint64_t> out;
  for (const auto* m : ms)
    for (const auto& x : m->data())
      for (auto r : x.radicands()) out.insert(r);
  return {out.begin(), out.end()};
}

Sl2Triple build_even(int n) {
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  Sl2Triple t{n, Matrix<Exact>(d, d), Matrix<Exact>(d, d), Matrix<Exact>(d, d)};
  for (int k = 0; k < n; ++k) t.H.set_block(2 * k, 2 * k, basis_I<Exact>() * Exact(n - 1 - 2 * k));
  const int mid = n / 2;
  for (int k = 1; k <= n - 1; ++k) {
    const Exact c = rep_coefficient(n, k);
    Matrix<Exact> xb, yb;
    if (k < mid) {
      xb = basis_I<Exact>() * c;
      yb = basis_R<Exact>() * c;
    } else if (k == mid) {
      xb = basis_T<Exact>() * c;
      yb = basis_P<Exact>() * c;
    } else {
      xb = basis_I<Exact>() * Exact(-c);
      yb = basis_R<Exact>() * c;
    }
    const auto r = static_cast<std::size_t>(2 * (k - 1));
    t.X.set_block(r, r + 2, xb);
    t.Y.set_block(r, r + 2, yb);
  }
  return t;
}

} // namespace

std::vector<std::uint64_t> Sl2Triple::radicands() const { return collect_radicands({&H, &X, &Y}); }

Exact rep_coefficient(int n, int k) {
  if (k < 1 || k >= n) throw rep_error("rep_coefficient: k must lie in 1..n-1");
  return Exact::sqrt(Rational(k * n - k * k));
}

int effective_degree(int n) {
  if (n < 2) throw rep_error("effective_degree: n must be >= 2");
  return n % 2 == 0 ? n - 1 : n - 2;
}

Sl2Triple build_rho(int n) {
  if (n < 2) throw rep_error("build_rho: n must be >= 2");
  Sl2Triple t;
  if (n % 2 == 0) {
    t = build_even(n);
  } else {
    const auto lower = build_rho(n - 1);
    t = {n, embed_sp_algebra(lower.H), embed_sp_algebra(lower.X), embed_sp_algebra(lower.Y)};
  }
  const auto checks = check_triple(t);
  if (!checks.all()) throw rep_error("build_rho: bracket relations fail for n = " + std::to_string(n));
  return t;
}

TripleChecks check_triple(const Sl2Triple& t) {
  const auto j = standard_J<Exact>(t.n).gram;
  TripleChecks c;
  c.h_x = commutator(t.H, t.X) == Matrix<Exact>(t.X * Exact(2));
  c.h_y = commutator(t.H, t.Y) == Matrix<Exact>(t.Y * Exact(2));
  c.x_y = commutator(t.X, t.Y).is_zero();
  c.x_xt = commutator(t.X, t.X.transpose()) == t.H;
  c.x_sp = Matrix<Exact>(t.X.transpose() * j + j * t.X).is_zero();
  c.y_sp = Matrix<Exact>(t.Y.transpose() * j + j * t.Y).is_zero();
  return c;
}

nlohmann::json triple_to_json(const Sl2Triple& t) {
  return {{"n", t.n}, {"radicands", t.radicands()}, {"H", matrix_to_json(t.H)}, {"X", matrix_to_json(t.X)}, {"Y", matrix_to_json(t.Y)}};
}

ExpSeries::ExpSeries(const Sl2Triple& t) : n_(t.n) {
  const std::size_t d = 2 * static_cast<std::size_t>(n_);
  zero_ = Matrix<Exact>(d, d);
  terms_.resize(static_cast<std::size_t>(n_));
  last_.resize(static_cast<std::size_t>(n_));
  // X^a / a!
  std::vector<Matrix<Exact>> xa{Matrix<Exact>::identity(d)};
  for (int a = 1; a < n_; ++a) xa.push_back(Matrix<Exact>(xa.back() * t.X) * Exact(Rational(1, a)));
  for (int a = 0; a < n_; ++a) {
    Matrix<Exact> cur = xa[static_cast<std::size_t>(a)];
    for (int b = 0; a + b < n_; ++b) {
      if (b > 0) cur = Matrix<Exact>(cur * t.Y) * Exact(Rational(1, b));
      terms_[a].push_back(cur);
      last_[a].push_back(cur.block(0, d - 2, d, 2));
    }
  }
}

const Matrix<Exact>& ExpSeries::term(int a, int b) const {
  if (a < 0 || b < 0) throw rep_error("ExpSeries: negative power");
  if (a + b >= n_) return zero_;
  return terms_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

const Matrix<Exact>& ExpSeries::last_columns(int a, int b) const {
  if (a < 0 || b < 0) throw rep_error("ExpSeries: negative power");
  if (a + b >= n_) throw rep_error("ExpSeries: term vanishes identically");
  return last_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

Block2<BivarPoly<Exact>> top_right_polys(const ExpSeries& series) {
  Block2<BivarPoly<Exact>> out;
  for (int a = 0; a <= series.max_order(); ++a)
    for (int b = 0; a + b <= series.max_order(); ++b) {
      const auto& m = series.term(a, b);
      const auto c = block2_decompose(m.block(0, m.cols() - 2, 2, 2));
      out.i_coef.add_term(a, b, c.i_coef);
      out.r_coef.add_term(a, b, c.r_coef);
      out.t_coef.add_term(a, b, c.t_coef);
      out.p_coef.add_term(a, b, c.p_coef);
    }
  return out;
}

} // namespace symflag
