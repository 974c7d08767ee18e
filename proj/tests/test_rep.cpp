#include "symflag/rep.hpp"

#include <doctest.h>

using namespace symflag;

using MX = Matrix<Exact>;
using MF = Matrix<double>;

namespace {

Exact rational_draw(Rng& rng) { return Exact(rng.rational(5, 4)); }

std::vector<Exact> draw_vector(Rng& rng, int len) {
  std::vector<Exact> v;
  for (int i = 0; i < len; ++i) v.push_back(rational_draw(rng));
  return v;
}

Exact norm2(const std::vector<Exact>& v) {
  Exact s(0);
  for (const auto& x : v) s += x * x;
  return s;
}

// Oracle for the even case: the top-right block of exp of a block
// superdiagonal matrix is C_1 C_2 ... C_{n-1} / (n-1)!.
MX block_product_oracle(const Sl2Triple& t, const Exact& alpha, const Exact& beta) {
  MX prod = MX::identity(2);
  Rational fact = 1;
  for (int k = 1; k <= t.n - 1; ++k) {
    const auto r = static_cast<std::size_t>(2 * (k - 1));
    const MX c = MX(t.X.block(r, r + 2, 2, 2) * alpha) + MX(t.Y.block(r, r + 2, 2, 2) * beta);
    prod = prod * c;
    fact *= k;
  }
  return prod * Exact(Rational(1 / fact));
}

} // namespace

TEST_CASE("rep coefficients and small cases") {
  CHECK(rep_coefficient(2, 1) == Exact(1));
  CHECK(rep_coefficient(4, 1) == Exact::sqrt(3));
  CHECK(rep_coefficient(4, 2) == Exact(2));
  CHECK(rep_coefficient(4, 3) == Exact::sqrt(3));
  CHECK_THROWS_AS(rep_coefficient(4, 4), rep_error);

  const auto t2 = build_rho(2);
  CHECK(t2.H == MX{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
  CHECK(t2.X.block(0, 2, 2, 2) == basis_T<Exact>());
  CHECK(t2.Y.block(0, 2, 2, 2) == basis_P<Exact>());
  CHECK(MX(t2.X - MX(t2.X.block(0, 0, 4, 4))).is_zero());

  const auto t4 = build_rho(4);
  std::vector<int> diag;
  for (std::size_t i = 0; i < 8; ++i) diag.push_back(static_cast<int>(t4.H(i, i).to_double()));
  CHECK(diag == std::vector<int>{3, 3, 1, 1, -1, -1, -3, -3});
  CHECK(t4.radicands() == std::vector<std::uint64_t>{3});
  CHECK_THROWS_AS(build_rho(1), rep_error);
}

TEST_CASE("bracket relations and symplectic membership") {
  for (int n = 2; n <= 7; ++n) {
    const auto t = build_rho(n);
    const auto c = check_triple(t);
    CHECK(c.h_x);
    CHECK(c.h_y);
    CHECK(c.x_y);
    CHECK(c.x_xt);
    CHECK(c.x_sp);
    CHECK(c.y_sp);
    // H diagonal with decreasing entries.
    for (std::size_t i = 0; i < t.H.rows(); ++i)
      for (std::size_t j = 0; j < t.H.cols(); ++j)
        if (i != j) CHECK(t.H(i, j).is_zero());
    for (std::size_t i = 1; i < t.H.rows(); ++i) CHECK(t.H(i, i) <= t.H(i - 1, i - 1));
    if (n % 2 == 1) {
      const auto lower = build_rho(n - 1);
      CHECK(t.X == embed_sp_algebra(lower.X));
      CHECK(t.H(n - 1, n - 1).is_zero());
    }
  }
  // A wrong middle block breaks [X, Y] = 0.
  auto bad = build_rho(4);
  bad.Y.set_block(2, 4, basis_R<Exact>() * Exact(2));
  CHECK_FALSE(check_triple(bad).x_y);
}

TEST_CASE("exp series") {
  for (int n = 2; n <= 5; ++n) {
    const auto t = build_rho(n);
    const ExpSeries s(t);
    const std::size_t d = 2 * static_cast<std::size_t>(n);
    CHECK(s.evaluate(Exact(0), Exact(0)) == MX::identity(d));
    Rng rng(31, static_cast<std::uint64_t>(n));
    const Exact a = rational_draw(rng), b = rational_draw(rng);
    const MX e = s.evaluate(a, b);
    CHECK(e == nilpotent_exp(MX(MX(t.X * a) + MX(t.Y * b))));
    CHECK(is_symplectic(e, standard_J<Exact>(n)));
    const MF ef = s.evaluate(a.to_double(), b.to_double());
    CHECK(approx_equal(ef, to_float(e)));
  }
}

TEST_CASE("top-right block") {
  for (int n = 2; n <= 7; ++n) {
    const auto t = build_rho(n);
    const ExpSeries s(t);
    const auto polys = top_right_polys(s);
    CHECK(polys.i_coef.is_zero());
    CHECK(polys.r_coef.is_zero());
    const int deg = effective_degree(n);
    CHECK(polys.t_coef.total_degree() == deg);
    CHECK(polys.p_coef.total_degree() == deg);
    CHECK(deg % 2 == 1);
    // Homogeneous: only the top degree survives.
    CHECK(polys.t_coef.leading_form() == polys.t_coef);
    CHECK(polys.p_coef.leading_form() == polys.p_coef);

    Rng rng(41, static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 5; ++trial) {
      const Exact a = rational_draw(rng), b = rational_draw(rng);
      const auto blk = top_right_block(s, a, b);
      CHECK(blk.t_coef == polys.t_coef.evaluate(a, b));
      CHECK(blk.p_coef == polys.p_coef.evaluate(a, b));
      if (n % 2 == 0) {
        CHECK(blk.reconstruct() == block_product_oracle(t, a, b));
      } else {
        CHECK(blk == top_right_block(ExpSeries(build_rho(n - 1)), a, b));
      }
    }
  }
  const ExpSeries s2(build_rho(2));
  const auto b2 = top_right_block(s2, Exact(3), Exact(-2));
  CHECK(b2.t_coef == Exact(3));
  CHECK(b2.p_coef == Exact(-2));
  CHECK(top_right_block(s2, Exact(0), Exact(0)) == Block2<Exact>{});
  const auto t4 = build_rho(4);
  CHECK(top_right_block(ExpSeries(t4), Exact(1), Exact(0)).reconstruct() == block_product_oracle(t4, Exact(1), Exact(0)));
}

TEST_CASE("limit points") {
  for (int n = 2; n <= 5; ++n) {
    const auto form = standard_J<Exact>(n);
    const ExpSeries s(build_rho(n));
    const auto origin = limit_point<Exact>(s, {});
    CHECK(origin.sl == sl_tau_minus<Exact>(n));
    const auto inf = limit_point<Exact>(s, {Exact(0), Exact(0), true});
    CHECK(inf.sl == sl_tau_plus<Exact>(n));
    CHECK(are_antipodal(origin.sl, inf.sl, form));
    CHECK(are_antipodal(origin.iso2, inf.iso2, form));
    Rng rng(51, static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 20; ++trial) {
      const LimitPoint<Exact> p{rational_draw(rng), rational_draw(rng)};
      LimitPoint<Exact> q{rational_draw(rng), rational_draw(rng)};
      if (p.alpha == q.alpha && p.beta == q.beta) q.alpha += Exact(1);
      const auto fp = limit_point(s, p), fq = limit_point(s, q);
      CHECK(is_isotropic(fp.iso2.basis(), form));
      CHECK(fp.sl == iso2_to_sl(fp.iso2, form));
      CHECK(are_antipodal(fp.sl, fq.sl, form));
      CHECK(are_antipodal(fp.iso2, fq.iso2, form));
      CHECK(are_antipodal(fp.sl, inf.sl, form));
    }
  }
  // n = 2: the 2-plane is spanned by the columns of [[alpha T + beta P], [I]].
  const ExpSeries s2(build_rho(2));
  const auto f = limit_point<Exact>(s2, {Exact(2), Exact(5)});
  MX expect(4, 2);
  expect.set_block(0, 0, MX(MX(basis_T<Exact>() * Exact(2)) + MX(basis_P<Exact>() * Exact(5))));
  expect.set_block(2, 0, MX::identity(2));
  CHECK(f.sl == ThetaFlag<Exact>(FlagKind::SlType, 2, {2}, expect));
}

TEST_CASE("SU horocyclic groups") {
  for (int n = 2; n <= 6; ++n) {
    const std::size_t d = 2 * static_cast<std::size_t>(n);
    const auto m = static_cast<std::size_t>(n - 2);
    const std::vector<Exact> zeros(m);
    CHECK(su_horocyclic_U_prime<Exact>(n, {zeros, zeros, Exact(0)}) == MX::identity(d));
    CHECK(su_horocyclic_U<Exact>(n, {zeros, zeros, zeros, zeros}) == MX::identity(d));
    CHECK(top_right(su_horocyclic_U_prime<Exact>(n, {zeros, zeros, Exact(1)})) == basis_R<Exact>());
    UParams<Exact> up{zeros, zeros, zeros, zeros, Exact(0), Exact(1), Exact(0)};
    CHECK(top_right(su_horocyclic_U<Exact>(n, up)) == basis_T<Exact>());
    CHECK(su_q(up).is_zero());

    const auto jh = hermitian_J_h<Exact>(n);
    Rng rng(61, static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 10; ++trial) {
      const UPrimeParams<Exact> pp{draw_vector(rng, n - 2), draw_vector(rng, n - 2), rational_draw(rng)};
      const MX g1 = su_horocyclic_U_prime(n, pp);
      CHECK(is_symplectic(g1, jh));
      CHECK(in_block_unipotent_shape(ThetaSet(n, {2}), g1));
      const MX expect = MX(basis_I<Exact>() * Exact(-(norm2(pp.alpha) + norm2(pp.beta)) * Exact(Rational(1, 2)))) +
                        MX(basis_R<Exact>() * pp.gamma);
      CHECK(top_right(g1) == expect);

      const UParams<Exact> q{draw_vector(rng, n - 2), draw_vector(rng, n - 2), draw_vector(rng, n - 2),
                             draw_vector(rng, n - 2), rational_draw(rng), rational_draw(rng), rational_draw(rng)};
      const MX g2 = su_horocyclic_U(n, q);
      CHECK(is_symplectic(g2, jh));
      CHECK(top_right(g2) == detail::combine2(su_q(q), q.b, q.c, q.d));
      for (int k = 0; k < n - 2; ++k) {
        const auto r = static_cast<std::size_t>(2 + 2 * k);
        CHECK(g2.block(r, d - 2, 2, 2) == detail::combine2(q.u[k], q.v[k], q.w[k], q.z[k]));
        CHECK(g2.block(0, r, 2, 2) == detail::combine2(Exact(-q.u[k]), q.v[k], q.w[k], q.z[k]));
      }
      // U' sits inside U (w = z = 0).
      CHECK(su_horocyclic_U<Exact>(n, {pp.alpha, pp.beta, zeros, zeros, pp.gamma, Exact(0), Exact(0)}) == g1);
      // Products stay in the group.
      CHECK(is_symplectic(MX(g1 * g2), jh));
      // In standard coordinates the elements are symplectic for J.
      CHECK(is_symplectic(change_of_form(g2, FormDirection::HermitianToStandard), standard_J<Exact>(n)));
    }
  }
  CHECK_THROWS_AS(su_horocyclic_U_prime<Exact>(3, {{}, {}, Exact(0)}), rep_error);
}

TEST_CASE("non-maximality seed") {
  for (int n = 2; n <= 5; ++n) {
    const MX g = non_maximality_seed<Exact>(n);
    const MX ginv = inverse(g);
    Rng rng(71, static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 20; ++trial) {
      const UPrimeParams<Exact> pp{draw_vector(rng, n - 2), draw_vector(rng, n - 2), rational_draw(rng)};
      const auto blk = block2_decompose(top_right(MX(ginv * su_horocyclic_U_prime(n, pp))));
      CHECK(blk.i_coef == Exact(-(norm2(pp.alpha) + norm2(pp.beta) + Exact(2)) * Exact(Rational(1, 2))));
      CHECK(blk.r_coef == pp.gamma);
      CHECK(blk.t_coef.is_zero());
      CHECK(blk.p_coef.is_zero());
      CHECK(blk.determinant() >= Exact(1));
    }
  }
}
