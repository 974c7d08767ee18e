#include "symflag/witness.hpp"

#include <doctest.h>

using namespace symflag;

using MX = Matrix<Exact>;
using MF = Matrix<double>;

namespace {

std::vector<Exact> draw_vector(Rng& rng, int len) {
  std::vector<Exact> v;
  for (int i = 0; i < len; ++i) v.push_back(Exact(rng.rational(5, 4)));
  return v;
}

Exact dot(const std::vector<Exact>& a, const std::vector<Exact>& b) {
  Exact s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Exact> add(const std::vector<Exact>& a, const std::vector<Exact>& b, long sign = 1) {
  std::vector<Exact> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i] * Exact(sign));
  return out;
}

MX exact_horocyclic(int n, Rng& rng) {
  const std::size_t m = 2 * static_cast<std::size_t>(n) - 4;
  auto fill = [&](std::size_t r, std::size_t c) {
    MX x(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) x(i, j) = Exact(rng.rational(3, 3));
    return x;
  };
  return sl_horocyclic_element<Exact>(n, fill(2, m), fill(2, 2), fill(m, 2));
}

} // namespace

TEST_CASE("extract_fT_fP examples") {
  const ExpSeries s2(build_rho(2));
  const auto id = extract_fT_fP(MX::identity(4), s2);
  CHECK(id.i_coef.is_zero());
  CHECK(id.r_coef.is_zero());
  CHECK(id.t_coef == BivarPoly<Exact>::alpha());
  CHECK(id.p_coef == BivarPoly<Exact>::beta());

  const MX gb = sl_horocyclic_element<Exact>(2, MX(), MX::identity(2), MX());
  const auto b = extract_fT_fP(gb, s2);
  CHECK(b.i_coef == BivarPoly<Exact>(Exact(1)));
  CHECK(b.r_coef.is_zero());
  CHECK(b.t_coef == BivarPoly<Exact>::alpha());
  CHECK(b.p_coef == BivarPoly<Exact>::beta());

  CHECK_THROWS_AS(extract_fT_fP(MX(build_rho(2).X), s2), witness_error);
}

TEST_CASE("coefficient polynomials: leading forms and determinant identity") {
  for (int n = 2; n <= 6; ++n) {
    const auto triple = build_rho(n);
    const ExpSeries s(triple);
    const auto bare = top_right_polys(s);
    const int deg = effective_degree(n);
    Rng rng(101, static_cast<std::uint64_t>(n));
    for (int t = 0; t < 10; ++t) {
      const MX g = exact_horocyclic(n, rng);
      const auto p = extract_fT_fP(g, s);
      CHECK(p.t_coef.total_degree() == deg);
      CHECK(p.p_coef.total_degree() == deg);
      CHECK(p.i_coef.total_degree() < deg);
      CHECK(p.r_coef.total_degree() < deg);
      CHECK(p.t_coef.homogeneous_part(deg) == bare.t_coef);
      CHECK(p.p_coef.homogeneous_part(deg) == bare.p_coef);
      CHECK(p.i_coef.homogeneous_part(deg).is_zero());
      const Exact a(rng.rational(4, 3)), b(rng.rational(4, 3));
      const MX z = top_right(MX(g * s.evaluate(a, b)));
      const Exact direct = z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0);
      const Exact via = p.i_coef.evaluate(a, b) * p.i_coef.evaluate(a, b) + p.r_coef.evaluate(a, b) * p.r_coef.evaluate(a, b) -
                        p.t_coef.evaluate(a, b) * p.t_coef.evaluate(a, b) - p.p_coef.evaluate(a, b) * p.p_coef.evaluate(a, b);
      CHECK(direct == via);
      // The determinant of the top-right block is the second antiprincipal minor
      // up to the column order, which swaps once.
      CHECK(antiprincipal_minor(MX(g * s.evaluate(a, b)), 2) == Exact(-direct));
    }
  }
}

TEST_CASE("sl2c witness: small cases") {
  const ExpSeries s2(build_rho(2));
  const auto w0 = sl2c_witness(MF::identity(4), s2);
  CHECK(w0.verdict == Verdict::WitnessFound);
  CHECK(w0.alpha == 0);
  CHECK(w0.beta == 0);
  CHECK(w0.residual == 0.0);
  CHECK(w0.perturbation_norm == 0.0);

  // B = I: det Z = 1 - alpha^2 - beta^2, so the witness lies on the unit circle.
  const MF gb = sl_horocyclic_element<double>(2, MF(), MF::identity(2), MF());
  const auto w1 = sl2c_witness(gb, s2);
  REQUIRE(w1.verdict == Verdict::WitnessFound);
  const double r2 = w1.alpha.get_d() * w1.alpha.get_d() + w1.beta.get_d() * w1.beta.get_d();
  CHECK(std::fabs(r2 - 1.0) < 1e-9);
  CHECK(w1.residual <= 1e-10);
  CHECK(w1.confirmed_non_antipodal);
  CHECK(w1.doublings >= 0);
  CHECK(w1.bisection_steps > 0);
}

TEST_CASE("sl2c witness: random horocyclic elements") {
  for (int n = 2; n <= 5; ++n) {
    const ExpSeries s(build_rho(n));
    Rng rng(202, static_cast<std::uint64_t>(n));
    for (int t = 0; t < 6; ++t) {
      const MF g = random_sl_horocyclic(n, rng);
      Sl2cOptions opt;
      opt.seed = static_cast<std::uint64_t>(t);
      const auto w = sl2c_witness(g, s, opt);
      REQUIRE(w.verdict == Verdict::WitnessFound);
      CHECK(w.residual <= 1e-10);
      CHECK(w.perturbation_norm <= 1e-6);
      CHECK(w.confirmed_non_antipodal);
      CHECK(w.root.resultant_degree == effective_degree(n) * effective_degree(n));
      // Independent recomputation of the residual from the exact matrix product.
      const MX z = top_right(MX(to_exact(w.g_perturbed) * s.evaluate(Exact(w.alpha), Exact(w.beta))));
      const double det = (z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0)).to_double();
      CHECK(std::fabs(std::fabs(det) - w.residual) <= 1e-14);
    }
  }
}

TEST_CASE("sl2c witness: jitter is bounded and reproducible") {
  const ExpSeries s(build_rho(3));
  Rng rng(303);
  const MF g = random_sl_horocyclic(3, rng);
  Sl2cOptions opt;
  opt.max_retries = 0;
  const auto a = sl2c_witness(g, s, opt);
  const auto b = sl2c_witness(g, s, opt);
  CHECK(a.alpha == b.alpha);
  CHECK(a.beta == b.beta);
  CHECK(a.attempts.size() == 1);
}

TEST_CASE("SU: I-coefficient of the product block") {
  // Direct computation decides the sign inside the second square:
  // I-coefficient = -|alpha + u|^2/2 - |beta + v|^2/2 + |w|^2/2 + |z|^2/2.
  for (int n = 3; n <= 5; ++n) {
    Rng rng(404, static_cast<std::uint64_t>(n));
    int plus_matches = 0, minus_matches = 0;
    for (int t = 0; t < 20; ++t) {
      const UParams<Exact> g{draw_vector(rng, n - 2), draw_vector(rng, n - 2), draw_vector(rng, n - 2), draw_vector(rng, n - 2),
                             Exact(rng.rational(3, 2)), Exact(rng.rational(3, 2)), Exact(rng.rational(3, 2))};
      const UPrimeParams<Exact> gp{draw_vector(rng, n - 2), draw_vector(rng, n - 2), Exact(rng.rational(3, 2))};
      const auto blk = block2_decompose(top_right(MX(su_horocyclic_U(n, g) * su_horocyclic_U_prime(n, gp))));
      const auto au = add(gp.alpha, g.u), bv_plus = add(gp.beta, g.v), bv_minus = add(gp.beta, g.v, -1);
      const Exact half(Rational(1, 2));
      const Exact common = (dot(g.w, g.w) + dot(g.z, g.z) - dot(au, au)) * half;
      plus_matches += blk.i_coef == common - dot(bv_plus, bv_plus) * half;
      minus_matches += blk.i_coef == common - dot(bv_minus, bv_minus) * half;
      // R, T, P coefficients.
      CHECK(blk.r_coef == gp.gamma + g.b + dot(g.v, gp.alpha) - dot(g.u, gp.beta));
      CHECK(blk.t_coef == g.c + dot(g.w, gp.alpha) + dot(g.z, gp.beta));
      CHECK(blk.p_coef == g.d + dot(g.z, gp.alpha) - dot(g.w, gp.beta));
    }
    CHECK(plus_matches == 20);
    CHECK(minus_matches < 20);
  }
}

TEST_CASE("SU witness") {
  {
    const std::vector<Exact> z(1);
    const auto w = su_witness<Exact>(3, {z, z, z, z});
    CHECK(w.verdict == Verdict::WitnessFound);
    CHECK(w.g_prime.alpha == z);
    CHECK(w.g_prime.gamma.is_zero());
    CHECK(w.det.is_zero());
  }
  {
    // w = e_1: alpha = e_1, beta = 0.
    const std::vector<Exact> z(2), e1{Exact(1), Exact(0)};
    const auto w = su_witness<Exact>(4, {z, z, e1, z});
    CHECK(w.g_prime.alpha == e1);
    CHECK(w.g_prime.beta == z);
    CHECK(w.block.i_coef.is_zero());
    CHECK(w.det.is_zero());
    CHECK(w.verdict == Verdict::WitnessFound);
  }
  for (int n = 3; n <= 5; ++n) {
    Rng rng(505, static_cast<std::uint64_t>(n));
    for (int t = 0; t < 10; ++t) {
      const UParams<Exact> g{draw_vector(rng, n - 2), draw_vector(rng, n - 2), draw_vector(rng, n - 2), draw_vector(rng, n - 2),
                             Exact(rng.rational(3, 2)), Exact(rng.rational(3, 2)), Exact(rng.rational(3, 2))};
      const auto w = su_witness(n, g);
      CHECK(w.det.is_zero());
      CHECK(w.block.i_coef.is_zero());
      CHECK(w.confirmed_standard);
      CHECK(w.confirmed_hermitian);
      CHECK(w.verdict == Verdict::WitnessFound);

      // Float mirror.
      auto to_d = [](const std::vector<Exact>& v) {
        std::vector<double> o;
        for (const auto& x : v) o.push_back(x.to_double());
        return o;
      };
      const UParams<double> gf{to_d(g.u), to_d(g.v), to_d(g.w), to_d(g.z), g.b.to_double(), g.c.to_double(), g.d.to_double()};
      const auto wf = su_witness(n, gf);
      CHECK(std::fabs(wf.det) <= 1e-12);
      CHECK(wf.verdict == Verdict::WitnessFound);
    }
  }
  CHECK_THROWS_AS(su_witness<Exact>(2, {{}, {}, {}, {}}), witness_error);
}

TEST_CASE("non-maximality") {
  const std::vector<Exact> z(1);
  CHECK(non_maximality_check<Exact>(3, {z, z, Exact(0)}) == Exact(1));
  CHECK(non_maximality_check<Exact>(3, {z, z, Exact(1)}) == Exact(2));
  for (int n = 3; n <= 5; ++n) {
    const MX g = non_maximality_seed<Exact>(n);
    Rng rng(606, static_cast<std::uint64_t>(n));
    for (int t = 0; t < 30; ++t) {
      const UPrimeParams<Exact> p{draw_vector(rng, n - 2), draw_vector(rng, n - 2), Exact(rng.rational(5, 3))};
      const Exact det = non_maximality_check(n, p);
      CHECK(det >= Exact(1));
      // The reverse block (g'^-1 g)_{1n} is (1 - r) I - gamma R with r = (|alpha|^2 + |beta|^2) / 2.
      const MX gp = su_horocyclic_U_prime(n, p);
      const Exact r = (dot(p.alpha, p.alpha) + dot(p.beta, p.beta)) * Exact(Rational(1, 2));
      const auto rev = block2_decompose(top_right(MX(inverse(gp) * g)));
      CHECK(rev.i_coef == Exact(1) - r);
      CHECK(rev.r_coef == -p.gamma);
      CHECK(rev.t_coef.is_zero());
      CHECK(rev.p_coef.is_zero());
      const bool anti = are_antipodal(act(g, sl_tau_minus<Exact>(n)), act(gp, sl_tau_minus<Exact>(n)), standard_J<Exact>(n));
      CHECK(anti == !(r == Exact(1) && p.gamma.is_zero()));
    }
  }
}

TEST_CASE("non-maximality: the seed fails against part of U'") {
  // |alpha|^2 + |beta|^2 = 2 and gamma = 0: det (g^-1 g')_{1n} = 4 but
  // (g'^-1 g)_{1n} = 0, so g tau_- and g' tau_- are not antipodal in F_{2,2n-2}.
  for (int n = 3; n <= 5; ++n) {
    std::vector<Exact> a(static_cast<std::size_t>(n - 2)), b(static_cast<std::size_t>(n - 2));
    a[0] = Exact(-1);
    b[0] = Exact(-1);
    const UPrimeParams<Exact> p{a, b, Exact(0)};
    CHECK(non_maximality_check(n, p) == Exact(4));
    const MX g = non_maximality_seed<Exact>(n);
    const MX gp = su_horocyclic_U_prime(n, p);
    CHECK(top_right(MX(inverse(gp) * g)) == MX(2, 2));
    CHECK_FALSE(are_antipodal(act(g, sl_tau_minus<Exact>(n)), act(gp, sl_tau_minus<Exact>(n)), standard_J<Exact>(n)));
    // Rank oracle: [g E_2 | g' E_{2n-2}] is singular.
    const std::size_t d = 2 * static_cast<std::size_t>(n);
    MX cols(d, d);
    cols.set_block(0, 0, MX(g * MX::identity(d)).block(0, d - 2, d, 2));
    cols.set_block(0, 2, MX(gp * MX::identity(d)).block(0, 2, d, d - 2));
    CHECK(determinant(cols).is_zero());
  }
}
