#include "symflag/roots.hpp"

#include "symflag/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace symflag;

namespace {

QPoly from_roots(const std::vector<Rational>& roots) {
  QPoly p(Rational(1));
  for (const auto& r : roots) p *= QPoly(std::vector<Rational>{-r, 1});
  return p;
}

QBivar term(int a, int b, const Rational& c) {
  QBivar p;
  p.add_term(a, b, c);
  return p;
}

} // namespace

TEST_CASE("gcd and squarefree part") {
  const QPoly p = from_roots({1, 1, 2, Rational(-1, 3)});
  CHECK(squarefree_part(p) == from_roots({1, 2, Rational(-1, 3)}));
  CHECK(poly_gcd(from_roots({1, 2}), from_roots({2, 3})) == from_roots({2}));
  CHECK(poly_gcd(QPoly(), QPoly()).is_zero());
}

TEST_CASE("real root isolation") {
  const std::vector<Rational> roots{-5, Rational(-1, 2), 0, Rational(1, 1000), 3};
  const QPoly p = from_roots(roots);
  const auto iv = isolate_real_roots(p);
  REQUIRE(iv.size() == roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(iv[i].lo <= roots[i]);
    CHECK(roots[i] <= iv[i].hi);
  }
  // x^2 - 2: two irrational roots refined to 2^-60.
  const QPoly q(std::vector<Rational>{-2, 0, 1});
  const auto r = real_roots(q);
  REQUIRE(r.size() == 2);
  CHECK(std::fabs(r[1].get_d() - std::sqrt(2.0)) < 1e-15);
  CHECK(std::fabs(r[0].get_d() + std::sqrt(2.0)) < 1e-15);
  // No real roots.
  CHECK(isolate_real_roots(QPoly(std::vector<Rational>{1, 0, 1})).empty());
  CHECK(isolate_real_roots(QPoly(Rational(3))).empty());
  CHECK_THROWS_AS(isolate_real_roots(QPoly()), root_error);
  // Repeated roots are handled through the squarefree part.
  CHECK(real_roots(from_roots({2, 2, 2})).size() == 1);

  // Randomized: Sturm count agrees with the number of distinct planted roots.
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    std::vector<Rational> planted;
    const int k = static_cast<int>(rng.integer(1, 6));
    for (int i = 0; i < k; ++i) planted.push_back(rng.rational(20, 7));
    QPoly p2 = from_roots(planted) * QPoly(std::vector<Rational>{1, 0, 1}); // plus two complex roots
    std::sort(planted.begin(), planted.end());
    planted.erase(std::unique(planted.begin(), planted.end()), planted.end());
    const auto found = real_roots(p2);
    REQUIRE(found.size() == planted.size());
    for (std::size_t i = 0; i < found.size(); ++i) CHECK(std::fabs(Rational(found[i] - planted[i]).get_d()) < 1e-15);
  }
}

TEST_CASE("resultant") {
  // f = beta - alpha^2, g = beta^2 + alpha - 1  =>  Res = alpha^4 + alpha - 1 (up to sign).
  const QBivar f = term(0, 1, 1) - term(2, 0, 1);
  const QBivar g = term(0, 2, 1) + term(1, 0, 1) - term(0, 0, 1);
  const QPoly r = resultant_in_beta(f, g);
  const QPoly expect(std::vector<Rational>{-1, 1, 0, 0, 1});
  CHECK((r == expect || r == -expect));
  // Shared factor => zero resultant.
  const QBivar common = term(0, 1, 1) + term(1, 0, 1);
  CHECK(resultant_in_beta(common * f, common * g).is_zero());
  // beta-degree 0 in one argument.
  CHECK(resultant_in_beta(term(1, 0, 1), term(0, 1, 1)) == QPoly(std::vector<Rational>{0, 1}));
  // Oracle: for f = beta - r(alpha), Res = +-g(alpha, r(alpha)).
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    QBivar ra;
    for (int a = 0; a <= 2; ++a) ra.add_term(a, 0, rng.rational(5, 3));
    QBivar gg;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 3; ++b) gg.add_term(a, b, rng.rational(5, 3));
    const QBivar ff = term(0, 1, 1) - ra;
    // g(alpha, r(alpha)) by substitution.
    const QPoly rpoly = ra.as_poly_in_beta()[0];
    QPoly sub;
    for (const auto& [k, c] : gg.terms()) {
      QPoly m(c);
      for (int i = 0; i < k.first; ++i) m *= QPoly(std::vector<Rational>{0, 1});
      for (int i = 0; i < k.second; ++i) m *= rpoly;
      sub += m;
    }
    const QPoly res = resultant_in_beta(ff, gg);
    CHECK((res == sub || res == -sub));
  }
}

TEST_CASE("common real root") {
  BivarPoly<double> f, g;
  f.add_term(1, 0, 1.0);
  g.add_term(0, 1, 1.0);
  auto r = common_real_root(f, g);
  REQUIRE(r);
  CHECK(r->alpha == 0.0);
  CHECK(r->beta == 0.0);

  f.add_term(0, 0, -1.0);
  g.add_term(0, 0, -2.0);
  r = common_real_root(f, g);
  REQUIRE(r);
  CHECK(r->alpha == doctest::Approx(1.0));
  CHECK(r->beta == doctest::Approx(2.0));
  CHECK(r->resultant_degree == 1);

  // Circle and line: alpha^2 + beta^2 - 1 and alpha - beta.
  BivarPoly<double> c, l;
  c.add_term(2, 0, 1.0);
  c.add_term(0, 2, 1.0);
  c.add_term(0, 0, -1.0);
  l.add_term(1, 0, 1.0);
  l.add_term(0, 1, -1.0);
  r = common_real_root(c, l);
  REQUIRE(r);
  CHECK(std::fabs(std::fabs(r->alpha) - std::sqrt(0.5)) < 1e-14);
  CHECK(std::fabs(r->alpha - r->beta) < 1e-14);

  // No real intersection.
  BivarPoly<double> c2 = c;
  c2.add_term(0, 0, 2.0); // alpha^2 + beta^2 + 1
  CHECK_FALSE(common_real_root(c2, l));
}
