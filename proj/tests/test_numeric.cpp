#include "symflag/block2.hpp"
#include "symflag/linalg.hpp"
#include "symflag/matrix_io.hpp"
#include "symflag/poly.hpp"
#include "symflag/rng.hpp"

#include <doctest.h>

using namespace symflag;

using MX = Matrix<Exact>;
using MF = Matrix<double>;

TEST_CASE("exact scalars: field arithmetic with radicals") {
  const Exact s2 = Exact::sqrt(2), s3 = Exact::sqrt(3), s6 = Exact::sqrt(6);
  CHECK(s2 * s2 == Exact(2));
  CHECK(s2 * s3 == s6);
  CHECK(Exact::sqrt(8) == Exact(2) * s2);
  CHECK(Exact::sqrt(Rational(1, 2)) == s2 / Exact(2));
  CHECK((s2 + s3).inverse() * (s2 + s3) == Exact(1));
  const Exact x = Exact(3) + s2 - Exact(Rational(5, 7)) * s6;
  CHECK(x * x.inverse() == Exact(1));
  CHECK((s2 - s3).sign() < 0);
  CHECK((Exact(3) - s2 * s2 - Exact(1)).is_zero());
  CHECK(s2.to_double() == doctest::Approx(1.4142135623730951).epsilon(1e-16));
  // 1.41421356 vs sqrt(2): sign decided by refinement
  CHECK((s2 - Exact(Rational(141421356, 100000000))).sign() > 0);
}

TEST_CASE("exact scalars: text round trip") {
  const Exact vals[] = {Exact(0), Exact(-3), Exact(Rational(7, 12)), Exact::sqrt(5),
                        Exact(1) - Exact(Rational(2, 3)) * Exact::sqrt(3) + Exact::sqrt(10),
                        -Exact::sqrt(2)};
  for (const auto& v : vals) CHECK(Exact::parse(v.to_string()) == v);
  CHECK(Exact::parse("1/2 - 3/4*sqrt(3)") == Exact(Rational(1, 2)) - Exact(Rational(3, 4)) * Exact::sqrt(3));
  CHECK_THROWS(Exact::parse("1.5"));
  CHECK_THROWS(Exact::parse("1 +"));
}

TEST_CASE("det_submatrix examples") {
  const MX id = MX::identity(4);
  CHECK(det_submatrix(id, {0, 1}, {0, 1}) == Exact(1));
  CHECK(det_submatrix(id, {0}, {3}) == Exact(0));
  const MX m{{1, 2}, {3, 4}};
  CHECK(det_submatrix(m, {0, 1}, {0, 1}) == Exact(-2));
  CHECK_THROWS_AS(det_submatrix(m, {0, 2}, {0, 1}), matrix_error);
  CHECK_THROWS_AS(det_submatrix(m, {0, 0}, {0, 1}), matrix_error);
  CHECK_THROWS_AS(det_submatrix(m, {0}, {0, 1}), matrix_error);
}

// Independent oracle: Leibniz expansion over permutations.
template <class T>
T leibniz(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  T total(0);
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inv += p[i] > p[j];
    T term(1);
    for (std::size_t i = 0; i < n; ++i) term = term * m(i, p[i]);
    total = inv % 2 ? total - term : total + term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

TEST_CASE("determinant: Bareiss and LU agree with permutation expansion") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 6;
    MX m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = Exact(rng.integer(-10, 10));
    if (trial % 5 == 0) m(0, 0) = Exact(0); // force a row swap now and then
    const Exact d = determinant(m);
    CHECK(d == leibniz(m));
    const double df = determinant(to_float(m));
    CHECK(std::fabs(df - d.to_double()) <= 1e-9 * std::max(1.0, std::fabs(d.to_double())));
  }
  // with radicals
  const MX r{{Exact::sqrt(2), Exact(1)}, {Exact(3), Exact::sqrt(8)}};
  CHECK(determinant(r) == Exact(1));
}

TEST_CASE("det_submatrix: exact and float agree on random 10x10 matrices") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    MX m(10, 10);
    for (auto i = 0u; i < 10; ++i)
      for (auto j = 0u; j < 10; ++j) m(i, j) = Exact(rng.integer(-10, 10));
    std::vector<std::size_t> rows{0, 2, 3, 5, 7, 9}, cols{9, 8, 4, 1, 0, 6};
    const double e = det_submatrix(m, rows, cols).to_double();
    const double f = det_submatrix(to_float(m), rows, cols);
    CHECK(std::fabs(e - f) <= 1e-9 * std::max(1.0, std::fabs(e)));
  }
}

TEST_CASE("nilpotent_exp") {
  CHECK(nilpotent_exp(MX(4, 4)) == MX::identity(4));
  // n = 2, single superdiagonal block T: X^2 = 0 so exp(aX) = I + aX
  MX x(4, 4);
  x.set_block(0, 2, basis_T<Exact>());
  const Exact a(Rational(3, 7));
  CHECK(nilpotent_exp(x * a) == MX::identity(4) + x * a);
  // 6x6 superdiagonal: second superdiagonal carries half the block products
  Rng rng(3);
  MX n(6, 6);
  MX b1(2, 2), b2(2, 2);
  for (auto i = 0u; i < 2; ++i)
    for (auto j = 0u; j < 2; ++j) {
      b1(i, j) = Exact(rng.integer(-5, 5));
      b2(i, j) = Exact(rng.integer(-5, 5));
    }
  n.set_block(0, 2, b1);
  n.set_block(2, 4, b2);
  const MX e = nilpotent_exp(n);
  CHECK(e.block(0, 4, 2, 2) == (b1 * b2) * Exact(Rational(1, 2)));
  CHECK(e.block(0, 2, 2, 2) == b1);
  CHECK(e * nilpotent_exp(MX(-n)) == MX::identity(6));
  MF nf = to_float(n);
  CHECK(approx_equal(MF(nilpotent_exp(nf) * nilpotent_exp(MF(-nf))), MF::identity(6)));
  CHECK_THROWS_AS(nilpotent_exp(MX{{0, 1}, {1, 0}}), matrix_error);
}

TEST_CASE("block2 calculus") {
  using B = Block2<Exact>;
  CHECK(block2_decompose(basis_I<Exact>()) == B{1, 0, 0, 0});
  CHECK(block2_decompose(MX(basis_T<Exact>() + basis_P<Exact>())) == B{0, 0, 1, 1});
  CHECK(block2_decompose(MX{{2, 0}, {0, 0}}) == B{1, 0, 1, 0});
  CHECK(adjugate2(basis_I<Exact>()) == basis_I<Exact>());
  CHECK(adjugate2(basis_T<Exact>()) == MX(-basis_T<Exact>()));
  CHECK(adjugate2(MX{{1, 2}, {3, 4}}) == MX{{4, -2}, {-3, 1}});
  // basis products used throughout
  const auto I = basis_I<Exact>(), T = basis_T<Exact>(), R = basis_R<Exact>(), P = basis_P<Exact>();
  CHECK(R * T == P);
  CHECK(T * R == MX(-P));
  CHECK(R * P == MX(-T));
  CHECK(P * R == T);
  CHECK(R * R == MX(-I));

  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    MX a(2, 2);
    for (auto i = 0u; i < 2; ++i)
      for (auto j = 0u; j < 2; ++j) a(i, j) = Exact(rng.rational(20, 6));
    const auto b = block2_decompose(a);
    REQUIRE(b.reconstruct() == a);
    REQUIRE(b.determinant() == determinant(a));
    REQUIRE(a * adjugate2(a) == MX(I * determinant(a)));
  }
}

TEST_CASE("rref, kernel, inverse") {
  const MX m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(rank(m) == 2);
  const MX k = kernel(m);
  CHECK(k.cols() == 1);
  CHECK((m * k).is_zero());
  const MX a{{2, 1}, {7, 4}};
  CHECK(inverse(a) * a == MX::identity(2));
  CHECK_THROWS_AS(inverse(m), matrix_error);
}

TEST_CASE("matrix text format round trip") {
  MX m{{Exact(Rational(1, 3)), Exact::sqrt(2) - Exact(1)}, {Exact(0), Exact(-7)}};
  const auto j = matrix_to_json(m);
  CHECK(j["backend"] == "exact");
  CHECK(matrix_from_json<Exact>(j) == m);
  CHECK(matrix_from_json<Exact>(nlohmann::json::parse(j.dump())) == m);
  const MF f{{0.1, -2.5e-7}, {1.0 / 3.0, 4}};
  CHECK(matrix_from_json<double>(matrix_to_json(f)) == f);
  auto bad = j;
  bad["rows"] = 3;
  CHECK_THROWS_AS(matrix_from_json<Exact>(bad), format_error);
}

TEST_CASE("polynomials") {
  using P = UniPoly<Rational>;
  const P x = P::monomial(1, 1);
  const P p = (x - P(1)) * (x + P(2));
  CHECK(p.degree() == 2);
  CHECK(p.evaluate(Rational(1)) == 0);
  auto [q, r] = divmod(p, x - P(1));
  CHECK(q == x + P(2));
  CHECK(r.is_zero());
  using B = BivarPoly<Rational>;
  const B a = B::alpha(), b = B::beta();
  const B f = a * a * a - B(3) * a * b * b + B(5) * a;
  CHECK(f.total_degree() == 3);
  CHECK(f.leading_form() == a * a * a - B(3) * a * b * b);
  CHECK(f.evaluate(Rational(2), Rational(1)) == 8 - 6 + 10);
  CHECK(f.d_beta() == B(-6) * a * b);
}
