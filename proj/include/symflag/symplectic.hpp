#pragma once

#include "symflag/block2.hpp"
#include "symflag/linalg.hpp"
#include "symflag/rng.hpp"

#include <cstdint>
#include <vector>

namespace symflag {

enum class FormKind { Standard, Hermitian };

/// A symplectic form omega(x, y) = x^T gram y on R^{2n}.
template <class T>
struct SymplecticForm {
  int n = 0;
  FormKind kind = FormKind::Standard;
  Matrix<T> gram;

  std::size_t dim() const { return static_cast<std::size_t>(2 * n); }
};

class symplectic_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// J with J e_i = (-1)^i e_{2n-i+1} (1-based): antidiagonal, alternating signs.
template <class T>
SymplecticForm<T> standard_J(int n) {
  if (n < 1) throw symplectic_error("standard_J: n must be >= 1");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  Matrix<T> j(d, d);
  for (std::size_t i = 1; i <= d; ++i) j(d - i, i - 1) = (i % 2 == 0) ? T(1) : T(-1);
  return {n, FormKind::Standard, std::move(j)};
}

/// Gram matrix of the imaginary part of the hermitian form with Q(e_1) = e_n,
/// Q(e_n) = e_1, Q(e_k) = e_k otherwise, after (x_1 + i y_1, ...) -> (x_1, y_1, ...).
/// It has the 2x2 block R^T = -R in the two corners and down the interior of the
/// diagonal, and satisfies f J f^T = J_h for f from build_f. The opposite sign
/// convention (blocks +R) describes the same group, isotropic subspaces and
/// perpendiculars.
template <class T>
SymplecticForm<T> hermitian_J_h(int n) {
  if (n < 2) throw symplectic_error("hermitian_J_h: n must be >= 2");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  Matrix<T> j(d, d);
  const auto r = basis_R<T>().transpose();
  j.set_block(0, d - 2, r);
  j.set_block(d - 2, 0, r);
  for (int k = 1; k + 1 < n; ++k) j.set_block(2 * k, 2 * k, r);
  return {n, FormKind::Hermitian, std::move(j)};
}

template <class T>
bool is_symplectic(const Matrix<T>& g, const SymplecticForm<T>& form, const Tolerance& tol = {}) {
  if (g.rows() != form.dim() || g.cols() != form.dim())
    throw symplectic_error("is_symplectic: size mismatch between matrix and form");
  const Matrix<T> lhs = g.transpose() * form.gram * g;
  if constexpr (is_exact_v<T>) {
    return lhs == form.gram;
  } else {
    const double s = std::max(1.0, max_abs(g));
    return is_zero_matrix(Matrix<T>(lhs - form.gram), s * s, tol);
  }
}

/// An element of Sp(form); membership is checked on construction.
template <class T>
class GroupElement {
public:
  GroupElement(SymplecticForm<T> form, Matrix<T> mat, const Tolerance& tol = {})
      : form_(std::move(form)), mat_(std::move(mat)) {
    if (!is_symplectic(mat_, form_, tol)) throw symplectic_error("GroupElement: matrix does not preserve the form");
  }

  const SymplecticForm<T>& form() const { return form_; }
  const Matrix<T>& mat() const { return mat_; }

private:
  SymplecticForm<T> form_;
  Matrix<T> mat_;
};

/// g^{-1} = -Omega g^T Omega for any Omega with Omega^2 = -I.
template <class T>
Matrix<T> symplectic_inverse_matrix(const Matrix<T>& g, const SymplecticForm<T>& form) {
  return -(form.gram * g.transpose() * form.gram);
}

template <class T>
GroupElement<T> symplectic_inverse(const GroupElement<T>& g, const Tolerance& tol = {}) {
  return GroupElement<T>(g.form(), symplectic_inverse_matrix(g.mat(), g.form()), tol);
}

/// det of g restricted to rows 1..k and columns 2n, 2n-1, ..., 2n-k+1 (in that order).
template <class T>
T antiprincipal_minor(const Matrix<T>& g, std::size_t k) {
  if (!g.is_square() || g.rows() % 2 != 0) throw symplectic_error("antiprincipal_minor: expected a square 2n x 2n matrix");
  const std::size_t d = g.rows();
  if (k < 1 || k > d) throw symplectic_error("antiprincipal_minor: k out of range");
  std::vector<std::size_t> rows(k), cols(k);
  for (std::size_t i = 0; i < k; ++i) {
    rows[i] = i;
    cols[i] = d - 1 - i;
  }
  return det_submatrix(g, rows, cols);
}

template <class T>
struct KeyLemmaEntry {
  std::size_t k;
  T minor;
  T minor_of_inverse;
  T residual; // p_k(g^-1) - (-1)^k p_k(g)
};

template <class T>
struct KeyLemmaReport {
  std::vector<KeyLemmaEntry<T>> entries;
  bool holds = true;
  double max_residual = 0.0;
};

/// Checks p_k(g^{-1}) = (-1)^k p_k(g) for each k. Exact scalars must give zero
/// residuals; floats are compared relative to |p_k(g)|.
template <class T>
KeyLemmaReport<T> verify_key_lemma(const GroupElement<T>& g, const std::vector<std::size_t>& ks,
                                   const Tolerance& tol = {1e-8, 1e-10}) {
  KeyLemmaReport<T> rep;
  const Matrix<T> inv = symplectic_inverse_matrix(g.mat(), g.form());
  for (auto k : ks) {
    T pk = antiprincipal_minor(g.mat(), k);
    T pinv = antiprincipal_minor(inv, k);
    T residual = (k % 2 == 0) ? pinv - pk : pinv + pk;
    const double mag = scalar_traits<T>::magnitude(residual);
    rep.max_residual = std::max(rep.max_residual, mag);
    if (!scalar_traits<T>::is_zero(residual, scalar_traits<T>::magnitude(pk), tol)) rep.holds = false;
    rep.entries.push_back({k, std::move(pk), std::move(pinv), std::move(residual)});
  }
  return rep;
}

/// Random element of Sp(2n). Floats: exp(J S) with S symmetric, entries
/// uniform in (-scale, scale). Exact: a product of 2n+2 symplectic
/// transvections x -> x + c omega(v, x) v with small rational v, c, followed
/// by a diagonal element diag(d_1..d_n, 1/d_n..1/d_1).
template <class T>
GroupElement<T> random_symplectic(int n, std::uint64_t seed, double scale = 1.0, std::uint64_t stream = 0) {
  if (n < 1) throw symplectic_error("random_symplectic: n must be >= 1");
  if (!(scale > 0.0)) throw symplectic_error("random_symplectic: scale must be positive");
  Rng rng(seed, stream);
  auto form = standard_J<T>(n);
  const std::size_t d = form.dim();
  if constexpr (is_exact_v<T>) {
    const Rational s = Rational(scale);
    Matrix<T> g = Matrix<T>::identity(d);
    for (int t = 0; t < 2 * n + 2; ++t) {
      Matrix<T> v(d, 1);
      for (std::size_t i = 0; i < d; ++i) v(i, 0) = T(rng.integer(-2, 2));
      Rational c = rng.rational(2, 2);
      if (sgn(c) == 0) c = 1;
      c *= s;
      // g <- (I + c v v^T J) g
      const Matrix<T> w = v.transpose() * form.gram * g;
      g += (v * w) * T(c);
    }
    Matrix<T> diag = Matrix<T>::identity(d);
    for (std::size_t i = 0; i < d / 2; ++i) {
      Rational di = rng.rational(2, 2);
      if (sgn(di) == 0) di = 1;
      diag(i, i) = T(di);
      diag(d - 1 - i, d - 1 - i) = T(Rational(1 / di));
    }
    return GroupElement<T>(form, g * diag);
  } else {
    Matrix<T> sym(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) sym(i, j) = sym(j, i) = rng.uniform(-scale, scale);
    return GroupElement<T>(form, expm(form.gram * sym));
  }
}

/// [[A, B], [C, D]] -> [[A, 0, B], [0, M, 0], [C, 0, D]] with M the 2x2
/// `middle` block, splitting g at its midpoint.
template <class T>
Matrix<T> embed_middle(const Matrix<T>& g, const Matrix<T>& middle) {
  if (!g.is_square() || g.rows() % 2 != 0) throw symplectic_error("embed_sp: expected a square 2n x 2n matrix");
  const std::size_t h = g.rows() / 2;
  Matrix<T> out(g.rows() + 2, g.rows() + 2);
  out.set_block(0, 0, g.block(0, 0, h, h));
  out.set_block(0, h + 2, g.block(0, h, h, h));
  out.set_block(h + 2, 0, g.block(h, 0, h, h));
  out.set_block(h + 2, h + 2, g.block(h, h, h, h));
  out.set_block(h, h, middle);
  return out;
}

/// Sp(2n) -> Sp(2n+2), direct sum with the trivial 2-dimensional representation.
template <class T>
GroupElement<T> embed_sp(const GroupElement<T>& g) {
  return GroupElement<T>(standard_J<T>(g.form().n + 1), embed_middle(g.mat(), Matrix<T>::identity(2)));
}

/// The induced Lie algebra map sp(2n) -> sp(2n+2) (zero middle block).
template <class T>
Matrix<T> embed_sp_algebra(const Matrix<T>& x) {
  return embed_middle(x, Matrix<T>(2, 2));
}

/// Orthogonal change of basis f with f J f^T = J_h. For even n the interior
/// pairs blocks k and n+1-k through rows (I, I)/sqrt2 and (T, -T)/sqrt2; for
/// odd n a middle block I is inserted.
template <class T>
Matrix<T> build_f(int n) {
  if (n < 2) throw symplectic_error("build_f: n must be >= 2");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  const T s = scalar_traits<T>::sqrt_of_rational(Rational(1, 2));
  const auto id = basis_I<T>();
  const auto t = basis_T<T>();
  Matrix<T> f(d, d);
  f.set_block(0, 0, id);
  f.set_block(d - 2, d - 2, id);
  // Interior blocks use 0-based block indices 1..n-2, paired k <-> n-1-k.
  const int interior = n - 2;
  const int half = interior / 2;
  for (int j = 0; j < half; ++j) {
    const int top = 1 + j;      // rows with (I, I)
    const int bottom = n - 2 - j; // rows with (T, -T)
    f.set_block(2 * top, 2 * top, id * s);
    f.set_block(2 * top, 2 * bottom, id * s);
    f.set_block(2 * bottom, 2 * top, t * s);
    f.set_block(2 * bottom, 2 * bottom, -(t * s));
  }
  if (interior % 2 == 1) {
    const int mid = 1 + half;
    f.set_block(2 * mid, 2 * mid, id);
  }
  return f;
}

enum class FormDirection {
  HermitianToStandard, // g in Sp(omega_h) -> f^{-1} g f in Sp(omega)
  StandardToHermitian  // g in Sp(omega)   -> f g f^{-1} in Sp(omega_h)
};

/// Conjugation by f; f is orthogonal so f^{-1} = f^T.
template <class T>
Matrix<T> change_of_form(const Matrix<T>& g, FormDirection dir) {
  if (!g.is_square() || g.rows() % 2 != 0 || g.rows() < 4)
    throw symplectic_error("change_of_form: expected a square 2n x 2n matrix with n >= 2");
  const auto f = build_f<T>(static_cast<int>(g.rows() / 2));
  const auto ft = f.transpose();
  return dir == FormDirection::HermitianToStandard ? Matrix<T>(ft * g * f) : Matrix<T>(f * g * ft);
}

} // namespace symflag
