#pragma once

#include "symflag/flags.hpp"
#include "symflag/poly.hpp"

#include <json.hpp>

#include <optional>

namespace symflag {

class rep_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Images H, X, Y of the standard generators of sl(2, C) (as a real Lie
/// algebra) under the 2n-dimensional representation into sp(2n, R).
struct Sl2Triple {
  int n = 0;
  Matrix<Exact> H, X, Y;

  /// Squarefree radicands d > 1 whose square roots appear in the entries.
  std::vector<std::uint64_t> radicands() const;
};

/// c_k = sqrt(k n - k^2).
Exact rep_coefficient(int n, int k);

/// Even n: H = diag((n-1)I, (n-3)I, ..., (1-n)I); the superdiagonal blocks of
/// X are c_k I below the middle, c_{n/2} T in the middle, -c_k I above it; Y
/// has c_k R off the middle and c_{n/2} P in the middle (k = 1..n-1). Odd n:
/// the sp(2n-2) triple placed in sp(2n) by embed_sp_algebra. Throws rep_error
/// when a bracket relation or sp-membership fails.
Sl2Triple build_rho(int n);

struct TripleChecks {
  bool h_x = false;  // [H, X] = 2X
  bool h_y = false;  // [H, Y] = 2Y
  bool x_y = false;  // [X, Y] = 0
  bool x_xt = false; // [X, X^T] = H
  bool x_sp = false; // X^T J + J X = 0
  bool y_sp = false; // Y^T J + J Y = 0
  bool all() const { return h_x && h_y && x_y && x_xt && x_sp && y_sp; }
};
TripleChecks check_triple(const Sl2Triple& t);

nlohmann::json triple_to_json(const Sl2Triple& t);

/// Total degree of the top-right block of exp(alpha X + beta Y): n-1 for even
/// n, n-2 for odd n.
int effective_degree(int n);

/// exp(alpha X + beta Y) = sum_{a,b} alpha^a beta^b X^a Y^b / (a! b!), which is
/// valid because X and Y commute. Stores the terms with a + b < n.
class ExpSeries {
public:
  explicit ExpSeries(const Sl2Triple& t);

  int n() const { return n_; }
  /// X^a Y^b / (a! b!); zero matrix when a + b >= n.
  const Matrix<Exact>& term(int a, int b) const;
  /// Columns 2n-2, 2n-1 of term(a, b).
  const Matrix<Exact>& last_columns(int a, int b) const;
  int max_order() const { return n_ - 1; }

  template <class T>
  Matrix<T> evaluate(const T& alpha, const T& beta) const {
    const std::size_t d = 2 * static_cast<std::size_t>(n_);
    Matrix<T> out(d, d);
    T pa(1);
    for (int a = 0; a <= max_order(); ++a) {
      T pb(1);
      for (int b = 0; a + b <= max_order(); ++b) {
        out += convert_matrix<T>(term(a, b)) * T(pa * pb);
        pb = pb * beta;
      }
      pa = pa * alpha;
    }
    return out;
  }

private:
  int n_;
  std::vector<std::vector<Matrix<Exact>>> terms_;
  std::vector<std::vector<Matrix<Exact>>> last_;
  Matrix<Exact> zero_;
};

/// Coordinates over (I, R, T, P) of the top-right 2x2 block of exp(alpha X + beta Y)
/// as polynomials in (alpha, beta).
Block2<BivarPoly<Exact>> top_right_polys(const ExpSeries& series);

/// The top-right block evaluated at (alpha, beta).
template <class T>
Block2<T> top_right_block(const ExpSeries& series, const T& alpha, const T& beta) {
  const auto e = series.evaluate(alpha, beta);
  const std::size_t d = e.rows();
  return block2_decompose(e.block(0, d - 2, 2, 2));
}

/// A point of the limit set: exp(alpha X + beta Y) tau_-, or tau_+ when
/// `at_infinity` is set.
template <class T>
struct LimitPoint {
  T alpha{0};
  T beta{0};
  bool at_infinity = false;
};

template <class T>
struct LimitFlags {
  ThetaFlag<T> sl;   // in F_{2,2n-2}
  ThetaFlag<T> iso2; // its isotropic 2-plane, Theta = {2}
};

template <class T>
LimitFlags<T> limit_point(const ExpSeries& series, const LimitPoint<T>& p) {
  const int n = series.n();
  const ThetaSet t2(n, {2});
  if (p.at_infinity) return {sl_tau_plus<T>(n), standard_flag<T>(t2)};
  const auto e = series.evaluate(p.alpha, p.beta);
  return {act(e, sl_tau_minus<T>(n)), act(e, standard_opp_flag<T>(t2))};
}

// ---------------------------------------------------------------------------
// SU(n-1, 1) horocyclic groups, written for the form hermitian_J_h.

/// Parameters of U': alpha, beta in R^{n-2}, gamma in R.
template <class T>
struct UPrimeParams {
  std::vector<T> alpha, beta;
  T gamma{0};
};

/// Parameters of U: u, v, w, z in R^{n-2}, b, c, d in R.
template <class T>
struct UParams {
  std::vector<T> u, v, w, z;
  T b{0}, c{0}, d{0};
};

namespace detail {

template <class T>
Matrix<T> combine2(const T& i, const T& r, const T& t, const T& p) {
  return basis_I<T>() * i + basis_R<T>() * r + basis_T<T>() * t + basis_P<T>() * p;
}

template <class T>
Matrix<T> su_exp_checked(const Matrix<T>& nil, int n, const char* what) {
  Matrix<T> g = nilpotent_exp(nil);
  if (!is_symplectic(g, hermitian_J_h<T>(n))) throw rep_error(std::string(what) + ": result does not preserve omega_h");
  return g;
}

template <class T>
void check_lengths(int n, std::initializer_list<const std::vector<T>*> vs, const char* what) {
  if (n < 2) throw rep_error(std::string(what) + ": n must be >= 2");
  for (const auto* v : vs)
    if (v->size() != static_cast<std::size_t>(n - 2))
      throw rep_error(std::string(what) + ": parameter vectors must have length n-2");
}

} // namespace detail

/// exp of [[0, -alpha^T (x) I + beta^T (x) R, gamma R], [0, 0, alpha (x) I + beta (x) R], [0, 0, 0]].
template <class T>
Matrix<T> su_horocyclic_U_prime(int n, const UPrimeParams<T>& p) {
  detail::check_lengths<T>(n, {&p.alpha, &p.beta}, "su_horocyclic_U_prime");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  Matrix<T> nil(d, d);
  for (int k = 0; k < n - 2; ++k) {
    const auto col = static_cast<std::size_t>(2 + 2 * k);
    nil.set_block(0, col, detail::combine2<T>(-p.alpha[k], p.beta[k], T(0), T(0)));
    nil.set_block(col, d - 2, detail::combine2<T>(p.alpha[k], p.beta[k], T(0), T(0)));
  }
  nil.set_block(0, d - 2, basis_R<T>() * p.gamma);
  return detail::su_exp_checked(nil, n, "su_horocyclic_U_prime");
}

/// exp of [[0, -conj(F)^T, bR + cT + dP], [0, 0, F], [0, 0, 0]] with
/// F = u (x) I + v (x) R + w (x) T + z (x) P and
/// -conj(F)^T = -u^T (x) I + v^T (x) R + w^T (x) T + z^T (x) P.
template <class T>
Matrix<T> su_horocyclic_U(int n, const UParams<T>& p) {
  detail::check_lengths<T>(n, {&p.u, &p.v, &p.w, &p.z}, "su_horocyclic_U");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  Matrix<T> nil(d, d);
  for (int k = 0; k < n - 2; ++k) {
    const auto col = static_cast<std::size_t>(2 + 2 * k);
    nil.set_block(0, col, detail::combine2<T>(-p.u[k], p.v[k], p.w[k], p.z[k]));
    nil.set_block(col, d - 2, detail::combine2<T>(p.u[k], p.v[k], p.w[k], p.z[k]));
  }
  nil.set_block(0, d - 2, detail::combine2<T>(T(0), p.b, p.c, p.d));
  return detail::su_exp_checked(nil, n, "su_horocyclic_U");
}

/// q(u, v, w, z) = (-|u|^2 - |v|^2 + |w|^2 + |z|^2) / 2.
template <class T>
T su_q(const UParams<T>& p) {
  T s(0);
  for (std::size_t k = 0; k < p.u.size(); ++k) s += p.w[k] * p.w[k] + p.z[k] * p.z[k] - p.u[k] * p.u[k] - p.v[k] * p.v[k];
  return s * from_ratio<T>(1, 2);
}

/// The element [[I, 0, I], [0, I, 0], [0, 0, I]] of SL(2n).
template <class T>
Matrix<T> non_maximality_seed(int n) {
  if (n < 2) throw rep_error("non_maximality_seed: n must be >= 2");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  Matrix<T> g = Matrix<T>::identity(d);
  g.set_block(0, d - 2, basis_I<T>());
  return g;
}

template <class T>
Matrix<T> top_right(const Matrix<T>& g) {
  return g.block(0, g.cols() - 2, 2, 2);
}

} // namespace symflag
