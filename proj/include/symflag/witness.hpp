#pragma once

#include "symflag/rep.hpp"
#include "symflag/roots.hpp"

#include <string>

namespace symflag {

class witness_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Whether g = [[I, A, B], [0, I_{2n-4}, C], [0, 0, I]].
template <class T>
bool is_sl_horocyclic(const Matrix<T>& g, int n, const Tolerance& tol = {}) {
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  if (g.rows() != d || g.cols() != d) return false;
  const double scale = is_exact_v<T> ? 0.0 : std::max(1.0, max_abs(g));
  auto band = [&](std::size_t i) { return i < 2 ? 0 : (i < d - 2 ? 1 : 2); };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (band(i) < band(j)) continue;
      const T expect = i == j ? T(1) : T(0);
      if (!scalar_traits<T>::is_zero(T(g(i, j) - expect), scale, tol)) return false;
    }
  return true;
}

/// Uniform entries in (-range, range) for A, B, C.
Matrix<double> random_sl_horocyclic(int n, Rng& rng, double range = 1.0);

/// Coordinates over (I, R, T, P) of the top-right block Z_{1n} of
/// g exp(alpha X + beta Y) as polynomials in (alpha, beta). The coefficient of
/// alpha^a beta^b is the first two rows of g times the last two columns of
/// X^a Y^b / (a! b!).
template <class T>
Block2<BivarPoly<T>> extract_fT_fP(const Matrix<T>& g, const ExpSeries& series) {
  if (!is_sl_horocyclic(g, series.n())) throw witness_error("extract_fT_fP: g is not in the horocyclic group of tau_+");
  const std::size_t d = g.rows();
  const Matrix<T> top = g.block(0, 0, 2, d);
  Block2<BivarPoly<T>> out;
  for (int a = 0; a <= series.max_order(); ++a)
    for (int b = 0; a + b <= series.max_order(); ++b) {
      const auto c = block2_decompose(Matrix<T>(top * convert_matrix<T>(series.last_columns(a, b))));
      out.i_coef.add_term(a, b, c.i_coef);
      out.r_coef.add_term(a, b, c.r_coef);
      out.t_coef.add_term(a, b, c.t_coef);
      out.p_coef.add_term(a, b, c.p_coef);
    }
  return out;
}

enum class Verdict { WitnessFound, DegeneratePerturbedRetry, Failed };
std::string to_string(Verdict v);

struct Sl2cOptions {
  double epsilon = 1e-6;  // perturbation budget, Frobenius norm of the change to g
  double tol = 1e-10;     // target |det Z_{1n}|
  std::uint64_t seed = 0; // drives the jitter
  int max_retries = 8;
  double confirm_margin = 1e-8;
};

struct Sl2cAttempt {
  int index = 0;
  double delta_t = 0.0;
  double delta_p = 0.0;
  Verdict verdict = Verdict::Failed;
  std::string note;
};

struct Sl2cWitness {
  int n = 0;
  Verdict verdict = Verdict::Failed;
  Matrix<double> g_perturbed;
  Matrix<double> perturbation;  // 2x2 change of the B block
  double perturbation_norm = 0.0;
  Rational alpha, beta;         // witness parameters (exact rationals)
  double residual = 0.0;        // |det Z_{1n}(g', alpha, beta)|, evaluated exactly then rounded
  CommonRoot root;              // common root of f_T, f_P before the ray search
  double det_at_root = 0.0;
  int doublings = 0;
  int bisection_steps = 0;
  bool confirmed_non_antipodal = false;
  double antipodality_margin = 1.0;
  std::vector<Sl2cAttempt> attempts;
};

/// Finds g' within epsilon of g (changing only the B block) and (alpha, beta)
/// with |det Z_{1n}| <= tol: common real root of f_T and f_P, then a search
/// along the ray (1, 1) from that root, doubling until the determinant is
/// negative and bisecting in exact arithmetic.
Sl2cWitness sl2c_witness(const Matrix<double>& g, const ExpSeries& series, const Sl2cOptions& opt = {});

/// det Z_{1n} = f_I^2 + f_R^2 - f_T^2 - f_P^2 along (alpha0 + s, beta0 + s), exact.
UniPoly<Exact> det_along_ray(const Block2<BivarPoly<Exact>>& polys, const Rational& alpha0, const Rational& beta0);

template <class T>
struct SuWitness {
  int n = 0;
  Verdict verdict = Verdict::Failed;
  UPrimeParams<T> g_prime;
  Block2<T> block;           // (g g')_{1n} over (I, R, T, P)
  T det{0};
  bool confirmed_standard = false;  // non-antipodal after conjugating into the omega picture
  bool confirmed_hermitian = false; // non-antipodal for omega_h directly
};

namespace detail {

template <class T>
T sqrt_value(const T& x) {
  if constexpr (is_exact_v<T>) {
    if (!x.is_rational()) throw witness_error("su_witness: radicand is not rational");
    return Exact::sqrt(x.rational_part());
  } else {
    return std::sqrt(x);
  }
}

} // namespace detail

/// Closed form: alpha = -u + w and beta = -v + z kill the I-coefficient of
/// (g g')_{1n}; the R-coefficient is r0 + gamma, and gamma = -r0 + sqrt(t^2 + p^2)
/// makes the determinant i^2 + r^2 - t^2 - p^2 vanish.
template <class T>
SuWitness<T> su_witness(int n, const UParams<T>& g, double margin = 1e-8) {
  if (n < 3) throw witness_error("su_witness: n must be >= 3");
  const Matrix<T> gm = su_horocyclic_U(n, g);
  SuWitness<T> out;
  out.n = n;
  for (std::size_t k = 0; k < g.u.size(); ++k) {
    out.g_prime.alpha.push_back(T(g.w[k] - g.u[k]));
    out.g_prime.beta.push_back(T(g.z[k] - g.v[k]));
  }
  out.g_prime.gamma = T(0);
  const auto b0 = block2_decompose(top_right(Matrix<T>(gm * su_horocyclic_U_prime(n, out.g_prime))));
  const double scale = std::max(1.0, max_abs(gm));
  if (!scalar_traits<T>::is_zero(b0.i_coef, scale * scale, {}))
    throw witness_error("su_witness: I-coefficient does not vanish at the chosen alpha, beta");
  out.g_prime.gamma = T(detail::sqrt_value(T(b0.t_coef * b0.t_coef + b0.p_coef * b0.p_coef)) - b0.r_coef);
  const Matrix<T> prod = gm * su_horocyclic_U_prime(n, out.g_prime);
  out.block = block2_decompose(top_right(prod));
  out.det = out.block.determinant();

  const ThetaSet t2(n, {2});
  const auto opp = standard_opp_flag<T>(t2);
  const Matrix<T> std_prod = change_of_form(prod, FormDirection::HermitianToStandard);
  out.confirmed_standard = !are_antipodal(act(std_prod, opp), opp, standard_J<T>(n), margin);
  out.confirmed_hermitian = !are_antipodal(act(prod, opp), opp, hermitian_J_h<T>(n), margin);
  const bool zero = scalar_traits<T>::is_zero(out.det, scale * scale, {1e-12, 1e-12});
  out.verdict = zero && out.confirmed_standard && out.confirmed_hermitian ? Verdict::WitnessFound : Verdict::Failed;
  return out;
}

/// det of (g^{-1} g')_{1n} for g = non_maximality_seed(n) and g' = U'(alpha, beta, gamma).
/// Throws witness_error unless the block is -(|alpha|^2 + |beta|^2 + 2)/2 I + gamma R.
template <class T>
T non_maximality_check(int n, const UPrimeParams<T>& p) {
  if (n < 3) throw witness_error("non_maximality_check: n must be >= 3");
  const Matrix<T> g = non_maximality_seed<T>(n);
  Matrix<T> ginv = g;
  ginv.set_block(0, g.cols() - 2, Matrix<T>(-basis_I<T>()));
  const Matrix<T> prod = ginv * su_horocyclic_U_prime(n, p);
  const auto blk = block2_decompose(top_right(prod));
  T norm(2);
  for (std::size_t k = 0; k < p.alpha.size(); ++k) norm += p.alpha[k] * p.alpha[k] + p.beta[k] * p.beta[k];
  const Block2<T> expect{T(-norm * from_ratio<T>(1, 2)), p.gamma, T(0), T(0)};
  const double scale = std::max(1.0, max_abs(prod));
  const Matrix<T> diff = blk.reconstruct() - expect.reconstruct();
  if (!is_zero_matrix(diff, scale * scale)) throw witness_error("non_maximality_check: block does not have the expected form");
  return blk.determinant();
}

} // namespace symflag
