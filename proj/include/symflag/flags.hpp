#pragma once

#include "symflag/parallel.hpp"
#include "symflag/symplectic.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symflag {

class flag_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a flag is not antipodal to the standard flag, so no unipotent
/// element carries the standard opposite flag onto it. Distinct from
/// numerical failures on purpose: callers treat it as an answer.
class not_antipodal_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A non-empty subset of {1, ..., n}, kept sorted.
class ThetaSet {
public:
  ThetaSet(int n, std::vector<int> members);

  /// Parses a comma separated list such as "1,2".
  static ThetaSet parse(int n, std::string_view list);
  /// All non-empty subsets of {1, ..., n}, ordered by bitmask.
  static std::vector<ThetaSet> all_subsets(int n);

  int n() const { return n_; }
  const std::vector<int>& members() const { return members_; }
  int k_max() const { return members_.back(); }
  bool contains(int k) const;
  bool has_odd() const;
  bool is_subset_of(const ThetaSet& other) const;
  /// Sorted cut points {k, 2n-k : k in Theta} of the block partition of
  /// {1..2n} stabilized by the standard flag.
  std::vector<int> cuts() const;
  std::string to_string() const;

  friend bool operator==(const ThetaSet&, const ThetaSet&) = default;

private:
  int n_;
  std::vector<int> members_;
};

enum class FlagKind { Symplectic, SlType };

/// Modified Gram-Schmidt, applied twice. Throws flag_error when a column is
/// dependent on the previous ones relative to tol.
Matrix<double> orthonormalize(const Matrix<double>& m, double tol = 1e-10);
/// Orthonormal basis of the Euclidean orthogonal complement of the column span.
Matrix<double> orthogonal_complement(const Matrix<double>& m, double tol = 1e-10);

template <class T>
Matrix<double> convert_to_float(const Matrix<T>& m) {
  if constexpr (is_exact_v<T>) return to_float(m);
  else return m;
}

/// Orthonormal basis of the column span, skipping columns that depend on
/// earlier ones.
Matrix<double> orthonormal_span(const Matrix<double>& m, double tol = 1e-10);

namespace detail {

/// Canonical basis of a nested sequence of column spans. Exact: each segment
/// is reduced against the pivots of the earlier segments, then brought to
/// reduced echelon form, so the leading nonzero coordinate of every column is
/// a 1 that vanishes in every other column of the same and later segments.
/// Float: nested orthonormalization.
template <class T>
Matrix<T> canonical_flag_basis(const Matrix<T>& basis, const std::vector<int>& dims) {
  if constexpr (is_exact_v<T>) {
    Matrix<T> out(basis.rows(), basis.cols());
    std::vector<std::size_t> pivot_rows; // pivot row of each finished column
    std::size_t start = 0;
    for (int dim : dims) {
      const auto end = static_cast<std::size_t>(dim);
      Matrix<T> seg = basis.block(0, start, basis.rows(), end - start);
      for (std::size_t c = 0; c < start; ++c) {
        const std::size_t p = pivot_rows[c];
        for (std::size_t j = 0; j < seg.cols(); ++j) {
          if (seg(p, j).is_zero()) continue;
          const T f = seg(p, j);
          for (std::size_t i = 0; i < seg.rows(); ++i)
            if (!out(i, c).is_zero()) seg(i, j) -= f * out(i, c);
        }
      }
      const auto r = rref(seg.transpose());
      if (r.pivots.size() != seg.cols()) throw flag_error("flag basis columns are linearly dependent");
      for (std::size_t j = 0; j < seg.cols(); ++j) {
        for (std::size_t i = 0; i < seg.rows(); ++i) out(i, start + j) = r.reduced(j, i);
        pivot_rows.push_back(r.pivots[j]);
      }
      start = end;
    }
    return out;
  } else {
    return orthonormalize(basis);
  }
}

template <class T>
bool nonsingular(const Matrix<T>& v, const Matrix<T>& w, double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return !determinant(hstack(v, w)).is_zero();
  } else {
    const auto q = hstack(orthonormalize(v), orthonormalize(w));
    return std::fabs(determinant(q)) > tol;
  }
}

template <class T>
double normalized_det(const Matrix<T>& v, const Matrix<T>& w) {
  const auto vf = convert_to_float(v);
  const auto wf = convert_to_float(w);
  return std::fabs(determinant(hstack(orthonormalize(vf), orthonormalize(wf))));
}

} // namespace detail

/// An isotropic Theta-flag (Symplectic) or a flag in F_{2,2n-2} (SlType),
/// stored as nested column spans: component V^i is the span of the first i
/// columns. The basis is canonicalized on construction, so exact flags are
/// equal iff their bases are equal.
template <class T>
class ThetaFlag {
public:
  ThetaFlag(FlagKind kind, int n, std::vector<int> dims, const Matrix<T>& basis) : kind_(kind), n_(n), dims_(std::move(dims)) {
    if (dims_.empty()) throw flag_error("ThetaFlag: no components");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i] < 1 || dims_[i] >= 2 * n_) throw flag_error("ThetaFlag: component dimension out of range");
      if (i > 0 && dims_[i] <= dims_[i - 1]) throw flag_error("ThetaFlag: dimensions must be strictly increasing");
    }
    if (basis.rows() != static_cast<std::size_t>(2 * n_) || basis.cols() != static_cast<std::size_t>(dims_.back()))
      throw flag_error("ThetaFlag: basis has the wrong shape");
    basis_ = detail::canonical_flag_basis(basis, dims_);
  }

  FlagKind kind() const { return kind_; }
  int n() const { return n_; }
  const std::vector<int>& dims() const { return dims_; }
  const Matrix<T>& basis() const { return basis_; }
  Matrix<T> component(int i) const {
    for (int d : dims_)
      if (d == i) return basis_.block(0, 0, basis_.rows(), static_cast<std::size_t>(i));
    throw flag_error("ThetaFlag: no component of dimension " + std::to_string(i));
  }

  /// Exact: canonical basis equality. Float: equal orthogonal projectors onto
  /// every component, within tol.
  bool same_as(const ThetaFlag& o, const Tolerance& tol = {}) const {
    if (kind_ != o.kind_ || n_ != o.n_ || dims_ != o.dims_) return false;
    if constexpr (is_exact_v<T>) {
      (void)tol;
      return basis_ == o.basis_;
    } else {
      for (int d : dims_) {
        const auto a = component(d), b = o.component(d);
        if (!approx_equal(Matrix<T>(a * a.transpose()), Matrix<T>(b * b.transpose()), tol)) return false;
      }
      return true;
    }
  }
  friend bool operator==(const ThetaFlag& a, const ThetaFlag& b) { return a.same_as(b); }

private:
  FlagKind kind_;
  int n_;
  std::vector<int> dims_;
  Matrix<T> basis_;
};

template <class T>
bool is_isotropic(const Matrix<T>& span, const SymplecticForm<T>& form, const Tolerance& tol = {}) {
  const Matrix<T> gram = span.transpose() * form.gram * span;
  if constexpr (is_exact_v<T>) return gram.is_zero();
  else return is_zero_matrix(gram, std::max(1.0, max_abs(span) * max_abs(span)), tol);
}

/// Symplectic flag with components theta; checks isotropy of the largest component.
template <class T>
ThetaFlag<T> symplectic_flag(const ThetaSet& theta, const Matrix<T>& basis, const SymplecticForm<T>& form) {
  if (form.n != theta.n()) throw flag_error("symplectic_flag: form and theta disagree on n");
  ThetaFlag<T> f(FlagKind::Symplectic, theta.n(), theta.members(), basis);
  if (!is_isotropic(f.basis(), form)) throw flag_error("symplectic_flag: span is not isotropic");
  return f;
}

template <class T>
ThetaSet flag_theta(const ThetaFlag<T>& f) {
  if (f.kind() != FlagKind::Symplectic) throw flag_error("flag_theta: not a symplectic flag");
  return ThetaSet(f.n(), f.dims());
}

/// tau_Theta: V^i = span(e_1, ..., e_i).
template <class T>
ThetaFlag<T> standard_flag(const ThetaSet& theta) {
  const std::size_t d = 2 * static_cast<std::size_t>(theta.n());
  return ThetaFlag<T>(FlagKind::Symplectic, theta.n(), theta.members(),
                      Matrix<T>::identity(d).block(0, 0, d, static_cast<std::size_t>(theta.k_max())));
}

/// Columns e_{2n}, e_{2n-1}, ..., e_{2n-k+1}.
template <class T>
Matrix<T> reversed_tail_basis(std::size_t d, std::size_t k) {
  Matrix<T> b(d, k);
  for (std::size_t j = 0; j < k; ++j) b(d - 1 - j, j) = T(1);
  return b;
}

/// tau_Theta^opp: V^i = span(e_{2n}, ..., e_{2n-i+1}).
template <class T>
ThetaFlag<T> standard_opp_flag(const ThetaSet& theta) {
  const std::size_t d = 2 * static_cast<std::size_t>(theta.n());
  return ThetaFlag<T>(FlagKind::Symplectic, theta.n(), theta.members(),
                      reversed_tail_basis<T>(d, static_cast<std::size_t>(theta.k_max())));
}

/// Component dimensions {2, 2n-2} of F_{2,2n-2}; a single {2} when n = 2.
inline std::vector<int> sl_dims(int n) {
  if (n < 2) throw flag_error("F_{2,2n-2} needs n >= 2");
  return n == 2 ? std::vector<int>{2} : std::vector<int>{2, 2 * n - 2};
}

/// tau_+ = (span(e_1, e_2) in span(e_1, ..., e_{2n-2})).
template <class T>
ThetaFlag<T> sl_tau_plus(int n) {
  const auto dims = sl_dims(n);
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  return ThetaFlag<T>(FlagKind::SlType, n, dims, Matrix<T>::identity(d).block(0, 0, d, static_cast<std::size_t>(dims.back())));
}

/// tau_- = (span(e_{2n}, e_{2n-1}) in span(e_{2n}, ..., e_3)).
template <class T>
ThetaFlag<T> sl_tau_minus(int n) {
  const auto dims = sl_dims(n);
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  return ThetaFlag<T>(FlagKind::SlType, n, dims, reversed_tail_basis<T>(d, static_cast<std::size_t>(dims.back())));
}

/// The omega-perpendicular of a span: the kernel of basis^T * gram.
template <class T>
Matrix<T> omega_perp(const Matrix<T>& span, const SymplecticForm<T>& form) {
  const Matrix<T> a = span.transpose() * form.gram;
  if constexpr (is_exact_v<T>) return kernel(a);
  else return orthogonal_complement(a.transpose());
}

/// Iso_2 -> F_{2,2n-2}, V -> (V in V^perp).
template <class T>
ThetaFlag<T> iso2_to_sl(const ThetaFlag<T>& f, const SymplecticForm<T>& form) {
  if (f.kind() != FlagKind::Symplectic || f.dims().front() != 2) throw flag_error("iso2_to_sl: expected a flag with a 2-dimensional first component");
  const auto v = f.component(2);
  if (f.n() == 2) return ThetaFlag<T>(FlagKind::SlType, 2, {2}, v);
  // V^perp contains V; complete the basis of V to one of V^perp.
  const Matrix<T> basis = hstack(v, omega_perp(v, form));
  if constexpr (is_exact_v<T>) {
    return ThetaFlag<T>(FlagKind::SlType, f.n(), sl_dims(f.n()), basis.columns(rref(basis).pivots));
  } else {
    return ThetaFlag<T>(FlagKind::SlType, f.n(), sl_dims(f.n()), orthonormal_span(basis));
  }
}

/// Antipodality. Symplectic flags: V^i + (W^i)^perp = R^{2n} for every i, with
/// the perpendicular taken for `form`. SlType flags in F_{2,2n-2}: V^i + W^{2n-i}
/// = R^{2n} for every i. Each condition is a nonvanishing 2n x 2n determinant;
/// floats compare the determinant of orthonormalized bases against margin.
template <class T>
bool are_antipodal(const ThetaFlag<T>& f, const ThetaFlag<T>& g, const SymplecticForm<T>& form, double margin = 1e-9) {
  if (f.kind() != g.kind() || f.n() != g.n() || f.dims() != g.dims())
    throw flag_error("are_antipodal: flags live in different flag manifolds");
  if (form.n != f.n()) throw flag_error("are_antipodal: form has the wrong size");
  for (int i : f.dims()) {
    const auto v = f.component(i);
    const auto w = f.kind() == FlagKind::Symplectic ? omega_perp(g.component(i), form) : g.component(2 * f.n() - i);
    if (!detail::nonsingular(v, w, margin)) return false;
  }
  return true;
}

/// Smallest normalized determinant over the antipodality conditions, in [0, 1].
template <class T>
double antipodality_margin(const ThetaFlag<T>& f, const ThetaFlag<T>& g, const SymplecticForm<T>& form) {
  if (f.kind() != g.kind() || f.n() != g.n() || f.dims() != g.dims())
    throw flag_error("antipodality_margin: flags live in different flag manifolds");
  double m = 1.0;
  for (int i : f.dims()) {
    const auto v = f.component(i);
    const auto w = f.kind() == FlagKind::Symplectic ? omega_perp(g.component(i), form) : g.component(2 * f.n() - i);
    m = std::min(m, detail::normalized_det(v, w));
  }
  return m;
}

template <class T>
ThetaFlag<T> act(const Matrix<T>& g, const ThetaFlag<T>& f) {
  return ThetaFlag<T>(f.kind(), f.n(), f.dims(), g * f.basis());
}

/// Forgets the components outside theta_sub.
template <class T>
ThetaFlag<T> project_flag(const ThetaFlag<T>& f, const ThetaSet& theta_sub) {
  if (f.kind() != FlagKind::Symplectic) throw flag_error("project_flag: expected a symplectic flag");
  if (theta_sub.n() != f.n() || !theta_sub.is_subset_of(ThetaSet(f.n(), f.dims())))
    throw flag_error("project_flag: " + theta_sub.to_string() + " is not a subset of the flag's Theta");
  const auto k = static_cast<std::size_t>(theta_sub.k_max());
  return ThetaFlag<T>(FlagKind::Symplectic, f.n(), theta_sub.members(), f.basis().block(0, 0, f.basis().rows(), k));
}

// ---------------------------------------------------------------------------
// Unipotent radical U_Theta.

/// Zero-based positions (i, j), i < j, of the strictly block-upper part of
/// the Lie algebra of U_Theta, one representative per pair related by
/// (i, j) <-> (2n-1-j, 2n-1-i); antidiagonal positions pair with themselves.
std::vector<std::pair<std::size_t, std::size_t>> unipotent_positions(const ThetaSet& theta);

/// 0-based block index of each coordinate for the partition cut at theta.cuts().
std::vector<int> block_index(const ThetaSet& theta);

template <class T>
struct UnipotentElement {
  ThetaSet theta;
  Matrix<T> mat;
};

/// True when m is unipotent block upper triangular for theta's partition.
template <class T>
bool in_block_unipotent_shape(const ThetaSet& theta, const Matrix<T>& m, const Tolerance& tol = {}) {
  const auto blk = block_index(theta);
  const std::size_t d = blk.size();
  if (m.rows() != d || m.cols() != d) return false;
  const double scale = is_exact_v<T> ? 0.0 : std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (blk[i] < blk[j]) continue;
      const T expect = i == j ? T(1) : T(0);
      if (!scalar_traits<T>::is_zero(T(m(i, j) - expect), scale, tol)) return false;
    }
  return true;
}

/// u = exp(N), N in the Lie algebra of U_Theta with free entries `params` at
/// unipotent_positions(theta); the partner entries follow from N = J N^T J.
template <class T>
UnipotentElement<T> horocyclic_element(const ThetaSet& theta, const std::vector<T>& params) {
  const auto pos = unipotent_positions(theta);
  if (params.size() != pos.size())
    throw flag_error("horocyclic_element: expected " + std::to_string(pos.size()) + " parameters, got " +
                     std::to_string(params.size()));
  const auto form = standard_J<T>(theta.n());
  const std::size_t d = form.dim();
  Matrix<T> n0(d, d);
  for (std::size_t p = 0; p < pos.size(); ++p) {
    const auto [i, j] = pos[p];
    n0(i, j) = (i + j == d - 1) ? T(params[p] * from_ratio<T>(1, 2)) : params[p];
  }
  const Matrix<T> nil = n0 + form.gram * n0.transpose() * form.gram;
  UnipotentElement<T> u{theta, nilpotent_exp(nil)};
  if (!is_symplectic(u.mat, form)) throw flag_error("horocyclic_element: result is not symplectic");
  return u;
}

/// Random element of U_Theta. Exact: integer parameters in [-range, range];
/// float: uniform in (-range, range).
template <class T>
UnipotentElement<T> random_unipotent(const ThetaSet& theta, Rng& rng, long range = 2) {
  const auto pos = unipotent_positions(theta);
  std::vector<T> params;
  params.reserve(pos.size());
  for (std::size_t p = 0; p < pos.size(); ++p) {
    if constexpr (is_exact_v<T>) params.push_back(T(rng.integer(-range, range)));
    else params.push_back(rng.uniform(-static_cast<double>(range), static_cast<double>(range)));
  }
  return horocyclic_element(theta, params);
}

/// The SL(2n) horocyclic group of tau_+ in F_{2,2n-2}:
/// [[I, A, B], [0, I_{2n-4}, C], [0, 0, I]] with A 2x(2n-4), B 2x2, C (2n-4)x2.
template <class T>
Matrix<T> sl_horocyclic_element(int n, const Matrix<T>& a, const Matrix<T>& b, const Matrix<T>& c) {
  if (n < 2) throw flag_error("sl_horocyclic_element: n must be >= 2");
  const std::size_t m = 2 * static_cast<std::size_t>(n) - 4;
  if (b.rows() != 2 || b.cols() != 2) throw flag_error("sl_horocyclic_element: B must be 2x2");
  if (m > 0 && (a.rows() != 2 || a.cols() != m || c.rows() != m || c.cols() != 2))
    throw flag_error("sl_horocyclic_element: A or C has the wrong shape");
  Matrix<T> g = Matrix<T>::identity(2 * static_cast<std::size_t>(n));
  if (m > 0) {
    g.set_block(0, 2, a);
    g.set_block(2, 2 + m, c);
  }
  g.set_block(0, 2 + m, b);
  return g;
}

/// The unique u in U_Theta with u tau_Theta^opp = tau. For each tail size t
/// among theta.cuts(), the last t columns of u span S_t, where S_k = V^k and
/// S_{2n-k} = (V^k)^perp; the columns in block [2n-t, 2n-t') of u are the
/// vectors of S_t whose last t coordinates are standard basis vectors.
template <class T>
UnipotentElement<T> solve_unipotent(const ThetaFlag<T>& tau, const ThetaSet& theta, const Tolerance& tol = {}) {
  if (tau.kind() != FlagKind::Symplectic || tau.n() != theta.n() || tau.dims() != theta.members())
    throw flag_error("solve_unipotent: flag does not match " + theta.to_string());
  const auto form = standard_J<T>(theta.n());
  const std::size_t d = form.dim();
  Matrix<T> u = Matrix<T>::identity(d);
  std::size_t prev = 0;
  for (int cut : theta.cuts()) {
    const auto t = static_cast<std::size_t>(cut);
    Matrix<T> span;
    if (theta.contains(cut)) {
      span = tau.component(cut);
    } else {
      span = omega_perp(tau.component(2 * theta.n() - cut), form);
    }
    if (span.cols() != t) throw flag_error("solve_unipotent: perpendicular has unexpected dimension");
    const Matrix<T> bottom = span.block(d - t, 0, t, t);
    Matrix<T> inv;
    if constexpr (is_exact_v<T>) {
      if (determinant(bottom).is_zero()) throw not_antipodal_error("flag is not antipodal to the standard flag");
      inv = inverse(bottom);
    } else {
      const auto sv = span;
      // Compare against the standard flag in a scale-free way.
      const double m = std::fabs(determinant(orthonormalize(sv).block(d - t, 0, t, t)));
      if (m <= tol.rel) throw not_antipodal_error("flag is not antipodal to the standard flag");
      inv = inverse(bottom, tol);
    }
    const Matrix<T> normal = span * inv;
    for (std::size_t j = 0; j < t - prev; ++j)
      for (std::size_t i = 0; i < d; ++i) u(i, d - t + j) = normal(i, j);
    prev = t;
  }
  if (!is_symplectic(u, form, tol) || !in_block_unipotent_shape(theta, u, tol))
    throw flag_error("solve_unipotent: flag is not isotropic");
  return {theta, std::move(u)};
}

/// iota(tau) = u^{-1} tau_Theta^opp for tau = u tau_Theta^opp.
template <class T>
ThetaFlag<T> inversion(const ThetaFlag<T>& tau, const ThetaSet& theta, const Tolerance& tol = {}) {
  const auto u = solve_unipotent(tau, theta, tol);
  const auto uinv = symplectic_inverse_matrix(u.mat, standard_J<T>(theta.n()));
  return act(uinv, standard_opp_flag<T>(theta));
}

/// Whether tau is antipodal to both tau_Theta and tau_Theta^opp.
template <class T>
bool doubly_transverse(const ThetaFlag<T>& tau, const ThetaSet& theta, double margin = 1e-9) {
  const auto form = standard_J<T>(theta.n());
  return are_antipodal(tau, standard_flag<T>(theta), form, margin) &&
         are_antipodal(tau, standard_opp_flag<T>(theta), form, margin);
}

/// Rejection-samples u in U_Theta with p_k(u) != 0 for all k in theta.
UnipotentElement<Exact> random_doubly_transverse_unipotent(const ThetaSet& theta, Rng& rng, std::size_t* rejected = nullptr);

// ---------------------------------------------------------------------------
// Property (I) certificate.

struct SignRecord {
  std::size_t sample;
  int k;
  int sign_u;
  int sign_u_inverse;
};

struct PropertyICertificate {
  ThetaSet theta;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<int> odd_ks;
  std::vector<int> even_ks;
  std::vector<SignRecord> records;  // sample-major, k ascending
  std::vector<SignRecord> counterexamples;
  std::size_t rejected = 0;         // draws discarded as not doubly transverse
  bool odd_flip_all = true;         // every odd k flips sign on every sample
  bool even_persist_all = true;     // every even k keeps its sign on every sample
  bool property_I = false;          // Theta contains an odd k and the flip was observed throughout
  std::string scope;                // what the certificate does and does not show
};

/// Samples doubly transverse u in U_Theta (exact arithmetic) and records the
/// signs of p_k(u) and p_k(u^{-1}) for k in theta. Samples run in parallel
/// with one generator per sample index.
PropertyICertificate property_I_certificate(const ThetaSet& theta, std::size_t samples, std::uint64_t seed);

} // namespace symflag
