#pragma once

#include "symflag/matrix.hpp"
#include "symflag/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace symflag {

template <class T>
double max_abs(const Matrix<T>& m) {
  double out = 0.0;
  for (const auto& x : m.data()) out = std::max(out, scalar_traits<T>::magnitude(x));
  return out;
}

template <class T>
bool approx_equal(const Matrix<T>& a, const Matrix<T>& b, const Tolerance& tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = std::max(max_abs(a), max_abs(b));
    for (std::size_t i = 0; i < a.data().size(); ++i)
      if (!scalar_traits<T>::is_zero(a.data()[i] - b.data()[i], scale, tol)) return false;
    return true;
  }
}

template <class T>
bool is_zero_matrix(const Matrix<T>& m, double scale, const Tolerance& tol = {}) {
  for (const auto& x : m.data())
    if (!scalar_traits<T>::is_zero(x, scale, tol)) return false;
  return true;
}

inline Matrix<double> to_float(const Matrix<Exact>& m) {
  return m.map([](const Exact& x) { return x.to_double(); });
}

inline Matrix<Exact> to_exact(const Matrix<double>& m) {
  return m.map([](double x) { return Exact::from_double(x); });
}

template <class T>
Matrix<T> convert_matrix(const Matrix<Exact>& m) {
  if constexpr (is_exact_v<T>) {
    return m;
  } else {
    return to_float(m);
  }
}

/// Determinant: fraction-free Bareiss elimination for exact scalars,
/// partial-pivot LU for floats.
template <class T>
T determinant(const Matrix<T>& m) {
  if (!m.is_square()) throw matrix_error("determinant: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return T(1);
  Matrix<T> a(m);
  if constexpr (is_exact_v<T>) {
    T prev(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      std::size_t piv = k;
      while (piv < n && a(piv, k).is_zero()) ++piv;
      if (piv == n) return T(0);
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
        negate = !negate;
      }
      const T pinv = prev.inverse();
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) * pinv;
        }
        a(i, k) = T(0);
      }
      prev = a(k, k);
    }
    return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
  } else {
    T det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
      if (a(piv, k) == 0.0) return 0.0;
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
        det = -det;
      }
      det *= a(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T f = a(i, k) / a(k, k);
        for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    }
    return det;
  }
}

/// Determinant of the submatrix with the given rows and columns, in the given
/// order. Indices are zero-based.
template <class T>
T det_submatrix(const Matrix<T>& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  if (rows.size() != cols.size()) throw matrix_error("det_submatrix: row and column lists differ in length");
  if (rows.empty()) throw matrix_error("det_submatrix: empty index list");
  auto check = [](const std::vector<std::size_t>& idx, std::size_t bound, const char* what) {
    std::set<std::size_t> seen;
    for (auto i : idx) {
      if (i >= bound) throw matrix_error(std::string("det_submatrix: ") + what + " index out of range");
      if (!seen.insert(i).second) throw matrix_error(std::string("det_submatrix: duplicate ") + what + " index");
    }
  };
  check(rows, m.rows(), "row");
  check(cols, m.cols(), "column");
  Matrix<T> sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = m(rows[i], cols[j]);
  return determinant(sub);
}

template <class T>
struct Rref {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Exact scalars pivot on the first nonzero entry,
/// floats on the largest entry with |x| > tol relative to max|m|.
template <class T>
Rref<T> rref(const Matrix<T>& m, const Tolerance& tol = {}) {
  Matrix<T> a(m);
  std::vector<std::size_t> pivots;
  const double scale = is_exact_v<T> ? 0.0 : max_abs(m);
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = a.rows();
    if constexpr (is_exact_v<T>) {
      for (std::size_t i = row; i < a.rows(); ++i)
        if (!a(i, col).is_zero()) {
          piv = i;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t i = row; i < a.rows(); ++i) {
        if (std::fabs(a(i, col)) > best) {
          best = std::fabs(a(i, col));
          piv = i;
        }
      }
      if (piv != a.rows() && scalar_traits<T>::is_zero(best, scale, tol)) piv = a.rows();
    }
    if (piv == a.rows()) {
      if constexpr (!is_exact_v<T>)
        for (std::size_t i = row; i < a.rows(); ++i) a(i, col) = 0.0;
      continue;
    }
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(piv, j));
    const T inv = T(1) / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) = a(row, j) * inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || zero_entry(a(i, col))) continue;
      const T f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& m, const Tolerance& tol = {}) {
  return rref(m, tol).pivots.size();
}

/// Basis of the right kernel {x : m x = 0}, one column per free variable.
template <class T>
Matrix<T> kernel(const Matrix<T>& m, const Tolerance& tol = {}) {
  const auto r = rref(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Matrix<T> out(m.cols(), free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    out(free_cols[f], f) = T(1);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) out(r.pivots[i], f) = -r.reduced(i, free_cols[f]);
  }
  return out;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m, const Tolerance& tol = {}) {
  if (!m.is_square()) throw matrix_error("inverse: matrix is not square");
  const std::size_t n = m.rows();
  const auto r = rref(hstack(m, Matrix<T>::identity(n)), tol);
  if (r.pivots.size() < n || r.pivots[n - 1] != n - 1) throw matrix_error("inverse: matrix is singular");
  return r.reduced.block(0, n, n, n);
}

/// exp(N) for nilpotent N as the finite series sum N^k / k!.
template <class T>
Matrix<T> nilpotent_exp(const Matrix<T>& n, const Tolerance& tol = {}) {
  if (!n.is_square()) throw matrix_error("nilpotent_exp: matrix is not square");
  const std::size_t dim = n.rows();
  const double scale = is_exact_v<T> ? 0.0 : std::max(1.0, max_abs(n));
  Matrix<T> out = Matrix<T>::identity(dim);
  Matrix<T> power = Matrix<T>::identity(dim);
  for (std::size_t k = 1; k <= dim; ++k) {
    power = power * n;
    power *= from_ratio<T>(1, static_cast<long>(k));
    // power == N^k / k!
    if (is_zero_matrix(power, std::pow(scale, static_cast<double>(k)), tol)) return out;
    out += power;
  }
  if (!is_zero_matrix(power * n, std::pow(scale, static_cast<double>(dim + 1)), tol))
    throw matrix_error("nilpotent_exp: argument is not nilpotent");
  return out;
}

/// General matrix exponential for floats by scaling and squaring of a
/// degree-18 Taylor polynomial.
inline Matrix<double> expm(const Matrix<double>& a) {
  if (!a.is_square()) throw matrix_error("expm: matrix is not square");
  double norm = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += std::fabs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  Matrix<double> s = a * std::ldexp(1.0, -squarings);
  Matrix<double> out = Matrix<double>::identity(a.rows());
  Matrix<double> term = Matrix<double>::identity(a.rows());
  for (int k = 1; k <= 18; ++k) {
    term = term * s;
    term *= 1.0 / k;
    out += term;
  }
  for (int i = 0; i < squarings; ++i) out = out * out;
  return out;
}

} // namespace symflag
