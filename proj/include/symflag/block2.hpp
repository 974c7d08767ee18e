#pragma once

#include "symflag/matrix.hpp"
#include "symflag/scalar.hpp"

namespace symflag {

// 2x2 basis used for block calculus:
//   I = [[1,0],[0,1]]  T = [[1,0],[0,-1]]  R = [[0,-1],[1,0]]  P = [[0,1],[1,0]]
// Nonzero elements of span(I, R) have positive determinant; span(T, P) is the
// traceless symmetric matrices.

template <class T>
Matrix<T> basis_I() {
  return Matrix<T>{{T(1), T(0)}, {T(0), T(1)}};
}
template <class T>
Matrix<T> basis_T() {
  return Matrix<T>{{T(1), T(0)}, {T(0), T(-1)}};
}
template <class T>
Matrix<T> basis_R() {
  return Matrix<T>{{T(0), T(-1)}, {T(1), T(0)}};
}
template <class T>
Matrix<T> basis_P() {
  return Matrix<T>{{T(0), T(1)}, {T(1), T(0)}};
}

/// Coordinates of a 2x2 matrix over (I, R, T, P).
template <class T>
struct Block2 {
  T i_coef{0};
  T r_coef{0};
  T t_coef{0};
  T p_coef{0};

  Matrix<T> reconstruct() const {
    return Matrix<T>{{i_coef + t_coef, p_coef - r_coef}, {r_coef + p_coef, i_coef - t_coef}};
  }
  T determinant() const { return i_coef * i_coef + r_coef * r_coef - t_coef * t_coef - p_coef * p_coef; }

  friend bool operator==(const Block2&, const Block2&) = default;
};

/// Unique coordinates of a 2x2 matrix [[a,b],[c,d]]:
/// i = (a+d)/2, t = (a-d)/2, r = (c-b)/2, p = (b+c)/2.
template <class T, class H = T>
Block2<T> block2_decompose(const Matrix<T>& b, const H& half) {
  if (b.rows() != 2 || b.cols() != 2) throw matrix_error("block2_decompose: expected a 2x2 matrix");
  Block2<T> out;
  out.i_coef = (b(0, 0) + b(1, 1)) * half;
  out.t_coef = (b(0, 0) - b(1, 1)) * half;
  out.r_coef = (b(1, 0) - b(0, 1)) * half;
  out.p_coef = (b(0, 1) + b(1, 0)) * half;
  return out;
}

template <class T>
Block2<T> block2_decompose(const Matrix<T>& b) {
  return block2_decompose(b, from_ratio<T>(1, 2));
}

/// [[a,b],[c,d]] -> [[d,-b],[-c,a]], so that A * adj(A) = det(A) * I.
template <class T>
Matrix<T> adjugate2(const Matrix<T>& a) {
  if (a.rows() != 2 || a.cols() != 2) throw matrix_error("adjugate2: expected a 2x2 matrix");
  return Matrix<T>{{a(1, 1), -a(0, 1)}, {-a(1, 0), a(0, 0)}};
}

} // namespace symflag
