#pragma once

#include "symflag/poly.hpp"

#include <optional>

namespace symflag {

using QPoly = UniPoly<Rational>;
using QBivar = BivarPoly<Rational>;

class root_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Monic greatest common divisor over Q; zero when both inputs are zero.
QPoly poly_gcd(QPoly a, QPoly b);

/// p / gcd(p, p'), made monic.
QPoly squarefree_part(const QPoly& p);

/// Res_beta(f, g) as a polynomial in alpha: determinant of the Sylvester
/// matrix built from the actual beta-degrees, by fraction-free elimination
/// over Q[alpha]. Zero when f and g share a factor involving beta.
QPoly resultant_in_beta(const QBivar& f, const QBivar& g);

/// Sturm sequence p, p', -rem(p, p'), ...
std::vector<QPoly> sturm_sequence(const QPoly& p);
int sign_changes(const std::vector<QPoly>& seq, const Rational& x);

/// A real root in (lo, hi]; lo == hi means the root is exactly lo.
struct RootInterval {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
  Rational midpoint() const { return (lo + hi) / 2; }
};

/// Disjoint isolating intervals, in increasing order, for the real roots of
/// p, which must be nonzero and squarefree.
std::vector<RootInterval> isolate_real_roots(const QPoly& p);

/// Shrinks an isolating interval of a squarefree p to width <= 2^-bits by
/// sign bisection; stops early at an exact rational root.
RootInterval refine_root(const QPoly& p, RootInterval iv, int bits);

/// Real roots of an arbitrary nonzero polynomial, each refined to width
/// 2^-bits and returned as midpoints.
std::vector<Rational> real_roots(const QPoly& p, int bits = 60);

/// f(alpha0, beta) as a polynomial in beta.
QPoly specialize_alpha(const QBivar& f, const Rational& alpha0);

QBivar rationalize(const BivarPoly<double>& f);

struct CommonRoot {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;          // max(|f|, |g|) after polishing
  int resultant_degree = -1;
  std::size_t real_alpha_roots = 0;
  std::size_t isolation_intervals = 0;
  int newton_steps = 0;
};

/// A common real root of f and g: resultant in beta, Sturm isolation of its
/// real roots, back-substitution into f and g, then 2D Newton polishing.
/// Returns nothing when the resultant vanishes identically or no candidate
/// polishes below `accept` (relative to the coefficient scale).
std::optional<CommonRoot> common_real_root(const BivarPoly<double>& f, const BivarPoly<double>& g, double accept = 1e-9);

} // namespace symflag
