#include "symflag/witness.hpp"

#include <cmath>

namespace symflag {

namespace {

UniPoly<Exact> substitute(const BivarPoly<Exact>& f, const UniPoly<Exact>& a, const UniPoly<Exact>& b) {
  UniPoly<Exact> out;
  for (const auto& [k, c] : f.terms()) {
    UniPoly<Exact> m(c);
    for (int i = 0; i < k.first; ++i) m *= a;
    for (int i = 0; i < k.second; ++i) m *= b;
    out += m;
  }
  return out;
}

Exact abs_exact(const Exact& x) { return x.sign() < 0 ? -x : x; }

} // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::WitnessFound: return "witness_found";
    case Verdict::DegeneratePerturbedRetry: return "degenerate_perturbed_retry";
    case Verdict::Failed: return "failed";
  }
  return "failed";
}

Matrix<double> random_sl_horocyclic(int n, Rng& rng, double range) {
  if (n < 2) throw witness_error("random_sl_horocyclic: n must be >= 2");
  const std::size_t m = 2 * static_cast<std::size_t>(n) - 4;
  auto fill = [&](std::size_t r, std::size_t c) {
    Matrix<double> x(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) x(i, j) = rng.uniform(-range, range);
    return x;
  };
  const auto a = fill(2, m);
  const auto b = fill(2, 2);
  const auto c = fill(m, 2);
  return sl_horocyclic_element<double>(n, a, b, c);
}

UniPoly<Exact> det_along_ray(const Block2<BivarPoly<Exact>>& polys, const Rational& alpha0, const Rational& beta0) {
  const UniPoly<Exact> a(std::vector<Exact>{Exact(alpha0), Exact(1)});
  const UniPoly<Exact> b(std::vector<Exact>{Exact(beta0), Exact(1)});
  const auto i = substitute(polys.i_coef, a, b);
  const auto r = substitute(polys.r_coef, a, b);
  const auto t = substitute(polys.t_coef, a, b);
  const auto p = substitute(polys.p_coef, a, b);
  return i * i + r * r - t * t - p * p;
}

Sl2cWitness sl2c_witness(const Matrix<double>& g, const ExpSeries& series, const Sl2cOptions& opt) {
  const int n = series.n();
  if (!is_sl_horocyclic(g, n)) throw witness_error("sl2c_witness: g is not in the horocyclic group of tau_+");
  if (!(opt.epsilon >= 0.0) || !(opt.tol > 0.0)) throw witness_error("sl2c_witness: epsilon must be >= 0 and tol > 0");
  const std::size_t d = g.rows();
  const Exact tol_exact(Rational(opt.tol));
  Sl2cWitness out;
  out.n = n;

  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    Sl2cAttempt rec;
    rec.index = attempt;
    if (attempt > 0) {
      Rng rng(opt.seed, static_cast<std::uint64_t>(attempt));
      rec.delta_t = rng.uniform(-opt.epsilon / 4, opt.epsilon / 4);
      rec.delta_p = rng.uniform(-opt.epsilon / 4, opt.epsilon / 4);
    }
    const Matrix<double> delta = basis_T<double>() * rec.delta_t + basis_P<double>() * rec.delta_p;
    Matrix<double> gp = g;
    gp.set_block(0, d - 2, Matrix<double>(g.block(0, d - 2, 2, 2) + delta));

    const auto fpolys = extract_fT_fP(gp, series);
    const auto root = common_real_root(fpolys.t_coef, fpolys.p_coef);
    if (!root) {
      rec.verdict = Verdict::DegeneratePerturbedRetry;
      rec.note = "no common real root of f_T and f_P";
      out.attempts.push_back(rec);
      continue;
    }

    const Matrix<Exact> gx = to_exact(gp);
    const auto xpolys = extract_fT_fP(gx, series);
    const Rational a0(root->alpha), b0(root->beta);
    const auto det = det_along_ray(xpolys, a0, b0);
    const Exact d0 = det.coefficient(0);
    Rational s = 0;
    int doublings = 0, steps = 0;
    if (abs_exact(d0) > tol_exact) {
      if (d0.sign() < 0) {
        rec.verdict = Verdict::DegeneratePerturbedRetry;
        rec.note = "determinant negative at the common root";
        out.attempts.push_back(rec);
        continue;
      }
      Rational hi = 1;
      while (det.evaluate(Exact(hi)).sign() >= 0) {
        if (++doublings > 60) throw witness_error("sl2c_witness: determinant stays nonnegative along the ray");
        hi *= 2;
      }
      Rational lo = 0;
      for (;;) {
        if (++steps > 2000) throw witness_error("sl2c_witness: bisection did not reach the tolerance");
        const Rational mid = (lo + hi) / 2;
        const Exact v = det.evaluate(Exact(mid));
        if (abs_exact(v) <= tol_exact) {
          s = mid;
          break;
        }
        (v.sign() > 0 ? lo : hi) = mid;
      }
    }
    const Exact final_det = det.evaluate(Exact(s));

    out.g_perturbed = gp;
    out.perturbation = delta;
    out.perturbation_norm = std::sqrt(2.0) * std::hypot(rec.delta_t, rec.delta_p);
    out.alpha = a0 + s;
    out.beta = b0 + s;
    out.residual = std::fabs(final_det.to_double());
    out.root = *root;
    out.det_at_root = d0.to_double();
    out.doublings = doublings;
    out.bisection_steps = steps;

    const Matrix<double> e = series.evaluate(out.alpha.get_d(), out.beta.get_d());
    const auto lhs = act(e, sl_tau_minus<double>(n));
    const auto rhs = act(inverse(gp), sl_tau_minus<double>(n));
    const auto form = standard_J<double>(n);
    out.antipodality_margin = antipodality_margin(lhs, rhs, form);
    out.confirmed_non_antipodal = !are_antipodal(lhs, rhs, form, opt.confirm_margin);

    const bool ok = out.residual <= opt.tol && out.perturbation_norm <= opt.epsilon && out.confirmed_non_antipodal;
    rec.verdict = ok ? Verdict::WitnessFound : Verdict::Failed;
    if (!out.confirmed_non_antipodal) rec.note = "flag check did not confirm non-antipodality";
    out.attempts.push_back(rec);
    out.verdict = rec.verdict;
    if (ok) return out;
  }
  out.verdict = Verdict::Failed;
  return out;
}

} // namespace symflag
