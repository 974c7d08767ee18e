#include "symflag/commands.hpp"

#include "symflag/matrix_io.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

namespace symflag {

namespace {

using json = nlohmann::json;

constexpr const char* kAnchorKeyLemma = "p_k(g^-1) = (-1)^k p_k(g) for every g in Sp(2n,R) and 1 <= k <= 2n";
constexpr const char* kAnchorTransverse =
    "u tau_Theta^opp is antipodal to tau_Theta^opp iff p_k(u) != 0 for every k in Theta (u in U_Theta)";
constexpr const char* kAnchorInversion =
    "iota(tau) = u_tau^-1 tau_Theta^opp is an involution of C(tau_Theta) preserving C(tau_Theta) and C(tau_Theta^opp)";
constexpr const char* kAnchorPropertyI =
    "Theta contains an odd integer => F_Theta has Property (I); sign obstruction: p_k(u^-1) = -p_k(u) for odd k";
constexpr const char* kAnchorBrackets = "[H,X] = 2X, [H,Y] = 2Y, [X,Y] = 0, [X,X^T] = H, X and Y in sp(2n,R)";
constexpr const char* kAnchorTopRight =
    "the top-right block of exp(aX + bY) is traceless symmetric, homogeneous of odd degree (n-1 for even n, n-2 for odd n)";
constexpr const char* kAnchorForms = "J_h^2 = -I, f J f^T = J_h, f f^T = I";
constexpr const char* kAnchorSl2c =
    "for every g in U there are g' arbitrarily close to g and (a,b) with p_2(g' exp(aX + bY)) = 0";
constexpr const char* kAnchorSu = "for every g in U there is g' in U' with det (g g')_{1n} = 0, so g g' tau_- is not antipodal to tau_-";
constexpr const char* kAnchorNonMax =
    "for g = [[I,0,I],[0,I,0],[0,0,I]] and g' in U', (g^-1 g')_{1n} = -(|a|^2+|b|^2+2)/2 I + c R, whose determinant is >= 1";

Backend backend_or(const RunConfig& cfg, Backend fallback) { return cfg.backend.value_or(fallback); }

void require_n(const RunConfig& cfg, int lo, int hi) {
  if (cfg.n < lo || cfg.n > hi)
    throw config_error(cfg.command + ": --n must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void require_samples(const RunConfig& cfg) {
  if (cfg.samples == 0) throw config_error(cfg.command + ": --samples must be positive");
}

ThetaSet theta_from(const RunConfig& cfg) {
  if (!cfg.theta) throw config_error(cfg.command + ": --theta is required");
  try {
    return ThetaSet::parse(cfg.n, *cfg.theta);
  } catch (const flag_error& e) {
    throw config_error(e.what());
  }
}

template <class T>
json scalar_json(const T& x) {
  return scalar_traits<T>::to_string(x);
}

template <class T>
std::vector<T> random_vector(Rng& rng, int len) {
  std::vector<T> v;
  for (int i = 0; i < len; ++i) v.push_back(from_rational<T>(rng.rational(5, 4)));
  return v;
}

template <class T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

template <class T>
json block_json(const Block2<T>& b) {
  return {{"I", scalar_json(b.i_coef)}, {"R", scalar_json(b.r_coef)}, {"T", scalar_json(b.t_coef)}, {"P", scalar_json(b.p_coef)}};
}

template <class T>
std::vector<CheckRecord> key_lemma_records(const RunConfig& cfg) {
  std::vector<CheckRecord> out(cfg.samples);
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= 2 * static_cast<std::size_t>(cfg.n); ++k) ks.push_back(k);
  parallel_for(cfg.samples, [&](std::size_t i) {
    const auto g = random_symplectic<T>(cfg.n, cfg.seed, 1.0, i);
    const auto rep = verify_key_lemma(g, ks);
    json residuals = json::array();
    for (const auto& e : rep.entries) residuals.push_back(scalar_json(e.residual));
    out[i] = {"key_lemma[" + std::to_string(i) + "]", kAnchorKeyLemma, rep.holds,
              {{"sample", i}, {"residuals", residuals}, {"max_residual", rep.max_residual}}};
  });
  return out;
}

template <class T>
std::vector<CheckRecord> transversality_records(const RunConfig& cfg, const ThetaSet& theta) {
  std::vector<CheckRecord> out(cfg.samples);
  parallel_for(cfg.samples, [&](std::size_t i) {
    Rng rng(cfg.seed, i);
    const auto u = random_unipotent<Exact>(theta, rng, 1);
    const Matrix<T> um = convert_matrix<T>(u.mat);
    const auto opp = standard_opp_flag<T>(theta);
    const bool anti = are_antipodal(act(um, opp), opp, standard_J<T>(theta.n()));
    bool minors_nonzero = true;
    json minors = json::array();
    for (int k : theta.members()) {
      const T pk = antiprincipal_minor(um, static_cast<std::size_t>(k));
      minors.push_back(scalar_json(pk));
      if (scalar_traits<T>::is_zero(pk, 1.0, {})) minors_nonzero = false;
    }
    out[i] = {"transversality[" + std::to_string(i) + "]", kAnchorTransverse, anti == minors_nonzero,
              {{"sample", i}, {"antipodal", anti}, {"minors_nonzero", minors_nonzero}, {"minors", minors}}};
  });
  return out;
}

template <class T>
CheckRecord su_record(const RunConfig& cfg, std::size_t i) {
  Rng rng(cfg.seed, i);
  const int m = cfg.n - 2;
  UParams<T> g{random_vector<T>(rng, m), random_vector<T>(rng, m), random_vector<T>(rng, m), random_vector<T>(rng, m),
               from_rational<T>(rng.rational(3, 2)), from_rational<T>(rng.rational(3, 2)), from_rational<T>(rng.rational(3, 2))};
  const auto w = su_witness(cfg.n, g);
  const bool zero = is_exact_v<T> ? scalar_traits<T>::is_zero(w.det, 0.0, {}) : scalar_traits<T>::magnitude(w.det) <= 1e-12;
  return {"su_witness[" + std::to_string(i) + "]", kAnchorSu, w.verdict == Verdict::WitnessFound && zero,
          {{"sample", i},
           {"verdict", to_string(w.verdict)},
           {"alpha", vector_json(w.g_prime.alpha)},
           {"beta", vector_json(w.g_prime.beta)},
           {"gamma", scalar_json(w.g_prime.gamma)},
           {"block", block_json(w.block)},
           {"det", scalar_json(w.det)},
           {"confirmed_standard", w.confirmed_standard},
           {"confirmed_hermitian", w.confirmed_hermitian}}};
}

template <class T>
CheckRecord non_max_record(const RunConfig& cfg, std::size_t i) {
  Rng rng(cfg.seed, i);
  const int m = cfg.n - 2;
  const UPrimeParams<T> p{random_vector<T>(rng, m), random_vector<T>(rng, m), from_rational<T>(rng.rational(5, 3))};
  const std::string name = "non_maximal[" + std::to_string(i) + "]";
  T det;
  try {
    det = non_maximality_check(cfg.n, p);
  } catch (const witness_error& e) {
    return {name, kAnchorNonMax, false, {{"sample", i}, {"error", e.what()}}};
  }
  // Antipodality in F_{2,2n-2} also needs the top-right block of g'^-1 g to be invertible.
  const Matrix<T> g = non_maximality_seed<T>(cfg.n);
  const Matrix<T> gp = su_horocyclic_U_prime(cfg.n, p);
  const T reverse_det = block2_decompose(top_right(Matrix<T>(inverse(gp) * g))).determinant();
  const bool anti = are_antipodal(act(g, sl_tau_minus<T>(cfg.n)), act(gp, sl_tau_minus<T>(cfg.n)), standard_J<T>(cfg.n));
  const auto nonzero = [](const T& x) { return is_exact_v<T> ? scalar_traits<T>::sign(x) != 0 : scalar_traits<T>::magnitude(x) > 1e-9; };
  const bool consistent = anti == (nonzero(det) && nonzero(reverse_det));
  const bool ge1 = is_exact_v<T> ? scalar_traits<T>::sign(T(det - T(1))) >= 0 : scalar_traits<T>::to_double(det) >= 1.0 - 1e-12;
  return {name, kAnchorNonMax, ge1 && consistent,
          {{"sample", i},
           {"alpha", vector_json(p.alpha)},
           {"beta", vector_json(p.beta)},
           {"gamma", scalar_json(p.gamma)},
           {"det", scalar_json(det)},
           {"reverse_block_det", scalar_json(reverse_det)},
           {"sl_antipodal", anti},
           {"antipodality_consistent", consistent}}};
}

Report make_report(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  r.config = cfg;
  return r;
}

Matrix<double> load_g(const RunConfig& cfg) {
  const std::size_t d = 2 * static_cast<std::size_t>(cfg.n);
  if (*cfg.g == "identity") return Matrix<double>::identity(d);
  Matrix<double> g;
  try {
    g = read_matrix_file<double>(*cfg.g);
  } catch (const format_error& e) {
    throw config_error(std::string("--g: ") + e.what());
  }
  if (!is_sl_horocyclic(g, cfg.n)) throw config_error("--g: matrix is not of the form [[I,A,B],[0,I,C],[0,0,I]] for n = " + std::to_string(cfg.n));
  return g;
}

} // namespace

std::string backend_name(Backend b) { return b == Backend::Exact ? "exact" : "float"; }

Backend parse_backend(const std::string& s) {
  if (s == "exact") return Backend::Exact;
  if (s == "float") return Backend::Float;
  throw config_error("unknown backend '" + s + "' (expected exact or float)");
}

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

json Report::to_json() const {
  json cfg = {{"n", config.n}, {"samples", config.samples}, {"seed", config.seed}, {"tol", config.tol}, {"epsilon", config.epsilon}};
  cfg["theta"] = config.theta ? json(*config.theta) : json(nullptr);
  cfg["backend"] = config.backend ? json(backend_name(*config.backend)) : json(nullptr);
  cfg["g"] = config.g ? json(*config.g) : json(nullptr);
  json checks_json = json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name}, {"anchor", c.anchor}, {"status", c.pass ? "pass" : "fail"}, {"values", c.values}});
    passed += c.pass;
  }
  json s = summary;
  s["verdict"] = pass() ? "pass" : "fail";
  s["checks"] = checks.size();
  s["passed"] = passed;
  return {{"schema", kReportSchema}, {"command", command}, {"config", cfg}, {"checks", checks_json}, {"summary", s}, {"wall_time_s", wall_time_s}};
}

Report verify_key_lemma(const RunConfig& cfg) {
  require_n(cfg, 1, 12);
  require_samples(cfg);
  Report r = make_report(cfg);
  r.checks = backend_or(cfg, Backend::Exact) == Backend::Exact ? key_lemma_records<Exact>(cfg) : key_lemma_records<double>(cfg);
  return r;
}

Report verify_transversality(const RunConfig& cfg) {
  require_n(cfg, 1, 10);
  require_samples(cfg);
  const ThetaSet theta = theta_from(cfg);
  Report r = make_report(cfg);
  r.checks = backend_or(cfg, Backend::Exact) == Backend::Exact ? transversality_records<Exact>(cfg, theta)
                                                                : transversality_records<double>(cfg, theta);
  std::size_t transverse = 0;
  for (const auto& c : r.checks) transverse += c.values["antipodal"].get<bool>();
  r.summary = {{"theta", theta.to_string()}, {"antipodal_samples", transverse}, {"non_antipodal_samples", r.checks.size() - transverse}};
  return r;
}

Report verify_inversion(const RunConfig& cfg) {
  require_n(cfg, 1, 10);
  require_samples(cfg);
  if (backend_or(cfg, Backend::Exact) != Backend::Exact) throw config_error("verify inversion: only the exact backend is supported");
  const ThetaSet theta = theta_from(cfg);
  Report r = make_report(cfg);
  r.checks.resize(cfg.samples);
  parallel_for(cfg.samples, [&](std::size_t i) {
    Rng rng(cfg.seed, i);
    const auto u = random_doubly_transverse_unipotent(theta, rng);
    const auto tau = act(u.mat, standard_opp_flag<Exact>(theta));
    const auto image = inversion(tau, theta);
    const bool involution = inversion(image, theta) == tau;
    const bool preserved = doubly_transverse(tau, theta) && doubly_transverse(image, theta);
    r.checks[i] = {"inversion[" + std::to_string(i) + "]", kAnchorInversion, involution && preserved,
                   {{"sample", i}, {"involution", involution}, {"doubly_transverse_preserved", preserved}}};
  });
  r.summary = {{"theta", theta.to_string()}};
  return r;
}

Report verify_property_i(const RunConfig& cfg) {
  require_n(cfg, 1, 10);
  require_samples(cfg);
  if (backend_or(cfg, Backend::Exact) != Backend::Exact) throw config_error("verify property-i: only the exact backend is supported");
  const ThetaSet theta = theta_from(cfg);
  const auto cert = property_I_certificate(theta, cfg.samples, cfg.seed);
  Report r = make_report(cfg);
  const std::size_t nk = theta.members().size();
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    json signs = json::array();
    bool ok = true;
    for (std::size_t t = 0; t < nk; ++t) {
      const auto& rec = cert.records[s * nk + t];
      const bool expect_flip = rec.k % 2 == 1;
      const bool good = rec.sign_u != 0 && (expect_flip ? rec.sign_u == -rec.sign_u_inverse : rec.sign_u == rec.sign_u_inverse);
      ok = ok && good;
      signs.push_back({{"k", rec.k}, {"sign_p_k(u)", rec.sign_u}, {"sign_p_k(u^-1)", rec.sign_u_inverse}});
    }
    r.checks.push_back({"property_i[" + std::to_string(s) + "]", kAnchorPropertyI, ok, {{"sample", s}, {"signs", signs}}});
  }
  r.summary = {{"theta", theta.to_string()},
               {"odd_ks", cert.odd_ks},
               {"even_ks", cert.even_ks},
               {"odd_flip_all", cert.odd_flip_all},
               {"even_persist_all", cert.even_persist_all},
               {"property_I", cert.property_I},
               {"rejected_draws", cert.rejected},
               {"counterexamples", cert.counterexamples.size()},
               {"scope", cert.scope}};
  if (!theta.has_odd())
    r.summary["note"] = "Theta has no odd member: the certificate records sign persistence p_k(u^-1) = p_k(u) and makes no Property (I) claim";
  return r;
}

Report verify_rep(const RunConfig& cfg) {
  require_n(cfg, 2, 9);
  Report r = make_report(cfg);
  const int n = cfg.n;
  Sl2Triple t;
  try {
    t = build_rho(n);
  } catch (const rep_error& e) {
    r.checks.push_back({"build_rho", kAnchorBrackets, false, {{"error", e.what()}}});
    return r;
  }
  const auto c = check_triple(t);
  const int deg = effective_degree(n);
  std::vector<Exact> expect;
  for (int w = deg; w >= -deg; w -= 2) {
    if (n % 2 == 1 && w < 0 && (expect.empty() || expect.back().sign() > 0)) expect.insert(expect.end(), 2, Exact(0));
    expect.insert(expect.end(), 2, Exact(w));
  }
  bool spectrum = expect.size() == t.H.rows();
  json diag = json::array();
  for (std::size_t i = 0; i < t.H.rows(); ++i) {
    diag.push_back(scalar_json(t.H(i, i)));
    for (std::size_t j = 0; j < t.H.cols(); ++j) {
      const Exact want = i == j && spectrum ? expect[i] : Exact(0);
      if (i != j || spectrum) spectrum = spectrum && t.H(i, j) == want;
    }
  }
  r.checks.push_back({"brackets", kAnchorBrackets, c.all() && spectrum,
                      {{"[H,X]=2X", c.h_x}, {"[H,Y]=2Y", c.h_y}, {"[X,Y]=0", c.x_y}, {"[X,X^T]=H", c.x_xt}, {"X in sp", c.x_sp}, {"Y in sp", c.y_sp},
                       {"H_spectrum", spectrum}, {"H_diagonal", diag}}});
  const auto polys = top_right_polys(ExpSeries(t));
  const bool traceless = polys.i_coef.is_zero() && polys.r_coef.is_zero();
  const bool degrees = polys.t_coef.total_degree() == deg && polys.p_coef.total_degree() == deg &&
                       polys.t_coef.leading_form() == polys.t_coef && polys.p_coef.leading_form() == polys.p_coef && deg % 2 == 1;
  r.checks.push_back({"top_right_block", kAnchorTopRight, traceless && degrees,
                      {{"traceless_symmetric", traceless}, {"degree", deg}, {"homogeneous_odd_degree", degrees}}});
  const auto jh = hermitian_J_h<Exact>(n).gram;
  const auto f = build_f<Exact>(n);
  const auto j = standard_J<Exact>(n).gram;
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  const bool sq = jh * jh == Matrix<Exact>(-Matrix<Exact>::identity(d));
  const bool conj = f * j * f.transpose() == jh;
  const bool orth = f * f.transpose() == Matrix<Exact>::identity(d);
  r.checks.push_back({"hermitian_form", kAnchorForms, sq && conj && orth, {{"J_h^2=-I", sq}, {"fJf^T=J_h", conj}, {"ff^T=I", orth}}});
  r.summary = {{"radicands", t.radicands()}, {"triple", triple_to_json(t)}};
  return r;
}

Report witness_sl2c(const RunConfig& cfg) {
  require_n(cfg, 2, 7);
  if (backend_or(cfg, Backend::Float) != Backend::Float)
    throw config_error("witness sl2c: root finding runs in the float backend; the final witness is validated exactly");
  if (!(cfg.tol > 0.0) || !(cfg.epsilon >= 0.0)) throw config_error("witness sl2c: need --tol > 0 and --epsilon >= 0");
  const ExpSeries series(build_rho(cfg.n));
  std::optional<Matrix<double>> fixed;
  if (cfg.g) fixed = load_g(cfg);
  const std::size_t count = fixed ? 1 : cfg.samples;
  if (count == 0) throw config_error("witness sl2c: --samples must be positive");
  Report r = make_report(cfg);
  r.checks.resize(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(cfg.seed, i);
    const Matrix<double> g = fixed ? *fixed : random_sl_horocyclic(cfg.n, rng);
    Sl2cOptions opt;
    opt.epsilon = cfg.epsilon;
    opt.tol = cfg.tol;
    opt.seed = cfg.seed ^ (0x9e37u + i);
    const auto w = sl2c_witness(g, series, opt);
    json attempts = json::array();
    for (const auto& a : w.attempts)
      attempts.push_back({{"index", a.index}, {"delta_T", a.delta_t}, {"delta_P", a.delta_p}, {"verdict", to_string(a.verdict)}, {"note", a.note}});
    r.checks[i] = {"sl2c_witness[" + std::to_string(i) + "]", kAnchorSl2c, w.verdict == Verdict::WitnessFound,
                   {{"sample", i},
                    {"verdict", to_string(w.verdict)},
                    {"alpha", rational_to_string(w.alpha)},
                    {"beta", rational_to_string(w.beta)},
                    {"alpha_approx", w.alpha.get_d()},
                    {"beta_approx", w.beta.get_d()},
                    {"residual", w.residual},
                    {"perturbation_norm", w.perturbation_norm},
                    {"perturbation", matrix_to_json(w.perturbation.rows() ? w.perturbation : Matrix<double>(2, 2))},
                    {"common_root", {{"alpha", w.root.alpha}, {"beta", w.root.beta}, {"residual", w.root.residual}}},
                    {"det_at_root", w.det_at_root},
                    {"resultant_degree", w.root.resultant_degree},
                    {"real_alpha_roots", w.root.real_alpha_roots},
                    {"isolation_intervals", w.root.isolation_intervals},
                    {"newton_steps", w.root.newton_steps},
                    {"doublings", w.doublings},
                    {"bisection_steps", w.bisection_steps},
                    {"confirmed_non_antipodal", w.confirmed_non_antipodal},
                    {"antipodality_margin", w.antipodality_margin},
                    {"attempts", attempts}}};
  });
  r.summary = {{"effective_degree", effective_degree(cfg.n)}};
  return r;
}

Report witness_su(const RunConfig& cfg) {
  require_n(cfg, 3, 10);
  require_samples(cfg);
  Report r = make_report(cfg);
  r.checks.resize(cfg.samples);
  const bool exact = backend_or(cfg, Backend::Exact) == Backend::Exact;
  parallel_for(cfg.samples, [&](std::size_t i) { r.checks[i] = exact ? su_record<Exact>(cfg, i) : su_record<double>(cfg, i); });
  return r;
}

Report check_non_maximal(const RunConfig& cfg) {
  require_n(cfg, 3, 10);
  require_samples(cfg);
  Report r = make_report(cfg);
  r.checks.resize(cfg.samples);
  const bool exact = backend_or(cfg, Backend::Exact) == Backend::Exact;
  parallel_for(cfg.samples, [&](std::size_t i) { r.checks[i] = exact ? non_max_record<Exact>(cfg, i) : non_max_record<double>(cfg, i); });
  std::size_t non_antipodal = 0;
  for (const auto& c : r.checks) non_antipodal += c.values.contains("sl_antipodal") && !c.values["sl_antipodal"].get<bool>();
  r.summary = {{"sl_non_antipodal_samples", non_antipodal}};
  if (non_antipodal > 0)
    r.summary["note"] = "some samples have det (g'^-1 g)_{1n} = 0, so g tau_- is not antipodal to g' tau_- in F_{2,2n-2} "
                        "although det (g^-1 g')_{1n} >= 1; this happens when |alpha|^2 + |beta|^2 = 2 and gamma = 0";
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"verify key-lemma", "verify transversality", "verify inversion", "verify property-i",
                                              "verify rep",       "witness sl2c",          "witness su",        "check non-maximal"};
  return names;
}

Report run_command(const RunConfig& cfg) {
  static const std::map<std::string, std::function<Report(const RunConfig&)>> table{
      {"verify key-lemma", [](const RunConfig& c) { return verify_key_lemma(c); }}, {"verify transversality", [](const RunConfig& c) { return verify_transversality(c); }},
      {"verify inversion", [](const RunConfig& c) { return verify_inversion(c); }}, {"verify property-i", [](const RunConfig& c) { return verify_property_i(c); }},
      {"verify rep", [](const RunConfig& c) { return verify_rep(c); }},             {"witness sl2c", [](const RunConfig& c) { return witness_sl2c(c); }},
      {"witness su", [](const RunConfig& c) { return witness_su(c); }},             {"check non-maximal", [](const RunConfig& c) { return check_non_maximal(c); }}};
  const auto it = table.find(cfg.command);
  if (it == table.end()) throw config_error("unknown command '" + cfg.command + "'");
  const auto start = std::chrono::steady_clock::now();
  Report r = it->second(cfg);
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace symflag
