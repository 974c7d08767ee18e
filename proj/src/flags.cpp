#include "symflag/flags.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace symflag {

ThetaSet::ThetaSet(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
  if (n_ < 1) throw flag_error("Theta: n must be >= 1");
  if (members_.empty()) throw flag_error("Theta: must be non-empty");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 1 || members_[i] > n_)
      throw flag_error("Theta: member " + std::to_string(members_[i]) + " is outside {1,...," + std::to_string(n_) + "}");
    if (i > 0 && members_[i] == members_[i - 1]) throw flag_error("Theta: duplicate member " + std::to_string(members_[i]));
  }
}

ThetaSet ThetaSet::parse(int n, std::string_view list) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    auto item = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw flag_error("Theta: cannot parse '" + std::string(list) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return ThetaSet(n, std::move(out));
}

std::vector<ThetaSet> ThetaSet::all_subsets(int n) {
  std::vector<ThetaSet> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> m;
    for (int k = 1; k <= n; ++k)
      if (mask & (1u << (k - 1))) m.push_back(k);
    out.emplace_back(n, std::move(m));
  }
  return out;
}

bool ThetaSet::contains(int k) const { return std::binary_search(members_.begin(), members_.end(), k); }

bool ThetaSet::has_odd() const {
  return std::any_of(members_.begin(), members_.end(), [](int k) { return k % 2 == 1; });
}

bool ThetaSet::is_subset_of(const ThetaSet& other) const {
  return n_ == other.n_ && std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

std::vector<int> ThetaSet::cuts() const {
  std::set<int> c;
  for (int k : members_) {
    c.insert(k);
    c.insert(2 * n_ - k);
  }
  return {c.begin(), c.end()};
}

std::string ThetaSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i];
  os << '}';
  return os.str();
}

namespace {

double column_norm(const Matrix<double>& m, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

// Orthogonalizes column j of q against columns [0, count) twice, returns the
// remaining norm before normalization.
double orthogonalize_against(Matrix<double>& q, std::size_t j, std::size_t count, const Matrix<double>& src, std::size_t src_col) {
  for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) = src(i, src_col);
  const double original = column_norm(q, j);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < count; ++c) {
      double dot = 0.0;
      for (std::size_t i = 0; i < q.rows(); ++i) dot += q(i, c) * q(i, j);
      for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) -= dot * q(i, c);
    }
  }
  const double rest = column_norm(q, j);
  return original == 0.0 ? 0.0 : rest / original;
}

} // namespace

Matrix<double> orthonormalize(const Matrix<double>& m, double tol) {
  Matrix<double> q(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const double rel = orthogonalize_against(q, j, j, m, j);
    if (rel <= tol) throw flag_error("orthonormalize: columns are linearly dependent");
    const double nrm = column_norm(q, j);
    for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) /= nrm;
  }
  return q;
}

Matrix<double> orthonormal_span(const Matrix<double>& m, double tol) {
  Matrix<double> q(m.rows(), std::min(m.rows(), m.cols()));
  std::size_t count = 0;
  for (std::size_t j = 0; j < m.cols() && count < q.cols(); ++j) {
    const double rel = orthogonalize_against(q, count, count, m, j);
    if (rel <= tol) continue;
    const double nrm = column_norm(q, count);
    for (std::size_t i = 0; i < q.rows(); ++i) q(i, count) /= nrm;
    ++count;
  }
  return q.block(0, 0, q.rows(), count);
}

Matrix<double> orthogonal_complement(const Matrix<double>& m, double tol) {
  const Matrix<double> q = orthonormal_span(m, tol);
  const std::size_t d = m.rows();
  const Matrix<double> full = orthonormal_span(hstack(q, Matrix<double>::identity(d)), tol);
  if (full.cols() != d) throw flag_error("orthogonal_complement: failed to complete the basis");
  return full.block(0, q.cols(), d, d - q.cols());
}

std::vector<int> block_index(const ThetaSet& theta) {
  const int d = 2 * theta.n();
  std::vector<int> blk(static_cast<std::size_t>(d));
  const auto cuts = theta.cuts();
  int b = 0;
  std::size_t next = 0;
  for (int i = 0; i < d; ++i) {
    while (next < cuts.size() && i >= cuts[next]) {
      ++b;
      ++next;
    }
    blk[static_cast<std::size_t>(i)] = b;
  }
  return blk;
}

std::vector<std::pair<std::size_t, std::size_t>> unipotent_positions(const ThetaSet& theta) {
  const auto blk = block_index(theta);
  const std::size_t d = blk.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (blk[i] < blk[j] && i + j <= d - 1) out.emplace_back(i, j);
  return out;
}

UnipotentElement<Exact> random_doubly_transverse_unipotent(const ThetaSet& theta, Rng& rng, std::size_t* rejected) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto u = random_unipotent<Exact>(theta, rng);
    bool ok = true;
    for (int k : theta.members())
      if (antiprincipal_minor(u.mat, static_cast<std::size_t>(k)).is_zero()) {
        ok = false;
        break;
      }
    if (ok) return u;
    if (rejected) ++*rejected;
  }
  throw flag_error("random_doubly_transverse_unipotent: no doubly transverse sample after 10000 draws");
}

PropertyICertificate property_I_certificate(const ThetaSet& theta, std::size_t samples, std::uint64_t seed) {
  PropertyICertificate cert{theta, samples, seed, {}, {}, {}, {}, 0, true, true, false, {}};
  for (int k : theta.members()) (k % 2 ? cert.odd_ks : cert.even_ks).push_back(k);
  const auto form = standard_J<Exact>(theta.n());
  const std::size_t nk = theta.members().size();
  std::vector<SignRecord> records(samples * nk);
  std::vector<std::size_t> rejected(samples, 0);
  parallel_for(samples, [&](std::size_t s) {
    Rng rng(seed, s);
    const auto u = random_doubly_transverse_unipotent(theta, rng, &rejected[s]);
    const auto uinv = symplectic_inverse_matrix(u.mat, form);
    for (std::size_t t = 0; t < nk; ++t) {
      const int k = theta.members()[t];
      const auto kk = static_cast<std::size_t>(k);
      records[s * nk + t] = {s, k, antiprincipal_minor(u.mat, kk).sign(), antiprincipal_minor(uinv, kk).sign()};
    }
  });
  for (auto r : rejected) cert.rejected += r;
  for (const auto& r : records) {
    const bool flipped = r.sign_u == -r.sign_u_inverse && r.sign_u != 0;
    const bool kept = r.sign_u == r.sign_u_inverse && r.sign_u != 0;
    if (r.k % 2 == 1 && !flipped) {
      cert.odd_flip_all = false;
      cert.counterexamples.push_back(r);
    }
    if (r.k % 2 == 0 && !kept) {
      cert.even_persist_all = false;
      cert.counterexamples.push_back(r);
    }
  }
  cert.records = std::move(records);
  cert.property_I = theta.has_odd() && cert.odd_flip_all && samples > 0;
  cert.scope =
      "Certifies the minor-sign obstruction only: for odd k in Theta, p_k(u^-1) = -p_k(u) != 0 on every sampled "
      "doubly transverse u, so u and u^-1 lie in regions where p_k has opposite signs. It does not enumerate the "
      "connected components of the doubly transverse locus.";
  return cert;
}

} // namespace symflag
