#include "qcafqmc/statevector.hpp"

#include <bit>
#include <cmath>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace {

std::uint32_t alpha_bits(std::uint32_t idx, int n_spatial) {
  std::uint32_t m = 0;
  for (int p = 0; p < n_spatial; ++p)
    if (idx & (1u << (2 * p))) m |= 1u << p;
  return m;
}

std::uint32_t beta_bits(std::uint32_t idx, int n_spatial) {
  std::uint32_t m = 0;
  for (int p = 0; p < n_spatial; ++p)
    if (idx & (1u << (2 * p + 1))) m |= 1u << p;
  return m;
}

std::uint32_t interleave(std::uint32_t amask, std::uint32_t bmask, int n_spatial) {
  std::uint32_t idx = 0;
  for (int p = 0; p < n_spatial; ++p) {
    if (amask & (1u << p)) idx |= 1u << (2 * p);
    if (bmask & (1u << p)) idx |= 1u << (2 * p + 1);
  }
  return idx;
}

}  // namespace

Statevector Statevector::zero(int n_spatial) {
  require(n_spatial >= 1 && n_spatial <= 14, "dim_cap",
          "statevector supports 1..14 spatial orbitals");
  Statevector sv;
  sv.n_spatial = n_spatial;
  sv.amps = Eigen::VectorXcd::Zero(1ll << (2 * n_spatial));
  return sv;
}

Statevector Statevector::reference(int n_spatial, int n_alpha, int n_beta) {
  Statevector sv = zero(n_spatial);
  std::uint32_t amask = n_alpha > 0 ? (1u << n_alpha) - 1 : 0;
  std::uint32_t bmask = n_beta > 0 ? (1u << n_beta) - 1 : 0;
  sv.amps[interleave(amask, bmask, n_spatial)] = 1.0;
  return sv;
}

double Statevector::sector_leakage(int n_alpha, int n_beta) const {
  double worst = 0.0;
  for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
    if (amps[idx] == std::complex<double>(0.0)) continue;
    std::uint32_t u = static_cast<std::uint32_t>(idx);
    int na = std::popcount(alpha_bits(u, n_spatial));
    int nb = std::popcount(beta_bits(u, n_spatial));
    if (na != n_alpha || nb != n_beta) worst = std::max(worst, std::abs(amps[idx]));
  }
  return worst;
}

double Statevector::broken_pair_weight() const {
  double worst = 0.0;
  for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
    if (amps[idx] == std::complex<double>(0.0)) continue;
    std::uint32_t u = static_cast<std::uint32_t>(idx);
    if (alpha_bits(u, n_spatial) != beta_bits(u, n_spatial))
      worst = std::max(worst, std::abs(amps[idx]));
  }
  return worst;
}

int jw_reorder_sign(std::uint32_t amask, std::uint32_t bmask) {
  // Each beta creation at spatial q hops over alpha creations with p > q.
  int perm = 0;
  std::uint32_t b = bmask;
  while (b) {
    int q = std::countr_zero(b);
    perm += std::popcount(amask >> (q + 1));
    b &= b - 1;
  }
  return (perm % 2 == 0) ? 1 : -1;
}

double DetExpansion::norm2() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::norm(t.coeff);
  return s;
}

DetExpansion expand_determinants(const Statevector& sv, double eps_det) {
  DetExpansion exp;
  exp.n_spatial = sv.n_spatial;
  for (Eigen::Index idx = 0; idx < sv.amps.size(); ++idx) {
    std::complex<double> a = sv.amps[idx];
    if (std::abs(a) < eps_det) {
      exp.discarded_weight += std::norm(a);
      continue;
    }
    std::uint32_t u = static_cast<std::uint32_t>(idx);
    std::uint32_t am = alpha_bits(u, sv.n_spatial);
    std::uint32_t bm = beta_bits(u, sv.n_spatial);
    exp.terms.push_back({a * static_cast<double>(jw_reorder_sign(am, bm)), am, bm});
  }
  return exp;
}

void apply_pair_generator(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                          const std::vector<std::pair<int, int>>& pairs,
                          const Eigen::VectorXd& t, int n_spatial) {
  (void)n_spatial;
  for (Eigen::Index idx = 0; idx < x.size(); ++idx) {
    std::complex<double> c = x[idx];
    if (c == std::complex<double>(0.0)) continue;
    std::uint32_t u = static_cast<std::uint32_t>(idx);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [i, a] = pairs[k];
      std::uint32_t pi = 3u << (2 * i);
      std::uint32_t pa = 3u << (2 * a);
      if ((u & pi) == pi && (u & pa) == 0) y[u ^ pi ^ pa] += t[k] * c;
      if ((u & pa) == pa && (u & pi) == 0) y[u ^ pi ^ pa] -= t[k] * c;
    }
  }
}

Statevector apply_upccd(const Eigen::VectorXd& t, const std::vector<std::pair<int, int>>& pairs,
                        const Statevector& reference) {
  require(static_cast<std::size_t>(t.size()) == pairs.size(), "dim_mismatch",
          "amplitude count must match pair list");
  Statevector out = reference;
  double norm_bound = 2.0 * t.cwiseAbs().sum();
  int s = std::max(1, static_cast<int>(std::ceil(norm_bound)));
  Eigen::VectorXd ts = t / static_cast<double>(s);

  Eigen::VectorXcd term(out.amps.size()), next(out.amps.size());
  for (int rep = 0; rep < s; ++rep) {
    term = out.amps;
    for (int k = 1; k < 80; ++k) {
      next.setZero();
      apply_pair_generator(term, next, pairs, ts, reference.n_spatial);
      term = next / static_cast<double>(k);
      out.amps += term;
      if (term.norm() < 1e-16) break;
    }
  }
  return out;
}

Eigen::VectorXcd to_sector_vector(const Statevector& sv, const SpinStrings& alpha,
                                  const SpinStrings& beta) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(alpha.size()) * beta.size());
  for (int ia = 0; ia < alpha.size(); ++ia) {
    std::uint32_t am = alpha.strings[ia];
    for (int ib = 0; ib < beta.size(); ++ib) {
      std::uint32_t bm = beta.strings[ib];
      double sign = jw_reorder_sign(am, bm);
      c[static_cast<Eigen::Index>(ia) * beta.size() + ib] =
          sign * sv.amps[interleave(am, bm, sv.n_spatial)];
    }
  }
  return c;
}

Statevector from_sector_vector(const Eigen::VectorXcd& c, const SpinStrings& alpha,
                               const SpinStrings& beta, int n_spatial) {
  Statevector sv = Statevector::zero(n_spatial);
  for (int ia = 0; ia < alpha.size(); ++ia) {
    std::uint32_t am = alpha.strings[ia];
    for (int ib = 0; ib < beta.size(); ++ib) {
      std::uint32_t bm = beta.strings[ib];
      double sign = jw_reorder_sign(am, bm);
      sv.amps[interleave(am, bm, n_spatial)] =
          sign * c[static_cast<Eigen::Index>(ia) * beta.size() + ib];
    }
  }
  return sv;
}

}  // namespace qcafqmc
