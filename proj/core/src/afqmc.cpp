#include "qcafqmc/afqmc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qcafqmc/error.hpp"
#include "qcafqmc/rng.hpp"
#include "qcafqmc/threading.hpp"

namespace qcafqmc {

namespace {

using Complex = std::complex<double>;

// Per-determinant overlap factors and half Green's functions of one walker.
// Closed-shell walkers propagate spin-symmetrically, so beta results are
// reused whenever the beta block and mask coincide with alpha.
struct WalkerGreens {
  std::vector<Complex> s_a, s_b;                   // det(D_i^+ phi)
  std::vector<Eigen::MatrixXcd> theta_a, theta_b;  // phi (D_i^+ phi)^{-1}
  Complex denom{0.0, 0.0};                         // sum_i c_i S_ia S_ib
};

void gather_rows(const Eigen::MatrixXcd& phi, const std::vector<int>& rows,
                 Eigen::MatrixXcd& out) {
  out.resize(rows.size(), phi.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(k) = phi.row(rows[k]);
}

WalkerGreens build_greens(const TrialDetsFull& dets, const Eigen::MatrixXcd& phi_a,
                          const Eigen::MatrixXcd& phi_b, bool same_phi) {
  WalkerGreens g;
  std::size_t nd = dets.coeff.size();
  g.s_a.resize(nd);
  g.s_b.resize(nd);
  g.theta_a.resize(nd);
  g.theta_b.resize(nd);
  Eigen::MatrixXcd sub;
  for (std::size_t i = 0; i < nd; ++i) {
    gather_rows(phi_a, dets.rows_a[i], sub);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lua(sub);
    g.s_a[i] = lua.determinant();
    g.theta_a[i].noalias() =
        phi_a * lua.solve(Eigen::MatrixXcd::Identity(sub.rows(), sub.rows()));
    if (same_phi && dets.rows_b[i] == dets.rows_a[i]) {
      g.s_b[i] = g.s_a[i];
      g.theta_b[i] = g.theta_a[i];
    } else {
      gather_rows(phi_b, dets.rows_b[i], sub);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lub(sub);
      g.s_b[i] = lub.determinant();
      g.theta_b[i].noalias() =
          phi_b * lub.solve(Eigen::MatrixXcd::Identity(sub.rows(), sub.rows()));
    }
    g.denom += dets.coeff[i] * g.s_a[i] * g.s_b[i];
  }
  return g;
}

// sum_pq L_pq G[p,q] with G = D Theta^T: bilinear contraction, no conjugation.
Complex contract_l(const Eigen::MatrixXd& l, const std::vector<int>& rows,
                   const Eigen::MatrixXcd& theta) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double* lrow = l.data() + rows[k];  // column-major: stride = n
    int n = static_cast<int>(l.rows());
    for (int q = 0; q < n; ++q) {
      Complex t = theta(q, static_cast<int>(k));
      double lv = lrow[static_cast<std::size_t>(q) * n];
      re += lv * t.real();
      im += lv * t.imag();
    }
  }
  return {re, im};
}

// Mixed spin-summed Green's function sum_i w_i (G_ia + G_ib) / denom.
Eigen::MatrixXcd mixed_density(const TrialDetsFull& dets, const WalkerGreens& g, int n) {
  Eigen::MatrixXcd gmix = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < dets.coeff.size(); ++i) {
    Complex w = dets.coeff[i] * g.s_a[i] * g.s_b[i] / g.denom;
    for (std::size_t k = 0; k < dets.rows_a[i].size(); ++k)
      gmix.row(dets.rows_a[i][k]) += w * g.theta_a[i].col(k).transpose();
    for (std::size_t k = 0; k < dets.rows_b[i].size(); ++k)
      gmix.row(dets.rows_b[i][k]) += w * g.theta_b[i].col(k).transpose();
  }
  return gmix;
}

}  // namespace

TrialDetsFull build_full_dets(const DetExpansion& expansion, const ActiveSpacePartition& part,
                              int n_orb) {
  TrialDetsFull out;
  out.n_orb = n_orb;
  std::vector<int> core_sorted = part.core;
  std::sort(core_sorted.begin(), core_sorted.end());

  for (const auto& term : expansion.terms) {
    auto build_spin = [&](std::uint32_t mask, int* sign_out) {
      std::vector<int> occ;  // full-space occupied rows, ascending
      for (int c : core_sorted) occ.push_back(c);
      int inversions = 0;
      std::uint32_t m = mask;
      while (m) {
        int u = std::countr_zero(m);
        int full = part.active[u];
        occ.push_back(full);
        // tensor order (core then active) vs ascending full order
        for (int c : core_sorted)
          if (c > full) ++inversions;
        m &= m - 1;
      }
      std::sort(occ.begin(), occ.end());
      *sign_out = (inversions % 2 == 0) ? 1 : -1;
      return occ;
    };
    int sa = 1, sb = 1;
    std::vector<int> ra = build_spin(term.alpha_mask, &sa);
    std::vector<int> rb = build_spin(term.beta_mask, &sb);
    out.coeff.push_back(term.coeff * static_cast<double>(sa * sb));
    out.rows_a.push_back(std::move(ra));
    out.rows_b.push_back(std::move(rb));
  }
  if (!out.rows_a.empty()) {
    out.n_occ_a = static_cast<int>(out.rows_a[0].size());
    out.n_occ_b = static_cast<int>(out.rows_b[0].size());
  }
  return out;
}

namespace {

struct SpinFactor {
  Complex prefactor{1.0, 0.0};
  Eigen::MatrixXcd phi_tilde;
  bool singular = false;
};

SpinFactor vce_spin_factor(const ActiveSpacePartition& part, const Eigen::MatrixXcd& phi) {
  SpinFactor out;
  int n_act = part.n_active();
  int n_occ = static_cast<int>(phi.cols());
  int n_core = part.n_core();
  int n_active_elec = n_occ - n_core;
  require(n_active_elec >= 0 && n_active_elec <= n_act, "dim_mismatch",
          "walker occupation incompatible with partition");

  Eigen::MatrixXcd v_prime;
  if (n_core > 0) {
    Eigen::MatrixXcd phi_c(n_core, n_occ);
    for (int k = 0; k < n_core; ++k) phi_c.row(k) = phi.row(part.core[k]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(phi_c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() < 1e-12) {
      out.singular = true;
      return out;
    }
    double det_sigma = 1.0;
    for (int k = 0; k < n_core; ++k) det_sigma *= svd.singularValues()(k);
    Complex det_u = Eigen::PartialPivLU<Eigen::MatrixXcd>(svd.matrixU()).determinant();
    Complex det_v = Eigen::PartialPivLU<Eigen::MatrixXcd>(svd.matrixV()).determinant();
    v_prime = svd.matrixV().rightCols(n_active_elec);
    out.prefactor *= det_sigma / (std::conj(det_u) * det_v);
  } else {
    v_prime = Eigen::MatrixXcd::Identity(n_occ, n_occ);
  }

  Eigen::MatrixXcd phi_act(n_act, n_occ);
  for (int k = 0; k < n_act; ++k) phi_act.row(k) = phi.row(part.active[k]);
  Eigen::MatrixXcd pav = phi_act * v_prime;

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(pav);
  out.phi_tilde = qr.householderQ() * Eigen::MatrixXcd::Identity(n_act, n_active_elec);
  for (int k = 0; k < n_active_elec; ++k) out.prefactor *= qr.matrixQR()(k, k);
  return out;
}

}  // namespace

VceOverlap vce_overlap(const OverlapEstimator& est, const DetExpansion& trial,
                       const ActiveSpacePartition& part, const Eigen::MatrixXcd& phi_a,
                       const Eigen::MatrixXcd& phi_b, std::uint64_t fingerprint) {
  VceOverlap out;
  bool same_phi = (&phi_a == &phi_b) ||
                  (phi_a.cols() == phi_b.cols() && phi_a == phi_b);

  SpinFactor fa = vce_spin_factor(part, phi_a);
  if (fa.singular) {
    out.singular_core = true;
    return out;
  }
  SpinFactor fb;
  if (same_phi) {
    fb = fa;
  } else {
    fb = vce_spin_factor(part, phi_b);
    if (fb.singular) {
      out.singular_core = true;
      return out;
    }
  }

  Complex active = estimate_overlap(est, trial, fa.phi_tilde, fb.phi_tilde, fingerprint);
  out.value = fa.prefactor * fb.prefactor * active;
  return out;
}

std::complex<double> local_energy(const TrialDetsFull& dets, const MOHamiltonian& ham,
                                  const CholeskyFactorization& chol,
                                  const Eigen::MatrixXcd& phi_a,
                                  const Eigen::MatrixXcd& phi_b) {
  bool same_phi = (&phi_a == &phi_b) ||
                  (phi_a.cols() == phi_b.cols() && phi_a == phi_b);
  WalkerGreens g = build_greens(dets, phi_a, phi_b, same_phi);
  require(std::abs(g.denom) > 1e-14, "overlap_collapse",
          "trial-walker overlap below threshold in local energy");

  int n = dets.n_orb;
  Complex acc(0.0, 0.0);
  std::size_t nd = dets.coeff.size();
  Eigen::MatrixXcd ka, kb, lda, ldb;
  for (std::size_t i = 0; i < nd; ++i) {
    Complex w = dets.coeff[i] * g.s_a[i] * g.s_b[i];
    bool sym = same_phi && dets.rows_a[i] == dets.rows_b[i];

    Complex e1(0.0, 0.0);
    e1 += contract_l(ham.h1, dets.rows_a[i], g.theta_a[i]);
    if (sym)
      e1 *= 2.0;
    else
      e1 += contract_l(ham.h1, dets.rows_b[i], g.theta_b[i]);

    int na = static_cast<int>(dets.rows_a[i].size());
    int nb = static_cast<int>(dets.rows_b[i].size());
    lda.resize(n, na);
    ldb.resize(n, nb);
    ka.resize(na, na);
    kb.resize(nb, nb);
    Complex e2(0.0, 0.0);
    for (const auto& l : chol.vectors) {
      Complex f_a = contract_l(l, dets.rows_a[i], g.theta_a[i]);
      for (int k = 0; k < na; ++k)
        lda.col(k) = l.col(dets.rows_a[i][k]).cast<Complex>();
      ka.noalias() = g.theta_a[i].transpose() * lda;
      Complex tr_ka2 = (ka.array() * ka.transpose().array()).sum();

      Complex f_b, tr_kb2;
      if (sym) {
        f_b = f_a;
        tr_kb2 = tr_ka2;
      } else {
        f_b = contract_l(l, dets.rows_b[i], g.theta_b[i]);
        for (int k = 0; k < nb; ++k)
          ldb.col(k) = l.col(dets.rows_b[i][k]).cast<Complex>();
        kb.noalias() = g.theta_b[i].transpose() * ldb;
        tr_kb2 = (kb.array() * kb.transpose().array()).sum();
      }
      Complex f = f_a + f_b;
      e2 += 0.5 * (f * f - tr_ka2 - tr_kb2);
    }
    acc += w * (e1 + e2);
  }
  return acc / g.denom + ham.e_nuc;
}

PropagatorContext build_propagator(const AfqmcSystem& sys, double dt, std::uint64_t seed) {
  int n = sys.ham.n_orb;
  int nfields = sys.chol.n_vectors();

  // Full-space trial density: doubly occupied core plus the active block.
  Eigen::MatrixXd gt = Eigen::MatrixXd::Zero(n, n);
  for (int c : sys.part.core) gt(c, c) = 2.0;
  Eigen::MatrixXd gact = trial_density(sys.trial);
  for (int u = 0; u < sys.part.n_active(); ++u)
    for (int v = 0; v < sys.part.n_active(); ++v)
      gt(sys.part.active[u], sys.part.active[v]) = gact(u, v);

  PropagatorContext ctx;
  ctx.dt = dt;
  ctx.n_fields = nfields;
  ctx.seed = seed;
  ctx.e_shift = sys.e_shift;
  ctx.vbar.resize(nfields);

  Eigen::MatrixXd h_mf = sys.ham.h1;
  for (int gmm = 0; gmm < nfields; ++gmm) {
    const Eigen::MatrixXd& l = sys.chol.vectors[gmm];
    h_mf.noalias() -= 0.5 * l * l;
    double vb = (l.array() * gt.array()).sum();
    ctx.vbar[gmm] = vb;
    h_mf.noalias() += vb * l;
  }
  ctx.constant = sys.ham.e_nuc - 0.5 * ctx.vbar.squaredNorm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_mf);
  Eigen::VectorXd lam = (-0.5 * dt * es.eigenvalues().array()).exp();
  ctx.half_exp = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return ctx;
}

std::vector<Walker> init_walkers(int n_walkers, const AfqmcSystem& sys) {
  require(n_walkers > 0, "bad_config", "walker count must be positive");
  int n = sys.ham.n_orb;
  int n_occ_a = sys.part.n_core() + sys.trial.n_alpha;
  int n_occ_b = sys.part.n_core() + sys.trial.n_beta;

  Walker proto;
  proto.phi_a = Eigen::MatrixXcd::Identity(n, n_occ_a);
  proto.phi_b = Eigen::MatrixXcd::Identity(n, n_occ_b);
  VceOverlap ov = vce_overlap(sys.estimator, sys.trial.expansion, sys.part, proto.phi_a,
                              proto.phi_b, 0);
  require(std::abs(ov.value) > 1e-14, "zero_initial_overlap",
          "initial determinant has zero overlap with the trial state");

  std::vector<Walker> ensemble(n_walkers, proto);
  for (int i = 0; i < n_walkers; ++i) {
    ensemble[i].index = i;
    ensemble[i].ovlp = vce_overlap(sys.estimator, sys.trial.expansion, sys.part,
                                   ensemble[i].phi_a, ensemble[i].phi_b,
                                   static_cast<std::uint64_t>(i))
                           .value;
  }
  return ensemble;
}

namespace {

// exp(M) phi by plain Taylor summation; M is the sampled auxiliary-field
// one-body matrix, small enough at desk scale for rapid convergence.
void apply_exp(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& phi, Eigen::MatrixXcd& term,
               Eigen::MatrixXcd& scratch) {
  term = phi;
  for (int k = 1; k < 60; ++k) {
    scratch.noalias() = m * term;
    term = scratch / static_cast<double>(k);
    phi += term;
    if (term.cwiseAbs().maxCoeff() < 1e-15) break;
  }
}

}  // namespace

void propagate_step(std::vector<Walker>& ensemble, const PropagatorContext& ctx,
                    const AfqmcSystem& sys, const TrialDetsFull& dets, int step_index,
                    const AfqmcProtocol& protocol) {
  double sqrt_dt = std::sqrt(ctx.dt);
  int n = sys.ham.n_orb;
  const Complex im(0.0, 1.0);
  bool spin_symmetric = dets.n_occ_a == dets.n_occ_b;

  parallel_for(ensemble.size(), [&](std::size_t iw) {
    Walker& w = ensemble[iw];
    if (w.weight <= 0.0) return;
    bool same_phi = spin_symmetric && w.phi_a == w.phi_b;

    // Force bias from the exact mixed Green's function.
    WalkerGreens g = build_greens(dets, w.phi_a, w.phi_b, same_phi);
    if (std::abs(g.denom) < 1e-14) {
      w.weight = 0.0;
      w.flagged = true;
      return;
    }
    Eigen::MatrixXcd gmix = mixed_density(dets, g, n);
    Eigen::MatrixXd gmix_re = gmix.real(), gmix_im = gmix.imag();

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    Complex xi_dot_xbar(0.0, 0.0);
    Complex xbar_sq(0.0, 0.0);
    Complex scalar_log(0.0, 0.0);
    for (int gmm = 0; gmm < ctx.n_fields; ++gmm) {
      const Eigen::MatrixXd& l = sys.chol.vectors[gmm];
      Complex f((l.array() * gmix_re.array()).sum(), (l.array() * gmix_im.array()).sum());
      Complex xbar = -im * sqrt_dt * (f - ctx.vbar[gmm]);
      double xi = counter_normal(ctx.seed, static_cast<std::uint64_t>(w.index),
                                 static_cast<std::uint64_t>(step_index),
                                 static_cast<std::uint64_t>(gmm));
      Complex x = xi + xbar;
      Complex coef = im * sqrt_dt * x;
      m.real() += coef.real() * l;
      m.imag() += coef.imag() * l;
      scalar_log += -im * sqrt_dt * x * ctx.vbar[gmm];
      xi_dot_xbar += xi * xbar;
      xbar_sq += xbar * xbar;
    }

    Eigen::MatrixXcd term, scratch;
    w.phi_a = ctx.half_exp * w.phi_a;
    apply_exp(m, w.phi_a, term, scratch);
    w.phi_a = ctx.half_exp * w.phi_a;
    if (same_phi) {
      w.phi_b = w.phi_a;
    } else {
      w.phi_b = ctx.half_exp * w.phi_b;
      apply_exp(m, w.phi_b, term, scratch);
      w.phi_b = ctx.half_exp * w.phi_b;
    }

    VceOverlap ov = vce_overlap(sys.estimator, sys.trial.expansion, sys.part, w.phi_a,
                                w.phi_b, static_cast<std::uint64_t>(w.index));
    if (ov.singular_core || std::abs(ov.value) < 1e-14) {
      w.weight = 0.0;
      w.flagged = true;
      return;
    }

    Complex ratio = ov.value / w.ovlp;
    Complex importance = ratio * std::exp(scalar_log - xi_dot_xbar - 0.5 * xbar_sq -
                                          ctx.dt * (ctx.constant - ctx.e_shift));
    double dtheta = std::arg(importance);
    double cos_factor = std::max(0.0, std::cos(dtheta));
    w.weight *= std::abs(importance) * cos_factor;
    w.weight = std::min(w.weight, protocol.weight_cap);
    w.last_cos = cos_factor;
    w.ovlp = ov.value;

    if ((step_index + 1) % protocol.reortho_interval == 0) {
      Eigen::HouseholderQR<Eigen::MatrixXcd> qra(w.phi_a);
      w.phi_a = qra.householderQ() * Eigen::MatrixXcd::Identity(n, w.phi_a.cols());
      if (same_phi) {
        w.phi_b = w.phi_a;
      } else {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qrb(w.phi_b);
        w.phi_b = qrb.householderQ() * Eigen::MatrixXcd::Identity(n, w.phi_b.cols());
      }
      w.ovlp = vce_overlap(sys.estimator, sys.trial.expansion, sys.part, w.phi_a, w.phi_b,
                           static_cast<std::uint64_t>(w.index))
                   .value;
    }
  });
}

double EnergySeries::blocked_mean(const std::vector<double>& v, int skip) {
  double s = 0.0;
  int n = 0;
  for (std::size_t i = skip; i < v.size(); ++i) {
    s += v[i];
    ++n;
  }
  return n > 0 ? s / n : 0.0;
}

double EnergySeries::blocked_stderr(const std::vector<double>& v, int skip) {
  int n = static_cast<int>(v.size()) - skip;
  if (n < 2) return 0.0;
  double mean = blocked_mean(v, skip);
  double var = 0.0;
  for (std::size_t i = skip; i < v.size(); ++i) var += (v[i] - mean) * (v[i] - mean);
  var /= (n - 1);
  return std::sqrt(var / n);
}

void EnergySeries::finalize(int n_equil) {
  n_equilibration = n_equil;
  mean = blocked_mean(block_energies, n_equil);
  stderr_ = blocked_stderr(block_energies, n_equil);
}

std::string EnergySeries::to_csv() const {
  std::string out = "block,energy,cumulative_mean,stderr\n";
  for (std::size_t b = 0; b < block_energies.size(); ++b) {
    std::vector<double> head(block_energies.begin(), block_energies.begin() + b + 1);
    int post = static_cast<int>(b) - n_equilibration + 1;
    double cum = post > 0 ? blocked_mean(head, n_equilibration) : block_energies[b];
    double se = post > 1 ? blocked_stderr(head, n_equilibration) : 0.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu,%.12f,%.12f,%.3e\n", b, block_energies[b], cum, se);
    out += buf;
  }
  return out;
}

EnergySeries run_projection(const AfqmcSystem& sys, const AfqmcProtocol& protocol) {
  require(protocol.n_blocks >= 2, "bad_config", "need at least two blocks");
  TrialDetsFull dets = build_full_dets(sys.trial.expansion, sys.part, sys.ham.n_orb);
  PropagatorContext ctx = build_propagator(sys, protocol.dt, protocol.seed);
  std::vector<Walker> ensemble = init_walkers(protocol.n_walkers, sys);

  EnergySeries series;
  series.steps_per_block = protocol.steps_per_block;
  std::vector<Complex> eloc(ensemble.size());

  int step = 0;
  for (int block = 0; block < protocol.n_blocks; ++block) {
    for (int s = 0; s < protocol.steps_per_block; ++s, ++step)
      propagate_step(ensemble, ctx, sys, dets, step, protocol);

    parallel_for(ensemble.size(), [&](std::size_t iw) {
      const Walker& w = ensemble[iw];
      eloc[iw] = w.weight > 0.0 ? local_energy(dets, sys.ham, sys.chol, w.phi_a, w.phi_b)
                                : Complex(0.0, 0.0);
    });
    double wsum = 0.0;
    Complex esum(0.0, 0.0);
    for (std::size_t iw = 0; iw < ensemble.size(); ++iw) {
      wsum += ensemble[iw].weight;
      esum += ensemble[iw].weight * eloc[iw];
    }
    if (wsum < 1e-6 * protocol.n_walkers)
      fail("weight_collapse", "ensemble weight collapsed at block " + std::to_string(block) +
                                  " (sum " + std::to_string(wsum) + ")");
    series.block_energies.push_back((esum / wsum).real());
    series.block_weights.push_back(wsum);
  }

  int n_equil =
      static_cast<int>(std::floor(protocol.equilibration_fraction * protocol.n_blocks));
  n_equil = std::min(n_equil, protocol.n_blocks - 2);
  series.finalize(n_equil);
  return series;
}

}  // namespace qcafqmc
