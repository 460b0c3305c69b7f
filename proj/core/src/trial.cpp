#include "qcafqmc/trial.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include <json.hpp>

#include "qcafqmc/artifacts.hpp"
#include "qcafqmc/error.hpp"
#include "qcafqmc/rng.hpp"

namespace qcafqmc {

std::string trial_kind_name(TrialKind kind) {
  switch (kind) {
    case TrialKind::single_determinant: return "single-determinant";
    case TrialKind::upccd: return "upccd";
    case TrialKind::oo_upccd: return "oo-upccd";
    case TrialKind::multi_determinant: return "multi-determinant";
  }
  return "?";
}

TrialKind trial_kind_from_name(const std::string& name) {
  if (name == "single-determinant") return TrialKind::single_determinant;
  if (name == "upccd") return TrialKind::upccd;
  if (name == "oo-upccd") return TrialKind::oo_upccd;
  if (name == "multi-determinant" || name == "fci") return TrialKind::multi_determinant;
  fail("bad_config", "unknown trial kind '" + name + "'");
}

std::complex<double> OverlapEstimator::noise(std::uint64_t fingerprint) const {
  if (mode == Mode::exact || sigma_ov == 0.0) return {0.0, 0.0};
  std::complex<double> acc(0.0, 0.0);
  for (int s = 0; s < n_samples; ++s)
    acc += counter_complex_normal(shadow_seed, static_cast<std::uint64_t>(s), fingerprint, 0,
                                  0x53484457u);
  return sigma_ov * acc / static_cast<double>(n_samples);
}

MOHamiltonian apply_orbital_rotation(const Eigen::MatrixXd& kappa, const MOHamiltonian& ham) {
  require(kappa.rows() == ham.n_orb && kappa.cols() == ham.n_orb, "dim_mismatch",
          "kappa dimension mismatch");
  require((kappa + kappa.transpose()).cwiseAbs().maxCoeff() < 1e-12, "bad_kappa",
          "kappa must be antisymmetric");
  Eigen::MatrixXd u = kappa.exp();
  MOHamiltonian out;
  out.n_orb = ham.n_orb;
  out.e_nuc = ham.e_nuc;
  out.h1 = u.transpose() * ham.h1 * u;
  out.eri = rotate_eri(ham.eri, u);
  return out;
}

MOHamiltonian trial_hamiltonian(const TrialState& trial, const MOHamiltonian& active_ham) {
  if (!trial.has_kappa()) return active_ham;
  return apply_orbital_rotation(trial.kappa, active_ham);
}

namespace {

std::vector<std::pair<int, int>> upccd_pairs(int n_active_orb, int n_pair_occ) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n_pair_occ; ++i)
    for (int a = n_pair_occ; a < n_active_orb; ++a) pairs.emplace_back(i, a);
  return pairs;
}

// Energy evaluator over one fixed Hamiltonian; caches the determinant space.
class SectorEnergy {
 public:
  SectorEnergy(const MOHamiltonian& ham, int n_alpha, int n_beta)
      : space_(ham, n_alpha, n_beta), n_alpha_(n_alpha), n_beta_(n_beta) {}

  double energy_of_statevector(const Statevector& sv) const {
    Eigen::VectorXcd c = to_sector_vector(sv, space_.alpha(), space_.beta());
    Eigen::VectorXd cr = c.real();
    double n2 = cr.squaredNorm() + c.imag().squaredNorm();
    Eigen::VectorXd s = space_.sigma(cr);
    double e = cr.dot(s);
    if (c.imag().cwiseAbs().maxCoeff() > 1e-14) {
      Eigen::VectorXd ci = c.imag();
      e += ci.dot(space_.sigma(ci));
    }
    return e / n2;
  }

  double energy_of_t(const Eigen::VectorXd& t,
                     const std::vector<std::pair<int, int>>& pairs, int n_spatial) const {
    Statevector ref = Statevector::reference(n_spatial, n_alpha_, n_beta_);
    return energy_of_statevector(apply_upccd(t, pairs, ref));
  }

 private:
  FciSpace space_;
  int n_alpha_, n_beta_;
};

// Compass/pattern search, then BFGS with central finite-difference gradients.
template <typename F>
double minimize(Eigen::VectorXd& x, F&& f, double grad_tol, double fd_step, int max_iter,
                bool* converged) {
  int n = static_cast<int>(x.size());
  double fx = f(x);
  if (n == 0) {
    *converged = true;
    return fx;
  }

  double step = 0.25;
  while (step > 1e-3) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (double s : {step, -step}) {
        Eigen::VectorXd y = x;
        y[i] += s;
        double fy = f(y);
        if (fy < fx - 1e-14) {
          x = y;
          fx = fy;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  auto grad = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd a = p, b = p;
      a[i] += fd_step;
      b[i] -= fd_step;
      g[i] = (f(a) - f(b)) / (2.0 * fd_step);
    }
    return g;
  };

  Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = grad(x);
  *converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (g.norm() < grad_tol) {
      *converged = true;
      break;
    }
    Eigen::VectorXd d = -binv * g;
    if (d.dot(g) > 0.0) d = -g;  // safeguard against indefinite updates
    double alpha = 1.0;
    double fx_new = fx;
    Eigen::VectorXd xn = x;
    for (int ls = 0; ls < 50; ++ls) {
      xn = x + alpha * d;
      fx_new = f(xn);
      if (fx_new <= fx + 1e-4 * alpha * g.dot(d)) break;
      alpha *= 0.5;
    }
    Eigen::VectorXd gn = grad(xn);
    Eigen::VectorXd s = xn - x;
    Eigen::VectorXd y = gn - g;
    double sy = s.dot(y);
    if (sy > 1e-12) {
      Eigen::VectorXd by = binv * y;
      binv += ((sy + y.dot(by)) / (sy * sy)) * (s * s.transpose()) -
              (by * s.transpose() + s * by.transpose()) / sy;
    }
    if (std::abs(fx - fx_new) < 1e-14 && s.norm() < 1e-12) {
      x = xn;
      fx = fx_new;
      g = gn;
      *converged = g.norm() < grad_tol;
      break;
    }
    x = xn;
    fx = fx_new;
    g = gn;
  }
  return fx;
}

Eigen::MatrixXd kappa_from_params(const Eigen::VectorXd& theta, int n) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  int idx = 0;
  for (int p = 1; p < n; ++p)
    for (int q = 0; q < p; ++q) {
      k(p, q) = theta[idx];
      k(q, p) = -theta[idx];
      ++idx;
    }
  return k;
}

void finalize_trial(TrialState& trial, const MOHamiltonian& ham_for_energy) {
  Statevector ref = Statevector::reference(trial.n_active_orb, trial.n_alpha, trial.n_beta);
  trial.sv = trial.t.size() > 0 ? apply_upccd(trial.t, trial.pairs, ref) : ref;
  trial.expansion = expand_determinants(trial.sv, trial.eps_det);
  SectorEnergy eval(ham_for_energy, trial.n_alpha, trial.n_beta);
  trial.energy_active = eval.energy_of_statevector(trial.sv);
}

}  // namespace

TrialState make_single_determinant_trial(int n_active_orb, int n_alpha, int n_beta) {
  TrialState trial;
  trial.kind = TrialKind::single_determinant;
  trial.n_active_orb = n_active_orb;
  trial.n_alpha = n_alpha;
  trial.n_beta = n_beta;
  trial.kappa = Eigen::MatrixXd::Zero(n_active_orb, n_active_orb);
  trial.sv = Statevector::reference(n_active_orb, n_alpha, n_beta);
  trial.expansion = expand_determinants(trial.sv, trial.eps_det);
  return trial;
}

TrialState make_fci_trial(const FCIResult& fci, double eps_det) {
  require(fci.space != nullptr, "bad_state", "FCI result has no attached space");
  TrialState trial;
  trial.kind = TrialKind::multi_determinant;
  trial.n_active_orb = fci.n_orb;
  trial.n_alpha = fci.n_alpha;
  trial.n_beta = fci.n_beta;
  trial.kappa = Eigen::MatrixXd::Zero(fci.n_orb, fci.n_orb);
  trial.eps_det = eps_det;
  const auto& sa = fci.space->alpha();
  const auto& sb = fci.space->beta();
  trial.expansion.n_spatial = fci.n_orb;
  for (int ia = 0; ia < sa.size(); ++ia)
    for (int ib = 0; ib < sb.size(); ++ib) {
      double c = fci.ground[fci.space->index(ia, ib)];
      if (std::abs(c) >= eps_det)
        trial.expansion.terms.push_back({c, sa.strings[ia], sb.strings[ib]});
      else
        trial.expansion.discarded_weight += c * c;
    }
  // FCI coefficients are already in the determinant convention.
  Eigen::VectorXcd c = fci.ground.cast<std::complex<double>>();
  trial.sv = from_sector_vector(c, sa, sb, fci.n_orb);
  trial.energy_active = fci.e0 - fci.e_nuc;
  return trial;
}

double upccd_energy(const Eigen::VectorXd& t, const Eigen::MatrixXd& kappa,
                    const MOHamiltonian& active_ham, int n_alpha, int n_beta) {
  MOHamiltonian ham =
      kappa.size() > 0 && kappa.cwiseAbs().maxCoeff() > 0.0
          ? apply_orbital_rotation(kappa, active_ham)
          : active_ham;
  SectorEnergy eval(ham, n_alpha, n_beta);
  return eval.energy_of_t(t, upccd_pairs(active_ham.n_orb, n_alpha), active_ham.n_orb);
}

TrialState vqe_optimize(TrialKind kind, const MOHamiltonian& active_ham, int n_alpha,
                        int n_beta, const VqeOptions& opts) {
  require(n_alpha == n_beta, "bad_electron_count",
          "pair ansatz requires a closed-shell active space");
  require(2 * active_ham.n_orb <= 28, "dim_cap",
          "active space exceeds statevector feasibility (<= 14 spatial orbitals)");
  int n = active_ham.n_orb;

  TrialState trial;
  trial.kind = kind;
  trial.n_active_orb = n;
  trial.n_alpha = n_alpha;
  trial.n_beta = n_beta;
  trial.eps_det = opts.eps_det;
  trial.pairs = upccd_pairs(n, n_alpha);
  trial.t = Eigen::VectorXd::Zero(trial.pairs.size());
  trial.kappa = Eigen::MatrixXd::Zero(n, n);

  if (kind == TrialKind::single_determinant) {
    finalize_trial(trial, active_ham);
    return trial;
  }
  require(kind == TrialKind::upccd || kind == TrialKind::oo_upccd, "bad_config",
          "vqe_optimize handles upccd / oo-upccd kinds");

  bool conv = false;
  {
    SectorEnergy eval(active_ham, n_alpha, n_beta);
    auto f = [&](const Eigen::VectorXd& t) { return eval.energy_of_t(t, trial.pairs, n); };
    minimize(trial.t, f, opts.grad_tol, opts.fd_step, opts.max_iter, &conv);
  }

  if (kind == TrialKind::oo_upccd) {
    int n_theta = n * (n - 1) / 2;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n_theta);
    double e_prev = upccd_energy(trial.t, trial.kappa, active_ham, n_alpha, n_beta);
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      // kappa step: per-parameter quadratic line search on the rotation manifold
      for (int k = 0; k < n_theta; ++k) {
        auto e_of = [&](double th) {
          Eigen::VectorXd tk = theta;
          tk[k] = th;
          return upccd_energy(trial.t, kappa_from_params(tk, n), active_ham, n_alpha, n_beta);
        };
        double h = 0.1;
        double t0 = theta[k];
        double em = e_of(t0 - h), e0 = e_of(t0), ep = e_of(t0 + h);
        for (int refine = 0; refine < 3; ++refine) {
          double denom = em - 2.0 * e0 + ep;
          double move;
          if (denom > 1e-14)
            move = 0.5 * h * (em - ep) / denom;
          else
            move = em < ep ? -h : h;
          move = std::clamp(move, -0.5, 0.5);
          double cand = t0 + move;
          double ec = e_of(cand);
          if (ec < e0) {
            t0 = cand;
            e0 = ec;
          }
          h *= 0.3;
          em = e_of(t0 - h);
          ep = e_of(t0 + h);
        }
        theta[k] = t0;
      }
      trial.kappa = kappa_from_params(theta, n);
      // t step at fixed rotation
      MOHamiltonian rot = apply_orbital_rotation(trial.kappa, active_ham);
      SectorEnergy eval(rot, n_alpha, n_beta);
      auto f = [&](const Eigen::VectorXd& t) { return eval.energy_of_t(t, trial.pairs, n); };
      double e_now = minimize(trial.t, f, opts.grad_tol, opts.fd_step, opts.max_iter, &conv);
      if (std::abs(e_prev - e_now) < opts.energy_tol) {
        conv = true;
        break;
      }
      e_prev = e_now;
    }
  }

  trial.vqe_converged = conv;
  if (!conv) {
    double e_best = upccd_energy(trial.t, trial.kappa, active_ham, n_alpha, n_beta);
    fail("vqe_stagnation", "VQE optimizer stagnated; best-so-far energy " +
                               std::to_string(e_best) + " with " +
                               std::to_string(trial.t.size()) + " amplitudes");
  }
  finalize_trial(trial, trial_hamiltonian(trial, active_ham));
  return trial;
}

namespace {

std::complex<double> det_minor(const Eigen::MatrixXcd& phi, std::uint32_t mask) {
  int k = static_cast<int>(phi.cols());
  Eigen::MatrixXcd sub(k, k);
  int row = 0;
  std::uint32_t m = mask;
  while (m) {
    int p = std::countr_zero(m);
    sub.row(row++) = phi.row(p);
    m &= m - 1;
  }
  require(row == k, "dim_mismatch", "walker occupation does not match trial sector");
  if (k == 0) return {1.0, 0.0};
  if (k == 1) return sub(0, 0);
  if (k == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub.determinant();
}

}  // namespace

std::complex<double> estimate_overlap(const OverlapEstimator& est, const DetExpansion& trial,
                                      const Eigen::MatrixXcd& phi_alpha,
                                      const Eigen::MatrixXcd& phi_beta,
                                      std::uint64_t fingerprint) {
  // minors repeat across terms (seniority-zero expansions reuse every mask)
  bool same_phi = (&phi_alpha == &phi_beta) ||
                  (phi_alpha.cols() == phi_beta.cols() && phi_alpha == phi_beta);
  std::vector<std::pair<std::uint32_t, std::complex<double>>> cache_a, cache_b;
  auto lookup = [](std::vector<std::pair<std::uint32_t, std::complex<double>>>& cache,
                   const Eigen::MatrixXcd& phi,
                   std::uint32_t mask) -> std::complex<double> {
    for (const auto& [m, v] : cache)
      if (m == mask) return v;
    std::complex<double> v = det_minor(phi, mask);
    cache.emplace_back(mask, v);
    return v;
  };

  std::complex<double> acc(0.0, 0.0);
  for (const auto& term : trial.terms) {
    std::complex<double> da = lookup(cache_a, phi_alpha, term.alpha_mask);
    std::complex<double> db = same_phi ? lookup(cache_a, phi_alpha, term.beta_mask)
                                       : lookup(cache_b, phi_beta, term.beta_mask);
    acc += std::conj(term.coeff) * da * db;
  }
  if (est.mode == OverlapEstimator::Mode::stochastic) acc += est.noise(fingerprint);
  return acc;
}

Eigen::MatrixXd trial_density(const TrialState& trial) {
  SpinStrings sa(trial.n_active_orb, trial.n_alpha);
  SpinStrings sb(trial.n_active_orb, trial.n_beta);
  Eigen::VectorXcd c = to_sector_vector(trial.sv, sa, sb);
  Eigen::VectorXd cr = c.real();
  require(c.imag().cwiseAbs().maxCoeff() < 1e-12, "numeric",
          "trial density assumes a real statevector");
  cr /= cr.norm();
  SpinRdms rdms = sector_rdms(cr, sa, sb, trial.n_active_orb);
  return rdms.alpha + rdms.beta;
}

std::string trial_to_json(const TrialState& trial) {
  nlohmann::json j;
  j["kind"] = trial_kind_name(trial.kind);
  j["n_active_orb"] = trial.n_active_orb;
  j["n_alpha"] = trial.n_alpha;
  j["n_beta"] = trial.n_beta;
  j["eps_det"] = trial.eps_det;
  j["energy_active"] = trial.energy_active;
  j["t"] = nlohmann::json::array();
  for (std::size_t k = 0; k < trial.pairs.size(); ++k)
    j["t"].push_back({trial.pairs[k].first, trial.pairs[k].second, trial.t[k]});
  j["kappa"] = nlohmann::json::array();
  for (int p = 1; p < trial.kappa.rows(); ++p)
    for (int q = 0; q < p; ++q)
      if (trial.kappa(p, q) != 0.0) j["kappa"].push_back({p, q, trial.kappa(p, q)});
  return j.dump(2);
}

std::uint64_t trial_hash(const TrialState& trial) {
  Fnv64 h;
  h.add(trial_kind_name(trial.kind));
  h.add(trial.n_active_orb);
  h.add(trial.n_alpha);
  h.add(trial.n_beta);
  h.add(trial.eps_det);
  for (std::size_t k = 0; k < trial.pairs.size(); ++k) {
    h.add(trial.pairs[k].first);
    h.add(trial.pairs[k].second);
    h.add(trial.t.size() > static_cast<Eigen::Index>(k) ? trial.t[k] : 0.0);
  }
  for (int p = 0; p < trial.kappa.rows(); ++p)
    for (int q = 0; q < trial.kappa.cols(); ++q) h.add(trial.kappa(p, q));
  return h.state;
}

}  // namespace qcafqmc
