#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qcafqmc/fci.hpp"
#include "qcafqmc/mo_hamiltonian.hpp"
#include "qcafqmc/statevector.hpp"

namespace qcafqmc {

enum class TrialKind { single_determinant, upccd, oo_upccd, multi_determinant };

std::string trial_kind_name(TrialKind kind);
TrialKind trial_kind_from_name(const std::string& name);

// Overlap evaluation contract between the trial and walker determinants.
// Exact mode is the infinite-sample limit; stochastic mode adds zero-mean
// complex noise of scale sigma_ov/sqrt(n_samples) that is a pure function of
// (shadow_seed, sample index, walker fingerprint). Fingerprints are walker
// identities, so displaced-geometry runs sharing a seed share the noise.
struct OverlapEstimator {
  enum class Mode { exact, stochastic };
  Mode mode = Mode::exact;
  std::uint64_t shadow_seed = 0;
  int n_samples = 1;
  double sigma_ov = 0.0;

  std::complex<double> noise(std::uint64_t fingerprint) const;
};

struct TrialState {
  TrialKind kind = TrialKind::single_determinant;
  int n_active_orb = 0;
  int n_alpha = 0, n_beta = 0;
  std::vector<std::pair<int, int>> pairs;  // (occupied pair, virtual pair)
  Eigen::VectorXd t;                       // pair amplitudes
  Eigen::MatrixXd kappa;                   // antisymmetric orbital-rotation generator
  Statevector sv;                          // cached register
  DetExpansion expansion;                  // determinant-convention coefficients
  double eps_det = 1e-10;
  double energy_active = 0.0;  // electronic energy of the active Hamiltonian
  bool vqe_converged = true;

  bool has_kappa() const { return kappa.size() > 0 && kappa.cwiseAbs().maxCoeff() > 0.0; }
};

// U = exp(kappa) applied to the one- and two-electron integrals; the quantum
// register is untouched.
MOHamiltonian apply_orbital_rotation(const Eigen::MatrixXd& kappa, const MOHamiltonian& ham);

// The Hamiltonian the trial was optimized against (applies kappa when set).
MOHamiltonian trial_hamiltonian(const TrialState& trial, const MOHamiltonian& active_ham);

struct VqeOptions {
  double grad_tol = 1e-6;
  double energy_tol = 1e-9;  // oo sweep convergence
  double fd_step = 1e-5;
  int max_iter = 300;
  int max_sweeps = 60;
  double eps_det = 1e-10;
};

TrialState make_single_determinant_trial(int n_active_orb, int n_alpha, int n_beta);
TrialState make_fci_trial(const FCIResult& fci, double eps_det = 1e-10);

// VQE over the pair amplitudes (and, for oo-upCCD, alternating classical
// orbital rotation) on the given active Hamiltonian.
TrialState vqe_optimize(TrialKind kind, const MOHamiltonian& active_ham, int n_alpha,
                        int n_beta, const VqeOptions& opts = {});

// Variational energy of arbitrary (t, kappa) on the active Hamiltonian.
double upccd_energy(const Eigen::VectorXd& t, const Eigen::MatrixXd& kappa,
                    const MOHamiltonian& active_ham, int n_alpha, int n_beta);

// <Psi_T|phi> for an active-space walker given per-spin coefficient blocks
// (n_active_orb x n_alpha/n_beta).
std::complex<double> estimate_overlap(const OverlapEstimator& est, const DetExpansion& trial,
                                      const Eigen::MatrixXcd& phi_alpha,
                                      const Eigen::MatrixXcd& phi_beta,
                                      std::uint64_t fingerprint);

// Spin-summed active-space 1-RDM of the trial (for mean-field subtraction).
Eigen::MatrixXd trial_density(const TrialState& trial);

std::string trial_to_json(const TrialState& trial);
std::uint64_t trial_hash(const TrialState& trial);

}  // namespace qcafqmc
