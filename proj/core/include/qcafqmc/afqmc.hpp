#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qcafqmc/cholesky.hpp"
#include "qcafqmc/mo_hamiltonian.hpp"
#include "qcafqmc/trial.hpp"

namespace qcafqmc {

struct Walker {
  Eigen::MatrixXcd phi_a, phi_b;   // n_orb x n_occ per spin
  double weight = 1.0;
  std::complex<double> ovlp;       // cached trial overlap (VCE estimator path)
  double last_cos = 1.0;           // phase-projection bookkeeping
  int index = 0;                   // stable identity
  bool flagged = false;            // overlap collapse marker
};

struct AfqmcProtocol {
  int n_walkers = 256;
  int n_blocks = 80;
  int steps_per_block = 10;
  double dt = 0.02;
  double weight_cap = 100.0;
  double equilibration_fraction = 0.2;
  int reortho_interval = 5;
  std::uint64_t seed = 1;
};

// Full-space problem bundle: walkers and the Hamiltonian live in the full MO
// basis; the partition only shapes the trial (virtual correlation energy).
struct AfqmcSystem {
  MOHamiltonian ham;
  CholeskyFactorization chol;
  ActiveSpacePartition part;
  TrialState trial;
  OverlapEstimator estimator;
  double e_shift = 0.0;  // fixed propagator offset, typically the trial energy
};

// Precomputed propagator pieces: mean-field-shifted one-body half step and
// the <v_gamma>_T subtraction constants.
struct PropagatorContext {
  double dt = 0.0;
  int n_fields = 0;
  Eigen::MatrixXd half_exp;   // exp(-dt/2 h_mf)
  Eigen::VectorXd vbar;       // <v_gamma>_T
  double constant = 0.0;      // e_nuc - 1/2 sum vbar^2
  double e_shift = 0.0;
  std::uint64_t seed = 0;
};

PropagatorContext build_propagator(const AfqmcSystem& sys, double dt, std::uint64_t seed);

// Full-space determinant list for the trial (tensor-order signs folded into
// the coefficients so all determinant algebra uses ascending ordering).
struct TrialDetsFull {
  int n_orb = 0;
  int n_occ_a = 0, n_occ_b = 0;
  std::vector<std::complex<double>> coeff;
  std::vector<std::vector<int>> rows_a, rows_b;
};

TrialDetsFull build_full_dets(const DetExpansion& expansion, const ActiveSpacePartition& part,
                              int n_orb);

struct VceOverlap {
  std::complex<double> value{0.0, 0.0};
  bool singular_core = false;
};

// Paper-factorized trial-walker overlap: SVD of the core block, orthonormal
// completion, QR of the active projection, active overlap through the
// estimator ensemble.
VceOverlap vce_overlap(const OverlapEstimator& est, const DetExpansion& trial,
                       const ActiveSpacePartition& part, const Eigen::MatrixXcd& phi_a,
                       const Eigen::MatrixXcd& phi_b, std::uint64_t fingerprint);

// Mixed local energy <Psi_T|H|phi>/<Psi_T|phi> through per-determinant
// Green's functions, with the two-body part contracted over the Cholesky
// vectors. Includes e_nuc.
std::complex<double> local_energy(const TrialDetsFull& dets, const MOHamiltonian& ham,
                                  const CholeskyFactorization& chol,
                                  const Eigen::MatrixXcd& phi_a,
                                  const Eigen::MatrixXcd& phi_b);

std::vector<Walker> init_walkers(int n_walkers, const AfqmcSystem& sys);

// One Trotter step with force bias, mean-field subtraction and the phaseless
// cosine projection; fields are drawn from the counter stream keyed
// (seed, walker index, step index, field index).
void propagate_step(std::vector<Walker>& ensemble, const PropagatorContext& ctx,
                    const AfqmcSystem& sys, const TrialDetsFull& dets, int step_index,
                    const AfqmcProtocol& protocol);

struct EnergySeries {
  std::vector<double> block_energies;  // Hartree
  std::vector<double> block_weights;
  int steps_per_block = 0;
  int n_equilibration = 0;  // leading blocks excluded from statistics
  double mean = 0.0;
  double stderr_ = 0.0;

  static double blocked_mean(const std::vector<double>& v, int skip);
  static double blocked_stderr(const std::vector<double>& v, int skip);
  void finalize(int n_equil);
  std::string to_csv() const;
};

EnergySeries run_projection(const AfqmcSystem& sys, const AfqmcProtocol& protocol);

}  // namespace qcafqmc
