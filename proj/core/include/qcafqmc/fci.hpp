#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "qcafqmc/dets.hpp"
#include "qcafqmc/geometry.hpp"
#include "qcafqmc/mo_hamiltonian.hpp"

namespace qcafqmc {

struct FciWork;

// Determinant space (Ia, Ib) with the flat index Ia * Nb + Ib and a
// matrix-free H application assembled from Slater-Condon rules.
class FciSpace {
 public:
  FciSpace(const MOHamiltonian& ham, int n_alpha, int n_beta);

  std::int64_t dim() const { return static_cast<std::int64_t>(alpha_.size()) * beta_.size(); }
  const SpinStrings& alpha() const { return alpha_; }
  const SpinStrings& beta() const { return beta_; }
  const MOHamiltonian& ham() const { return ham_; }
  std::int64_t index(int ia, int ib) const {
    return static_cast<std::int64_t>(ia) * beta_.size() + ib;
  }

  void sigma(const double* c, double* out) const;  // out = H c (e_nuc excluded)
  Eigen::VectorXd sigma(const Eigen::VectorXd& c) const;
  Eigen::VectorXcd sigma(const Eigen::VectorXcd& c) const;
  Eigen::VectorXd diagonal() const;

 private:
  MOHamiltonian ham_;
  SpinStrings alpha_, beta_;
  std::shared_ptr<FciWork> work_;
};

struct FciOptions {
  std::int64_t dim_cap = 4000000;
  double residual_tol = 1e-8;
  int max_subspace = 24;
  int max_iter = 400;
};

struct FCIResult {
  double e0 = 0.0;  // includes ham.e_nuc
  Eigen::VectorXd ground;
  int n_orb = 0, n_alpha = 0, n_beta = 0;
  double e_nuc = 0.0;
  bool degenerate = false;   // second Ritz value within 1e-6 of e0
  double residual_norm = 0.0;
  int iterations = 0;
  std::shared_ptr<FciSpace> space;
};

FCIResult fci_ground_state(const MOHamiltonian& ham, int n_alpha, int n_beta,
                           const FciOptions& opts = {});

struct SpinRdms {
  Eigen::MatrixXd alpha;      // <a+_pa a_qa>
  Eigen::MatrixXd beta;       // <a+_pb a_qb>
  Eigen::VectorXd pair_diag;  // d_{pp'p'p} = <n_pa n_pb>
};

SpinRdms compute_rdms(const FCIResult& fci);

// RDMs of an arbitrary normalized coefficient vector over (Ia, Ib).
SpinRdms sector_rdms(const Eigen::VectorXd& c, const SpinStrings& alpha,
                     const SpinStrings& beta, int n_orb);

struct OrbitalEntropyReport {
  // columns: w_empty, w_up, w_down, w_updown
  Eigen::MatrixXd occupation_probs;
  Eigen::VectorXd entropy;  // nats
  double threshold = 0.0;   // 0.1 * ln 4
  std::vector<int> recommended;
  bool degenerate_state = false;
};

OrbitalEntropyReport orbital_entropies(const SpinRdms& rdms, bool degenerate_state = false);

// Central-difference FCI force (Ha/Angstrom) with deterministic SCF + FCI at
// the two displaced geometries. Also used for the RHF force when
// method == "rhf".
struct ReferenceForceOptions {
  double scf_level_shift = 0.2;
  std::int64_t dim_cap = 4000000;
};
double reference_force(const Geometry& geom, int atom, int axis, double delta_angstrom,
                       const ReferenceForceOptions& opts = {});
double reference_rhf_force(const Geometry& geom, int atom, int axis, double delta_angstrom);

// Full deterministic pipeline helpers shared by oracle and drivers.
struct SystemSolution {
  IntegralSet ints;
  MOSet mos;
  MOHamiltonian moham;
  int n_electrons = 0;
};
SystemSolution solve_system(const Geometry& geom, double scf_level_shift = 0.2);
double fci_total_energy(const Geometry& geom, std::int64_t dim_cap = 4000000);

}  // namespace qcafqmc
