#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qcafqmc/integrals.hpp"
#include "qcafqmc/scf.hpp"

namespace qcafqmc {

struct MOHamiltonian {
  int n_orb = 0;
  Eigen::MatrixXd h1;  // one-body MO matrix (Hartree)
  FoldedEri eri;       // MO-basis (pq|rs), 8-fold symmetric as stored
  double e_nuc = 0.0;
};

struct ActiveSpacePartition {
  std::vector<int> core;
  std::vector<int> active;
  std::vector<int> virt;
  int n_active_electrons = 0;

  int n_core() const { return static_cast<int>(core.size()); }
  int n_active() const { return static_cast<int>(active.size()); }

  // Disjointness/exhaustiveness against an orbital count; throws on failure.
  void validate(int n_orb, int n_electrons) const;

  static ActiveSpacePartition full(int n_orb, int n_electrons);
  // Core = lowest occupied not selected, virtual = the rest.
  static ActiveSpacePartition from_active_list(const std::vector<int>& active, int n_orb,
                                               int n_electrons);
};

// h1 = C^T (T + Vne) C; ERI by quarter transformations.
MOHamiltonian transform_to_mo(const IntegralSet& ints, const MOSet& mos);

// Four-index rotation (pq|rs) -> sum C_pi C_qj C_rk C_sl (ij|kl), stored
// back into canonical folded form.
FoldedEri rotate_eri(const FoldedEri& eri, const Eigen::MatrixXd& C);

// Freezes the core: effective one-body integrals over the active window and
// the scalar core energy. The returned Hamiltonian has e_nuc = 0; callers
// assemble totals as E_active + core_energy + E_nuc.
std::pair<MOHamiltonian, double> build_embedding(const MOHamiltonian& ham,
                                                 const ActiveSpacePartition& part);

}  // namespace qcafqmc
