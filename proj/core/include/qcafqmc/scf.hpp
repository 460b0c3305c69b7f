#pragma once

#include <Eigen/Dense>

#include "qcafqmc/integrals.hpp"

namespace qcafqmc {

struct ScfOptions {
  int max_iter = 200;
  double tol = 1e-9;        // max |DIIS error| at convergence
  int diis_size = 8;
  double level_shift = 0.2;  // Hartree, applied to virtuals while far from
                             // convergence, disabled once the residual is small
  double shift_off_threshold = 1e-5;
};

struct MOSet {
  Eigen::MatrixXd C;      // AO -> MO coefficients, columns are orbitals
  Eigen::VectorXd eps;    // orbital energies, ascending
  int n_occ = 0;          // doubly occupied spatial orbitals
  double e_total = 0.0;   // includes nuclear repulsion
  int n_iter = 0;
  double final_residual = 0.0;
};

// Restricted Hartree-Fock with DIIS and a core-Hamiltonian guess.
// Orbitals are deterministically canonicalized: every column is sign-fixed
// (largest-magnitude coefficient positive) and degenerate blocks
// (|eps_i - eps_j| < 1e-8) are ordered by lexicographic coefficient
// comparison, so repeated runs are bitwise reproducible.
MOSet run_rhf(const IntegralSet& ints, int n_electrons, const ScfOptions& opts = {});

}  // namespace qcafqmc
