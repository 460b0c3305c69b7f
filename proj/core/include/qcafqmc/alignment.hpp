#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qcafqmc/scf.hpp"

namespace qcafqmc {

struct AlignmentOptions {
  double delta_thresh = 1e-6;  // Hartree; chained-gap degeneracy grouping
  double eps_reg = 1e-10;      // eigenvalue floor in the orthonormalizer
};

struct AlignmentBlock {
  std::vector<int> orbitals;  // member indices of the degenerate group
  Eigen::MatrixXd rotation;   // R_k, det +1 for real orbitals
};

struct AlignmentResult {
  Eigen::MatrixXd C_aligned;       // rotated target MO coefficients
  std::vector<AlignmentBlock> blocks;
  Eigen::VectorXd diagnostics;     // per-orbital <ref_i|aligned_i>, all >= 0
  Eigen::VectorXd signs;           // final per-orbital phase fixes (+-1)
  std::vector<std::string> warnings;
};

// Maximal-overlap alignment of the target MOs onto the reference MOs.
// Both sets are expressed in Loewdin-orthonormalized AO coordinates (built
// from the respective overlap matrices with an eigenvalue floor); target
// orbitals are grouped into chains of consecutive energy gaps below
// delta_thresh, each group rotated by the SVD-optimal R_k = U_k V_k^T with a
// last-column sign flip when det < 0, and every orbital finally phase-fixed
// so the diagnostic overlaps are non-negative.
AlignmentResult align_orbitals(const MOSet& ref, const Eigen::MatrixXd& s_ref,
                               const MOSet& target, const Eigen::MatrixXd& s_target,
                               const AlignmentOptions& opts = {});

}  // namespace qcafqmc
