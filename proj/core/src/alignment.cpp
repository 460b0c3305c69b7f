#include "qcafqmc/alignment.hpp"

#include <cmath>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace {

// Regularized S^{1/2}: maps MO coefficients into Euclidean-orthonormal
// coordinates, C~ = S^{1/2} C, with an eigenvalue floor for near-singular
// overlap matrices.
Eigen::MatrixXd regularized_sqrt(const Eigen::MatrixXd& s, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  require(es.info() == Eigen::Success, "numeric", "overlap eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  require(lam.minCoeff() > -1e-8, "numeric", "overlap matrix numerically singular");
  Eigen::VectorXd root = (lam.array() + eps).sqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

AlignmentResult align_orbitals(const MOSet& ref, const Eigen::MatrixXd& s_ref,
                               const MOSet& target, const Eigen::MatrixXd& s_target,
                               const AlignmentOptions& opts) {
  require(ref.C.rows() == target.C.rows() && ref.C.cols() == target.C.cols(), "dim_mismatch",
          "alignment requires equal basis dimensions");
  int n = static_cast<int>(target.C.cols());

  Eigen::MatrixXd ref_on = regularized_sqrt(s_ref, opts.eps_reg) * ref.C;
  Eigen::MatrixXd tgt_on = regularized_sqrt(s_target, opts.eps_reg) * target.C;

  AlignmentResult result;
  result.C_aligned = target.C;
  result.signs = Eigen::VectorXd::Ones(n);

  // Chained-gap grouping over target orbital energies.
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && std::abs(target.eps(end) - target.eps(end - 1)) < opts.delta_thresh)
      ++end;
    int k = end - start;
    if (k > 1) {
      Eigen::MatrixXd o_k =
          ref_on.middleCols(start, k).transpose() * tgt_on.middleCols(start, k);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(o_k, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.singularValues().minCoeff() < 0.1)
        result.warnings.push_back("orbital character changed in degenerate group at orbital " +
                                  std::to_string(start));
      Eigen::MatrixXd r_k = svd.matrixU() * svd.matrixV().transpose();
      if (r_k.determinant() < 0.0) r_k.col(k - 1) = -r_k.col(k - 1);

      result.C_aligned.middleCols(start, k) =
          target.C.middleCols(start, k) * r_k.transpose();
      tgt_on.middleCols(start, k) = tgt_on.middleCols(start, k) * r_k.transpose();

      AlignmentBlock block;
      for (int i = 0; i < k; ++i) block.orbitals.push_back(start + i);
      block.rotation = r_k;
      result.blocks.push_back(std::move(block));

      bool straddles = start < target.n_occ && end > target.n_occ;
      if (straddles)
        result.warnings.push_back("degenerate group at orbital " + std::to_string(start) +
                                  " straddles the occupied/virtual boundary");
    }
    start = end;
  }

  // Per-orbital phase fix; singleton groups receive only this step.
  result.diagnostics.resize(n);
  for (int i = 0; i < n; ++i) {
    double d = ref_on.col(i).dot(tgt_on.col(i));
    if (d < 0.0) {
      result.signs(i) = -1.0;
      result.C_aligned.col(i) = -result.C_aligned.col(i);
      d = -d;
    }
    result.diagnostics(i) = d;
    if (d < 0.9)
      result.warnings.push_back("orbital " + std::to_string(i) +
                                " aligned overlap below 0.9 (possible reordering)");
  }
  return result;
}

}  // namespace qcafqmc
