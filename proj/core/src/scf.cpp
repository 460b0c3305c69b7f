#include "qcafqmc/scf.hpp"

#include <deque>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace {

Eigen::MatrixXd build_fock(const IntegralSet& ints, const Eigen::MatrixXd& P) {
  int n = ints.n_ao;
  Eigen::MatrixXd F = ints.T + ints.Vne;
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu <= mu; ++nu) {
      double g = 0.0;
      for (int la = 0; la < n; ++la) {
        for (int si = 0; si < n; ++si) {
          g += P(la, si) *
               (ints.eri(mu, nu, si, la) - 0.5 * ints.eri(mu, la, si, nu));
        }
      }
      F(mu, nu) += g;
      if (nu != mu) F(nu, mu) += g;
    }
  }
  return F;
}

void sign_fix(Eigen::MatrixXd& C) {
  for (int j = 0; j < C.cols(); ++j) {
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < C.rows(); ++i) {
      double a = std::abs(C(i, j));
      if (a > amax + 1e-300 && a > amax) {
        amax = a;
        imax = i;
      }
    }
    if (C(imax, j) < 0.0) C.col(j) = -C.col(j);
  }
}

// Within |d eps| < 1e-8 blocks, order columns lexicographically so the MO
// set is a deterministic function of the converged Fock matrix.
void canonicalize(Eigen::MatrixXd& C, Eigen::VectorXd& eps) {
  sign_fix(C);
  int n = static_cast<int>(eps.size());
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && std::abs(eps(end) - eps(end - 1)) < 1e-8) ++end;
    if (end - start > 1) {
      std::vector<int> order(end - start);
      for (int k = 0; k < end - start; ++k) order[k] = start + k;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int i = 0; i < C.rows(); ++i) {
          if (C(i, a) != C(i, b)) return C(i, a) < C(i, b);
        }
        return false;
      });
      Eigen::MatrixXd block(C.rows(), end - start);
      Eigen::VectorXd eblock(end - start);
      for (int k = 0; k < end - start; ++k) {
        block.col(k) = C.col(order[k]);
        eblock(k) = eps(order[k]);
      }
      C.middleCols(start, end - start) = block;
      eps.segment(start, end - start) = eblock;
    }
    start = end;
  }
}

}  // namespace

MOSet run_rhf(const IntegralSet& ints, int n_electrons, const ScfOptions& opts) {
  require(n_electrons > 0 && n_electrons % 2 == 0, "bad_electron_count",
          "RHF requires a positive even electron count");
  int n = ints.n_ao;
  int n_occ = n_electrons / 2;
  require(n_occ <= n, "bad_electron_count", "more electron pairs than basis functions");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ints.S);
  Eigen::MatrixXd X = es.operatorInverseSqrt();

  Eigen::MatrixXd Hcore = ints.T + ints.Vne;
  Eigen::MatrixXd F = Hcore;
  Eigen::MatrixXd C, P;
  Eigen::VectorXd eps;

  std::deque<Eigen::MatrixXd> diis_f;
  std::deque<Eigen::MatrixXd> diis_e;

  double residual = 1.0;
  double e_elec = 0.0;
  int iter = 0;
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    Eigen::MatrixXd Fp = X * F * X;
    if (opts.level_shift > 0.0 && residual > opts.shift_off_threshold && iter > 1) {
      // shift virtual orbitals up; uses the occupied projector of the
      // previous iteration in the orthonormal basis
      Eigen::MatrixXd Cp_occ = X.inverse() * C.leftCols(n_occ);
      Fp += opts.level_shift *
            (Eigen::MatrixXd::Identity(n, n) - Cp_occ * Cp_occ.transpose());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fes(Fp);
    C = X * fes.eigenvectors();
    eps = fes.eigenvalues();
    P = 2.0 * C.leftCols(n_occ) * C.leftCols(n_occ).transpose();

    F = build_fock(ints, P);
    e_elec = 0.5 * (P.array() * (Hcore + F).array()).sum();

    Eigen::MatrixXd err = X * (F * P * ints.S - ints.S * P * F) * X;
    residual = err.cwiseAbs().maxCoeff();
    if (residual < opts.tol) break;

    diis_f.push_back(F);
    diis_e.push_back(err);
    if (static_cast<int>(diis_f.size()) > opts.diis_size) {
      diis_f.pop_front();
      diis_e.pop_front();
    }
    int m = static_cast<int>(diis_f.size());
    if (m >= 2) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          B(i, j) = (diis_e[i].array() * diis_e[j].array()).sum();
      B.row(m).setConstant(-1.0);
      B.col(m).setConstant(-1.0);
      B(m, m) = 0.0;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      rhs(m) = -1.0;
      Eigen::VectorXd coef = B.fullPivLu().solve(rhs);
      if (coef.allFinite()) {
        Eigen::MatrixXd Fd = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < m; ++i) Fd += coef(i) * diis_f[i];
        F = Fd;
      }
    }
  }

  if (residual >= opts.tol)
    fail("scf_nonconvergence", "RHF did not converge in " + std::to_string(opts.max_iter) +
                                   " iterations; final DIIS residual " +
                                   std::to_string(residual));

  // Final canonical orbitals from the converged (unshifted) Fock matrix.
  Eigen::MatrixXd Fp = X * F * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fes(Fp);
  C = X * fes.eigenvectors();
  eps = fes.eigenvalues();
  canonicalize(C, eps);
  P = 2.0 * C.leftCols(n_occ) * C.leftCols(n_occ).transpose();
  e_elec = 0.5 * (P.array() * (Hcore + build_fock(ints, P)).array()).sum();

  MOSet mos;
  mos.C = C;
  mos.eps = eps;
  mos.n_occ = n_occ;
  mos.e_total = e_elec + ints.e_nuc;
  mos.n_iter = iter;
  mos.final_residual = residual;
  return mos;
}

}  // namespace qcafqmc
