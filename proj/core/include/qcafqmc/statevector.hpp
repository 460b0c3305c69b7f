#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qcafqmc/dets.hpp"

namespace qcafqmc {

// Full register over 2*n_spatial qubits under the Jordan-Wigner mapping with
// interleaved ordering: spin orbital (p, alpha) -> qubit 2p, (p, beta) ->
// qubit 2p+1; basis index bit q stores qubit q.
struct Statevector {
  int n_spatial = 0;
  Eigen::VectorXcd amps;

  static Statevector zero(int n_spatial);
  // Closed-shell style reference: alpha orbitals [0, n_alpha), beta [0, n_beta).
  static Statevector reference(int n_spatial, int n_alpha, int n_beta);

  double norm() const { return amps.norm(); }
  // Largest amplitude magnitude outside the (n_alpha, n_beta) sector.
  double sector_leakage(int n_alpha, int n_beta) const;
  // Largest amplitude magnitude on broken-pair (seniority > 0) strings.
  double broken_pair_weight() const;
};

// Sign relating a JW basis amplitude to the alpha-block-first determinant
// convention used by the determinant algebra.
int jw_reorder_sign(std::uint32_t amask, std::uint32_t bmask);

struct DetTerm {
  std::complex<double> coeff;  // determinant-convention coefficient
  std::uint32_t alpha_mask = 0;
  std::uint32_t beta_mask = 0;
};

struct DetExpansion {
  int n_spatial = 0;
  std::vector<DetTerm> terms;      // |coeff| >= eps_det
  double discarded_weight = 0.0;   // squared norm dropped by the cutoff

  double norm2() const;
};

DetExpansion expand_determinants(const Statevector& sv, double eps_det = 1e-10);

// y += sum_ia t_ia (P+_a P_i - P+_i P_a) x over full spatial pairs; the pair
// operators are string-free under the interleaved JW ordering.
void apply_pair_generator(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                          const std::vector<std::pair<int, int>>& pairs,
                          const Eigen::VectorXd& t, int n_spatial);

// e^{T - T+} acting on an arbitrary statevector by scaled Taylor summation
// of the exact anti-Hermitian generator (no Trotterization).
Statevector apply_upccd(const Eigen::VectorXd& t, const std::vector<std::pair<int, int>>& pairs,
                        const Statevector& reference);

// Sector transfer between the statevector and the (Ia, Ib) determinant basis,
// including the JW reordering signs.
Eigen::VectorXcd to_sector_vector(const Statevector& sv, const SpinStrings& alpha,
                                  const SpinStrings& beta);
Statevector from_sector_vector(const Eigen::VectorXcd& c, const SpinStrings& alpha,
                               const SpinStrings& beta, int n_spatial);

}  // namespace qcafqmc
