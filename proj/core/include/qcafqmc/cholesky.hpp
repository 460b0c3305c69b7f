#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "qcafqmc/mo_hamiltonian.hpp"

namespace qcafqmc {

enum class CholeskySource { reference, replayed };

// Pivoted factorization of the two-electron tensor viewed as the PSD matrix
// V_{(pq)(rs)} over the full square composite index (p,q) -> p*N + q.
struct CholeskyFactorization {
  int n_orb = 0;
  double threshold = 0.0;
  CholeskySource source = CholeskySource::reference;
  std::vector<Eigen::MatrixXd> vectors;          // L^gamma as symmetric n x n matrices
  std::vector<std::pair<int, int>> pivots;       // (p,q) in selection order

  int n_vectors() const { return static_cast<int>(vectors.size()); }
  double max_reconstruction_error(const MOHamiltonian& ham) const;
};

// Greedy max-diagonal pivoting; ties within 1e-14 resolved toward the
// smallest composite index. Stops when the residual diagonal is <= threshold.
CholeskyFactorization cholesky_reference(const MOHamiltonian& ham, double threshold = 1e-8);

// Recomputes vectors following a stored pivot order, keeping the stored
// vector count regardless of the local residuals. Throws Error
// ("replay_invalid") if a pivot's residual diagonal is <= 1e-12 or the final
// reconstruction error exceeds 10x threshold.
CholeskyFactorization cholesky_replay(const MOHamiltonian& ham,
                                      const std::vector<std::pair<int, int>>& pivots,
                                      double threshold = 1e-8);

// Pivot artifact: {"n_orb":..., "threshold":..., "pivots":[[p,q],...]}.
std::string pivots_to_json(const CholeskyFactorization& fac);
void save_pivots(const CholeskyFactorization& fac, const std::string& path);
std::tuple<int, double, std::vector<std::pair<int, int>>> load_pivots(const std::string& path);

}  // namespace qcafqmc
