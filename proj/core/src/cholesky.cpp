#include "qcafqmc/cholesky.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace {

// Column (.,.)|(pivot) of V in composite layout, minus prior vector updates.
Eigen::VectorXd residual_column(const MOHamiltonian& ham,
                                const std::vector<Eigen::VectorXd>& vecs, int pp, int pq) {
  int n = ham.n_orb;
  Eigen::VectorXd col(static_cast<Eigen::Index>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) col[p * n + q] = ham.eri(p, q, pp, pq);
  int piv = pp * n + pq;
  for (const auto& v : vecs) col.noalias() -= v[piv] * v;
  return col;
}

Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXd m(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) m(p, q) = v[p * n + q];
  return m;
}

CholeskyFactorization run_decomposition(const MOHamiltonian& ham, double threshold,
                                        const std::vector<std::pair<int, int>>* replay_pivots) {
  int n = ham.n_orb;
  Eigen::Index m = static_cast<Eigen::Index>(n) * n;
  Eigen::VectorXd diag(m);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) diag[p * n + q] = ham.eri(p, q, p, q);

  std::vector<Eigen::VectorXd> vecs;
  std::vector<std::pair<int, int>> pivots;
  std::size_t max_vectors = replay_pivots ? replay_pivots->size() : static_cast<std::size_t>(m);

  for (std::size_t k = 0; k < max_vectors; ++k) {
    int pp, pq;
    if (replay_pivots) {
      pp = (*replay_pivots)[k].first;
      pq = (*replay_pivots)[k].second;
      require(pp >= 0 && pp < n && pq >= 0 && pq < n, "dim_mismatch",
              "stored pivot outside Hamiltonian dimension");
      double d = diag[pp * n + pq];
      if (d <= 1e-12)
        fail("replay_invalid", "pivot " + std::to_string(k) + " residual diagonal " +
                                   std::to_string(d) + " exhausted during replay");
    } else {
      // greedy max diagonal; ties within 1e-14 -> smallest composite index
      Eigen::Index best = 0;
      double dmax = diag[0];
      for (Eigen::Index i = 1; i < m; ++i) {
        if (diag[i] > dmax + 1e-14) {
          dmax = diag[i];
          best = i;
        }
      }
      if (dmax <= threshold) break;
      if (dmax < -1e-10)
        fail("cholesky_breakdown",
             "negative residual diagonal " + std::to_string(dmax) + " beyond tolerance");
      pp = static_cast<int>(best) / n;
      pq = static_cast<int>(best) % n;
    }

    Eigen::VectorXd col = residual_column(ham, vecs, pp, pq);
    double d = diag[pp * n + pq];
    if (!replay_pivots && d < -1e-10)
      fail("cholesky_breakdown", "negative residual diagonal at pivot");
    col /= std::sqrt(d);
    diag.noalias() -= col.cwiseProduct(col);
    vecs.push_back(std::move(col));
    pivots.emplace_back(pp, pq);
  }

  CholeskyFactorization fac;
  fac.n_orb = n;
  fac.threshold = threshold;
  fac.source = replay_pivots ? CholeskySource::replayed : CholeskySource::reference;
  fac.pivots = std::move(pivots);
  fac.vectors.reserve(vecs.size());
  for (const auto& v : vecs) fac.vectors.push_back(to_matrix(v, n));
  return fac;
}

}  // namespace

double CholeskyFactorization::max_reconstruction_error(const MOHamiltonian& ham) const {
  int n = n_orb;
  double err = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (FoldedEri::pair_index(r, s) > FoldedEri::pair_index(p, q)) continue;
          double v = 0.0;
          for (const auto& L : vectors) v += L(p, q) * L(r, s);
          err = std::max(err, std::abs(v - ham.eri(p, q, r, s)));
        }
  return err;
}

CholeskyFactorization cholesky_reference(const MOHamiltonian& ham, double threshold) {
  return run_decomposition(ham, threshold, nullptr);
}

CholeskyFactorization cholesky_replay(const MOHamiltonian& ham,
                                      const std::vector<std::pair<int, int>>& pivots,
                                      double threshold) {
  CholeskyFactorization fac = run_decomposition(ham, threshold, &pivots);
  double err = fac.max_reconstruction_error(ham);
  if (err > 10.0 * threshold)
    fail("replay_invalid", "replayed reconstruction error " + std::to_string(err) +
                               " exceeds 10x threshold");
  return fac;
}

std::string pivots_to_json(const CholeskyFactorization& fac) {
  nlohmann::json j;
  j["n_orb"] = fac.n_orb;
  j["threshold"] = fac.threshold;
  j["pivots"] = nlohmann::json::array();
  for (const auto& [p, q] : fac.pivots) j["pivots"].push_back({p, q});
  return j.dump(2);
}

void save_pivots(const CholeskyFactorization& fac, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "io_error", "cannot write pivot artifact to " + path);
  out << pivots_to_json(fac) << "\n";
}

std::tuple<int, double, std::vector<std::pair<int, int>>> load_pivots(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "io_error", "cannot read pivot artifact from " + path);
  nlohmann::json j;
  in >> j;
  std::vector<std::pair<int, int>> pivots;
  for (const auto& pq : j.at("pivots")) pivots.emplace_back(pq.at(0), pq.at(1));
  return {j.at("n_orb"), j.at("threshold"), std::move(pivots)};
}

}  // namespace qcafqmc
