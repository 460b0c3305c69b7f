#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcafqmc/cholesky.hpp"
#include "qcafqmc/error.hpp"
#include "qcafqmc/fci.hpp"
#include "qcafqmc/geometry.hpp"
#include "qcafqmc/integrals.hpp"
#include "qcafqmc/mo_hamiltonian.hpp"
#include "qcafqmc/scf.hpp"
#include "support/slater_condon.hpp"

using namespace qcafqmc;

namespace {

// O(N^8) reference transform: every target element contracted directly.
double naive_mo_eri(const IntegralSet& ints, const Eigen::MatrixXd& c, int i, int j, int k,
                    int l) {
  int n = ints.n_ao;
  double acc = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          acc += c(p, i) * c(q, j) * c(r, k) * c(s, l) * ints.eri(p, q, r, s);
  return acc;
}

Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = gauss(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
}

}  // namespace

TEST_CASE("identity coefficients reproduce the AO tensors") {
  Geometry g = diatomic("H", 0.9);
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  MOSet mos;
  mos.C = Eigen::MatrixXd::Identity(ints.n_ao, ints.n_ao);
  mos.eps = Eigen::VectorXd::Zero(ints.n_ao);
  mos.n_occ = 1;
  MOHamiltonian ham = transform_to_mo(ints, mos);
  CHECK((ham.h1 - (ints.T + ints.Vne)).cwiseAbs().maxCoeff() < 1e-14);
  for (std::size_t i = 0; i < ints.eri.raw().size(); ++i)
    CHECK(std::abs(ham.eri.raw()[i] - ints.eri.raw()[i]) < 1e-14);
}

TEST_CASE("quarter transform matches the naive O(N^8) oracle on H4") {
  Geometry g = linear_chain("H", 4, 1.0);
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  MOSet mos = run_rhf(ints, 4);
  MOHamiltonian ham = transform_to_mo(ints, mos);

  Eigen::MatrixXd h_ref = mos.C.transpose() * (ints.T + ints.Vne) * mos.C;
  CHECK((ham.h1 - h_ref).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(ham.h1.trace() - h_ref.trace()) < 1e-12);

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          CHECK(std::abs(ham.eri(i, j, k, l) - naive_mo_eri(ints, mos.C, i, j, k, l)) <
                1e-11);
}

TEST_CASE("random orthogonal rotation keeps 8-fold symmetry and the oracle agreement") {
  Geometry g = diatomic("H", 1.1);
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  MOSet mos;
  mos.C = random_orthogonal(ints.n_ao, 123);
  mos.eps = Eigen::VectorXd::Zero(ints.n_ao);
  mos.n_occ = 1;
  MOHamiltonian ham = transform_to_mo(ints, mos);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          CHECK(ham.eri(i, j, k, l) == ham.eri(j, i, k, l));
          CHECK(ham.eri(i, j, k, l) == ham.eri(k, l, i, j));
          CHECK(std::abs(ham.eri(i, j, k, l) - naive_mo_eri(ints, mos.C, i, j, k, l)) <
                1e-11);
        }
}

TEST_CASE("empty-core embedding is a no-op") {
  Geometry g = linear_chain("H", 4, 1.2);
  SystemSolution sol = solve_system(g);
  ActiveSpacePartition part = ActiveSpacePartition::full(4, 4);
  auto [act, e_core] = build_embedding(sol.moham, part);
  CHECK(e_core == 0.0);
  CHECK((act.h1 - sol.moham.h1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(act.n_orb == 4);
}

TEST_CASE("frozen-orbital embedding matches the dense frozen-FCI oracle on H4") {
  Geometry g = linear_chain("H", 4, 1.0);
  SystemSolution sol = solve_system(g);
  ActiveSpacePartition part = ActiveSpacePartition::from_active_list({1, 2, 3}, 4, 4);
  REQUIRE(part.n_core() == 1);
  REQUIRE(part.n_active_electrons == 2);

  auto [act, e_core] = build_embedding(sol.moham, part);
  FCIResult fci_act = fci_ground_state(act, 1, 1);
  double e_embedded = fci_act.e0 + e_core + sol.moham.e_nuc;

  // independent oracle: dense H restricted to determinants with orbital 0
  // doubly occupied
  std::vector<sctest::Det> dets;
  for (const auto& d : sctest::full_space(4, 2, 2))
    if ((d.a & 1u) && (d.b & 1u)) dets.push_back(d);
  REQUIRE(dets.size() == 9);
  Eigen::MatrixXd h = sctest::dense_hamiltonian(sol.moham, dets);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  double e_frozen = es.eigenvalues()(0) + sol.moham.e_nuc;

  CHECK(std::abs(e_embedded - e_frozen) < 1e-9);
}

TEST_CASE("N2 (6e,6o) window partition") {
  Geometry g = diatomic("N", 1.2);
  SystemSolution sol = solve_system(g);
  ActiveSpacePartition part =
      ActiveSpacePartition::from_active_list({4, 5, 6, 7, 8, 9}, 10, 14);
  CHECK(part.n_core() == 4);
  CHECK(part.n_active() == 6);
  CHECK(part.n_active_electrons == 6);
  auto [act, e_core] = build_embedding(sol.moham, part);
  CHECK(act.n_orb == 6);
  CHECK(e_core < 0.0);
}

TEST_CASE("embedding total energy is invariant under core rotations") {
  Geometry g = linear_chain("H", 6, 1.2);
  SystemSolution sol = solve_system(g);
  ActiveSpacePartition part = ActiveSpacePartition::from_active_list({2, 3, 4, 5}, 6, 6);
  REQUIRE(part.n_core() == 2);

  auto [act, e_core] = build_embedding(sol.moham, part);
  FCIResult f1 = fci_ground_state(act, 1, 1);
  double e1 = f1.e0 + e_core + sol.moham.e_nuc;

  // Givens rotation among the two core columns
  MOSet rotated = sol.mos;
  double c = std::cos(0.37), s = std::sin(0.37);
  Eigen::VectorXd col0 = rotated.C.col(0), col1 = rotated.C.col(1);
  rotated.C.col(0) = c * col0 + s * col1;
  rotated.C.col(1) = -s * col0 + c * col1;
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  MOHamiltonian ham2 = transform_to_mo(ints, rotated);
  auto [act2, e_core2] = build_embedding(ham2, part);
  FCIResult f2 = fci_ground_state(act2, 1, 1);
  double e2 = f2.e0 + e_core2 + ham2.e_nuc;

  CHECK(std::abs(e1 - e2) < 1e-9);
}

TEST_CASE("partition validation rejects overlaps and bad counts") {
  ActiveSpacePartition bad;
  bad.core = {0};
  bad.active = {0, 1};
  bad.virt = {2};
  bad.n_active_electrons = 2;
  CHECK_THROWS_AS(bad.validate(3, 4), Error);
}

// ---- pivoted Cholesky ----

TEST_CASE("rank-1 tensor factorizes with exactly one vector") {
  int n = 3;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd v(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) v(p, q) = v(q, p) = gauss(rng);

  MOHamiltonian ham;
  ham.n_orb = n;
  ham.h1 = Eigen::MatrixXd::Zero(n, n);
  ham.eri = FoldedEri(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (FoldedEri::pair_index(r, s) > FoldedEri::pair_index(p, q)) continue;
          ham.eri.set(p, q, r, s, v(p, q) * v(r, s));
        }

  CholeskyFactorization fac = cholesky_reference(ham, 1e-10);
  CHECK(fac.n_vectors() == 1);
  CHECK(fac.max_reconstruction_error(ham) < 1e-10);
}

TEST_CASE("H4 reference decomposition reconstructs to threshold and is deterministic") {
  Geometry g = linear_chain("H", 4, 1.0);
  SystemSolution sol = solve_system(g);
  CholeskyFactorization a = cholesky_reference(sol.moham, 1e-8);
  CHECK(a.max_reconstruction_error(sol.moham) <= 1e-8);

  CholeskyFactorization b = cholesky_reference(sol.moham, 1e-8);
  REQUIRE(a.n_vectors() == b.n_vectors());
  CHECK(a.pivots == b.pivots);
  for (int k = 0; k < a.n_vectors(); ++k)
    CHECK((a.vectors[k] - b.vectors[k]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("replay on the same Hamiltonian reproduces the reference bitwise") {
  Geometry g = linear_chain("H", 4, 1.4);
  SystemSolution sol = solve_system(g);
  CholeskyFactorization ref = cholesky_reference(sol.moham, 1e-8);
  CholeskyFactorization rep = cholesky_replay(sol.moham, ref.pivots, 1e-8);
  REQUIRE(rep.n_vectors() == ref.n_vectors());
  CHECK(rep.source == CholeskySource::replayed);
  for (int k = 0; k < ref.n_vectors(); ++k)
    CHECK((ref.vectors[k] - rep.vectors[k]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exhausted pivot triggers replay-invalid") {
  Geometry g = diatomic("H", 0.8);
  SystemSolution sol = solve_system(g);
  CholeskyFactorization ref = cholesky_reference(sol.moham, 1e-8);
  std::vector<std::pair<int, int>> pivots = ref.pivots;
  pivots.push_back(pivots[0]);  // residual at a reused pivot is ~0
  pivots.push_back(pivots[0]);
  bool threw = false;
  try {
    cholesky_replay(sol.moham, pivots, 1e-8);
  } catch (const Error& e) {
    threw = true;
    CHECK(std::string(e.code()) == "replay_invalid");
  }
  CHECK(threw);
}

TEST_CASE("negative diagonal raises a breakdown error") {
  MOHamiltonian ham;
  ham.n_orb = 1;
  ham.h1 = Eigen::MatrixXd::Zero(1, 1);
  ham.eri = FoldedEri(1);
  ham.eri.set(0, 0, 0, 0, -1.0);
  CHECK_THROWS_AS(cholesky_reference(ham, 1e-8), Error);
}

TEST_CASE("pivot artifact JSON round trip") {
  Geometry g = diatomic("H", 1.0);
  SystemSolution sol = solve_system(g);
  CholeskyFactorization ref = cholesky_reference(sol.moham, 1e-8);
  std::string path = "pivots_test.json";
  save_pivots(ref, path);
  auto [n_orb, thr, pivots] = load_pivots(path);
  CHECK(n_orb == ref.n_orb);
  CHECK(thr == ref.threshold);
  CHECK(pivots == ref.pivots);
  std::remove(path.c_str());
}
