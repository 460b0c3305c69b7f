#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcafqmc/basis.hpp"
#include "qcafqmc/constants.hpp"
#include "qcafqmc/error.hpp"
#include "qcafqmc/fcidump.hpp"
#include "qcafqmc/geometry.hpp"
#include "qcafqmc/integrals.hpp"
#include "support/quad_oracle.hpp"

using namespace qcafqmc;

TEST_CASE("parse_xyz accepts the standard format and converts to Bohr") {
  Geometry g = parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7414");
  REQUIRE(g.n_atoms() == 2);
  double r = (g.atoms[1].position_bohr - g.atoms[0].position_bohr).norm();
  CHECK(r == doctest::Approx(0.7414 * 1.8897259886).epsilon(1e-12));
  CHECK(r == doctest::Approx(1.4011).epsilon(2e-4));
  CHECK(g.atoms[0].charge == 1);
}

TEST_CASE("parse_xyz H4 chain matches the linear-chain builder") {
  Geometry g = parse_xyz("4\n\nH 0 0 0\nH 0 0 1.0\nH 0 0 2.0\nH 0 0 3.0");
  Geometry h = linear_chain("H", 4, 1.0);
  REQUIRE(g.n_atoms() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK((g.atoms[i].position_bohr - h.atoms[i].position_bohr).norm() < 1e-14);
}

TEST_CASE("parse_xyz rejects malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(parse_xyz("1\n\nXx 0 0 0"), doctest::Contains("line 3"), Error);
  CHECK_THROWS_WITH_AS(parse_xyz("2\n\nH 0 0 0"), doctest::Contains("expected 2 atoms"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_xyz("1\n\nH 0 zero 0"), doctest::Contains("line 3"), Error);
  CHECK_THROWS_AS(parse_xyz("2\n\nH 0 0 0\nH 0 0 0\n"), Error);  // fused nuclei
}

TEST_CASE("displace shifts one coordinate and is exactly invertible") {
  Geometry n2 = diatomic("N", 1.2);
  Geometry moved = displace(n2, 1, 2, 1e-6);
  double r = (moved.atoms[1].position_bohr - moved.atoms[0].position_bohr).norm() *
             angstrom_per_bohr;
  CHECK(r == doctest::Approx(1.200001).epsilon(1e-9));

  Geometry same = displace(n2, 0, 0, 0.0);
  CHECK((same.atoms[0].position_bohr - n2.atoms[0].position_bohr).norm() == 0.0);

  Geometry back = displace(moved, 1, 2, -1e-6);
  for (int i = 0; i < 2; ++i)
    CHECK((back.atoms[i].position_bohr - n2.atoms[i].position_bohr).cwiseAbs().maxCoeff() <
          1e-15);

  CHECK_THROWS_AS(displace(n2, 5, 0, 0.1), Error);
  CHECK_THROWS_AS(displace(n2, 0, 7, 0.1), Error);
}

TEST_CASE("contracted shells are normalized") {
  Geometry g = parse_xyz("1\n\nO 0 0 0");
  BasisSet basis = build_sto3g(g);
  IntegralSet ints = compute_integrals(g, basis);
  for (int i = 0; i < ints.n_ao; ++i) CHECK(std::abs(ints.S(i, i) - 1.0) < 1e-10);
}

TEST_CASE("single H atom overlap is the identity") {
  Geometry g = parse_xyz("1\n\nH 0 0 0");
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  REQUIRE(ints.n_ao == 1);
  CHECK(std::abs(ints.S(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("H2 frozen reference values from the quadrature oracle") {
  Geometry g = parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7414");
  BasisSet basis = build_sto3g(g);
  IntegralSet ints = compute_integrals(g, basis);

  // literature-rounded sanity anchors
  CHECK(ints.S(0, 1) == doctest::Approx(0.6593).epsilon(2e-4));
  CHECK(ints.eri(0, 0, 0, 0) == doctest::Approx(0.7746).epsilon(2e-4));
  CHECK(ints.e_nuc == doctest::Approx(1.0 / 1.4011).epsilon(1e-4));

  // direct quadrature cross-check of the same contracted integrals
  const Shell& s0 = basis.shells[0];
  const Shell& s1 = basis.shells[1];
  double s_q = 0.0, eri_q = 0.0;
  for (std::size_t i = 0; i < s0.exponents.size(); ++i)
    for (std::size_t j = 0; j < s1.exponents.size(); ++j) {
      md::Prim a{s0.exponents[i], s0.center, 0, 0, 0};
      md::Prim b{s1.exponents[j], s1.center, 0, 0, 0};
      s_q += s0.coefficients[i] * s1.coefficients[j] * quad::overlap(a, b);
    }
  for (std::size_t i = 0; i < s0.exponents.size(); ++i)
    for (std::size_t j = 0; j < s0.exponents.size(); ++j)
      for (std::size_t k = 0; k < s0.exponents.size(); ++k)
        for (std::size_t l = 0; l < s0.exponents.size(); ++l) {
          md::Prim a{s0.exponents[i], s0.center, 0, 0, 0};
          md::Prim b{s0.exponents[j], s0.center, 0, 0, 0};
          eri_q += s0.coefficients[i] * s0.coefficients[j] * s0.coefficients[k] *
                   s0.coefficients[l] * quad::eri(a, b, a, b);
        }
  CHECK(std::abs(ints.S(0, 1) - s_q) < 1e-9);
  CHECK(std::abs(ints.eri(0, 0, 0, 0) - eri_q) < 1e-8);
}

TEST_CASE("analytic primitives match quadrature on randomized two-atom systems") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> expo(0.18, 2.6);
  std::uniform_real_distribution<double> pos(-1.2, 1.2);
  std::uniform_int_distribution<int> ang(0, 3);  // 0 -> s, 1..3 -> px,py,pz

  auto random_prim = [&](Eigen::Vector3d center) {
    md::Prim p{expo(rng), center, 0, 0, 0};
    int a = ang(rng);
    if (a == 1) p.lx = 1;
    if (a == 2) p.ly = 1;
    if (a == 3) p.lz = 1;
    return p;
  };

  for (int trial = 0; trial < 12; ++trial) {
    Eigen::Vector3d ca(pos(rng), pos(rng), pos(rng));
    Eigen::Vector3d cb(pos(rng), pos(rng), pos(rng));
    md::Prim a = random_prim(ca);
    md::Prim b = random_prim(cb);
    CHECK(std::abs(md::overlap(a, b) - quad::overlap(a, b)) < 1e-10);
    CHECK(std::abs(md::kinetic(a, b) - quad::kinetic(a, b)) < 1e-9);
    Eigen::Vector3d nucleus(pos(rng), pos(rng), pos(rng));
    CHECK(std::abs(md::nuclear(a, b, nucleus) - quad::nuclear(a, b, nucleus)) < 1e-7);
  }

  for (int trial = 0; trial < 6; ++trial) {
    Eigen::Vector3d ca(pos(rng), pos(rng), pos(rng));
    Eigen::Vector3d cb(pos(rng), pos(rng), pos(rng));
    md::Prim a = random_prim(ca);
    md::Prim b = random_prim(cb);
    md::Prim c = random_prim(ca);
    md::Prim d = random_prim(cb);
    CHECK(std::abs(md::eri(a, b, c, d) - quad::eri(a, b, c, d)) < 1e-7);
  }
}

TEST_CASE("rigid translation leaves S, T, ERI unchanged") {
  Geometry g = parse_xyz("2\n\nN 0 0 0\nN 0 0 1.2");
  IntegralSet ints = compute_integrals(g, build_sto3g(g));

  Geometry shifted = g;
  Eigen::Vector3d t(0.31, -0.77, 1.23);
  for (auto& atom : shifted.atoms) atom.position_bohr += t;
  IntegralSet ints2 = compute_integrals(shifted, build_sto3g(shifted));

  CHECK((ints.S - ints2.S).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ints.T - ints2.T).cwiseAbs().maxCoeff() < 1e-12);
  double max_eri = 0.0;
  for (std::size_t i = 0; i < ints.eri.raw().size(); ++i)
    max_eri = std::max(max_eri, std::abs(ints.eri.raw()[i] - ints2.eri.raw()[i]));
  CHECK(max_eri < 1e-12);
  CHECK(std::abs(ints.e_nuc - ints2.e_nuc) < 1e-12);
}

TEST_CASE("ERI supermatrix is positive semidefinite") {
  Geometry g = parse_xyz("4\n\nH 0 0 0\nH 0 0 1.0\nH 0 0 2.0\nH 0 0 3.0");
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  int n = ints.n_ao;
  Eigen::MatrixXd v(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) v(p * n + q, r * n + s) = ints.eri(p, q, r, s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("stored ERI symmetry is exact") {
  Geometry g = parse_xyz("2\n\nN 0 0 0\nN 0 0 1.1");
  IntegralSet ints = compute_integrals(g, build_sto3g(g));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> idx(0, ints.n_ao - 1);
  for (int k = 0; k < 200; ++k) {
    int p = idx(rng), q = idx(rng), r = idx(rng), s = idx(rng);
    double v = ints.eri(p, q, r, s);
    CHECK(ints.eri(q, p, r, s) == v);
    CHECK(ints.eri(p, q, s, r) == v);
    CHECK(ints.eri(r, s, p, q) == v);
    CHECK(ints.eri(s, r, q, p) == v);
  }
}

TEST_CASE("nuclear repulsion of H2") {
  Geometry g = parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7414");
  CHECK(g.nuclear_repulsion() ==
        doctest::Approx(1.0 / (0.7414 * bohr_per_angstrom)).epsilon(1e-12));
  CHECK(g.nuclear_repulsion() == doctest::Approx(0.7138).epsilon(2e-4));
}

TEST_CASE("FCIDUMP round trip preserves the Hamiltonian") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int n = 4;
  MOHamiltonian ham;
  ham.n_orb = n;
  ham.e_nuc = 1.234567890123;
  ham.h1.resize(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) ham.h1(p, q) = ham.h1(q, p) = gauss(rng);
  ham.eri = FoldedEri(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (FoldedEri::pair_index(r, s) > FoldedEri::pair_index(p, q)) continue;
          ham.eri.set(p, q, r, s, gauss(rng));
        }

  std::string text = fcidump_to_string(ham, 4);
  CHECK(text.find("&FCI NORB=4,NELEC=4,MS2=0") != std::string::npos);
  CHECK(text.find("ORBSYM=1,1,1,1,") != std::string::npos);
  CHECK(text.find("ISYM=1") != std::string::npos);

  FcidumpData back = parse_fcidump(text);
  CHECK(back.n_electrons == 4);
  REQUIRE(back.ham.n_orb == n);
  CHECK((back.ham.h1 - ham.h1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(back.ham.e_nuc - ham.e_nuc) < 1e-14);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          CHECK(std::abs(back.ham.eri(p, q, r, s) - ham.eri(p, q, r, s)) < 1e-14);
}
