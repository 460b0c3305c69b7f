#include "qcafqmc/mo_hamiltonian.hpp"

#include <algorithm>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

void ActiveSpacePartition::validate(int n_orb, int n_electrons) const {
  std::vector<int> seen(n_orb, 0);
  auto mark = [&](const std::vector<int>& v) {
    for (int p : v) {
      require(p >= 0 && p < n_orb, "bad_partition", "orbital index out of range");
      ++seen[p];
    }
  };
  mark(core);
  mark(active);
  mark(virt);
  for (int p = 0; p < n_orb; ++p)
    require(seen[p] == 1, "bad_partition",
            "orbital " + std::to_string(p) + " must appear in exactly one subspace");
  require(n_active_electrons == n_electrons - 2 * n_core(), "bad_partition",
          "active electron count inconsistent with core size");
  require(n_active_electrons >= 0 && n_active_electrons <= 2 * n_active(), "bad_partition",
          "active electron count outside active window");
}

ActiveSpacePartition ActiveSpacePartition::full(int n_orb, int n_electrons) {
  ActiveSpacePartition p;
  p.active.resize(n_orb);
  for (int i = 0; i < n_orb; ++i) p.active[i] = i;
  p.n_active_electrons = n_electrons;
  return p;
}

ActiveSpacePartition ActiveSpacePartition::from_active_list(const std::vector<int>& active,
                                                            int n_orb, int n_electrons) {
  ActiveSpacePartition p;
  p.active = active;
  std::sort(p.active.begin(), p.active.end());
  std::vector<bool> is_active(n_orb, false);
  for (int i : p.active) {
    require(i >= 0 && i < n_orb, "bad_partition", "active orbital index out of range");
    is_active[i] = true;
  }
  int n_occ = n_electrons / 2;
  for (int i = 0; i < n_orb; ++i) {
    if (is_active[i]) continue;
    if (i < n_occ)
      p.core.push_back(i);
    else
      p.virt.push_back(i);
  }
  p.n_active_electrons = n_electrons - 2 * p.n_core();
  p.validate(n_orb, n_electrons);
  return p;
}

FoldedEri rotate_eri(const FoldedEri& eri, const Eigen::MatrixXd& C) {
  int n = eri.n();
  require(C.rows() == n && C.cols() == n, "dim_mismatch", "rotation dimension mismatch");

  // Quarter transformations over a dense scratch tensor; desk-scale N keeps
  // the O(N^5) cost trivial.
  std::vector<double> t0(static_cast<std::size_t>(n) * n * n * n);
  auto at = [n](std::vector<double>& v, int a, int b, int c, int d) -> double& {
    return v[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) at(t0, p, q, r, s) = eri(p, q, r, s);

  std::vector<double> t1(t0.size());
  // index 4: s -> l
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int s = 0; s < n; ++s) acc += at(t0, p, q, r, s) * C(s, l);
          at(t1, p, q, r, l) = acc;
        }
  // index 3: r -> k
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int r = 0; r < n; ++r) acc += at(t1, p, q, r, l) * C(r, k);
          at(t0, p, q, k, l) = acc;
        }
  // index 2: q -> j
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int q = 0; q < n; ++q) acc += at(t0, p, q, k, l) * C(q, j);
          at(t1, p, j, k, l) = acc;
        }
  // index 1: p -> i
  FoldedEri out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      std::size_t ij = FoldedEri::pair_index(i, j);
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (FoldedEri::pair_index(k, l) > ij) continue;
          double acc = 0.0;
          for (int p = 0; p < n; ++p) acc += at(t1, p, j, k, l) * C(p, i);
          out.set(i, j, k, l, acc);
        }
    }
  return out;
}

MOHamiltonian transform_to_mo(const IntegralSet& ints, const MOSet& mos) {
  int n = ints.n_ao;
  require(mos.C.rows() == n && mos.C.cols() == n, "dim_mismatch",
          "MO coefficient dimensions disagree with integrals");
  MOHamiltonian ham;
  ham.n_orb = n;
  ham.e_nuc = ints.e_nuc;
  ham.h1 = mos.C.transpose() * (ints.T + ints.Vne) * mos.C;
  ham.eri = rotate_eri(ints.eri, mos.C);
  return ham;
}

std::pair<MOHamiltonian, double> build_embedding(const MOHamiltonian& ham,
                                                 const ActiveSpacePartition& part) {
  int na = part.n_active();
  MOHamiltonian act;
  act.n_orb = na;
  act.e_nuc = 0.0;
  act.h1.resize(na, na);
  act.eri = FoldedEri(na);

  for (int u = 0; u < na; ++u) {
    int pu = part.active[u];
    for (int v = 0; v <= u; ++v) {
      int pv = part.active[v];
      double h = ham.h1(pu, pv);
      for (int i : part.core)
        h += 2.0 * ham.eri(pu, pv, i, i) - ham.eri(pu, i, i, pv);
      act.h1(u, v) = act.h1(v, u) = h;
    }
  }
  for (int u = 0; u < na; ++u)
    for (int v = 0; v <= u; ++v) {
      std::size_t uv = FoldedEri::pair_index(u, v);
      for (int w = 0; w <= u; ++w)
        for (int x = 0; x <= w; ++x) {
          if (FoldedEri::pair_index(w, x) > uv) continue;
          act.eri.set(u, v, w, x,
                      ham.eri(part.active[u], part.active[v], part.active[w], part.active[x]));
        }
    }

  double e_core = 0.0;
  for (int i : part.core) e_core += 2.0 * ham.h1(i, i);
  for (int i : part.core)
    for (int j : part.core) e_core += 2.0 * ham.eri(i, i, j, j) - ham.eri(i, j, j, i);
  return {std::move(act), e_core};
}

}  // namespace qcafqmc
