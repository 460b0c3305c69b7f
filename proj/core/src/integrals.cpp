#include "qcafqmc/integrals.hpp"

#include <cmath>

#include "qcafqmc/boys.hpp"
#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace md {

namespace {

// Hermite expansion coefficient E_t^{ij} for a 1D Gaussian product.
double hermite_e(int i, int j, int t, double qx, double a, double b) {
  double p = a + b;
  double q = a * b / p;
  if (t < 0 || t > i + j) return 0.0;
  if (i == 0 && j == 0 && t == 0) return std::exp(-q * qx * qx);
  if (i > 0) {
    return hermite_e(i - 1, j, t - 1, qx, a, b) / (2 * p) -
           (q * qx / a) * hermite_e(i - 1, j, t, qx, a, b) +
           (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b);
  }
  return hermite_e(i, j - 1, t - 1, qx, a, b) / (2 * p) +
         (q * qx / b) * hermite_e(i, j - 1, t, qx, a, b) +
         (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b);
}

// Hermite Coulomb integral R^n_{tuv}.
double hermite_r(int t, int u, int v, int n, double p, const Eigen::Vector3d& pc,
                 const double* f) {
  if (t == 0 && u == 0 && v == 0) {
    double val = f[n];
    for (int k = 0; k < n; ++k) val *= -2.0 * p;
    return val;
  }
  if (t > 0) {
    double val = pc.x() * hermite_r(t - 1, u, v, n + 1, p, pc, f);
    if (t > 1) val += (t - 1) * hermite_r(t - 2, u, v, n + 1, p, pc, f);
    return val;
  }
  if (u > 0) {
    double val = pc.y() * hermite_r(t, u - 1, v, n + 1, p, pc, f);
    if (u > 1) val += (u - 1) * hermite_r(t, u - 2, v, n + 1, p, pc, f);
    return val;
  }
  double val = pc.z() * hermite_r(t, u, v - 1, n + 1, p, pc, f);
  if (v > 1) val += (v - 1) * hermite_r(t, u, v - 2, n + 1, p, pc, f);
  return val;
}

double overlap_1d(int i, int j, double qx, double a, double b) {
  return hermite_e(i, j, 0, qx, a, b) * std::sqrt(M_PI / (a + b));
}

}  // namespace

double overlap(const Prim& a, const Prim& b) {
  Eigen::Vector3d ab = a.center - b.center;
  return overlap_1d(a.lx, b.lx, ab.x(), a.alpha, b.alpha) *
         overlap_1d(a.ly, b.ly, ab.y(), a.alpha, b.alpha) *
         overlap_1d(a.lz, b.lz, ab.z(), a.alpha, b.alpha);
}

double kinetic(const Prim& a, const Prim& b) {
  Eigen::Vector3d ab = a.center - b.center;
  double bb = b.alpha;
  auto s = [&](int dim, int i, int j) {
    double q = dim == 0 ? ab.x() : dim == 1 ? ab.y() : ab.z();
    if (j < 0) return 0.0;
    return overlap_1d(i, j, q, a.alpha, b.alpha);
  };
  auto t1d = [&](int dim, int i, int j) {
    double val = 4.0 * bb * bb * s(dim, i, j + 2) - 2.0 * bb * (2 * j + 1) * s(dim, i, j);
    if (j >= 2) val += j * (j - 1) * s(dim, i, j - 2);
    return -0.5 * val;
  };
  double sx = s(0, a.lx, b.lx), sy = s(1, a.ly, b.ly), sz = s(2, a.lz, b.lz);
  return t1d(0, a.lx, b.lx) * sy * sz + sx * t1d(1, a.ly, b.ly) * sz +
         sx * sy * t1d(2, a.lz, b.lz);
}

double nuclear(const Prim& a, const Prim& b, const Eigen::Vector3d& c) {
  double p = a.alpha + b.alpha;
  Eigen::Vector3d ab = a.center - b.center;
  Eigen::Vector3d pp = (a.alpha * a.center + b.alpha * b.center) / p;
  Eigen::Vector3d pc = pp - c;
  int lt = a.lx + b.lx + a.ly + b.ly + a.lz + b.lz;
  double f[16];
  boys(lt, p * pc.squaredNorm(), f);
  double sum = 0.0;
  for (int t = 0; t <= a.lx + b.lx; ++t) {
    double ex = hermite_e(a.lx, b.lx, t, ab.x(), a.alpha, b.alpha);
    if (ex == 0.0) continue;
    for (int u = 0; u <= a.ly + b.ly; ++u) {
      double ey = hermite_e(a.ly, b.ly, u, ab.y(), a.alpha, b.alpha);
      if (ey == 0.0) continue;
      for (int v = 0; v <= a.lz + b.lz; ++v) {
        double ez = hermite_e(a.lz, b.lz, v, ab.z(), a.alpha, b.alpha);
        if (ez == 0.0) continue;
        sum += ex * ey * ez * hermite_r(t, u, v, 0, p, pc, f);
      }
    }
  }
  return 2.0 * M_PI / p * sum;
}

double eri(const Prim& a, const Prim& b, const Prim& c, const Prim& d) {
  double p = a.alpha + b.alpha;
  double q = c.alpha + d.alpha;
  double alpha = p * q / (p + q);
  Eigen::Vector3d ab = a.center - b.center;
  Eigen::Vector3d cd = c.center - d.center;
  Eigen::Vector3d pp = (a.alpha * a.center + b.alpha * b.center) / p;
  Eigen::Vector3d qq = (c.alpha * c.center + d.alpha * d.center) / q;
  Eigen::Vector3d pq = pp - qq;
  int lt = a.lx + b.lx + a.ly + b.ly + a.lz + b.lz + c.lx + d.lx + c.ly + d.ly + c.lz + d.lz;
  double f[24];
  boys(lt, alpha * pq.squaredNorm(), f);

  double sum = 0.0;
  for (int t = 0; t <= a.lx + b.lx; ++t) {
    double e1x = hermite_e(a.lx, b.lx, t, ab.x(), a.alpha, b.alpha);
    if (e1x == 0.0) continue;
    for (int u = 0; u <= a.ly + b.ly; ++u) {
      double e1y = hermite_e(a.ly, b.ly, u, ab.y(), a.alpha, b.alpha);
      if (e1y == 0.0) continue;
      for (int v = 0; v <= a.lz + b.lz; ++v) {
        double e1z = hermite_e(a.lz, b.lz, v, ab.z(), a.alpha, b.alpha);
        if (e1z == 0.0) continue;
        for (int tt = 0; tt <= c.lx + d.lx; ++tt) {
          double e2x = hermite_e(c.lx, d.lx, tt, cd.x(), c.alpha, d.alpha);
          if (e2x == 0.0) continue;
          for (int uu = 0; uu <= c.ly + d.ly; ++uu) {
            double e2y = hermite_e(c.ly, d.ly, uu, cd.y(), c.alpha, d.alpha);
            if (e2y == 0.0) continue;
            for (int vv = 0; vv <= c.lz + d.lz; ++vv) {
              double e2z = hermite_e(c.lz, d.lz, vv, cd.z(), c.alpha, d.alpha);
              if (e2z == 0.0) continue;
              double sign = ((tt + uu + vv) % 2 == 0) ? 1.0 : -1.0;
              sum += e1x * e1y * e1z * e2x * e2y * e2z * sign *
                     hermite_r(t + tt, u + uu, v + vv, 0, alpha, pq, f);
            }
          }
        }
      }
    }
  }
  return 2.0 * std::pow(M_PI, 2.5) / (p * q * std::sqrt(p + q)) * sum;
}

}  // namespace md

namespace {

// Contracted integral over two basis functions.
template <typename F>
double contract2(const BasisSet& basis, int mu, int nu, F&& prim_integral) {
  const auto& fa = basis.functions[mu];
  const auto& fb = basis.functions[nu];
  const auto& sa = basis.shells[fa.shell];
  const auto& sb = basis.shells[fb.shell];
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.exponents.size(); ++i) {
    md::Prim pa{sa.exponents[i], sa.center, fa.lx, fa.ly, fa.lz};
    for (std::size_t j = 0; j < sb.exponents.size(); ++j) {
      md::Prim pb{sb.exponents[j], sb.center, fb.lx, fb.ly, fb.lz};
      sum += sa.coefficients[i] * sb.coefficients[j] * prim_integral(pa, pb);
    }
  }
  return sum;
}

double contract_eri(const BasisSet& basis, int p, int q, int r, int s) {
  const BasisFunction* f[4] = {&basis.functions[p], &basis.functions[q],
                               &basis.functions[r], &basis.functions[s]};
  const Shell* sh[4];
  for (int k = 0; k < 4; ++k) sh[k] = &basis.shells[f[k]->shell];
  double sum = 0.0;
  for (std::size_t i = 0; i < sh[0]->exponents.size(); ++i) {
    md::Prim pa{sh[0]->exponents[i], sh[0]->center, f[0]->lx, f[0]->ly, f[0]->lz};
    double ci = sh[0]->coefficients[i];
    for (std::size_t j = 0; j < sh[1]->exponents.size(); ++j) {
      md::Prim pb{sh[1]->exponents[j], sh[1]->center, f[1]->lx, f[1]->ly, f[1]->lz};
      double cij = ci * sh[1]->coefficients[j];
      for (std::size_t k = 0; k < sh[2]->exponents.size(); ++k) {
        md::Prim pc{sh[2]->exponents[k], sh[2]->center, f[2]->lx, f[2]->ly, f[2]->lz};
        double cijk = cij * sh[2]->coefficients[k];
        for (std::size_t l = 0; l < sh[3]->exponents.size(); ++l) {
          md::Prim pd{sh[3]->exponents[l], sh[3]->center, f[3]->lx, f[3]->ly, f[3]->lz};
          sum += cijk * sh[3]->coefficients[l] * md::eri(pa, pb, pc, pd);
        }
      }
    }
  }
  return sum;
}

}  // namespace

IntegralSet compute_integrals(const Geometry& geom, const BasisSet& basis) {
  for (int a = 0; a < geom.n_atoms(); ++a) {
    bool found = false;
    for (const auto& sh : basis.shells)
      if (sh.atom == a) found = true;
    require(found, "missing_basis", "atom " + std::to_string(a) + " has no basis shells");
  }

  IntegralSet out;
  int n = basis.n_functions();
  out.n_ao = n;
  out.S.resize(n, n);
  out.T.resize(n, n);
  out.Vne.resize(n, n);
  out.eri = FoldedEri(n);
  out.e_nuc = geom.nuclear_repulsion();

  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu <= mu; ++nu) {
      double s = contract2(basis, mu, nu,
                           [](const md::Prim& a, const md::Prim& b) { return md::overlap(a, b); });
      double t = contract2(basis, mu, nu,
                           [](const md::Prim& a, const md::Prim& b) { return md::kinetic(a, b); });
      double v = 0.0;
      for (const auto& atom : geom.atoms) {
        v -= atom.charge * contract2(basis, mu, nu, [&](const md::Prim& a, const md::Prim& b) {
          return md::nuclear(a, b, atom.position_bohr);
        });
      }
      out.S(mu, nu) = out.S(nu, mu) = s;
      out.T(mu, nu) = out.T(nu, mu) = t;
      out.Vne(mu, nu) = out.Vne(nu, mu) = v;
    }
  }

  // Canonical (p>=q, r>=s, pq>=rs) quadruples, each computed exactly once.
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) {
      std::size_t pq = FoldedEri::pair_index(p, q);
      for (int r = 0; r <= p; ++r) {
        for (int s = 0; s <= r; ++s) {
          if (FoldedEri::pair_index(r, s) > pq) continue;
          out.eri.set(p, q, r, s, contract_eri(basis, p, q, r, s));
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.S);
  out.s_min_eig = es.eigenvalues().minCoeff();
  if (out.s_min_eig < 1e-8)
    out.warnings.push_back("overlap matrix nearly singular: min eigenvalue " +
                           std::to_string(out.s_min_eig));
  return out;
}

}  // namespace qcafqmc
