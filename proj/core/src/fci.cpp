#include "qcafqmc/fci.hpp"

#include <algorithm>
#include <cmath>

#include "qcafqmc/basis.hpp"
#include "qcafqmc/error.hpp"
#include "qcafqmc/threading.hpp"

namespace qcafqmc {

namespace {

struct InEntry {
  int source;
  std::uint16_t pq;  // p * n + q, p created / q annihilated
  std::int8_t sign;
};

// CSR incoming excitation lists: entries[offset[J]..offset[J+1]) hold all
// (I, pq, sign) with E_pq |I> = sign |J>.
struct Incoming {
  std::vector<std::size_t> offsets;
  std::vector<InEntry> entries;

  void build(const SpinStrings& s, int n_orb) {
    std::vector<std::vector<InEntry>> tmp(s.size());
    for (int i = 0; i < s.size(); ++i)
      for (const auto& e : s.excitations[i])
        tmp[e.target].push_back(
            {i, static_cast<std::uint16_t>(e.p * n_orb + e.q), e.sign});
    offsets.assign(s.size() + 1, 0);
    for (int j = 0; j < s.size(); ++j) offsets[j + 1] = offsets[j] + tmp[j].size();
    entries.resize(offsets.back());
    for (int j = 0; j < s.size(); ++j)
      std::copy(tmp[j].begin(), tmp[j].end(), entries.begin() + offsets[j]);
  }
};

}  // namespace

struct FciWork {
  Incoming in_a, in_b;
  std::vector<double> w;       // dense (pq)(rs) supermatrix, n^2 x n^2
  std::vector<double> k_flat;  // k_pq = h_pq - 1/2 sum_r (pr|rq)
};

namespace {

// One static work buffer per FciSpace instance; built in the constructor.
FciWork build_work(const MOHamiltonian& ham, const SpinStrings& a, const SpinStrings& b) {
  FciWork wk;
  int n = ham.n_orb;
  wk.in_a.build(a, n);
  wk.in_b.build(b, n);
  wk.w.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          wk.w[(static_cast<std::size_t>(p) * n + q) * n * n + r * n + s] =
              ham.eri(p, q, r, s);
  wk.k_flat.resize(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double k = ham.h1(p, q);
      for (int r = 0; r < n; ++r) k -= 0.5 * ham.eri(p, r, r, q);
      wk.k_flat[p * n + q] = k;
    }
  return wk;
}

}  // namespace

FciSpace::FciSpace(const MOHamiltonian& ham, int n_alpha, int n_beta)
    : ham_(ham), alpha_(ham.n_orb, n_alpha), beta_(ham.n_orb, n_beta) {
  work_ = std::make_shared<FciWork>(build_work(ham_, alpha_, beta_));
}

void FciSpace::sigma(const double* c, double* out) const {
  const FciWork& wk = *work_;
  int n = ham_.n_orb;
  std::size_t nn = static_cast<std::size_t>(n) * n;
  int na = alpha_.size();
  int nb = beta_.size();
  const double* w = wk.w.data();
  const double* kf = wk.k_flat.data();

  parallel_for(static_cast<std::size_t>(na), [&](std::size_t ja) {
    double* srow = out + ja * nb;
    std::fill(srow, srow + nb, 0.0);

    // alpha one-body and alpha-alpha two-body: full-row axpys
    for (std::size_t e1 = wk.in_a.offsets[ja]; e1 < wk.in_a.offsets[ja + 1]; ++e1) {
      const InEntry& a1 = wk.in_a.entries[e1];
      const double* crow = c + static_cast<std::size_t>(a1.source) * nb;
      double coef = kf[a1.pq] * a1.sign;
      for (int jb = 0; jb < nb; ++jb) srow[jb] += coef * crow[jb];
      const double* wrow = w + a1.pq * nn;
      for (std::size_t e2 = wk.in_a.offsets[a1.source]; e2 < wk.in_a.offsets[a1.source + 1];
           ++e2) {
        const InEntry& a2 = wk.in_a.entries[e2];
        const double* c2 = c + static_cast<std::size_t>(a2.source) * nb;
        double c12 = 0.5 * wrow[a2.pq] * a1.sign * a2.sign;
        for (int jb = 0; jb < nb; ++jb) srow[jb] += c12 * c2[jb];
      }
      // alpha-beta cross term: one excitation per spin
      for (int jb = 0; jb < nb; ++jb) {
        double acc = 0.0;
        for (std::size_t eb = wk.in_b.offsets[jb]; eb < wk.in_b.offsets[jb + 1]; ++eb) {
          const InEntry& b1 = wk.in_b.entries[eb];
          acc += b1.sign * wrow[b1.pq] * crow[b1.source];
        }
        srow[jb] += a1.sign * acc;
      }
    }

    // beta one-body and beta-beta two-body: row-local (alpha-diagonal)
    const double* crow = c + ja * nb;
    for (int jb = 0; jb < nb; ++jb) {
      double acc = 0.0;
      for (std::size_t e1 = wk.in_b.offsets[jb]; e1 < wk.in_b.offsets[jb + 1]; ++e1) {
        const InEntry& b1 = wk.in_b.entries[e1];
        acc += kf[b1.pq] * b1.sign * crow[b1.source];
        const double* wrow = w + b1.pq * nn;
        double acc2 = 0.0;
        for (std::size_t e2 = wk.in_b.offsets[b1.source]; e2 < wk.in_b.offsets[b1.source + 1];
             ++e2) {
          const InEntry& b2 = wk.in_b.entries[e2];
          acc2 += wrow[b2.pq] * b2.sign * crow[b2.source];
        }
        acc += 0.5 * b1.sign * acc2;
      }
      srow[jb] += acc;
    }
  });
}

Eigen::VectorXd FciSpace::sigma(const Eigen::VectorXd& c) const {
  Eigen::VectorXd out(c.size());
  sigma(c.data(), out.data());
  return out;
}

Eigen::VectorXcd FciSpace::sigma(const Eigen::VectorXcd& c) const {
  Eigen::VectorXd re = c.real(), im = c.imag();
  Eigen::VectorXd sre(c.size()), sim(c.size());
  sigma(re.data(), sre.data());
  sigma(im.data(), sim.data());
  Eigen::VectorXcd out(c.size());
  out.real() = sre;
  out.imag() = sim;
  return out;
}

Eigen::VectorXd FciSpace::diagonal() const {
  int n = ham_.n_orb;
  int na = alpha_.size(), nb = beta_.size();
  Eigen::VectorXd diag(dim());
  std::vector<std::vector<int>> occ_a(na), occ_b(nb);
  for (int i = 0; i < na; ++i) occ_a[i] = occupied_list(alpha_.strings[i], n);
  for (int i = 0; i < nb; ++i) occ_b[i] = occupied_list(beta_.strings[i], n);
  for (int ia = 0; ia < na; ++ia) {
    double ea = 0.0;
    for (int p : occ_a[ia]) ea += ham_.h1(p, p);
    for (int p : occ_a[ia])
      for (int q : occ_a[ia])
        if (p != q) ea += 0.5 * (ham_.eri(p, p, q, q) - ham_.eri(p, q, q, p));
    for (int ib = 0; ib < nb; ++ib) {
      double e = ea;
      for (int p : occ_b[ib]) e += ham_.h1(p, p);
      for (int p : occ_b[ib])
        for (int q : occ_b[ib])
          if (p != q) e += 0.5 * (ham_.eri(p, p, q, q) - ham_.eri(p, q, q, p));
      for (int p : occ_a[ia])
        for (int q : occ_b[ib]) e += ham_.eri(p, p, q, q);
      diag[index(ia, ib)] = e;
    }
  }
  return diag;
}

FCIResult fci_ground_state(const MOHamiltonian& ham, int n_alpha, int n_beta,
                           const FciOptions& opts) {
  auto space = std::make_shared<FciSpace>(ham, n_alpha, n_beta);
  std::int64_t dim = space->dim();
  require(dim <= opts.dim_cap, "dim_cap",
          "determinant space dimension " + std::to_string(dim) + " exceeds cap " +
              std::to_string(opts.dim_cap));

  Eigen::VectorXd diag = space->diagonal();

  FCIResult res;
  res.n_orb = ham.n_orb;
  res.n_alpha = n_alpha;
  res.n_beta = n_beta;
  res.e_nuc = ham.e_nuc;
  res.space = space;

  if (dim == 1) {
    res.e0 = diag[0] + ham.e_nuc;
    res.ground = Eigen::VectorXd::Ones(1);
    res.residual_norm = 0.0;
    return res;
  }

  // Davidson with a diagonal preconditioner; start from the lowest-diagonal
  // determinant (ties -> lowest index).
  Eigen::Index start;
  diag.minCoeff(&start);
  std::vector<Eigen::VectorXd> basis, hbasis;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v[start] = 1.0;
  basis.push_back(v);
  hbasis.push_back(space->sigma(v));

  double theta = 0.0, theta1 = 0.0;
  Eigen::VectorXd x;
  int iter = 0;
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    int m = static_cast<int>(basis.size());
    Eigen::MatrixXd hsub(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        hsub(i, j) = basis[i].dot(hbasis[j]);
        hsub(j, i) = hsub(i, j);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hsub);
    theta = es.eigenvalues()(0);
    theta1 = m > 1 ? es.eigenvalues()(1) : theta + 1.0;
    Eigen::VectorXd y = es.eigenvectors().col(0);

    x = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd hx = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i) {
      x += y(i) * basis[i];
      hx += y(i) * hbasis[i];
    }
    Eigen::VectorXd r = hx - theta * x;
    res.residual_norm = r.norm();
    if (res.residual_norm < opts.residual_tol) break;

    // preconditioned correction
    Eigen::VectorXd d(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
      double denom = theta - diag[i];
      if (std::abs(denom) < 1e-8) denom = denom < 0 ? -1e-8 : 1e-8;
      d[i] = r[i] / denom;
    }

    if (m >= opts.max_subspace) {
      // restart with the current Ritz vector
      Eigen::VectorXd x2 = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < m; ++i) x2 += es.eigenvectors()(i, 1) * basis[i];
      basis.clear();
      hbasis.clear();
      basis.push_back(x.normalized());
      hbasis.push_back(space->sigma(basis[0]));
      x2 -= x2.dot(basis[0]) * basis[0];
      if (x2.norm() > 1e-8) {
        basis.push_back(x2.normalized());
        hbasis.push_back(space->sigma(basis[1]));
      }
    }
    for (int repeat = 0; repeat < 2; ++repeat)
      for (const auto& b : basis) d -= d.dot(b) * b;
    double dn = d.norm();
    if (dn < 1e-12) break;  // stagnation: subspace already spans the correction
    d /= dn;
    basis.push_back(d);
    hbasis.push_back(space->sigma(d));
  }

  if (res.residual_norm >= opts.residual_tol)
    fail("davidson_nonconvergence",
         "Davidson residual " + std::to_string(res.residual_norm) + " after " +
             std::to_string(iter) + " iterations");

  // Deterministic representative: largest-magnitude component positive.
  Eigen::Index imax;
  x.cwiseAbs().maxCoeff(&imax);
  if (x[imax] < 0.0) x = -x;
  res.ground = x / x.norm();
  res.e0 = theta + ham.e_nuc;
  res.iterations = iter;
  res.degenerate = (theta1 - theta) < 1e-6;
  return res;
}

SpinRdms sector_rdms(const Eigen::VectorXd& c, const SpinStrings& alpha,
                     const SpinStrings& beta, int n_orb) {
  int n = n_orb;
  int na = alpha.size(), nb = beta.size();
  auto index = [nb](int ia, int ib) { return static_cast<std::int64_t>(ia) * nb + ib; };

  SpinRdms rdms;
  rdms.alpha = Eigen::MatrixXd::Zero(n, n);
  rdms.beta = Eigen::MatrixXd::Zero(n, n);
  rdms.pair_diag = Eigen::VectorXd::Zero(n);

  for (int ia = 0; ia < na; ++ia) {
    for (const auto& e : alpha.excitations[ia]) {
      double dot = 0.0;
      for (int ib = 0; ib < nb; ++ib) dot += c[index(e.target, ib)] * c[index(ia, ib)];
      rdms.alpha(e.p, e.q) += e.sign * dot;
    }
  }
  for (int ib = 0; ib < nb; ++ib) {
    for (const auto& e : beta.excitations[ib]) {
      double dot = 0.0;
      for (int ia = 0; ia < na; ++ia) dot += c[index(ia, e.target)] * c[index(ia, ib)];
      rdms.beta(e.p, e.q) += e.sign * dot;
    }
  }
  for (int ia = 0; ia < na; ++ia) {
    std::uint32_t ma = alpha.strings[ia];
    for (int ib = 0; ib < nb; ++ib) {
      std::uint32_t both = ma & beta.strings[ib];
      double w = c[index(ia, ib)] * c[index(ia, ib)];
      for (int p = 0; p < n; ++p)
        if (both & (1u << p)) rdms.pair_diag[p] += w;
    }
  }
  return rdms;
}

SpinRdms compute_rdms(const FCIResult& fci) {
  require(fci.space != nullptr, "bad_state", "FCI result has no attached space");
  return sector_rdms(fci.ground, fci.space->alpha(), fci.space->beta(), fci.n_orb);
}

OrbitalEntropyReport orbital_entropies(const SpinRdms& rdms, bool degenerate_state) {
  int n = static_cast<int>(rdms.pair_diag.size());
  OrbitalEntropyReport rep;
  rep.occupation_probs.resize(n, 4);
  rep.entropy.resize(n);
  rep.threshold = 0.1 * std::log(4.0);
  rep.degenerate_state = degenerate_state;

  for (int p = 0; p < n; ++p) {
    double da = rdms.alpha(p, p), db = rdms.beta(p, p), d2 = rdms.pair_diag[p];
    double w[4] = {1.0 - da - db + d2, da - d2, db - d2, d2};
    double s = 0.0;
    for (int t = 0; t < 4; ++t) {
      require(w[t] > -1e-6 && w[t] < 1.0 + 1e-6, "numeric",
              "occupation probability outside [0,1]");
      w[t] = std::clamp(w[t], 0.0, 1.0);
      rep.occupation_probs(p, t) = w[t];
      if (w[t] > 0.0) s -= w[t] * std::log(w[t]);
    }
    rep.entropy[p] = s;
    if (s > rep.threshold) rep.recommended.push_back(p);
  }
  return rep;
}

SystemSolution solve_system(const Geometry& geom, double scf_level_shift) {
  SystemSolution sol;
  BasisSet basis = build_sto3g(geom);
  sol.ints = compute_integrals(geom, basis);
  sol.n_electrons = geom.total_nuclear_charge();
  ScfOptions opts;
  opts.level_shift = scf_level_shift;
  sol.mos = run_rhf(sol.ints, sol.n_electrons, opts);
  sol.moham = transform_to_mo(sol.ints, sol.mos);
  return sol;
}

double fci_total_energy(const Geometry& geom, std::int64_t dim_cap) {
  SystemSolution sol = solve_system(geom);
  FciOptions fopts;
  fopts.dim_cap = dim_cap;
  int np = sol.n_electrons / 2;
  FCIResult fci = fci_ground_state(sol.moham, np, np, fopts);
  return fci.e0;
}

double reference_force(const Geometry& geom, int atom, int axis, double delta_angstrom,
                       const ReferenceForceOptions& opts) {
  require(delta_angstrom > 0.0, "bad_displacement", "displacement must be positive");
  double ep = fci_total_energy(displace(geom, atom, axis, delta_angstrom), opts.dim_cap);
  double em = fci_total_energy(displace(geom, atom, axis, -delta_angstrom), opts.dim_cap);
  return -(ep - em) / (2.0 * delta_angstrom);
}

double reference_rhf_force(const Geometry& geom, int atom, int axis, double delta_angstrom) {
  require(delta_angstrom > 0.0, "bad_displacement", "displacement must be positive");
  auto energy = [&](const Geometry& g) { return solve_system(g).mos.e_total; };
  double ep = energy(displace(geom, atom, axis, delta_angstrom));
  double em = energy(displace(geom, atom, axis, -delta_angstrom));
  return -(ep - em) / (2.0 * delta_angstrom);
}

}  // namespace qcafqmc
