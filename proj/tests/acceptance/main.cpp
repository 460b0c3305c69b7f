// Acceptance suite: one pass/fail line per criterion, tolerances pinned in
// code. Usage: qcafqmc_acceptance [--criterion N]... [--long]
// Exit status 0 iff every executed criterion passes.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qcafqmc/afqmc.hpp"
#include "qcafqmc/corrsamp.hpp"
#include "qcafqmc/error.hpp"
#include "qcafqmc/fci.hpp"
#include "qcafqmc/geometry.hpp"
#include "../support/slater_condon.hpp"

using namespace qcafqmc;
using Complex = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool within(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_1() {
  Outcome out;
  const double bond[3] = {1.0, 1.5, 2.0};
  const double e_fci[3] = {-2.166, -1.996, -1.898};
  const double f_fci[3] = {0.169, 0.144, 0.045};
  const double e_rhf[3] = {-2.099, -1.829, -1.576};
  for (int i = 0; i < 3; ++i) {
    Geometry g = linear_chain("H", 4, bond[i]);
    double e = fci_total_energy(g);
    out.check(within(e, e_fci[i], 1e-3),
              "H4 FCI E @" + fmt(bond[i]) + " = " + fmt(e) + " vs " + fmt(e_fci[i]));
    double f = reference_force(g, 3, 2, 1e-5);
    out.check(within(f, f_fci[i], 2e-3),
              "H4 FCI F @" + fmt(bond[i]) + " = " + fmt(f) + " vs " + fmt(f_fci[i]));
    double er = solve_system(g).mos.e_total;
    out.check(within(er, e_rhf[i], 1e-3),
              "H4 RHF E @" + fmt(bond[i]) + " = " + fmt(er) + " vs " + fmt(e_rhf[i]));
  }
  return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_2() {
  Outcome out;
  const double bond[4] = {1.2, 1.6, 2.0, 2.5};
  const double e_fci[4] = {-107.6773, -107.5421, -107.4552, -107.4404};
  const double f_fci[4] = {-0.0235, -0.3695, -0.0842, -0.0074};
  const double e_rhf[4] = {-107.4878, -107.1848, -106.8715, -106.6170};
  for (int i = 0; i < 4; ++i) {
    Geometry g = diatomic("N", bond[i]);
    double e = fci_total_energy(g);
    out.check(within(e, e_fci[i], 1e-3),
              "N2 FCI E @" + fmt(bond[i]) + " = " + fmt(e) + " vs " + fmt(e_fci[i]));
    double f = reference_force(g, 1, 2, 1e-6);
    out.check(within(f, f_fci[i], 2e-3),
              "N2 FCI F @" + fmt(bond[i]) + " = " + fmt(f) + " vs " + fmt(f_fci[i]));
    double er = solve_system(g).mos.e_total;
    out.check(within(er, e_rhf[i], 1e-3),
              "N2 RHF E @" + fmt(bond[i]) + " = " + fmt(er) + " vs " + fmt(e_rhf[i]));
  }
  return out;
}

// --------------------------------------------------- shared AFQMC row checker
struct RowTarget {
  double bond, e, e_err, f, f_err;
};

Outcome run_rows(const std::string& label, const std::string& element, int n_atoms,
                 int force_atom, const std::vector<RowTarget>& rows,
                 const AssembleOptions& opts, const AfqmcProtocol& protocol,
                 double delta_angstrom) {
  Outcome out;
  for (const auto& row : rows) {
    Geometry g = linear_chain(element, n_atoms, row.bond);
    DisplacementSpec disp{force_atom, 2, delta_angstrom};
    CorrelatedRunPlan plan = plan_correlated_run(g, disp, opts, protocol);
    ForceEstimate est = execute_force(plan);

    double fe = std::sqrt(row.f_err * row.f_err + est.sigma * est.sigma);
    out.check(within(est.value, row.f, 3.0 * fe),
              label + " F @" + fmt(row.bond) + " = " + fmt(est.value) + "(" +
                  fmt(est.sigma) + ") vs " + fmt(row.f) + "(" + fmt(row.f_err) + ")");
    double ee = std::sqrt(row.e_err * row.e_err + est.e_plus_err * est.e_plus_err);
    out.check(within(est.e_plus, row.e, 3.0 * ee),
              label + " E @" + fmt(row.bond) + " = " + fmt(est.e_plus) + "(" +
                  fmt(est.e_plus_err) + ") vs " + fmt(row.e) + "(" + fmt(row.e_err) + ")");
    std::printf("    %s r=%.2f: F = %.4f(%.4f) [table %.4f(%.4f)]  E = %.4f(%.4f) "
                "[table %.4f(%.4f)] rho=%.6f\n",
                label.c_str(), row.bond, est.value, est.sigma, row.f, row.f_err, est.e_plus,
                est.e_plus_err, row.e, row.e_err, est.rho);
    std::fflush(stdout);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_3() {
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  opts.active = ActiveSpec{};  // full space
  AfqmcProtocol proto;
  proto.n_walkers = 256;
  proto.n_blocks = 80;
  proto.steps_per_block = 10;
  proto.dt = 0.02;
  proto.seed = 7001;
  std::vector<RowTarget> rows = {{1.0, -2.164, 0.002, 0.171, 0.002},
                                 {1.5, -1.976, 0.007, 0.177, 0.007},
                                 {2.0, -1.864, 0.017, 0.033, 0.029}};
  return run_rows("H4 QC-AFQMC", "H", 4, 3, rows, opts, proto, 1e-5);
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_4() {
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  opts.active.mode = ActiveSpec::Mode::explicit_list;
  opts.active.orbitals = {4, 5, 6, 7, 8, 9};  // (6e,6o) valence window
  AfqmcProtocol proto;
  proto.n_walkers = 1024;
  proto.n_blocks = 150;
  proto.steps_per_block = 10;
  proto.dt = 0.01;
  proto.seed = 7002;
  std::vector<RowTarget> rows = {{1.2, -107.6724, 0.0009, -0.0338, 0.0021},
                                 {1.6, -107.5351, 0.0010, -0.4160, 0.0013},
                                 {2.0, -107.4274, 0.0013, -0.1786, 0.0069},
                                 {2.5, -107.3950, 0.0024, -0.0182, 0.0038}};
  return run_rows("N2 QC-AFQMC", "N", 2, 1, rows, opts, proto, 1e-6);
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_5() {
  AssembleOptions opts;
  opts.trial_kind = TrialKind::single_determinant;

  AfqmcProtocol h4_proto;
  h4_proto.n_walkers = 256;
  h4_proto.n_blocks = 80;
  h4_proto.dt = 0.02;
  h4_proto.seed = 7003;
  std::vector<RowTarget> h4_rows = {{1.0, -2.158, 0.004, 0.188, 0.003},
                                    {1.5, -1.949, 0.010, 0.209, 0.006},
                                    {2.0, -1.749, 0.012, 0.136, 0.005}};
  Outcome a = run_rows("H4 ph-AFQMC", "H", 4, 3, h4_rows, opts, h4_proto, 1e-5);

  AfqmcProtocol n2_proto;
  n2_proto.n_walkers = 1024;
  n2_proto.n_blocks = 150;
  n2_proto.dt = 0.01;
  n2_proto.seed = 7004;
  std::vector<RowTarget> n2_rows = {{1.2, -107.6633, 0.0025, -0.1010, 0.0060},
                                    {1.6, -107.4725, 0.0048, -0.6678, 0.0070},
                                    {2.0, -107.2214, 0.0053, -0.5563, 0.0058},
                                    {2.5, -107.0155, 0.0065, -0.3301, 0.0039}};
  Outcome b = run_rows("N2 ph-AFQMC", "N", 2, 1, n2_rows, opts, n2_proto, 1e-6);

  Outcome out;
  out.pass = a.pass && b.pass;
  out.detail = a.detail + (a.detail.empty() || b.detail.empty() ? "" : "; ") + b.detail;
  return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_6() {
  Outcome out;
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  AfqmcProtocol proto;
  proto.n_walkers = 256;
  proto.n_blocks = 100;
  proto.dt = 0.01;
  proto.seed = 7005;
  for (double bond : {0.7, 1.0, 1.5, 2.0, 2.5}) {
    Geometry g = linear_chain("H", 6, bond);
    double e_fci = fci_total_energy(g);
    SinglePointResult res = run_single_point(g, opts, proto);
    double err = std::abs(res.series.mean - e_fci);
    std::printf("    H6 r=%.2f: QC-AFQMC %.5f(%.5f) vs FCI %.5f, |err| = %.2f mHa\n", bond,
                res.series.mean, res.series.stderr_, e_fci, 1000.0 * err);
    std::fflush(stdout);
    out.check(err < 5e-3, "H6 @" + fmt(bond) + " error " + fmt(err * 1000) + " mHa");
  }
  return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_7() {
  Outcome out;
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  AfqmcProtocol proto;
  proto.n_walkers = 256;
  proto.n_blocks = 80;
  proto.dt = 0.02;
  proto.seed = 7006;
  DisplacementSpec disp{3, 2, 1e-5};
  Geometry g = linear_chain("H", 4, 1.5);

  CorrelatedRunPlan plan = plan_correlated_run(g, disp, opts, proto);
  ForceEstimate corr = execute_force(plan);

  CorrelatedRunPlan ctrl = plan;
  ctrl.independent_control = true;
  ForceEstimate indep = execute_force(ctrl);

  std::printf("    correlated: rho = %.6f sigma_F = %.4g; independent-seed sigma_F = %.4g\n",
              corr.rho, corr.sigma, indep.sigma);
  out.check(corr.rho > 0.9, "rho = " + fmt(corr.rho) + " <= 0.9");
  out.check(indep.sigma > 2.0 * corr.sigma,
            "variance reduction " + fmt(indep.sigma / corr.sigma) + "x < 2x");
  return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_8() {
  Outcome out;
  struct Case {
    const char* name;
    Geometry geom;
    int atom;
  };
  std::vector<Case> cases = {{"H2", diatomic("H", 0.7414), 1},
                             {"H4", linear_chain("H", 4, 1.0), 3}};
  for (const auto& c : cases) {
    AssembleOptions opts;
    opts.trial_kind = TrialKind::multi_determinant;
    opts.chol_threshold = 1e-12;
    AfqmcProtocol proto;
    proto.n_walkers = 32;
    proto.n_blocks = 20;
    proto.dt = 0.01;
    proto.seed = 7007;
    DisplacementSpec disp{c.atom, 2, 1e-5};
    CorrelatedRunPlan plan = plan_correlated_run(c.geom, disp, opts, proto);
    ForceEstimate est = execute_force(plan);
    double oracle = reference_force(c.geom, c.atom, 2, 1e-5);
    std::printf("    %s: sigma_E = %.2e, F = %.8f vs oracle %.8f\n", c.name,
                est.series_plus.stderr_, est.value, oracle);
    out.check(est.series_plus.stderr_ < 1e-7,
              std::string(c.name) + " block stderr " + fmt(est.series_plus.stderr_));
    out.check(std::abs(est.value - oracle) < 1e-6,
              std::string(c.name) + " force " + fmt(est.value) + " vs oracle " + fmt(oracle));
  }
  return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_9(bool long_tests) {
  Outcome out;
  SystemSolution h4 = solve_system(linear_chain("H", 4, 2.0));
  TrialState up = vqe_optimize(TrialKind::upccd, h4.moham, 2, 2);
  TrialState oo = vqe_optimize(TrialKind::oo_upccd, h4.moham, 2, 2);
  std::printf("    H4 2.0 A: upCCD %.6f, oo-upCCD %.6f (gap %.2f mHa)\n", up.energy_active,
              oo.energy_active, 1000.0 * (up.energy_active - oo.energy_active));
  out.check(oo.energy_active < up.energy_active,
            "oo-upCCD " + fmt(oo.energy_active) + " !< upCCD " + fmt(up.energy_active));

  if (!long_tests) {
    out.detail += (out.detail.empty() ? "" : "; ");
    out.detail += "CO2 stretch target skipped (enable with --long)";
    return out;
  }

  // stretched CO2 at 2.0 A with an entropy-selected active space
  Geometry co2 = parse_xyz("3\n\nO 0 0 -2.0\nC 0 0 0\nO 0 0 2.0");
  SystemSolution sol = solve_system(co2);
  ActiveSpec spec;
  spec.mode = ActiveSpec::Mode::entropy;
  ActiveSpacePartition part = resolve_active_space(spec, sol);
  std::printf("    CO2 entropy-selected active space: %d orbitals, %d electrons\n",
              part.n_active(), part.n_active_electrons);
  auto [act, e_core] = build_embedding(sol.moham, part);
  int na = part.n_active_electrons / 2;
  TrialState up2 = vqe_optimize(TrialKind::upccd, act, na, na);
  TrialState oo2 = vqe_optimize(TrialKind::oo_upccd, act, na, na);
  double gap = up2.energy_active - oo2.energy_active;
  std::printf("    CO2 2.0 A: upCCD %.6f, oo-upCCD %.6f, gap %.1f mHa\n", up2.energy_active,
              oo2.energy_active, 1000.0 * gap);
  out.check(oo2.energy_active < up2.energy_active, "CO2 oo-upCCD not below upCCD");
  out.check(gap > 0.1 && gap < 0.3,
            "CO2 gap " + fmt(gap) + " Ha outside [0.1, 0.3] (200 mHa +- 50%)");
  return out;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion_10() {
  Outcome out;
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> gauss;

  auto random_walker = [&](int n_orb, int n_occ) {
    Eigen::MatrixXcd phi(n_orb, n_occ);
    for (int i = 0; i < n_orb; ++i)
      for (int j = 0; j < n_occ; ++j) phi(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(phi);
    return Eigen::MatrixXcd(qr.householderQ() * Eigen::MatrixXcd::Identity(n_orb, n_occ));
  };

  // vce_overlap vs brute-force full-space expansion, 200 random instances
  OverlapEstimator exact;
  double worst_rel = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    int n_orb = 4 + inst % 3;  // 4..6
    int n_core = inst % 3;
    int n_active = 2 + (inst % 2);
    if (n_core + n_active > n_orb) n_active = n_orb - n_core;
    int n_virt = n_orb - n_core - n_active;
    (void)n_virt;
    std::vector<int> perm(n_orb);
    for (int i = 0; i < n_orb; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ActiveSpacePartition part;
    for (int i = 0; i < n_core; ++i) part.core.push_back(perm[i]);
    for (int i = 0; i < n_active; ++i) part.active.push_back(perm[n_core + i]);
    for (int i = n_core + n_active; i < n_orb; ++i) part.virt.push_back(perm[i]);
    std::sort(part.core.begin(), part.core.end());
    std::sort(part.active.begin(), part.active.end());
    std::sort(part.virt.begin(), part.virt.end());
    int n_ae = 1 + (inst % n_active > 0 ? 1 : 0);
    n_ae = std::min(n_ae, n_active);
    part.n_active_electrons = 2 * n_ae;

    SpinStrings sa(n_active, n_ae);
    DetExpansion trial;
    trial.n_spatial = n_active;
    int n_terms = 1 + inst % 3;
    for (int t = 0; t < n_terms; ++t)
      trial.terms.push_back({Complex(gauss(rng), 0.5 * gauss(rng)),
                             sa.strings[(inst + t) % sa.size()],
                             sa.strings[(inst + 2 * t + 1) % sa.size()]});

    int n_occ = n_core + n_ae;
    Eigen::MatrixXcd wa = random_walker(n_orb, n_occ);
    Eigen::MatrixXcd wb = random_walker(n_orb, n_occ);
    VceOverlap v = vce_overlap(exact, trial, part, wa, wb, 0);

    TrialDetsFull dets = build_full_dets(trial, part, n_orb);
    Complex brute(0.0, 0.0);
    for (std::size_t i = 0; i < dets.coeff.size(); ++i) {
      auto minor_det = [](const Eigen::MatrixXcd& phi, const std::vector<int>& rows) {
        Eigen::MatrixXcd sub(rows.size(), phi.cols());
        for (std::size_t k = 0; k < rows.size(); ++k) sub.row(k) = phi.row(rows[k]);
        return sub.determinant();
      };
      brute += std::conj(dets.coeff[i]) * minor_det(wa, dets.rows_a[i]) *
               minor_det(wb, dets.rows_b[i]);
    }
    double rel = std::abs(v.value - brute) / std::max(1e-30, std::abs(brute));
    worst_rel = std::max(worst_rel, rel);
  }
  std::printf("    vce_overlap worst relative deviation over 200 instances: %.2e\n",
              worst_rel);
  out.check(worst_rel <= 1e-9, "vce_overlap relative deviation " + fmt(worst_rel));

  // local_energy vs dense Hamiltonian-apply, 200 random instances
  SystemSolution sol = solve_system(linear_chain("H", 4, 1.5));
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  AfqmcSystem sys = to_afqmc_system(assemble_reference(linear_chain("H", 4, 1.5), opts));
  TrialDetsFull dets = build_full_dets(sys.trial.expansion, sys.part, 4);
  auto basis = sctest::full_space(4, 2, 2);
  Eigen::MatrixXd h = sctest::dense_hamiltonian(sys.ham, basis);
  double worst_e = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    Eigen::MatrixXcd wa = random_walker(4, 2);
    Eigen::MatrixXcd wb = random_walker(4, 2);
    Complex e = local_energy(dets, sys.ham, sys.chol, wa, wb);
    Eigen::VectorXcd cw = sctest::expand_walker(basis, wa, wb);
    Eigen::VectorXcd hw = h * cw;
    Complex num(0.0, 0.0), den(0.0, 0.0);
    for (std::size_t i = 0; i < dets.coeff.size(); ++i) {
      std::uint32_t am = 0, bm = 0;
      for (int p : dets.rows_a[i]) am |= 1u << p;
      for (int p : dets.rows_b[i]) bm |= 1u << p;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (basis[j].a == am && basis[j].b == bm) {
          num += std::conj(dets.coeff[i]) * hw[j];
          den += std::conj(dets.coeff[i]) * cw[j];
          break;
        }
    }
    worst_e = std::max(worst_e, std::abs(e - (num / den + sys.ham.e_nuc)));
  }
  std::printf("    local_energy worst deviation over 200 instances: %.2e Ha\n", worst_e);
  out.check(worst_e <= 1e-8, "local_energy deviation " + fmt(worst_e));

  // Cholesky reconstruction on every system in the suite
  std::vector<std::pair<std::string, Geometry>> systems = {
      {"H2", diatomic("H", 0.7414)},   {"H4@1.0", linear_chain("H", 4, 1.0)},
      {"H4@1.5", linear_chain("H", 4, 1.5)}, {"H4@2.0", linear_chain("H", 4, 2.0)},
      {"H6@1.0", linear_chain("H", 6, 1.0)}, {"N2@1.2", diatomic("N", 1.2)},
      {"N2@1.6", diatomic("N", 1.6)},  {"N2@2.0", diatomic("N", 2.0)},
      {"N2@2.5", diatomic("N", 2.5)}};
  for (const auto& [name, geom] : systems) {
    SystemSolution s = solve_system(geom);
    CholeskyFactorization fac = cholesky_reference(s.moham, 1e-8);
    double err = fac.max_reconstruction_error(s.moham);
    out.check(err <= 1e-8, name + " Cholesky reconstruction " + fmt(err));
  }
  return out;
}

// --------------------------------------------------------------- criterion 11
Outcome criterion_11() {
  Outcome out;
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  AfqmcProtocol proto;
  proto.n_walkers = 32;
  proto.n_blocks = 8;
  proto.dt = 0.02;
  proto.seed = 7011;
  Geometry g = linear_chain("H", 4, 1.2);

  AssembledReference ref = assemble_reference(g, opts);
  AfqmcSystem sys = to_afqmc_system(ref);
  EnergySeries a = run_projection(sys, proto);
  EnergySeries b = run_projection(sys, proto);
  bool identical = a.block_energies.size() == b.block_energies.size();
  for (std::size_t i = 0; identical && i < a.block_energies.size(); ++i)
    identical = a.block_energies[i] == b.block_energies[i];
  out.check(identical, "repeated run not bitwise identical");

  CholeskyFactorization replayed = cholesky_replay(ref.run_ham, ref.chol.pivots, 1e-8);
  bool same = replayed.n_vectors() == ref.chol.n_vectors();
  for (int k = 0; same && k < ref.chol.n_vectors(); ++k)
    same = (replayed.vectors[k] - ref.chol.vectors[k]).cwiseAbs().maxCoeff() == 0.0;
  out.check(same, "pivot replay at the reference geometry not bitwise identical");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  bool long_tests = false;
  if (const char* env = std::getenv("QCAFQMC_LONG_TESTS"))
    long_tests = std::strcmp(env, "0") != 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      selected.push_back(std::atoi(argv[++i]));
    else if (std::strcmp(argv[i], "--long") == 0)
      long_tests = true;
  }
  if (selected.empty())
    for (int c = 1; c <= 11; ++c) selected.push_back(c);

  using Fn = std::function<Outcome()>;
  std::vector<std::pair<std::string, Fn>> criteria = {
      {"Table 2 FCI/RHF columns (H4/STO-3G)", criterion_1},
      {"Table 1 FCI/RHF columns (N2/STO-3G)", criterion_2},
      {"Table 2 QC-AFQMC statevector rows", criterion_3},
      {"Table 1 QC-AFQMC rows", criterion_4},
      {"ph-AFQMC single-determinant rows", criterion_5},
      {"H6 PES within 5 mHa of FCI", criterion_6},
      {"variance reduction: rho > 0.9 and 2x vs independent seeds", criterion_7},
      {"zero-variance end-to-end with exact trials", criterion_8},
      {"oo-upCCD improvement on stretched H4 (CO2 stretch target gated)",
       [&] { return criterion_9(long_tests); }},
      {"oracle equivalences (vce, local energy, Cholesky)", criterion_10},
      {"determinism and bitwise pivot replay", criterion_11},
  };

  int failures = 0;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(criteria.size())) {
      std::printf("[FAIL] criterion %d: unknown criterion\n", c);
      ++failures;
      continue;
    }
    std::printf("criterion %d: %s ...\n", c, criteria[c - 1].first.c_str());
    std::fflush(stdout);
    Outcome out;
    try {
      out = criteria[c - 1].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", out.pass ? "PASS" : "FAIL", c,
                criteria[c - 1].first.c_str(), out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
