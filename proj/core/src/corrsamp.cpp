#include "qcafqmc/corrsamp.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "qcafqmc/artifacts.hpp"
#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace {

std::uint64_t pivots_hash(const CholeskyFactorization& fac) {
  Fnv64 h;
  h.add(fac.n_orb);
  h.add(fac.threshold);
  for (const auto& [p, q] : fac.pivots) {
    h.add(p);
    h.add(q);
  }
  return h.state;
}

// Canonical MOs with the trial's orbital rotation folded into the active
// columns; the rest of the pipeline sees one consistent run basis.
Eigen::MatrixXd apply_trial_rotation(const Eigen::MatrixXd& c,
                                     const ActiveSpacePartition& part,
                                     const TrialState& trial) {
  if (!trial.has_kappa()) return c;
  Eigen::MatrixXd u = trial.kappa.exp();
  Eigen::MatrixXd out = c;
  Eigen::MatrixXd active(c.rows(), part.n_active());
  for (int k = 0; k < part.n_active(); ++k) active.col(k) = c.col(part.active[k]);
  active = active * u;
  for (int k = 0; k < part.n_active(); ++k) out.col(part.active[k]) = active.col(k);
  return out;
}

TrialState build_trial(TrialKind kind, const MOHamiltonian& active_ham,
                       const ActiveSpacePartition& part, std::int64_t fci_dim_cap) {
  int na = part.n_active_electrons / 2;
  require(part.n_active_electrons % 2 == 0, "bad_partition",
          "closed-shell active space required");
  switch (kind) {
    case TrialKind::single_determinant:
      return vqe_optimize(TrialKind::single_determinant, active_ham, na, na);
    case TrialKind::upccd:
    case TrialKind::oo_upccd:
      return vqe_optimize(kind, active_ham, na, na);
    case TrialKind::multi_determinant: {
      FciOptions fopts;
      fopts.dim_cap = fci_dim_cap;
      FCIResult fci = fci_ground_state(active_ham, na, na, fopts);
      return make_fci_trial(fci);
    }
  }
  fail("bad_config", "unhandled trial kind");
}

}  // namespace

ActiveSpacePartition resolve_active_space(const ActiveSpec& spec, const SystemSolution& sol,
                                          std::int64_t fci_dim_cap) {
  int n_orb = sol.moham.n_orb;
  int n_el = sol.n_electrons;
  switch (spec.mode) {
    case ActiveSpec::Mode::full:
      return ActiveSpacePartition::full(n_orb, n_el);
    case ActiveSpec::Mode::explicit_list:
      return ActiveSpacePartition::from_active_list(spec.orbitals, n_orb, n_el);
    case ActiveSpec::Mode::entropy: {
      FciOptions fopts;
      fopts.dim_cap = fci_dim_cap;
      FCIResult fci = fci_ground_state(sol.moham, n_el / 2, n_el / 2, fopts);
      OrbitalEntropyReport rep = orbital_entropies(compute_rdms(fci), fci.degenerate);
      double thr = spec.threshold > 0.0 ? spec.threshold : rep.threshold;
      std::vector<int> active;
      for (int p = 0; p < n_orb; ++p)
        if (rep.entropy[p] > thr) active.push_back(p);
      require(!active.empty(), "empty_active_space",
              "no orbitals exceed the entropy threshold; largest entropy " +
                  std::to_string(rep.entropy.maxCoeff()));
      return ActiveSpacePartition::from_active_list(active, n_orb, n_el);
    }
  }
  fail("bad_config", "unhandled active-space mode");
}

AssembledReference assemble_reference(const Geometry& geom, const AssembleOptions& opts) {
  AssembledReference ref;
  ref.sol = solve_system(geom, opts.scf_level_shift);
  ref.part = resolve_active_space(opts.active, ref.sol, opts.fci_dim_cap);

  auto [active_ham, e_core] = build_embedding(ref.sol.moham, ref.part);
  ref.trial = build_trial(opts.trial_kind, active_ham, ref.part, opts.fci_dim_cap);

  ref.c_run = apply_trial_rotation(ref.sol.mos.C, ref.part, ref.trial);
  if (ref.trial.has_kappa()) {
    MOSet run_mos = ref.sol.mos;
    run_mos.C = ref.c_run;
    ref.run_ham = transform_to_mo(ref.sol.ints, run_mos);
    auto [active2, e_core2] = build_embedding(ref.run_ham, ref.part);
    ref.e_core = e_core2;
  } else {
    ref.run_ham = ref.sol.moham;
    ref.e_core = e_core;
  }
  ref.chol = cholesky_reference(ref.run_ham, opts.chol_threshold);
  ref.e_shift = ref.trial.energy_active + ref.e_core + ref.run_ham.e_nuc;
  return ref;
}

AfqmcSystem to_afqmc_system(const AssembledReference& ref) {
  AfqmcSystem sys;
  sys.ham = ref.run_ham;
  sys.chol = ref.chol;
  sys.part = ref.part;
  sys.trial = ref.trial;
  sys.e_shift = ref.e_shift;
  return sys;
}

SinglePointResult run_single_point(const Geometry& geom, const AssembleOptions& opts,
                                   const AfqmcProtocol& protocol) {
  AssembledReference ref = assemble_reference(geom, opts);
  AfqmcSystem sys = to_afqmc_system(ref);
  sys.estimator = opts.estimator;
  sys.estimator.shadow_seed = opts.estimator.shadow_seed;

  SinglePointResult out;
  out.series = run_projection(sys, protocol);
  out.e_rhf = ref.sol.mos.e_total;
  out.e_trial = ref.e_shift;
  out.pivot_hash = pivots_hash(ref.chol);
  out.trial_hash = trial_hash(ref.trial);
  return out;
}

CorrelatedRunPlan plan_correlated_run(const Geometry& reference, const DisplacementSpec& disp,
                                      const AssembleOptions& opts,
                                      const AfqmcProtocol& protocol) {
  require(disp.delta_angstrom > 0.0, "bad_displacement",
          "correlated run requires a positive displacement");
  CorrelatedRunPlan plan;
  plan.reference = reference;
  plan.disp = disp;
  plan.opts = opts;
  plan.protocol = protocol;
  plan.shadow_seed = opts.estimator.shadow_seed;
  plan.ref = assemble_reference(reference, opts);
  plan.s_ref = plan.ref.sol.ints.S;
  plan.pivot_hash = pivots_hash(plan.ref.chol);
  plan.trial_hash = trial_hash(plan.ref.trial);
  return plan;
}

namespace {

struct LegSystem {
  AfqmcSystem sys;
  std::vector<std::string> warnings;
};

// Displaced-geometry leg: SCF, alignment onto the reference MOs, frozen
// trial rotation, pivot replay.
LegSystem build_leg(const CorrelatedRunPlan& plan, double signed_delta,
                    const std::vector<std::pair<int, int>>& pivots) {
  LegSystem leg;
  Geometry geom =
      displace(plan.reference, plan.disp.atom, plan.disp.axis, signed_delta);
  SystemSolution sol = solve_system(geom, plan.opts.scf_level_shift);

  AlignmentResult aligned = align_orbitals(plan.ref.sol.mos, plan.s_ref, sol.mos,
                                           sol.ints.S, plan.align);
  leg.warnings = aligned.warnings;

  MOSet run_mos = sol.mos;
  run_mos.C = apply_trial_rotation(aligned.C_aligned, plan.ref.part, plan.ref.trial);
  MOHamiltonian ham = transform_to_mo(sol.ints, run_mos);

  leg.sys.ham = ham;
  leg.sys.chol = cholesky_replay(ham, pivots, plan.opts.chol_threshold);
  leg.sys.part = plan.ref.part;
  leg.sys.trial = plan.ref.trial;
  leg.sys.estimator = plan.opts.estimator;
  leg.sys.e_shift = plan.ref.e_shift;
  return leg;
}

}  // namespace

CorrelationDiagnostics correlation_diagnostics(const std::vector<double>& plus_blocks,
                                               const std::vector<double>& minus_blocks,
                                               double delta_angstrom) {
  require(plus_blocks.size() == minus_blocks.size(), "dim_mismatch",
          "paired block series must have equal length");
  int n = static_cast<int>(plus_blocks.size());
  require(n >= 4, "too_few_blocks", "need at least 4 paired blocks");

  double mp = EnergySeries::blocked_mean(plus_blocks, 0);
  double mm = EnergySeries::blocked_mean(minus_blocks, 0);
  double sp = 0.0, sm = 0.0, cov = 0.0;
  for (int i = 0; i < n; ++i) {
    sp += (plus_blocks[i] - mp) * (plus_blocks[i] - mp);
    sm += (minus_blocks[i] - mm) * (minus_blocks[i] - mm);
    cov += (plus_blocks[i] - mp) * (minus_blocks[i] - mm);
  }
  sp /= (n - 1);
  sm /= (n - 1);
  cov /= (n - 1);

  CorrelationDiagnostics diag;
  double denom = std::sqrt(sp * sm);
  diag.rho = denom > 0.0 ? cov / denom : (cov == 0.0 ? 1.0 : 0.0);
  diag.rho = std::clamp(diag.rho, -1.0, 1.0);

  std::vector<double> fb(n);
  for (int i = 0; i < n; ++i)
    fb[i] = -(plus_blocks[i] - minus_blocks[i]) / (2.0 * delta_angstrom);
  diag.sigma_f = EnergySeries::blocked_stderr(fb, 0);

  double sep = std::sqrt(sp / n), sem = std::sqrt(sm / n);
  diag.sigma_f_uncorrelated =
      std::sqrt(sep * sep + sem * sem) / (2.0 * delta_angstrom);
  double formula_var = sep * sep + sem * sem - 2.0 * diag.rho * sep * sem;
  diag.sigma_f_formula =
      std::sqrt(std::max(0.0, formula_var)) / (2.0 * delta_angstrom);
  diag.reduction_factor =
      diag.sigma_f > 0.0 ? diag.sigma_f_uncorrelated / diag.sigma_f : HUGE_VAL;
  if (diag.sigma_f > 0.0 && diag.sigma_f_formula > 0.0) {
    double r = diag.sigma_f_formula / diag.sigma_f;
    diag.formula_discrepant = r > 3.0 || r < 1.0 / 3.0;
  }
  return diag;
}

ForceEstimate execute_force(const CorrelatedRunPlan& plan) {
  ForceEstimate est;
  std::vector<std::pair<int, int>> pivots = plan.ref.chol.pivots;

  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      LegSystem plus = build_leg(plan, plan.disp.delta_angstrom, pivots);
      LegSystem minus = build_leg(plan, -plan.disp.delta_angstrom, pivots);
      est.warnings = plus.warnings;
      est.warnings.insert(est.warnings.end(), minus.warnings.begin(), minus.warnings.end());

      AfqmcProtocol proto_plus = plan.protocol;
      AfqmcProtocol proto_minus = plan.protocol;
      if (plan.independent_control) proto_minus.seed = plan.protocol.seed ^ 0x9E3779B97F4A7C15ull;

      est.series_plus = run_projection(plus.sys, proto_plus);
      est.series_minus = run_projection(minus.sys, proto_minus);
      break;
    } catch (const Error& e) {
      if (std::string(e.code()) == "replay_invalid" && attempt == 0) {
        // Re-anchor the pivot sequence at the displaced geometry and restart.
        Geometry geom = displace(plan.reference, plan.disp.atom, plan.disp.axis,
                                 plan.disp.delta_angstrom);
        SystemSolution sol = solve_system(geom, plan.opts.scf_level_shift);
        AlignmentResult aligned = align_orbitals(plan.ref.sol.mos, plan.s_ref, sol.mos,
                                                 sol.ints.S, plan.align);
        MOSet run_mos = sol.mos;
        run_mos.C = apply_trial_rotation(aligned.C_aligned, plan.ref.part, plan.ref.trial);
        MOHamiltonian ham = transform_to_mo(sol.ints, run_mos);
        pivots = cholesky_reference(ham, plan.opts.chol_threshold).pivots;
        est.replay_reset = true;
        continue;
      }
      throw;
    }
  }

  int skip_p = est.series_plus.n_equilibration;
  int skip_m = est.series_minus.n_equilibration;
  std::vector<double> pb(est.series_plus.block_energies.begin() + skip_p,
                         est.series_plus.block_energies.end());
  std::vector<double> mb(est.series_minus.block_energies.begin() + skip_m,
                         est.series_minus.block_energies.end());

  CorrelationDiagnostics diag =
      correlation_diagnostics(pb, mb, plan.disp.delta_angstrom);

  std::vector<double> fb(pb.size());
  for (std::size_t i = 0; i < pb.size(); ++i)
    fb[i] = -(pb[i] - mb[i]) / (2.0 * plan.disp.delta_angstrom);

  est.value = EnergySeries::blocked_mean(fb, 0);
  est.sigma = diag.sigma_f;
  est.rho = diag.rho;
  est.sigma_uncorrelated = diag.sigma_f_uncorrelated;
  est.reduction_factor = diag.reduction_factor;
  est.e_plus = est.series_plus.mean;
  est.e_plus_err = est.series_plus.stderr_;
  est.e_minus = est.series_minus.mean;
  est.e_minus_err = est.series_minus.stderr_;
  est.n_paired_blocks = static_cast<int>(fb.size());
  if (diag.formula_discrepant)
    est.warnings.push_back("rho-formula force error disagrees with the paired estimator");
  return est;
}

std::vector<ScanRow> scan_forces(const std::vector<ScanEntry>& entries,
                                 const ScanOptions& opts) {
  std::vector<ScanRow> rows;
  for (const auto& entry : entries) {
    for (const auto& method : opts.methods) {
      ScanRow row;
      row.geometry_id = entry.geometry_id;
      row.bond_length_angstrom = entry.bond_length_angstrom;
      row.method = method;
      try {
        if (method == "rhf") {
          row.energy = solve_system(entry.geometry, opts.assemble.scf_level_shift).mos.e_total;
          row.force = reference_rhf_force(entry.geometry, opts.disp.atom, opts.disp.axis,
                                          opts.disp.delta_angstrom);
        } else if (method == "fci") {
          row.energy = fci_total_energy(entry.geometry, opts.assemble.fci_dim_cap);
          ReferenceForceOptions ropts;
          ropts.dim_cap = opts.assemble.fci_dim_cap;
          row.force = reference_force(entry.geometry, opts.disp.atom, opts.disp.axis,
                                      opts.disp.delta_angstrom, ropts);
        } else if (method == "afqmc" || method == "qc-afqmc") {
          AssembleOptions aopts = opts.assemble;
          if (method == "afqmc") {
            aopts.trial_kind = TrialKind::single_determinant;
            aopts.active = ActiveSpec{};  // single-determinant rows use the full space
          }
          CorrelatedRunPlan plan =
              plan_correlated_run(entry.geometry, opts.disp, aopts, opts.protocol);
          ForceEstimate f = execute_force(plan);
          row.energy = f.e_plus;
          row.energy_err = f.e_plus_err;
          row.force = f.value;
          row.force_err = f.sigma;
          row.rho = f.rho;
        } else {
          fail("bad_config", "unknown method '" + method + "'");
        }
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qcafqmc
