#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qcafqmc/afqmc.hpp"
#include "qcafqmc/alignment.hpp"
#include "qcafqmc/fci.hpp"
#include "qcafqmc/geometry.hpp"

namespace qcafqmc {

struct DisplacementSpec {
  int atom = 0;
  int axis = 2;
  double delta_angstrom = 0.0;
};

// How the active window is chosen before trial optimization.
struct ActiveSpec {
  enum class Mode { full, explicit_list, entropy };
  Mode mode = Mode::full;
  std::vector<int> orbitals;  // explicit_list
  double threshold = 0.0;     // entropy mode; <= 0 means 0.1 ln 4
};

ActiveSpacePartition resolve_active_space(const ActiveSpec& spec, const SystemSolution& sol,
                                          std::int64_t fci_dim_cap = 4000000);

// Reference-geometry assembly shared by energy runs and force legs: resolved
// partition, optimized trial, kappa-rotated run basis, reference Cholesky.
struct AssembledReference {
  SystemSolution sol;
  ActiveSpacePartition part;
  TrialState trial;
  Eigen::MatrixXd c_run;        // canonical MOs with rotated active columns
  MOHamiltonian run_ham;        // in the run basis
  CholeskyFactorization chol;   // reference decomposition
  double e_core = 0.0;
  double e_shift = 0.0;         // trial total energy
};

struct AssembleOptions {
  TrialKind trial_kind = TrialKind::upccd;
  ActiveSpec active;
  double chol_threshold = 1e-8;
  OverlapEstimator estimator;
  double scf_level_shift = 0.2;
  std::int64_t fci_dim_cap = 4000000;
};

AssembledReference assemble_reference(const Geometry& geom, const AssembleOptions& opts);

AfqmcSystem to_afqmc_system(const AssembledReference& ref);

struct SinglePointResult {
  EnergySeries series;
  double e_rhf = 0.0;
  double e_trial = 0.0;
  std::uint64_t pivot_hash = 0;
  std::uint64_t trial_hash = 0;
};

SinglePointResult run_single_point(const Geometry& geom, const AssembleOptions& opts,
                                   const AfqmcProtocol& protocol);

struct CorrelatedRunPlan {
  Geometry reference;
  DisplacementSpec disp;
  AssembleOptions opts;
  AfqmcProtocol protocol;
  std::uint64_t shadow_seed = 0;
  bool independent_control = false;  // decorrelated seeds for the minus leg

  AssembledReference ref;
  Eigen::MatrixXd s_ref;
  AlignmentOptions align;
  std::uint64_t pivot_hash = 0;
  std::uint64_t trial_hash = 0;
};

CorrelatedRunPlan plan_correlated_run(const Geometry& reference, const DisplacementSpec& disp,
                                      const AssembleOptions& opts,
                                      const AfqmcProtocol& protocol);

struct CorrelationDiagnostics {
  double rho = 0.0;
  double sigma_f = 0.0;
  double sigma_f_uncorrelated = 0.0;
  double reduction_factor = 0.0;
  double sigma_f_formula = 0.0;  // (1 - rho) model, reported as a diagnostic
  bool formula_discrepant = false;
};

CorrelationDiagnostics correlation_diagnostics(const std::vector<double>& plus_blocks,
                                               const std::vector<double>& minus_blocks,
                                               double delta_angstrom);

struct ForceEstimate {
  double value = 0.0;  // Ha/Angstrom
  double sigma = 0.0;
  double rho = 0.0;
  double sigma_uncorrelated = 0.0;
  double reduction_factor = 0.0;
  double e_plus = 0.0, e_plus_err = 0.0;
  double e_minus = 0.0, e_minus_err = 0.0;
  int n_paired_blocks = 0;
  bool replay_reset = false;
  std::vector<std::string> warnings;
  EnergySeries series_plus, series_minus;
};

ForceEstimate execute_force(const CorrelatedRunPlan& plan);

struct ScanEntry {
  std::string geometry_id;
  double bond_length_angstrom = 0.0;
  Geometry geometry;
};

struct ScanRow {
  std::string geometry_id;
  double bond_length_angstrom = 0.0;
  std::string method;
  double energy = 0.0, energy_err = 0.0;
  double force = 0.0, force_err = 0.0;
  double rho = 0.0;
  bool ok = true;
  std::string error;
};

struct ScanOptions {
  std::vector<std::string> methods;  // rhf | fci | afqmc | qc-afqmc
  DisplacementSpec disp;
  AssembleOptions assemble;
  AfqmcProtocol protocol;
};

std::vector<ScanRow> scan_forces(const std::vector<ScanEntry>& entries, const ScanOptions& opts);

}  // namespace qcafqmc
