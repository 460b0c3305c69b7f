#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcafqmc/afqmc.hpp"
#include "qcafqmc/corrsamp.hpp"

namespace qcafqmc {

struct ScanConfig {
  std::string kind;         // "diatomic" | "chain"
  std::string element = "H";
  int n_atoms = 2;
  std::vector<double> bond_lengths_angstrom;
  std::vector<std::string> methods;
};

struct RunConfig {
  // system
  std::string xyz_path;
  std::string xyz_inline;
  std::string fcidump_path;
  std::string basis = "sto-3g";

  std::string method = "rhf";  // rhf | fci | afqmc | qc-afqmc
  std::string trial = "upccd";

  ActiveSpec active;

  AfqmcProtocol protocol;

  bool has_force = false;
  DisplacementSpec force;

  bool has_scan = false;
  ScanConfig scan;

  std::uint64_t seed_global = 7;
  std::uint64_t seed_shadow = 77;

  std::string overlap_mode = "exact";
  int overlap_samples = 1;
  double overlap_sigma = 0.0;

  double chol_threshold = 1e-8;
  double scf_level_shift = 0.2;
  std::int64_t fci_dim_cap = 4000000;
  std::string output_dir = "qcafqmc_out";

  Geometry load_geometry() const;
  AssembleOptions assemble_options() const;
  AfqmcProtocol protocol_with_seed() const;
};

// Strict parse: unknown keys are rejected, defaults materialized. The
// returned resolved JSON echoes every effective setting.
RunConfig parse_config(const std::string& json_text, std::string* resolved_json = nullptr);
RunConfig load_config(const std::string& path, std::string* resolved_json = nullptr);

// Dotted-path overrides ("protocol.n_walkers=512"); values parsed as JSON
// scalars with a string fallback.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

}  // namespace qcafqmc
