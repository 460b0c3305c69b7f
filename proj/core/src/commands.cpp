#include "qcafqmc/commands.hpp"

#include <iostream>

#include <json.hpp>

#include "qcafqmc/artifacts.hpp"
#include "qcafqmc/constants.hpp"
#include "qcafqmc/error.hpp"
#include "qcafqmc/fcidump.hpp"

namespace qcafqmc {

using nlohmann::json;

namespace {

void write_error(const std::string& outdir, const std::string& code,
                 const std::string& message) {
  json e;
  e["error"] = {{"code", code}, {"message", message}};
  try {
    ensure_directory(outdir);
    write_text_file(outdir + "/error.json", e.dump(2) + "\n");
  } catch (...) {
  }
  std::cerr << "error [" << code << "]: " << message << "\n";
}

template <typename Fn>
int guarded(const RunConfig& cfg, const std::string& resolved_json, Fn&& fn) {
  try {
    ensure_directory(cfg.output_dir);
    write_text_file(cfg.output_dir + "/resolved_config.json", resolved_json + "\n");
    fn();
    return 0;
  } catch (const Error& e) {
    write_error(cfg.output_dir, e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    write_error(cfg.output_dir, "internal", e.what());
    return 1;
  }
}

json base_summary(const RunConfig& cfg) {
  json s;
  s["method"] = cfg.method;
  s["code_version"] = code_version;
  s["seed"] = cfg.seed_global;
  s["shadow_seed"] = cfg.seed_shadow;
  s["protocol"] = {{"n_walkers", cfg.protocol.n_walkers},
                   {"n_blocks", cfg.protocol.n_blocks},
                   {"steps_per_block", cfg.protocol.steps_per_block},
                   {"dt", cfg.protocol.dt},
                   {"weight_cap", cfg.protocol.weight_cap},
                   {"equilibration_fraction", cfg.protocol.equilibration_fraction},
                   {"reortho_interval", cfg.protocol.reortho_interval}};
  return s;
}

std::vector<ScanEntry> scan_entries(const ScanConfig& scan) {
  std::vector<ScanEntry> entries;
  for (double r : scan.bond_lengths_angstrom) {
    ScanEntry e;
    e.bond_length_angstrom = r;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%d_%.4f", scan.element.c_str(), scan.n_atoms, r);
    e.geometry_id = buf;
    e.geometry = linear_chain(scan.element, scan.n_atoms, r);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

int cmd_energy(const RunConfig& cfg, const std::string& resolved_json) {
  return guarded(cfg, resolved_json, [&]() {
    json summary = base_summary(cfg);

    if (cfg.method == "fci" && !cfg.fcidump_path.empty()) {
      FcidumpData data = load_fcidump(cfg.fcidump_path);
      FciOptions fopts;
      fopts.dim_cap = cfg.fci_dim_cap;
      FCIResult fci =
          fci_ground_state(data.ham, data.n_electrons / 2, data.n_electrons / 2, fopts);
      summary["energy"] = fci.e0;
      summary["energy_err"] = 0.0;
      summary["degenerate_ground_state"] = fci.degenerate;
      write_text_file(cfg.output_dir + "/summary.json", summary.dump(2) + "\n");
      return;
    }

    Geometry geom = cfg.load_geometry();
    if (cfg.method == "rhf") {
      SystemSolution sol = solve_system(geom, cfg.scf_level_shift);
      summary["energy"] = sol.mos.e_total;
      summary["energy_err"] = 0.0;
      summary["scf_iterations"] = sol.mos.n_iter;
    } else if (cfg.method == "fci") {
      SystemSolution sol = solve_system(geom, cfg.scf_level_shift);
      FciOptions fopts;
      fopts.dim_cap = cfg.fci_dim_cap;
      FCIResult fci =
          fci_ground_state(sol.moham, sol.n_electrons / 2, sol.n_electrons / 2, fopts);
      summary["energy"] = fci.e0;
      summary["energy_err"] = 0.0;
      summary["e_rhf"] = sol.mos.e_total;
      summary["degenerate_ground_state"] = fci.degenerate;
    } else {
      SinglePointResult res =
          run_single_point(geom, cfg.assemble_options(), cfg.protocol_with_seed());
      summary["energy"] = res.series.mean;
      summary["energy_err"] = res.series.stderr_;
      summary["e_rhf"] = res.e_rhf;
      summary["e_trial"] = res.e_trial;
      summary["trial"] = cfg.trial;
      summary["pivot_hash"] = hex64(res.pivot_hash);
      summary["trial_hash"] = hex64(res.trial_hash);
      summary["n_equilibration_blocks"] = res.series.n_equilibration;
      write_text_file(cfg.output_dir + "/energy_series.csv", res.series.to_csv());
    }
    write_text_file(cfg.output_dir + "/summary.json", summary.dump(2) + "\n");
  });
}

int cmd_force(const RunConfig& cfg, const std::string& resolved_json) {
  return guarded(cfg, resolved_json, [&]() {
    require(cfg.has_force, "bad_config", "force command requires a force spec");

    if (cfg.has_scan) {
      ScanOptions sopts;
      sopts.methods = cfg.scan.methods;
      sopts.disp = cfg.force;
      sopts.assemble = cfg.assemble_options();
      sopts.protocol = cfg.protocol_with_seed();
      std::vector<ScanRow> rows = scan_forces(scan_entries(cfg.scan), sopts);

      CsvWriter csv({"geometry_id", "bond_length_A", "method", "energy_Ha", "energy_err",
                     "force_HaA", "force_err", "rho", "n_walkers", "n_blocks", "dt",
                     "delta_A", "seed"});
      json jrows = json::array();
      for (const auto& r : rows) {
        csv.add_row({r.geometry_id, CsvWriter::num(r.bond_length_angstrom), r.method,
                     CsvWriter::num(r.energy), CsvWriter::num(r.energy_err),
                     CsvWriter::num(r.force), CsvWriter::num(r.force_err),
                     CsvWriter::num(r.rho), std::to_string(cfg.protocol.n_walkers),
                     std::to_string(cfg.protocol.n_blocks), CsvWriter::num(cfg.protocol.dt),
                     CsvWriter::num(cfg.force.delta_angstrom),
                     std::to_string(cfg.seed_global)});
        json jr = {{"geometry_id", r.geometry_id},
                   {"bond_length_A", r.bond_length_angstrom},
                   {"method", r.method},
                   {"energy_Ha", r.energy},
                   {"energy_err", r.energy_err},
                   {"force_HaA", r.force},
                   {"force_err", r.force_err},
                   {"rho", r.rho},
                   {"ok", r.ok}};
        if (!r.ok) jr["error"] = r.error;
        jrows.push_back(jr);
      }
      csv.save(cfg.output_dir + "/scan.csv");
      json out = base_summary(cfg);
      out["rows"] = jrows;
      write_text_file(cfg.output_dir + "/scan.json", out.dump(2) + "\n");
      return;
    }

    Geometry geom = cfg.load_geometry();
    json out = base_summary(cfg);
    out["force_spec"] = {{"atom", cfg.force.atom},
                         {"axis", cfg.force.axis},
                         {"delta_angstrom", cfg.force.delta_angstrom}};

    if (cfg.method == "rhf") {
      out["force_HaA"] = reference_rhf_force(geom, cfg.force.atom, cfg.force.axis,
                                             cfg.force.delta_angstrom);
      out["force_err"] = 0.0;
    } else if (cfg.method == "fci") {
      ReferenceForceOptions ropts;
      ropts.dim_cap = cfg.fci_dim_cap;
      out["force_HaA"] =
          reference_force(geom, cfg.force.atom, cfg.force.axis, cfg.force.delta_angstrom,
                          ropts);
      out["force_err"] = 0.0;
    } else {
      CorrelatedRunPlan plan = plan_correlated_run(geom, cfg.force, cfg.assemble_options(),
                                                   cfg.protocol_with_seed());
      ForceEstimate est = execute_force(plan);
      out["force_HaA"] = est.value;
      out["force_err"] = est.sigma;
      out["rho"] = est.rho;
      out["sigma_uncorrelated"] = est.sigma_uncorrelated;
      out["reduction_factor"] = est.reduction_factor;
      out["e_plus"] = est.e_plus;
      out["e_plus_err"] = est.e_plus_err;
      out["e_minus"] = est.e_minus;
      out["e_minus_err"] = est.e_minus_err;
      out["n_paired_blocks"] = est.n_paired_blocks;
      out["replay_reset"] = est.replay_reset;
      out["warnings"] = est.warnings;
      out["pivot_hash"] = hex64(plan.pivot_hash);
      out["trial_hash"] = hex64(plan.trial_hash);
      save_pivots(plan.ref.chol, cfg.output_dir + "/pivots.json");
      write_text_file(cfg.output_dir + "/trial.json", trial_to_json(plan.ref.trial) + "\n");
      write_text_file(cfg.output_dir + "/energy_series_plus.csv", est.series_plus.to_csv());
      write_text_file(cfg.output_dir + "/energy_series_minus.csv",
                      est.series_minus.to_csv());
    }
    write_text_file(cfg.output_dir + "/force.json", out.dump(2) + "\n");
  });
}

int cmd_active_space(const RunConfig& cfg, const std::string& resolved_json) {
  return guarded(cfg, resolved_json, [&]() {
    Geometry geom = cfg.load_geometry();
    SystemSolution sol = solve_system(geom, cfg.scf_level_shift);
    json out = base_summary(cfg);

    if (cfg.active.mode == ActiveSpec::Mode::explicit_list) {
      out["mode"] = "explicit";
      out["recommended"] = cfg.active.orbitals;
      out["note"] = "manual selection echoed without entropy analysis";
      write_text_file(cfg.output_dir + "/entropy_report.json", out.dump(2) + "\n");
      return;
    }

    FciOptions fopts;
    fopts.dim_cap = cfg.fci_dim_cap;
    FCIResult fci =
        fci_ground_state(sol.moham, sol.n_electrons / 2, sol.n_electrons / 2, fopts);
    OrbitalEntropyReport rep = orbital_entropies(compute_rdms(fci), fci.degenerate);

    out["mode"] = "entropy";
    out["threshold"] = rep.threshold;
    out["degenerate_ground_state"] = rep.degenerate_state;
    out["e_fci"] = fci.e0;
    json orbitals = json::array();
    for (int p = 0; p < rep.entropy.size(); ++p)
      orbitals.push_back({{"orbital", p},
                          {"entropy", rep.entropy[p]},
                          {"w_empty", rep.occupation_probs(p, 0)},
                          {"w_up", rep.occupation_probs(p, 1)},
                          {"w_down", rep.occupation_probs(p, 2)},
                          {"w_updown", rep.occupation_probs(p, 3)}});
    out["orbitals"] = orbitals;
    out["recommended"] = rep.recommended;
    if (rep.recommended.empty()) {
      out["note"] = "no orbitals exceed threshold; max entropy " +
                    std::to_string(rep.entropy.maxCoeff());
    }
    write_text_file(cfg.output_dir + "/entropy_report.json", out.dump(2) + "\n");

    CsvWriter csv({"orbital", "entropy", "threshold"});
    for (int p = 0; p < rep.entropy.size(); ++p)
      csv.add_row({std::to_string(p), CsvWriter::num(rep.entropy[p]),
                   CsvWriter::num(rep.threshold)});
    csv.save(cfg.output_dir + "/entropy.csv");
  });
}

}  // namespace qcafqmc
