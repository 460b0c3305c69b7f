#include "qcafqmc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail("bad_config", "unknown key '" + it.key() + "' in " + where);
}

int axis_from_string(const std::string& s) {
  if (s == "x" || s == "0") return 0;
  if (s == "y" || s == "1") return 1;
  if (s == "z" || s == "2") return 2;
  fail("bad_config", "axis must be x, y or z");
}

}  // namespace

Geometry RunConfig::load_geometry() const {
  if (!xyz_inline.empty()) return parse_xyz(xyz_inline);
  require(!xyz_path.empty(), "bad_config", "config provides neither xyz nor xyz_inline");
  std::ifstream in(xyz_path);
  require(in.good(), "io_error", "cannot read xyz file " + xyz_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_xyz(ss.str());
}

AssembleOptions RunConfig::assemble_options() const {
  AssembleOptions opts;
  opts.trial_kind = method == "afqmc" ? TrialKind::single_determinant
                                      : trial_kind_from_name(trial);
  opts.active = method == "afqmc" ? ActiveSpec{} : active;
  opts.chol_threshold = chol_threshold;
  opts.scf_level_shift = scf_level_shift;
  opts.fci_dim_cap = fci_dim_cap;
  opts.estimator.mode = overlap_mode == "exact" ? OverlapEstimator::Mode::exact
                                                : OverlapEstimator::Mode::stochastic;
  opts.estimator.shadow_seed = seed_shadow;
  opts.estimator.n_samples = overlap_samples;
  opts.estimator.sigma_ov = overlap_sigma;
  return opts;
}

AfqmcProtocol RunConfig::protocol_with_seed() const {
  AfqmcProtocol p = protocol;
  p.seed = seed_global;
  return p;
}

RunConfig parse_config(const std::string& json_text, std::string* resolved_json) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail("bad_config", std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "bad_config", "config root must be a JSON object");

  reject_unknown(j, {"system", "basis", "method", "trial", "active_space", "protocol",
                     "force", "scan", "seeds", "overlap", "cholesky_threshold",
                     "scf_level_shift", "fci_dim_cap", "output_dir"},
                 "config root");

  RunConfig cfg;

  if (j.contains("system")) {
    const json& s = j["system"];
    require(s.is_object(), "bad_config", "system must be an object");
    reject_unknown(s, {"xyz", "xyz_inline", "fcidump"}, "system");
    cfg.xyz_path = s.value("xyz", "");
    cfg.xyz_inline = s.value("xyz_inline", "");
    cfg.fcidump_path = s.value("fcidump", "");
  }
  cfg.basis = j.value("basis", "sto-3g");
  require(cfg.basis == "sto-3g", "bad_config", "only the embedded sto-3g basis is available");
  cfg.method = j.value("method", "rhf");
  require(cfg.method == "rhf" || cfg.method == "fci" || cfg.method == "afqmc" ||
              cfg.method == "qc-afqmc",
          "bad_config", "method must be rhf, fci, afqmc or qc-afqmc");
  cfg.trial = j.value("trial", "upccd");
  trial_kind_from_name(cfg.trial);  // validates

  if (j.contains("active_space")) {
    const json& a = j["active_space"];
    if (a.is_string()) {
      std::string s = a.get<std::string>();
      if (s == "full") {
        cfg.active.mode = ActiveSpec::Mode::full;
      } else if (s.rfind("entropy", 0) == 0) {
        cfg.active.mode = ActiveSpec::Mode::entropy;
        auto colon = s.find(':');
        if (colon != std::string::npos)
          cfg.active.threshold = std::stod(s.substr(colon + 1));
      } else {
        fail("bad_config", "active_space string must be 'full' or 'entropy[:threshold]'");
      }
    } else if (a.is_array()) {
      cfg.active.mode = ActiveSpec::Mode::explicit_list;
      for (const auto& v : a) cfg.active.orbitals.push_back(v.get<int>());
      require(!cfg.active.orbitals.empty(), "bad_config", "active orbital list is empty");
    } else {
      fail("bad_config", "active_space must be a string or an index array");
    }
  }

  if (j.contains("protocol")) {
    const json& p = j["protocol"];
    require(p.is_object(), "bad_config", "protocol must be an object");
    reject_unknown(p,
                   {"n_walkers", "n_blocks", "steps_per_block", "dt", "weight_cap",
                    "equilibration_fraction", "reortho_interval"},
                   "protocol");
    cfg.protocol.n_walkers = p.value("n_walkers", cfg.protocol.n_walkers);
    cfg.protocol.n_blocks = p.value("n_blocks", cfg.protocol.n_blocks);
    cfg.protocol.steps_per_block = p.value("steps_per_block", cfg.protocol.steps_per_block);
    cfg.protocol.dt = p.value("dt", cfg.protocol.dt);
    cfg.protocol.weight_cap = p.value("weight_cap", cfg.protocol.weight_cap);
    cfg.protocol.equilibration_fraction =
        p.value("equilibration_fraction", cfg.protocol.equilibration_fraction);
    cfg.protocol.reortho_interval = p.value("reortho_interval", cfg.protocol.reortho_interval);
    require(cfg.protocol.n_walkers > 0 && cfg.protocol.n_blocks > 1 &&
                cfg.protocol.steps_per_block > 0 && cfg.protocol.dt > 0.0,
            "bad_config", "protocol values out of range");
  }

  if (j.contains("force")) {
    const json& f = j["force"];
    require(f.is_object(), "bad_config", "force must be an object");
    reject_unknown(f, {"atom", "axis", "delta_angstrom"}, "force");
    require(f.contains("delta_angstrom"), "bad_config", "force.delta_angstrom is required");
    cfg.has_force = true;
    cfg.force.atom = f.value("atom", 0);
    cfg.force.axis = f.contains("axis") && f["axis"].is_string()
                         ? axis_from_string(f["axis"].get<std::string>())
                         : f.value("axis", 2);
    cfg.force.delta_angstrom = f["delta_angstrom"].get<double>();
    require(cfg.force.delta_angstrom > 0.0, "bad_config", "force.delta_angstrom must be > 0");
  }

  if (j.contains("scan")) {
    const json& s = j["scan"];
    require(s.is_object(), "bad_config", "scan must be an object");
    reject_unknown(s, {"kind", "element", "n_atoms", "bond_lengths_angstrom", "methods"},
                   "scan");
    cfg.has_scan = true;
    cfg.scan.kind = s.value("kind", "chain");
    require(cfg.scan.kind == "chain" || cfg.scan.kind == "diatomic", "bad_config",
            "scan.kind must be chain or diatomic");
    cfg.scan.element = s.value("element", "H");
    cfg.scan.n_atoms = s.value("n_atoms", cfg.scan.kind == "diatomic" ? 2 : 4);
    for (const auto& v : s.value("bond_lengths_angstrom", json::array()))
      cfg.scan.bond_lengths_angstrom.push_back(v.get<double>());
    for (const auto& v : s.value("methods", json::array()))
      cfg.scan.methods.push_back(v.get<std::string>());
    require(!cfg.scan.bond_lengths_angstrom.empty(), "bad_config",
            "scan.bond_lengths_angstrom is empty");
    require(!cfg.scan.methods.empty(), "bad_config", "scan.methods is empty");
  }

  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    require(s.is_object(), "bad_config", "seeds must be an object");
    reject_unknown(s, {"global", "shadow"}, "seeds");
    cfg.seed_global = s.value("global", cfg.seed_global);
    cfg.seed_shadow = s.value("shadow", cfg.seed_shadow);
  }

  if (j.contains("overlap")) {
    const json& o = j["overlap"];
    require(o.is_object(), "bad_config", "overlap must be an object");
    reject_unknown(o, {"mode", "n_samples", "sigma"}, "overlap");
    cfg.overlap_mode = o.value("mode", "exact");
    require(cfg.overlap_mode == "exact" || cfg.overlap_mode == "stochastic", "bad_config",
            "overlap.mode must be exact or stochastic");
    cfg.overlap_samples = o.value("n_samples", 1);
    cfg.overlap_sigma = o.value("sigma", 0.0);
    require(cfg.overlap_samples >= 1, "bad_config", "overlap.n_samples must be >= 1");
  }

  cfg.chol_threshold = j.value("cholesky_threshold", cfg.chol_threshold);
  cfg.scf_level_shift = j.value("scf_level_shift", cfg.scf_level_shift);
  cfg.fci_dim_cap = j.value("fci_dim_cap", cfg.fci_dim_cap);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);

  if (resolved_json) {
    json r;
    r["system"] = {{"xyz", cfg.xyz_path}, {"xyz_inline", cfg.xyz_inline},
                   {"fcidump", cfg.fcidump_path}};
    r["basis"] = cfg.basis;
    r["method"] = cfg.method;
    r["trial"] = cfg.trial;
    switch (cfg.active.mode) {
      case ActiveSpec::Mode::full: r["active_space"] = "full"; break;
      case ActiveSpec::Mode::entropy:
        r["active_space"] = "entropy:" + std::to_string(cfg.active.threshold);
        break;
      case ActiveSpec::Mode::explicit_list: r["active_space"] = cfg.active.orbitals; break;
    }
    r["protocol"] = {{"n_walkers", cfg.protocol.n_walkers},
                     {"n_blocks", cfg.protocol.n_blocks},
                     {"steps_per_block", cfg.protocol.steps_per_block},
                     {"dt", cfg.protocol.dt},
                     {"weight_cap", cfg.protocol.weight_cap},
                     {"equilibration_fraction", cfg.protocol.equilibration_fraction},
                     {"reortho_interval", cfg.protocol.reortho_interval}};
    if (cfg.has_force)
      r["force"] = {{"atom", cfg.force.atom},
                    {"axis", cfg.force.axis},
                    {"delta_angstrom", cfg.force.delta_angstrom}};
    if (cfg.has_scan)
      r["scan"] = {{"kind", cfg.scan.kind},
                   {"element", cfg.scan.element},
                   {"n_atoms", cfg.scan.n_atoms},
                   {"bond_lengths_angstrom", cfg.scan.bond_lengths_angstrom},
                   {"methods", cfg.scan.methods}};
    r["seeds"] = {{"global", cfg.seed_global}, {"shadow", cfg.seed_shadow}};
    r["overlap"] = {{"mode", cfg.overlap_mode},
                    {"n_samples", cfg.overlap_samples},
                    {"sigma", cfg.overlap_sigma}};
    r["cholesky_threshold"] = cfg.chol_threshold;
    r["scf_level_shift"] = cfg.scf_level_shift;
    r["fci_dim_cap"] = cfg.fci_dim_cap;
    r["output_dir"] = cfg.output_dir;
    *resolved_json = r.dump(2);
  }
  return cfg;
}

RunConfig load_config(const std::string& path, std::string* resolved_json) {
  std::ifstream in(path);
  require(in.good(), "io_error", "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), resolved_json);
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
  json j = json::parse(json_text);
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    require(eq != std::string::npos, "bad_config",
            "override '" + kv + "' is not of the form key.path=value");
    std::string path = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    json* node = &j;
    std::size_t start = 0;
    while (true) {
      auto dot = path.find('.', start);
      std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
      require(!key.empty(), "bad_config", "empty key segment in override '" + kv + "'");
      if (dot == std::string::npos) {
        json parsed;
        try {
          parsed = json::parse(value);
        } catch (...) {
          parsed = value;  // plain string
        }
        (*node)[key] = parsed;
        break;
      }
      node = &(*node)[key];
      start = dot + 1;
    }
  }
  return j.dump();
}

}  // namespace qcafqmc
