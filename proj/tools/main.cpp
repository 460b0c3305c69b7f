#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "qcafqmc/commands.hpp"
#include "qcafqmc/config.hpp"
#include "qcafqmc/constants.hpp"
#include "qcafqmc/error.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration")->required();
  cmd->add_option("--override", args.overrides,
                  "dotted-path config override, e.g. protocol.n_walkers=512");
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "global RNG seed (overrides config)")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

qcafqmc::RunConfig resolve(const CommonArgs& args, std::string* resolved_json) {
  std::ifstream in(args.config_path);
  if (!in.good()) qcafqmc::fail("io_error", "cannot read config " + args.config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();

  std::vector<std::string> overrides = args.overrides;
  if (!args.out_dir.empty()) overrides.push_back("output_dir=" + args.out_dir);
  if (args.seed_set) overrides.push_back("seeds.global=" + std::to_string(args.seed));
  if (!overrides.empty()) text = qcafqmc::apply_overrides(text, overrides);
  return qcafqmc::parse_config(text, resolved_json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QC-AFQMC engine: energies and correlated-sampling nuclear forces"};
  app.set_version_flag("--version", qcafqmc::code_version);
  app.require_subcommand(1);

  CommonArgs energy_args, force_args, active_args;
  CLI::App* energy = app.add_subcommand("energy", "ground-state energy run");
  add_common(energy, energy_args);
  CLI::App* force = app.add_subcommand("force", "correlated-sampling force run or scan");
  add_common(force, force_args);
  CLI::App* active =
      app.add_subcommand("active-space", "single-orbital entropy report");
  add_common(active, active_args);

  CLI11_PARSE(app, argc, argv);

  try {
    std::string resolved;
    if (energy->parsed()) {
      qcafqmc::RunConfig cfg = resolve(energy_args, &resolved);
      return qcafqmc::cmd_energy(cfg, resolved);
    }
    if (force->parsed()) {
      qcafqmc::RunConfig cfg = resolve(force_args, &resolved);
      return qcafqmc::cmd_force(cfg, resolved);
    }
    qcafqmc::RunConfig cfg = resolve(active_args, &resolved);
    return qcafqmc::cmd_active_space(cfg, resolved);
  } catch (const qcafqmc::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
