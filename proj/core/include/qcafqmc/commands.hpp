#pragma once

#include <string>

#include "qcafqmc/config.hpp"

namespace qcafqmc {

// CLI entry points. Each writes a resolved-config echo plus its artifacts
// into cfg.output_dir and returns a process exit status; failures emit a
// structured error.json and a nonzero status.
int cmd_energy(const RunConfig& cfg, const std::string& resolved_json);
int cmd_force(const RunConfig& cfg, const std::string& resolved_json);
int cmd_active_space(const RunConfig& cfg, const std::string& resolved_json);

}  // namespace qcafqmc
