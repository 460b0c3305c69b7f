#pragma once

#include <string>

#include "qcafqmc/mo_hamiltonian.hpp"

namespace qcafqmc {

// Molpro-convention FCIDUMP: header line with NORB/NELEC/ORBSYM, then
// "value p q r s" records (1-based, chemists' notation); zero indices mark
// one-body terms (r = s = 0) and the scalar (all zero).
std::string fcidump_to_string(const MOHamiltonian& ham, int n_electrons);
void save_fcidump(const MOHamiltonian& ham, int n_electrons, const std::string& path);

struct FcidumpData {
  MOHamiltonian ham;
  int n_electrons = 0;
};
FcidumpData load_fcidump(const std::string& path);
FcidumpData parse_fcidump(const std::string& text);

}  // namespace qcafqmc
