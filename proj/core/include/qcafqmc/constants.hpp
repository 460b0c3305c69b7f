#pragma once

namespace qcafqmc {

// CODATA-style conversion used throughout; geometries are stored in Bohr.
inline constexpr double bohr_per_angstrom = 1.8897259886;
inline constexpr double angstrom_per_bohr = 1.0 / bohr_per_angstrom;

inline constexpr const char* code_version = "0.1.0";

}  // namespace qcafqmc
