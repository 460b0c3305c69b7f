#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qcafqmc {

struct Atom {
  std::string symbol;
  int charge = 0;                 // nuclear charge Z
  Eigen::Vector3d position_bohr;  // stored internally in Bohr
};

// Nuclear frame. Positions are always Bohr internally; Angstrom is accepted
// at the parsing/displacement boundary only.
struct Geometry {
  std::vector<Atom> atoms;

  int n_atoms() const { return static_cast<int>(atoms.size()); }
  int total_nuclear_charge() const;
  double nuclear_repulsion() const;  // Hartree

  // Throws if two nuclei are closer than 1e-6 Bohr.
  void validate() const;
};

int element_charge(const std::string& symbol);  // throws on unknown element

// XYZ text: first line atom count, second line comment, then "symbol x y z"
// with coordinates in Angstrom. Errors carry the offending line number.
Geometry parse_xyz(const std::string& text);

// Returns a copy with one Cartesian coordinate shifted by delta (Angstrom).
Geometry displace(const Geometry& geom, int atom, int axis, double delta_angstrom);

// Convenience builders used by scans and tests.
Geometry linear_chain(const std::string& symbol, int n, double spacing_angstrom);
Geometry diatomic(const std::string& symbol, double bond_angstrom);

}  // namespace qcafqmc
