#include "qcafqmc/geometry.hpp"

#include <map>
#include <sstream>

#include "qcafqmc/constants.hpp"
#include "qcafqmc/error.hpp"

namespace qcafqmc {

int element_charge(const std::string& symbol) {
  static const std::map<std::string, int> table = {
      {"H", 1}, {"C", 6}, {"N", 7}, {"O", 8}};
  auto it = table.find(symbol);
  if (it == table.end())
    fail("unknown_element", "unknown element symbol '" + symbol +
                                "' (embedded basis covers H, C, N, O)");
  return it->second;
}

int Geometry::total_nuclear_charge() const {
  int z = 0;
  for (const auto& a : atoms) z += a.charge;
  return z;
}

double Geometry::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      e += atoms[i].charge * atoms[j].charge /
           (atoms[i].position_bohr - atoms[j].position_bohr).norm();
  return e;
}

void Geometry::validate() const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      double r = (atoms[i].position_bohr - atoms[j].position_bohr).norm();
      if (r <= 1e-6)
        fail("fused_nuclei", "atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                 " are " + std::to_string(r) + " Bohr apart");
    }
}

Geometry parse_xyz(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto next_line = [&](bool required) -> bool {
    if (!std::getline(in, line)) {
      if (required) fail("xyz_truncated", "unexpected end of XYZ input at line " +
                                              std::to_string(lineno + 1));
      return false;
    }
    ++lineno;
    return true;
  };

  next_line(true);
  int count = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> count) || count <= 0)
      fail("xyz_malformed", "line 1: expected positive atom count, got '" + line + "'");
  }
  next_line(true);  // comment line

  Geometry geom;
  geom.atoms.reserve(count);
  for (int i = 0; i < count; ++i) {
    if (!next_line(false))
      fail("xyz_count_mismatch", "expected " + std::to_string(count) + " atoms, found " +
                                     std::to_string(i));
    std::istringstream ls(line);
    std::string sym;
    double x, y, z;
    if (!(ls >> sym >> x >> y >> z))
      fail("xyz_malformed", "line " + std::to_string(lineno) + ": expected 'symbol x y z'");
    Atom atom;
    atom.symbol = sym;
    try {
      atom.charge = element_charge(sym);
    } catch (const Error&) {
      fail("unknown_element",
           "line " + std::to_string(lineno) + ": unknown element '" + sym + "'");
    }
    atom.position_bohr = Eigen::Vector3d(x, y, z) * bohr_per_angstrom;
    geom.atoms.push_back(atom);
  }
  // Trailing non-blank content means the declared count was wrong.
  while (next_line(false)) {
    std::istringstream ls(line);
    std::string tok;
    if (ls >> tok)
      fail("xyz_count_mismatch", "line " + std::to_string(lineno) +
                                     ": extra atom data beyond declared count " +
                                     std::to_string(count));
  }
  geom.validate();
  return geom;
}

Geometry displace(const Geometry& geom, int atom, int axis, double delta_angstrom) {
  require(atom >= 0 && atom < geom.n_atoms(), "bad_index",
          "displace: atom index " + std::to_string(atom) + " out of range");
  require(axis >= 0 && axis < 3, "bad_index",
          "displace: axis index " + std::to_string(axis) + " out of range");
  Geometry out = geom;
  out.atoms[atom].position_bohr[axis] += delta_angstrom * bohr_per_angstrom;
  return out;
}

Geometry linear_chain(const std::string& symbol, int n, double spacing_angstrom) {
  Geometry geom;
  for (int i = 0; i < n; ++i) {
    Atom a;
    a.symbol = symbol;
    a.charge = element_charge(symbol);
    a.position_bohr = Eigen::Vector3d(0, 0, i * spacing_angstrom * bohr_per_angstrom);
    geom.atoms.push_back(a);
  }
  geom.validate();
  return geom;
}

Geometry diatomic(const std::string& symbol, double bond_angstrom) {
  return linear_chain(symbol, 2, bond_angstrom);
}

}  // namespace qcafqmc
