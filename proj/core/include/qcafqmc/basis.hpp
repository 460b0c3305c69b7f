#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qcafqmc/geometry.hpp"

namespace qcafqmc {

// Contracted shell of Cartesian Gaussians on one center. Only s (l=0) and
// p (l=1) are supported; the embedded STO-3G data covers H, C, N, O.
struct Shell {
  int atom = 0;
  int l = 0;
  Eigen::Vector3d center;            // Bohr
  std::vector<double> exponents;     // primitive exponents, all > 0
  std::vector<double> coefficients;  // contraction coefficients x primitive norms,
                                     // rescaled so <chi|chi> = 1
};

// One basis function: a Cartesian component of a shell.
// Component powers: s -> (0,0,0); p -> x,y,z.
struct BasisFunction {
  int shell = 0;
  int lx = 0, ly = 0, lz = 0;
};

struct BasisSet {
  std::vector<Shell> shells;
  std::vector<BasisFunction> functions;

  int n_functions() const { return static_cast<int>(functions.size()); }
};

// Builds the embedded STO-3G basis for a geometry. Throws on elements
// without embedded data or shells with l > 1.
BasisSet build_sto3g(const Geometry& geom);

}  // namespace qcafqmc
