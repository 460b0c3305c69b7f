#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qcafqmc/basis.hpp"
#include "qcafqmc/geometry.hpp"

namespace qcafqmc {

// Two-electron tensor (pq|rs) in chemists' notation, stored once per
// canonical index octet so the 8-fold permutational symmetry holds exactly
// as stored.
class FoldedEri {
 public:
  FoldedEri() = default;
  explicit FoldedEri(int n) : n_(n) {
    std::size_t np = static_cast<std::size_t>(n) * (n + 1) / 2;
    data_.assign(np * (np + 1) / 2, 0.0);
  }

  int n() const { return n_; }
  std::size_t size() const { return data_.size(); }

  static std::size_t pair_index(int p, int q) {
    return p >= q ? static_cast<std::size_t>(p) * (p + 1) / 2 + q
                  : static_cast<std::size_t>(q) * (q + 1) / 2 + p;
  }
  std::size_t index(int p, int q, int r, int s) const {
    std::size_t pq = pair_index(p, q), rs = pair_index(r, s);
    return pq >= rs ? pq * (pq + 1) / 2 + rs : rs * (rs + 1) / 2 + pq;
  }

  double operator()(int p, int q, int r, int s) const { return data_[index(p, q, r, s)]; }
  void set(int p, int q, int r, int s, double v) { data_[index(p, q, r, s)] = v; }

  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

struct IntegralSet {
  int n_ao = 0;
  Eigen::MatrixXd S;    // overlap
  Eigen::MatrixXd T;    // kinetic
  Eigen::MatrixXd Vne;  // nuclear attraction (negative definite-ish)
  FoldedEri eri;
  double e_nuc = 0.0;      // Hartree
  double s_min_eig = 0.0;  // smallest overlap eigenvalue
  std::vector<std::string> warnings;
};

IntegralSet compute_integrals(const Geometry& geom, const BasisSet& basis);

// Primitive-level entry points, exposed so independent checks can target
// single integrals.
namespace md {

struct Prim {
  double alpha;
  Eigen::Vector3d center;
  int lx, ly, lz;
};

double overlap(const Prim& a, const Prim& b);
double kinetic(const Prim& a, const Prim& b);
double nuclear(const Prim& a, const Prim& b, const Eigen::Vector3d& c);
double eri(const Prim& a, const Prim& b, const Prim& c, const Prim& d);

}  // namespace md

}  // namespace qcafqmc
