#include "qcafqmc/basis.hpp"

#include <cmath>
#include <map>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

namespace {

struct RawShell {
  int l;
  std::vector<double> exps;
  std::vector<double> coefs;
};

// Standard STO-3G parameters. The sp shells share exponents; they are split
// into separate s and p contractions here.
const std::map<std::string, std::vector<RawShell>>& sto3g_table() {
  static const std::vector<double> s1_coef = {0.1543289673, 0.5353281423, 0.4446345422};
  static const std::vector<double> s2_coef = {-0.09996722919, 0.3995128261, 0.7001154689};
  static const std::vector<double> p2_coef = {0.1559162750, 0.6076837186, 0.3919573931};
  static const std::map<std::string, std::vector<RawShell>> table = {
      {"H", {{0, {3.425250914, 0.6239137298, 0.1688554040}, s1_coef}}},
      {"C",
       {{0, {71.61683735, 13.04509632, 3.530512160}, s1_coef},
        {0, {2.941249355, 0.6834830964, 0.2222899159}, s2_coef},
        {1, {2.941249355, 0.6834830964, 0.2222899159}, p2_coef}}},
      {"N",
       {{0, {99.10616896, 18.05231239, 4.885660238}, s1_coef},
        {0, {3.780455879, 0.8784966449, 0.2857143744}, s2_coef},
        {1, {3.780455879, 0.8784966449, 0.2857143744}, p2_coef}}},
      {"O",
       {{0, {130.7093214, 23.80886605, 6.443608313}, s1_coef},
        {0, {5.033151319, 1.169596125, 0.3803889600}, s2_coef},
        {1, {5.033151319, 1.169596125, 0.3803889600}, p2_coef}}},
  };
  return table;
}

double primitive_norm(double alpha, int l) {
  // Cartesian Gaussian norm; for l <= 1 every component has the same norm.
  double n = std::pow(2.0 * alpha / M_PI, 0.75);
  if (l == 1) n *= 2.0 * std::sqrt(alpha);
  return n;
}

// Same-center self-overlap of the normalized-primitive contraction.
double contracted_self_overlap(const Shell& sh) {
  double s = 0.0;
  for (std::size_t i = 0; i < sh.exponents.size(); ++i) {
    for (std::size_t j = 0; j < sh.exponents.size(); ++j) {
      double p = sh.exponents[i] + sh.exponents[j];
      double base = std::pow(M_PI / p, 1.5);
      if (sh.l == 1) base /= 2.0 * p;
      s += sh.coefficients[i] * sh.coefficients[j] * base;
    }
  }
  return s;
}

}  // namespace

BasisSet build_sto3g(const Geometry& geom) {
  BasisSet basis;
  for (int a = 0; a < geom.n_atoms(); ++a) {
    const auto& atom = geom.atoms[a];
    auto it = sto3g_table().find(atom.symbol);
    if (it == sto3g_table().end())
      fail("unknown_element", "no embedded STO-3G data for element '" + atom.symbol + "'");
    for (const auto& raw : it->second) {
      require(raw.l <= 1, "unsupported_shell", "only s and p shells are supported");
      Shell sh;
      sh.atom = a;
      sh.l = raw.l;
      sh.center = atom.position_bohr;
      sh.exponents = raw.exps;
      sh.coefficients = raw.coefs;
      for (std::size_t k = 0; k < sh.exponents.size(); ++k) {
        require(sh.exponents[k] > 0.0, "bad_basis", "primitive exponent must be positive");
        sh.coefficients[k] *= primitive_norm(sh.exponents[k], sh.l);
      }
      double self = contracted_self_overlap(sh);
      double scale = 1.0 / std::sqrt(self);
      for (auto& c : sh.coefficients) c *= scale;

      int shell_index = static_cast<int>(basis.shells.size());
      basis.shells.push_back(sh);
      if (sh.l == 0) {
        basis.functions.push_back({shell_index, 0, 0, 0});
      } else {
        basis.functions.push_back({shell_index, 1, 0, 0});
        basis.functions.push_back({shell_index, 0, 1, 0});
        basis.functions.push_back({shell_index, 0, 0, 1});
      }
    }
  }
  return basis;
}

}  // namespace qcafqmc
