#include "qcafqmc/dets.hpp"

#include <bit>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

std::int64_t SpinStrings::binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

int excitation_phase(std::uint32_t mask, int p, int q) {
  if (p == q) return 1;
  std::uint32_t below_q = mask & ((1u << q) - 1);
  std::uint32_t removed = mask & ~(1u << q);
  std::uint32_t below_p = removed & ((1u << p) - 1);
  int perm = std::popcount(below_q) + std::popcount(below_p);
  return (perm % 2 == 0) ? 1 : -1;
}

std::vector<int> occupied_list(std::uint32_t mask, int n_orb) {
  std::vector<int> occ;
  for (int i = 0; i < n_orb; ++i)
    if (mask & (1u << i)) occ.push_back(i);
  return occ;
}

SpinStrings::SpinStrings(int n_orb, int n_elec) : n_orb(n_orb), n_elec(n_elec) {
  require(n_orb >= 0 && n_orb <= 28, "dim_cap", "spin strings support up to 28 orbitals");
  require(n_elec >= 0 && n_elec <= n_orb, "bad_electron_count",
          "electron count exceeds orbital count");

  std::int64_t dim = binomial(n_orb, n_elec);
  strings.reserve(dim);
  if (n_elec == 0) {
    strings.push_back(0);
  } else {
    std::uint32_t mask = (1u << n_elec) - 1;
    std::uint32_t limit = 1u << n_orb;
    while (mask < limit) {
      strings.push_back(mask);
      // next bit permutation with the same popcount
      std::uint32_t t = mask | (mask - 1);
      if (t == 0xFFFFFFFFu) break;
      mask = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(mask) + 1));
    }
  }

  excitations.resize(strings.size());
  for (std::size_t idx = 0; idx < strings.size(); ++idx) {
    std::uint32_t mask = strings[idx];
    auto& list = excitations[idx];
    for (int q = 0; q < n_orb; ++q) {
      if (!(mask & (1u << q))) continue;
      list.push_back({static_cast<int>(idx), static_cast<std::uint8_t>(q),
                      static_cast<std::uint8_t>(q), 1});
      for (int p = 0; p < n_orb; ++p) {
        if (p == q || (mask & (1u << p))) continue;
        std::uint32_t out = (mask & ~(1u << q)) | (1u << p);
        list.push_back({rank(out), static_cast<std::uint8_t>(p),
                        static_cast<std::uint8_t>(q),
                        static_cast<std::int8_t>(excitation_phase(mask, p, q))});
      }
    }
  }
}

int SpinStrings::rank(std::uint32_t mask) const {
  // Combinadic rank in ascending-mask order: sum C(p_i, i) over set bits.
  std::int64_t r = 0;
  int i = 1;
  std::uint32_t m = mask;
  while (m) {
    int p = std::countr_zero(m);
    r += binomial(p, i);
    ++i;
    m &= m - 1;
  }
  return static_cast<int>(r);
}

}  // namespace qcafqmc
