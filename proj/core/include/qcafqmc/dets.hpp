#pragma once

#include <cstdint>
#include <vector>

namespace qcafqmc {

// Occupation strings for one spin channel over spatial orbitals, ordered by
// ascending bitmask value (lexicographic bitstring order).
struct SpinStrings {
  int n_orb = 0;
  int n_elec = 0;
  std::vector<std::uint32_t> strings;

  struct Excitation {
    int target;        // string index J with |J> = sign * E_pq |I>
    std::uint8_t p;    // created orbital
    std::uint8_t q;    // annihilated orbital (p == q marks occupation terms)
    std::int8_t sign;  // fermionic phase
  };

  // Outgoing single-excitation lists, including the diagonal p == q entries
  // (E_pp acting as the occupation number).
  std::vector<std::vector<Excitation>> excitations;

  SpinStrings() = default;
  SpinStrings(int n_orb, int n_elec);

  int size() const { return static_cast<int>(strings.size()); }
  int rank(std::uint32_t mask) const;

  static std::int64_t binomial(int n, int k);
};

// Phase (-1)^perm of a_p^dagger a_q applied to mask (q occupied, p empty or
// p == q); creation operators ordered by ascending orbital index.
int excitation_phase(std::uint32_t mask, int p, int q);

// Occupied orbital indices of a mask, ascending.
std::vector<int> occupied_list(std::uint32_t mask, int n_orb);

}  // namespace qcafqmc
