#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace qcafqmc {

// Philox4x32-10 counter-based generator. Every draw is a pure function of
// (key, counter), so streams keyed by (seed, walker, step, field) are
// reproducible regardless of thread scheduling or evaluation order.
struct Philox4x32 {
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;

  struct Out {
    std::uint32_t v[4];
  };

  static inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                             std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  static Out run(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                 std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(kM0, c0, hi0, lo0);
      mulhilo(kM1, c2, hi1, lo1);
      std::uint32_t n0 = hi1 ^ c1 ^ k0;
      std::uint32_t n1 = lo1;
      std::uint32_t n2 = hi0 ^ c3 ^ k1;
      std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kW0;
      k1 += kW1;
    }
    return Out{{c0, c1, c2, c3}};
  }
};

// Uniform in (0,1): 32-bit lanes combined to 53-bit mantissa, never exactly 0.
inline double philox_uniform(std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
  return (static_cast<double>(bits & ((1ull << 53) - 1)) + 0.5) / 9007199254740992.0;
}

// One standard-normal deviate for the counter tuple; stream_tag separates
// independent uses (auxiliary fields, overlap-estimator noise, ...).
inline double counter_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                             std::uint64_t c, std::uint32_t stream_tag = 0) {
  auto out = Philox4x32::run(
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
      static_cast<std::uint32_t>(c),
      stream_tag ^ static_cast<std::uint32_t>(a >> 32) ^
          static_cast<std::uint32_t>(b >> 32) ^ static_cast<std::uint32_t>(c >> 32),
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32));
  double u1 = philox_uniform(out.v[0], out.v[1]);
  double u2 = philox_uniform(out.v[2], out.v[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Zero-mean unit-variance complex normal (variance 1/2 per component).
inline std::complex<double> counter_complex_normal(std::uint64_t seed, std::uint64_t a,
                                                   std::uint64_t b, std::uint64_t c,
                                                   std::uint32_t stream_tag) {
  auto out = Philox4x32::run(
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
      static_cast<std::uint32_t>(c),
      stream_tag ^ static_cast<std::uint32_t>(a >> 32) ^
          static_cast<std::uint32_t>(b >> 32) ^ static_cast<std::uint32_t>(c >> 32),
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32));
  double u1 = philox_uniform(out.v[0], out.v[1]);
  double u2 = philox_uniform(out.v[2], out.v[3]);
  double r = std::sqrt(-std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

}  // namespace qcafqmc
