#include "qcafqmc/boys.hpp"

#include <cmath>

namespace qcafqmc {

namespace {

double boys_series(int m, double x) {
  // F_m(x) = e^{-x} sum_i (2x)^i / [(2m+1)(2m+3)...(2m+2i+1)]
  double term = 1.0 / (2 * m + 1);
  double sum = term;
  for (int i = 1; i < 300; ++i) {
    term *= 2.0 * x / (2 * m + 2 * i + 1);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(-x) * sum;
}

}  // namespace

void boys(int m_max, double x, double* out) {
  if (x < 1e-13) {
    for (int m = 0; m <= m_max; ++m) out[m] = 1.0 / (2 * m + 1);
    return;
  }
  if (x > 35.0) {
    // Asymptotic limit; the truncated upper tail is below e^{-35}.
    double df = 1.0;  // (2m-1)!!
    for (int m = 0; m <= m_max; ++m) {
      out[m] = df / (2.0 * std::pow(2.0 * x, m)) * std::sqrt(M_PI / x);
      df *= 2 * m + 1;
    }
    return;
  }
  out[m_max] = boys_series(m_max, x);
  double ex = std::exp(-x);
  for (int m = m_max - 1; m >= 0; --m) out[m] = (2.0 * x * out[m + 1] + ex) / (2 * m + 1);
}

}  // namespace qcafqmc
