#pragma once

namespace qcafqmc {

// Boys function F_m(x) = int_0^1 t^(2m) exp(-x t^2) dt for m = 0..m_max,
// written into out[0..m_max]. Series evaluation at the highest order with
// downward recursion; asymptotic form for large x.
void boys(int m_max, double x, double* out);

}  // namespace qcafqmc
