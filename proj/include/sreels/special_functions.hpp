#pragma once

#include <vector>

namespace sreels {

// Modified Bessel functions of the second kind, order 0 and 1.
// Power series below x = 2, Steed continued fraction above; absolute
// accuracy is a few ULP over [1e-6, 50].  Throws DomainError for x <= 0.
double bessel_k0(double x);
double bessel_k1(double x);

// J_0(z) .. J_lmax(z) for z >= 0 by Miller downward recurrence with
// even-order normalization.  Orders with |J| below ~1e-305 come back as 0.
std::vector<double> bessel_j_sequence(int lmax, double z);

}  // namespace sreels
