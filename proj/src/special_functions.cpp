#include "sreels/special_functions.hpp"

#include <cmath>
#include <limits>

#include "sreels/constants.hpp"
#include "sreels/errors.hpp"

namespace sreels {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Ascending series for K0/K1 on x < 2 (DLMF 10.31).  The q^k/(k!)^2 terms
// decay factorially, so ~20 terms reach double precision at x = 2.
void k0_k1_series(double x, double& k0, double& k1) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x);

  double t0 = 1.0, t1 = 1.0;  // q^k/(k!)^2 and q^k/(k!(k+1)!)
  double i0 = 1.0, tsum = 1.0;
  double s0 = 0.0, s1 = 1.0;  // s1 starts at H_0 + H_1 = 1
  double hk = 0.0;
  for (int k = 1; k < 60; ++k) {
    t0 *= q / (static_cast<double>(k) * k);
    t1 *= q / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    const double hk1 = hk + 1.0 / (k + 1);
    i0 += t0;
    tsum += t1;
    s0 += hk * t0;
    s1 += (hk + hk1) * t1;
    if (t0 < 1e-18 * i0 && t1 < 1e-18 * tsum) break;
  }
  const double i1 = 0.5 * x * tsum;

  k0 = -(lg + kEulerGamma) * i0 + s0;
  k1 = 1.0 / x + lg * i1 - 0.25 * x * (s1 - 2.0 * kEulerGamma * tsum);
}

// Steed's continued fraction (CF2) for K0, K1 on x >= 2.
void k0_k1_cf2(double x, double& k0, double& k1) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double a1 = 0.25;  // 1/4 - nu^2 with nu = 0
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  double a = -a1;
  double c = a1;
  double q = c;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 20000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= eps) break;
  }
  h = a1 * h;
  k0 = std::sqrt(constants::pi / (2.0 * x)) * std::exp(-x) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

void k0_k1(double x, double& k0, double& k1) {
  if (!(x > 0.0)) throw DomainError("bessel_k: argument must be positive");
  if (x < 2.0)
    k0_k1_series(x, k0, k1);
  else
    k0_k1_cf2(x, k0, k1);
}

}  // namespace

double bessel_k0(double x) {
  double k0, k1;
  k0_k1(x, k0, k1);
  return k0;
}

double bessel_k1(double x) {
  double k0, k1;
  k0_k1(x, k0, k1);
  return k1;
}

std::vector<double> bessel_j_sequence(int lmax, double z) {
  if (lmax < 0) throw DomainError("bessel_j_sequence: lmax must be >= 0");
  if (z < 0.0) throw DomainError("bessel_j_sequence: argument must be >= 0");
  std::vector<double> out(lmax + 1, 0.0);
  if (z < 1e-300) {
    out[0] = 1.0;
    return out;
  }
  // Start the downward recurrence well above both lmax and z.
  const int start = std::max(lmax, static_cast<int>(z)) + 16 +
                    static_cast<int>(2.0 * std::sqrt(std::max(z, 1.0)));
  const int m0 = start + (start % 2);  // even
  double jp = 0.0;                     // J_{k+1}
  double jc = 1e-30;                   // J_k, arbitrary seed
  double norm = 0.0;                   // J_0 + 2 sum_{k>0 even} J_k
  for (int k = m0; k >= 1; --k) {
    const double jm = (2.0 * k / z) * jc - jp;  // J_{k-1}
    jp = jc;
    jc = jm;
    if (k - 1 <= lmax) out[k - 1] = jc;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jc : 2.0 * jc;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      for (double& v : out) v *= 1e-250;
    }
  }
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace sreels
