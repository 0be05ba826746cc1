#pragma once

namespace rmtx {

double erf(double x);
double erfc(double x);
/// erfi(x) = erf(ix)/i = (2/sqrt(pi)) int_0^x exp(t^2) dt, valid for |x| <= 40.
double erfi(double x);

/// Physicists' Hermite polynomial H_k(x) by three-term recurrence.
double hermite_h(int k, double x);

/// Generalised Laguerre polynomial L_k^{(alpha)}(x); negative k gives 0.
double laguerre(int k, double alpha, double x);

/// int_{-inf}^{inf} y^{2k} exp(-c y^2) dy
double gaussian_moment(int k, double c);

double ln_gamma(double x);

/// Tricomi confluent hypergeometric U(alpha, b, z) for alpha > 0, z > 0.
double tricomi_u(double alpha, double b, double z, double rel_tol = 1e-11);

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(int n, int k);

/// k! as a double.
double factorial(int k);

}  // namespace rmtx
