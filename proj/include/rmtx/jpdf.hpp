#pragma once

#include <vector>

#include "rmtx/quad.hpp"

namespace rmtx {

struct JpdfValue {
    double log_constant = 0.0;    // log C_{n,nu}
    double pfaffian_part = 0.0;
    double vandermonde_part = 0.0;
    double value = 0.0;
    bool degenerate = false;      // coincident arguments; value is 0
};

/// log C_{n,nu}, valid for even and odd n.
double jpdf_const(int n, int nu, double a);

/// Joint density of the n (unordered) singular values, n <= 6.
JpdfValue jpdf_eval(int n, int nu, double a, const std::vector<double>& lambda);

/// k-point correlation function by integrating the joint density over the
/// remaining n - k arguments. n <= 3.
double corr_Rk_bruteforce(int n, int nu, double a, const std::vector<double>& points,
                          const QuadratureSpec& spec = {});

/// prod_i int_0^inf dx_i x_i^kappa |Delta(x)|^beta exp(-beta/2 sum x), in log space.
double selberg_log(int n, double kappa, double beta);
double selberg(int n, double kappa, double beta);

}  // namespace rmtx
