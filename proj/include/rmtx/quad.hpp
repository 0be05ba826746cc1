#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rmtx {

/// Tolerances and limits shared by all integrators.
struct QuadratureSpec {
    double abs_tol = 1e-11;
    double rel_tol = 1e-9;
    int max_depth = 50;
    double truncation_margin = 7.0;  // in units of the Gaussian decay length 1/sqrt(c)
    int max_panels = 6000;

    void validate() const;
    QuadratureSpec tightened(double factor) const;
};

using ScalarFn = std::function<double(double)>;
/// Vector integrand: writes `dim` values for abscissa x into out.
using VectorFn = std::function<void(double x, double* out)>;
/// Vector integrand that also reports, per component, the magnitude on which its
/// rounding error is based (|f| for a plain evaluation; larger when a value is
/// itself the cancelling result of an inner integral).
using ScaledVectorFn = std::function<void(double x, double* out, double* magnitude)>;

/// Adaptive bisection with 15-point Gauss-Legendre panels. Optional interior
/// breakpoints start the subdivision. Throws ConvergenceError if the depth or
/// panel budget runs out.
double integrate_finite(const ScalarFn& f, double lo, double hi, const QuadratureSpec& spec = {},
                        const std::vector<double>& breaks = {});

std::vector<double> integrate_finite_vec(const VectorFn& f, std::size_t dim, double lo, double hi,
                                         const QuadratureSpec& spec = {},
                                         const std::vector<double>& breaks = {});

/// As integrate_finite_vec, with the roundoff floor taken from the reported magnitudes.
/// If magnitude_integral is given it receives the integrals of those magnitudes.
std::vector<double> integrate_finite_scaled(const ScaledVectorFn& f, std::size_t dim, double lo, double hi,
                                            const QuadratureSpec& spec = {},
                                            const std::vector<double>& breaks = {},
                                            std::vector<double>* magnitude_integral = nullptr);

/// Upper cut-off used for integrands bounded by poly(x) exp(-c x^2).
double gaussian_cutoff(double decay, const QuadratureSpec& spec, double extent = 0.0);

/// int_0^inf f for Gaussian-dominated integrands; the domain is truncated at
/// margin/sqrt(decay) + extent, where extent is the largest argument scale the caller knows of.
double integrate_halfline_gaussian(const ScalarFn& f, double decay, const QuadratureSpec& spec = {},
                                   double extent = 0.0, const std::vector<double>& breaks = {});

std::vector<double> integrate_halfline_gaussian_vec(const VectorFn& f, std::size_t dim, double decay,
                                                    const QuadratureSpec& spec = {}, double extent = 0.0,
                                                    const std::vector<double>& breaks = {});

/// int_{-inf}^{inf} f for integrands dominated by exp(-decay (x-center)^2).
double integrate_line_gaussian(const ScalarFn& f, double decay, double center = 0.0,
                               const QuadratureSpec& spec = {});

/// int_0^inf int_0^inf f(x,y) dy dx with both variables Gaussian-dominated.
/// The inner integral is split at y = x so integrands with a jump or kink on
/// the diagonal are handled.
double integrate_quadrant(const std::function<double(double, double)>& f, double decay,
                          const QuadratureSpec& spec = {}, double extent = 0.0);

/// int_0^inf f for integrands with algebraic decay, via x = u/(1-u).
double integrate_semi_infinite(const ScalarFn& f, const QuadratureSpec& spec = {});

}  // namespace rmtx
