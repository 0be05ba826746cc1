#pragma once

#include <vector>

#include "rmtx/quad.hpp"
#include "rmtx/weights.hpp"

namespace rmtx {

/// Polynomial in t = x^2: P(x) = sum_k coeffs[k] x^(2k).
/// Coefficients are kept in extended precision: products of high-index
/// polynomials at a near 1 are sensitive to their last bits.
struct SqPolynomial {
    std::vector<long double> coeffs;
    bool monic = false;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    /// Horner evaluation in t = x^2.
    double operator()(double x) const;
    double eval_t(double t) const;

    SqPolynomial& operator+=(const SqPolynomial& rhs);
    SqPolynomial& operator*=(double s);
};

SqPolynomial operator+(SqPolynomial lhs, const SqPolynomial& rhs);
SqPolynomial operator-(SqPolynomial lhs, const SqPolynomial& rhs);
SqPolynomial operator*(double s, SqPolynomial p);

/// Largest index accepted by the polynomial constructors.
inline constexpr int kMaxSopIndex = 60;

struct SopPair {
    int j = 0;
    TransitionParams params;
    SqPolynomial p;
    SqPolynomial q;
    double h = 0.0;
    double c_tilde = 0.0;
};

/// p_j from the finite double-Hermite sum. Valid for every a > 0.
SqPolynomial p_poly(int j, int nu, double a);
/// p_j from the single Laguerre integral, evaluated with exact Gaussian moments.
SqPolynomial p_poly_laguerre(int j, int nu, double a);
/// Trapezoidal evaluation of the double angular integral at x (x != 0 when nu = 1).
double p_contour_oracle(int j, int nu, double a, double x);
/// Two-dimensional quadrature of the Gaussian-integral representation at x, 0 < a < 1.
double p_gauss_oracle(int j, int nu, double a, double x, const QuadratureSpec& spec = {});

/// q_j from the explicit three-Laguerre form; c_tilde is the free gauge constant.
SqPolynomial q_poly(int j, int nu, double a, double c_tilde = 0.0);
/// q_j by applying the second-order operator in x and a^2 to x^nu p_j, with c_tilde = 0.
/// The a^2 derivative is a central difference with step 1e-6.
SqPolynomial q_via_operator_oracle(int j, int nu, double a);

/// log h_j and h_j.
double log_norm_h(int j, int nu, double a);
double norm_h(int j, int nu, double a);

SopPair make_sop_pair(int j, int nu, double a, double c_tilde = 0.0);

enum class SkewMethod {
    /// Quadrant quadrature of f(x) g(y) G_nu(x,y) with the closed-form weight.
    direct,
    /// Fubini on the defining double integral of G_nu: each polynomial is first
    /// smoothed by the Gaussian of variance a^2/4 (exact moments), leaving a
    /// quadrant integral with weight sign(t-s) exp(-2(s^2+t^2)/(1-a^2)).
    /// Keeps full accuracy near a = 1 where the direct form cancels like (1-a^2)^(2j).
    smoothed
};

/// <f, g> = int int f(x) g(y) G_nu(x,y) over the positive quadrant.
double skew_product_even(const SqPolynomial& f, const SqPolynomial& g, int nu, double a,
                         const QuadratureSpec& spec = {});
/// Same against the modified weight H_nu.
double skew_product_odd(const SqPolynomial& f, const SqPolynomial& g, int nu, double a,
                        const QuadratureSpec& spec = {});

/// All pairwise products <polys[i], polys[k]> in one pass (row-major K x K).
/// Inner transforms are integrated as vectors of polynomial values, which keeps
/// the cancellation inside each p_j rather than between monomial moments.
std::vector<double> skew_product_matrix(const std::vector<SqPolynomial>& polys, int nu, double a, bool odd,
                                        const QuadratureSpec& spec = {},
                                        SkewMethod method = SkewMethod::direct);

/// int_0^inf P(x) g_nu(x) dx and int_0^inf P(x) Gbar_nu(x) dx.
double integral_against_g(const SqPolynomial& poly, int nu, double a, const QuadratureSpec& spec = {});
double integral_against_Gbar(const SqPolynomial& poly, int nu, double a, const QuadratureSpec& spec = {});
/// Coefficients in u of F(sqrt(1-a^2) u), F(s) = E[(s + aZ/2)^nu P(s + aZ/2)] with Z standard normal.
/// All transforms against G_nu reduce to Gaussian integrals of this polynomial.
std::vector<long double> smoothed_coefficients(const SqPolynomial& poly, int nu, double a);

/// int_0^inf P g_nu in closed form through the smoothed polynomial.
double integral_against_g_smoothed(const SqPolynomial& poly, int nu, double a);

/// a -> 0: monic multiple of L_j^(nu)(4t).
SqPolynomial p_limit_chgoe(int j, int nu);
/// a -> 0: monic (j+1)L_{j+1} - (j+nu)L_j - (j+nu)L_{j-1}, all at 4t.
SqPolynomial q_limit_chgoe(int j, int nu);
/// a -> 1: x^nu p = 2^(-3(2j+nu)/2) H_{2j+nu}(sqrt(2) x).
SqPolynomial p_limit_gaoe(int j, int nu);
/// a -> inf after x -> a x: 2^(-3(2j+nu)/2) H_j(sqrt(2) x) H_{j+nu}(sqrt(2) x) / x^nu.
SqPolynomial p_limit_split(int j, int nu);

}  // namespace rmtx
