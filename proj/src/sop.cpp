#include "rmtx/sop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "rmtx/errors.hpp"
#include "rmtx/special.hpp"
#include "sop_impl.hpp"

namespace rmtx {

namespace {

using LD = long double;
constexpr double kPi = std::numbers::pi;
constexpr LD kPiL = std::numbers::pi_v<LD>;

void check_index(int j, int nu)
{
    if (j < 0) throw DomainError("polynomial index must be nonnegative");
    if (j > kMaxSopIndex) throw SizeError("polynomial index above " + std::to_string(kMaxSopIndex));
    if (nu != 0 && nu != 1) throw DomainError("nu must be 0 or 1");
}

using detail::hermite_coeffs;
using detail::laguerre_block;
using detail::laguerre_coeffs;
using detail::laguerre_prefactor;
using detail::poly_mul;

SqPolynomial to_sq(const std::vector<LD>& c, bool monic)
{
    SqPolynomial p;
    p.coeffs.assign(c.begin(), c.end());
    while (p.coeffs.size() > 1 && p.coeffs.back() == 0.0) p.coeffs.pop_back();
    if (monic) p.coeffs.back() = 1.0;
    p.monic = monic;
    return p;
}

// Keep every (2m+nu)-th power of x of a polynomial in x, giving coefficients in t.
std::vector<LD> even_part_over_xnu(const std::vector<LD>& cx, int nu)
{
    std::vector<LD> out;
    for (std::size_t m = 0; 2 * m + nu < cx.size(); ++m) out.push_back(cx[2 * m + nu]);
    return out;
}

}  // namespace

double SqPolynomial::eval_t(double t) const
{
    LD r = 0.0L;
    const LD lt = t;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * lt + *it;
    return static_cast<double>(r);
}

double SqPolynomial::operator()(double x) const { return eval_t(x * x); }

SqPolynomial& SqPolynomial::operator+=(const SqPolynomial& rhs)
{
    if (rhs.coeffs.size() > coeffs.size()) coeffs.resize(rhs.coeffs.size(), 0.0);
    for (std::size_t i = 0; i < rhs.coeffs.size(); ++i) coeffs[i] += rhs.coeffs[i];
    monic = false;
    return *this;
}

SqPolynomial& SqPolynomial::operator*=(double s)
{
    for (LD& c : coeffs) c *= s;
    monic = monic && s == 1.0;
    return *this;
}

SqPolynomial operator+(SqPolynomial lhs, const SqPolynomial& rhs) { return lhs += rhs; }
SqPolynomial operator-(SqPolynomial lhs, const SqPolynomial& rhs) { return lhs += (-1.0) * rhs; }
SqPolynomial operator*(double s, SqPolynomial p) { return p *= s; }

SqPolynomial p_poly(int j, int nu, double a)
{
    check_index(j, nu);
    if (!(a > 0)) throw DomainError("p_poly: a must be positive");
    return to_sq(detail::p_coeffs<LD>(j, nu, a), true);
}

SqPolynomial p_poly_laguerre(int j, int nu, double a)
{
    check_index(j, nu);
    if (!(a > 0)) throw DomainError("p_poly_laguerre: a must be positive");
    const LD la = a, a2 = la * la;
    const LD c = (1.0L + a2) / (2.0L * a2);
    const LD pref = laguerre_prefactor<LD>(j, la);
    std::vector<LD> t = laguerre_block<LD>(j, nu, 4.0L / (1.0L + a2), c, 0, j + 1);
    for (LD& v : t) v *= pref;
    return to_sq(t, false);
}

double p_contour_oracle(int j, int nu, double a, double x)
{
    check_index(j, nu);
    if (j > 20) throw SizeError("p_contour_oracle: j above 20");
    if (nu == 1 && std::abs(x) < 1e-8) throw DomainError("p_contour_oracle: x too close to 0 for nu = 1");
    const int nodes = 4 * (j + nu) + 32;
    const double h = 2.0 * kPi / nodes;
    using C = std::complex<double>;
    C sum = 0.0;
    for (int l = 0; l < nodes; ++l) {
        const double pl = l * h;
        const C el = std::polar(1.0, pl);
        for (int r = 0; r < nodes; ++r) {
            const double pr = r * h;
            const C er = std::polar(1.0, pr);
            const C expo = -a * a / 8.0 * (el * el + er * er) - x * (el + er) - 0.25 * el * er;
            sum += std::exp(expo) * std::polar(1.0, -j * pl - (j + nu) * pr);
        }
    }
    const double mean = sum.real() / (static_cast<double>(nodes) * nodes);
    return factorial(j) * factorial(j + nu) / std::pow(-x, nu) * mean;
}

double p_gauss_oracle(int j, int nu, double a, double x, const QuadratureSpec& spec)
{
    check_index(j, nu);
    require_subcritical(a, "p_gauss_oracle");
    if (nu == 1 && std::abs(x) < 1e-8) throw DomainError("p_gauss_oracle: x too close to 0 for nu = 1");
    const double a2 = a * a;
    const double cy = 4.0 / (1.0 + a2), cl = 4.0 / ((1.0 - a) * (1.0 + a));
    using C = std::complex<double>;
    QuadratureSpec inner = spec.tightened(0.1);
    const ScalarFn outer = [&](double y) {
        const ScalarFn f = [&](double l) {
            const C u(x + l, y), v(x - l, y);
            return (std::pow(u, j) * std::pow(v, j + nu)).real() * std::exp(-cl * l * l);
        };
        return std::exp(-cy * y * y) * integrate_line_gaussian(f, cl, 0.0, inner);
    };
    const double integral = integrate_line_gaussian(outer, cy, 0.0, spec);
    return 4.0 / (kPi * std::sqrt((1.0 - a2) * (1.0 + a2))) * integral / std::pow(x, nu);
}

SqPolynomial q_poly(int j, int nu, double a, double c_tilde)
{
    check_index(j, nu);
    if (!(a > 0 && a <= 1.0 - 1e-12)) throw DomainError("q_poly: requires 0 < a <= 1 - 1e-12");
    return to_sq(detail::q_coeffs<LD>(j, nu, a, c_tilde), true);
}

SqPolynomial q_via_operator_oracle(int j, int nu, double a)
{
    check_index(j, nu);
    if (!(a > 1e-3 && a < 1.0 - 1e-3)) throw DomainError("q_via_operator_oracle: requires 1e-3 < a < 1 - 1e-3");
    const double a2 = a * a, step = 1e-6;
    const SqPolynomial p = p_poly(j, nu, a);
    const SqPolynomial pp = p_poly(j, nu, std::sqrt(a2 + step));
    const SqPolynomial pm = p_poly(j, nu, std::sqrt(a2 - step));
    std::vector<LD> q(j + 2, 0.0L);
    for (int m = 0; m <= j; ++m) {
        q[m + 1] += p.coeffs[m];
        // d^2/dx^2 x^(2m+nu) = (2m+nu)(2m+nu-1) x^(2m+nu-2)
        const LD d = 2.0L * m + nu;
        if (m > 0) q[m - 1] -= d * (d - 1.0L) / 16.0L * p.coeffs[m];
        const LD da2 = (pp.coeffs[m] - pm.coeffs[m]) / (2.0L * step);
        q[m] += (a2 * a2 - 1.0L) / 2.0L * da2;
    }
    SqPolynomial r;
    r.coeffs = q;
    r.monic = true;
    return r;
}

double log_norm_h(int j, int nu, double a)
{
    check_index(j, nu);
    require_subcritical(a, "norm_h");
    const double eps = (1.0 - a) * (1.0 + a);
    return std::log(kPi) + 2.0 * std::log(a) + (2.0 * j + 2.0 + nu) * std::log(eps) + std::lgamma(j + 1.0) +
           std::lgamma(j + nu + 1.0) - (4.0 * j + 2.0 * nu + 7.0) * std::log(2.0);
}

double norm_h(int j, int nu, double a) { return std::exp(log_norm_h(j, nu, a)); }

SopPair make_sop_pair(int j, int nu, double a, double c_tilde)
{
    SopPair s;
    s.j = j;
    s.params = {1, nu, a};
    s.p = p_poly(j, nu, a);
    s.q = q_poly(j, nu, a, c_tilde);
    s.h = norm_h(j, nu, a);
    s.c_tilde = c_tilde;
    return s;
}

namespace {

std::vector<LD> smoothed_coeffs(const SqPolynomial& poly, int nu, double a)
{
    return detail::smoothed_coeffs<LD>(poly.coeffs, nu, a);
}

double eval_full(const std::vector<LD>& c, double u)
{
    LD r = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + *it;
    return static_cast<double>(r);
}

// int_0^inf P g_nu from the smoothed coefficients: exact half-line Gaussian moments.
double smoothed_g_integral(const std::vector<LD>& c, double a)
{
    const LD eps = (1.0L - a) * (1.0L + a);
    LD sum = 0.0L;
    for (std::size_t n = 0; n < c.size(); ++n)
        sum += c[n] * std::exp(std::lgamma((n + 1.0L) / 2.0L)) / (2.0L * std::pow(2.0L, (n + 1.0L) / 2.0L));
    return static_cast<double>(0.5L * std::sqrt(kPi * a * a / 2.0L) * std::sqrt(eps) * sum);
}

// Quadrant integral of sign(t-s) w(s) w(t) F_i(s) F_l(t) for all pairs, weight w(u) = exp(-2u^2).
std::vector<double> sign_quadrant_matrix(const std::vector<std::vector<LD>>& c, const QuadratureSpec& spec)
{
    const std::size_t k = c.size();
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    s.rel_tol = std::min(spec.rel_tol, 1e-13);
    std::size_t maxdeg = 0;
    for (const auto& v : c) maxdeg = std::max(maxdeg, v.size() - 1);
    const double upper = gaussian_cutoff(2.0, spec, std::sqrt(maxdeg / 4.0));
    const ScaledVectorFn outer = [&](double x, double* out, double* mag) {
        const ScaledVectorFn inner = [&](double y, double* o, double* om) {
            const double w = (y > x ? 1.0 : -1.0) * std::exp(-2.0 * y * y);
            for (std::size_t l = 0; l < k; ++l) {
                o[l] = w * eval_full(c[l], y);
                om[l] = std::abs(o[l]);
            }
        };
        std::vector<double> scale;
        const std::vector<double> t = integrate_finite_scaled(inner, k, 0.0, upper, s, {x}, &scale);
        const double w = std::exp(-2.0 * x * x);
        for (std::size_t i = 0; i < k; ++i) {
            const double fi = w * eval_full(c[i], x);
            for (std::size_t l = 0; l < k; ++l) {
                out[i * k + l] = fi * t[l];
                mag[i * k + l] = std::abs(fi) * scale[l];
            }
        }
    };
    return integrate_finite_scaled(outer, k * k, 0.0, upper, s);
}

std::vector<double> skew_matrix_smoothed(const std::vector<SqPolynomial>& polys, int nu, double a, bool odd,
                                         const QuadratureSpec& spec)
{
    std::vector<std::vector<LD>> c;
    for (const auto& p : polys) c.push_back(smoothed_coeffs(p, nu, a));
    if (odd) c.push_back(smoothed_coeffs(SqPolynomial{{1.0L}, true}, nu, a));
    const std::size_t k = polys.size(), kk = c.size();
    const double eps = (1.0 - a) * (1.0 + a);
    std::vector<double> full = sign_quadrant_matrix(c, spec);
    for (double& v : full) v *= kPi * a * a / 8.0 * eps;
    std::vector<double> m(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) m[i * k + l] = full[i * kk + l];
    if (!odd) return m;

    // int P Gbar = <1, P>
    const double gb = g_bar(nu, a);
    std::vector<double> ig(k), iG(k);
    for (std::size_t i = 0; i < k; ++i) {
        ig[i] = smoothed_g_integral(c[i], a);
        iG[i] = full[k * kk + i];
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) m[i * k + l] += (iG[i] * ig[l] - ig[i] * iG[l]) / gb;
    return m;
}

std::vector<double> skew_matrix_direct(const std::vector<SqPolynomial>& polys, int nu, double a, bool odd,
                                       const QuadratureSpec& spec)
{
    const std::size_t k = polys.size();
    int maxdeg = 0;
    for (const auto& p : polys) maxdeg = std::max(maxdeg, 2 * p.degree() + nu);
    const double extent = std::sqrt(maxdeg / 4.0);

    QuadratureSpec outer = spec;
    outer.abs_tol = 1e-300;
    QuadratureSpec inner = outer;
    inner.rel_tol = 1e-14;
    const double upper = gaussian_cutoff(2.0, spec, extent);

    const ScaledVectorFn outer_fn = [&](double x, double* out, double* mag) {
        const ScaledVectorFn inner_fn = [&](double y, double* o, double* om) {
            const double gxy = G_weight(nu, a, x, y);
            for (std::size_t i = 0; i < k; ++i) {
                o[i] = polys[i](y) * gxy;
                om[i] = std::abs(o[i]);
            }
        };
        std::vector<double> scale;
        const std::vector<double> t = integrate_finite_scaled(inner_fn, k, 0.0, upper, inner, {x}, &scale);
        for (std::size_t i = 0; i < k; ++i) {
            const double px = polys[i](x);
            for (std::size_t l = 0; l < k; ++l) {
                out[i * k + l] = px * t[l];
                mag[i * k + l] = std::abs(px) * scale[l];
            }
        }
    };
    std::vector<double> m = integrate_finite_scaled(outer_fn, k * k, 0.0, upper, outer);
    if (!odd) return m;

    const double gb = g_bar(nu, a);
    std::vector<double> ig(k), iG(k);
    for (std::size_t i = 0; i < k; ++i) {
        ig[i] = integral_against_g(polys[i], nu, a, spec);
        iG[i] = integral_against_Gbar(polys[i], nu, a, spec);
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) m[i * k + l] += (iG[i] * ig[l] - ig[i] * iG[l]) / gb;
    return m;
}

}  // namespace

std::vector<double> skew_product_matrix(const std::vector<SqPolynomial>& polys, int nu, double a, bool odd,
                                        const QuadratureSpec& spec, SkewMethod method)
{
    require_subcritical(a, "skew_product");
    if (nu != 0 && nu != 1) throw DomainError("nu must be 0 or 1");
    return method == SkewMethod::smoothed ? skew_matrix_smoothed(polys, nu, a, odd, spec)
                                          : skew_matrix_direct(polys, nu, a, odd, spec);
}

std::vector<long double> smoothed_coefficients(const SqPolynomial& poly, int nu, double a)
{
    require_subcritical(a, "smoothed_coefficients");
    return smoothed_coeffs(poly, nu, a);
}

double integral_against_g_smoothed(const SqPolynomial& poly, int nu, double a)
{
    require_subcritical(a, "integral_against_g_smoothed");
    return smoothed_g_integral(smoothed_coeffs(poly, nu, a), a);
}

double skew_product_even(const SqPolynomial& f, const SqPolynomial& g, int nu, double a, const QuadratureSpec& spec)
{
    return skew_product_matrix({f, g}, nu, a, false, spec)[1];
}

double skew_product_odd(const SqPolynomial& f, const SqPolynomial& g, int nu, double a, const QuadratureSpec& spec)
{
    return skew_product_matrix({f, g}, nu, a, true, spec)[1];
}

double integral_against_g(const SqPolynomial& poly, int nu, double a, const QuadratureSpec& spec)
{
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    const double extent = std::sqrt((2 * poly.degree() + nu) / 4.0);
    return integrate_halfline_gaussian([&](double x) { return poly(x) * g_weight(nu, a, x); }, 2.0, s, extent);
}

double integral_against_Gbar(const SqPolynomial& poly, int nu, double a, const QuadratureSpec& spec)
{
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    const double extent = std::sqrt((2 * poly.degree() + nu) / 4.0);
    return integrate_halfline_gaussian([&](double x) { return poly(x) * G_bar(nu, a, x); }, 2.0, s, extent);
}

SqPolynomial p_limit_chgoe(int j, int nu)
{
    check_index(j, nu);
    const std::vector<LD> l = laguerre_coeffs<LD>(j, nu);
    const LD pref = static_cast<LD>(factorial(j)) / std::pow(-4.0L, static_cast<LD>(j));
    std::vector<LD> t(j + 1);
    for (int i = 0; i <= j; ++i) t[i] = pref * l[i] * std::pow(4.0L, static_cast<LD>(i));
    return to_sq(t, true);
}

SqPolynomial q_limit_chgoe(int j, int nu)
{
    check_index(j, nu);
    std::vector<LD> z(j + 2, 0.0L);
    const auto add = [&](int k, LD f) {
        const std::vector<LD> l = laguerre_coeffs<LD>(k, nu);
        for (std::size_t i = 0; i < l.size(); ++i) z[i] += f * l[i];
    };
    add(j + 1, j + 1.0L);
    add(j, -static_cast<LD>(j + nu));
    add(j - 1, -static_cast<LD>(j + nu));
    const LD pref = static_cast<LD>(factorial(j)) / std::pow(-4.0L, static_cast<LD>(j + 1));
    for (std::size_t i = 0; i < z.size(); ++i) z[i] *= pref * std::pow(4.0L, static_cast<LD>(i));
    return to_sq(z, true);
}

SqPolynomial p_limit_gaoe(int j, int nu)
{
    check_index(j, nu);
    const int d = 2 * j + nu;
    std::vector<LD> h = hermite_coeffs<LD>(d);
    for (int i = 0; i <= d; ++i) h[i] *= std::pow(2.0L, (i - 3.0L * d) / 2.0L);
    return to_sq(even_part_over_xnu(h, nu), true);
}

SqPolynomial p_limit_split(int j, int nu)
{
    check_index(j, nu);
    const int d = 2 * j + nu;
    std::vector<LD> h = poly_mul(hermite_coeffs<LD>(j), hermite_coeffs<LD>(j + nu));
    for (int i = 0; i <= d; ++i) h[i] *= std::pow(2.0L, (i - 3.0L * d) / 2.0L);
    return to_sq(even_part_over_xnu(h, nu), true);
}

}  // namespace rmtx
