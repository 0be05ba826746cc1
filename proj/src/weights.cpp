#include "rmtx/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmtx/errors.hpp"
#include "rmtx/special.hpp"

namespace rmtx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClip = 10.0;  // exp(-u^2) below 1e-43 beyond this

void check_nu(int nu)
{
    if (nu != 0 && nu != 1) throw DomainError("nu must be 0 or 1, got " + std::to_string(nu));
}

void check_a(double a)
{
    if (!(a > 0) || !std::isfinite(a)) throw DomainError("a must be positive");
    if (a == 1.0) throw DomainError("a = 1 is served by the GAOE reference formulas, not the weights");
}

double one_minus_a2(double a) { return (1.0 - a) * (1.0 + a); }

// int_lo^hi erf(c - u) exp(-u^2) du, lo <= hi
double inner_erf_integral(double c, double lo, double hi)
{
    lo = std::min(lo, kClip);
    hi = std::min(hi, kClip);
    if (hi <= lo) return 0.0;
    QuadratureSpec spec;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-14;
    return integrate_finite([c](double u) { return std::erf(c - u) * std::exp(-u * u); }, lo, hi, spec);
}

// int_lo^hi erfi(c - u) exp(u^2) du, lo <= hi
double inner_erfi_integral(double c, double lo, double hi)
{
    if (hi <= lo) return 0.0;
    QuadratureSpec spec;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-13;
    return integrate_finite([c](double u) { return erfi(c - u) * std::exp(u * u); }, lo, hi, spec);
}

// G for 0 <= x < y, a < 1
double G_ordered_sub(int nu, double a, double x, double y)
{
    const double eps = one_minus_a2(a);
    const double gamma = std::sqrt(eps) / a;
    const double pref = kPi * a * a * eps / 8.0 * std::exp(-2.0 * (x * x + y * y));
    double bracket = std::erf(gamma * (y - x)) * std::erf(gamma * (x + y));
    if (nu == 1) {
        const double r2g = std::sqrt(2.0) * gamma;
        bracket -= 2.0 / std::sqrt(kPi) * inner_erf_integral(r2g * (x + y), r2g * x, r2g * y);
        return pref * x * y * bracket;
    }
    return pref * bracket;
}

// G for 0 <= x < y, a > 1, manifestly real arrangement
double G_ordered_cont(int nu, double a, double x, double y)
{
    const double em = (a - 1.0) * (a + 1.0);
    const double gp = std::sqrt(em) / a;
    const double pref = kPi * a * a * em / 8.0 * std::exp(-2.0 * (x * x + y * y));
    double bracket = erfi(gp * (y - x)) * erfi(gp * (x + y));
    if (nu == 1) {
        const double r2g = std::sqrt(2.0) * gp;
        bracket -= 2.0 / std::sqrt(kPi) * inner_erfi_integral(r2g * (x + y), r2g * x, r2g * y);
        return pref * x * y * bracket;
    }
    return pref * bracket;
}

// 0.5 * sum_{+-} s_{+-} exp(-2 l^2/a^2 - 2 x^2/(a^2 eps) +- 4 x l / a^2), with the square completed
// so that the exponent does not cancel when a is small
double kernel_factor(int nu, double a, double eps, double l, double x)
{
    const double c = 2.0 / (a * a * eps);
    const double shift = eps * l;
    const double plus = std::exp(-c * (x - shift) * (x - shift) - 2.0 * l * l);
    const double minus = std::exp(-c * (x + shift) * (x + shift) - 2.0 * l * l);
    return 0.5 * (nu == 0 ? plus + minus : plus - minus);
}

}  // namespace

void TransitionParams::validate() const
{
    if (n < 1) throw DomainError("n must be at least 1");
    check_nu(nu);
    if (!(a > 0) || !std::isfinite(a)) throw DomainError("a must be positive");
}

void require_subcritical(double a, const char* where)
{
    if (!(a > 0 && a < 1)) throw DomainError(std::string(where) + ": requires 0 < a < 1");
}

double f_nu(int nu, double a, double x)
{
    check_nu(nu);
    if (!(a > 0)) throw DomainError("f_nu: a must be positive");
    const double z = 4.0 * x / (a * a);
    if (std::abs(z) > 709.0) throw RangeError("f_nu: argument beyond double range, use f_nu_log");
    return nu == 0 ? std::cosh(z) : std::sinh(z);
}

LogValue f_nu_log(int nu, double a, double x)
{
    check_nu(nu);
    if (!(a > 0)) throw DomainError("f_nu: a must be positive");
    const double z = 4.0 * x / (a * a);
    if (!std::isfinite(z)) throw RangeError("f_nu: argument not finite");
    const double az = std::abs(z);
    if (nu == 0) return {az + std::log1p(std::exp(-2.0 * az)) - std::log(2.0), 1};
    if (z == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    return {az + std::log1p(-std::exp(-2.0 * az)) - std::log(2.0), z > 0 ? 1 : -1};
}

WeightValue g_weight_value(int nu, double a, double y)
{
    check_nu(nu);
    check_a(a);
    if (y < 0) throw DomainError("g_weight: y must be nonnegative");
    if (a < 1.0) {
        const double eps = one_minus_a2(a);
        double v = std::sqrt(kPi * a * a * eps / 8.0) * std::exp(-2.0 * y * y);
        if (nu == 1) v *= y * std::erf(std::sqrt(2.0 * eps) / a * y);
        return {v, Regime::subcritical};
    }
    const double em = (a - 1.0) * (a + 1.0);
    double v = std::sqrt(kPi * a * a * em / 8.0) * std::exp(-2.0 * y * y);
    if (nu == 1) v *= y * erfi(std::sqrt(2.0 * em) / a * y);
    return {v, Regime::continued};
}

double g_weight(int nu, double a, double y) { return g_weight_value(nu, a, y).value; }

WeightValue G_weight_value(int nu, double a, double x, double y)
{
    check_nu(nu);
    check_a(a);
    if (x < 0 || y < 0) throw DomainError("G_weight: arguments must be nonnegative");
    const Regime regime = a < 1.0 ? Regime::subcritical : Regime::continued;
    if (x == y) return {0.0, regime};
    const double lo = std::min(x, y), hi = std::max(x, y);
    const double v = regime == Regime::subcritical ? G_ordered_sub(nu, a, lo, hi) : G_ordered_cont(nu, a, lo, hi);
    return {x < y ? v : -v, regime};
}

double G_weight(int nu, double a, double x, double y) { return G_weight_value(nu, a, x, y).value; }

double g_weight_def_oracle(int nu, double a, double y, const QuadratureSpec& spec)
{
    check_nu(nu);
    require_subcritical(a, "g_weight_def_oracle");
    if (y < 0) throw DomainError("g_weight_def_oracle: y must be nonnegative");
    if (nu == 1 && y == 0.0) return 0.0;
    const double eps = one_minus_a2(a);
    const double decay = 2.0 / (a * a * eps);
    const double peak = eps * y;
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    const double integral = integrate_halfline_gaussian(
        [&](double x) { return kernel_factor(nu, a, eps, y, x); }, decay, s, peak, {peak});
    return (nu == 1 ? y : 1.0) * integral;
}

double G_weight_def_oracle(int nu, double a, double x, double y, const QuadratureSpec& spec)
{
    check_nu(nu);
    require_subcritical(a, "G_weight_def_oracle");
    if (x < 0 || y < 0) throw DomainError("G_weight_def_oracle: arguments must be nonnegative");
    if (nu == 1 && (x == 0.0 || y == 0.0)) return 0.0;
    const double eps = one_minus_a2(a);
    const double decay = 2.0 / (a * a * eps);
    QuadratureSpec outer = spec;
    outer.abs_tol = 1e-300;
    QuadratureSpec inner = outer.tightened(0.1);

    // Phi(s) = int_0^inf sign(t - s) F_y(t) dt = total - 2 int_0^s F_y(t) dt
    const double peak_y = eps * y, peak_x = eps * x;
    const auto fy = [&](double t) { return kernel_factor(nu, a, eps, y, t); };
    const double total = integrate_halfline_gaussian(fy, decay, inner, peak_y, {peak_y});
    const auto phi = [&](double s) { return total - 2.0 * integrate_finite(fy, 0.0, s, inner, {peak_y}); };
    const double integral = integrate_halfline_gaussian(
        [&](double s) { return kernel_factor(nu, a, eps, x, s) * phi(s); }, decay, outer,
        std::max(peak_x, peak_y), {peak_x, peak_y});
    return (nu == 1 ? x * y : 1.0) * integral;
}

double G_tilde1(double a, double s, double t)
{
    require_subcritical(a, "G_tilde1");
    const double eps = one_minus_a2(a);
    const double beta = std::sqrt(2.0 * eps) / a;
    const double lo = std::min(s, t) * beta, hi = std::max(s, t) * beta;
    const double c = (s + t) * beta;
    // int_lo^hi erf(u - c) e^{-u^2} = - int erf(c - u) e^{-u^2}
    double integral = -inner_erf_integral(c, lo, hi);
    if (s > t) integral = -integral;
    return -std::sqrt(kPi) / 4.0 * a * a * eps * s * t * std::exp(-2.0 * (s * s + t * t)) * integral;
}

double G_bar(int nu, double a, double y)
{
    check_nu(nu);
    require_subcritical(a, "G_bar");
    if (y < 0) throw DomainError("G_bar: y must be nonnegative");
    const double eps = one_minus_a2(a);
    const double beta = std::sqrt(2.0 * eps) / a;
    if (nu == 1) {
        const double c = kPi * a * a * eps * std::sqrt(eps);
        const double t1 = c / 32.0 * y * std::exp(-2.0 * y * y) * std::erf(beta * y);
        const double t2 = c / (16.0 * std::sqrt(1.0 + a * a)) * y * std::exp(-4.0 * y * y / (1.0 + a * a)) *
                          std::erf(beta / std::sqrt(1.0 + a * a) * y);
        return t1 - t2;
    }
    // int_{-inf}^{inf} erf(a|u|) e^{-(u-b)^2} du split as
    // int_0^inf erf(a u) [e^{-(u-b)^2} + e^{-(u+b)^2} - 2 e^{-u^2}] du + 2 arctan(a)/sqrt(pi)
    // which keeps the cancellation against the constant term exact as b -> 0.
    const double b = beta * y;
    const auto integrand = [a, b](double u) {
        double diff;
        if (b <= 0.1) {
            const double sh = std::sinh(u * b);
            diff = 2.0 * std::exp(-u * u) * (2.0 * std::exp(-b * b) * sh * sh + std::expm1(-b * b));
        }
        else
            diff = std::exp(-(u - b) * (u - b)) + std::exp(-(u + b) * (u + b)) - 2.0 * std::exp(-u * u);
        return std::erf(a * u) * diff;
    };
    QuadratureSpec spec;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-13;
    const double j = b == 0.0 ? 0.0 : integrate_halfline_gaussian(integrand, 1.0, spec, b, {b});
    const double constant = 2.0 / std::sqrt(kPi) * std::atan((a - 1.0) / (a + 1.0));
    return kPi * a * a * eps / std::pow(2.0, 3.5) * std::exp(-2.0 * y * y) * (j + constant);
}

double g_bar(int nu, double a)
{
    check_nu(nu);
    require_subcritical(a, "g_bar");
    const double eps = one_minus_a2(a);
    return std::sqrt(kPi * kPi * kPi * a * a / 32.0) * std::pow(eps / (2.0 * kPi), 0.5 * (nu + 1));
}

double g_bar_direct(int nu, double a)
{
    check_nu(nu);
    require_subcritical(a, "g_bar_direct");
    const double eps = one_minus_a2(a);
    return kPi * std::sqrt(a * a * eps) / 8.0 * std::pow(eps / (2.0 * kPi), 0.5 * nu);
}

double g_bar_gamma(int nu, double a)
{
    check_nu(nu);
    require_subcritical(a, "g_bar_gamma");
    const double eps = one_minus_a2(a);
    return a * std::pow(eps, 0.5 * (1 + nu)) / std::pow(2.0, 0.5 * (4 + nu)) * std::tgamma(1.5) *
           std::tgamma(0.5 * (1 + nu));
}

double H_weight(int nu, double a, double x, double y)
{
    require_subcritical(a, "H_weight");
    if (x == y) return 0.0;
    const double gb = g_bar(nu, a);
    const double lo = std::min(x, y), hi = std::max(x, y);
    const double v = G_weight(nu, a, lo, hi) - g_weight(nu, a, lo) * G_bar(nu, a, hi) / gb +
                     g_weight(nu, a, hi) * G_bar(nu, a, lo) / gb;
    return x < y ? v : -v;
}

}  // namespace rmtx
