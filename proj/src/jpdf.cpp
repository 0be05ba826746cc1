#include "rmtx/jpdf.hpp"

#include <cmath>
#include <string>

#include "rmtx/errors.hpp"
#include "rmtx/linalg.hpp"
#include "rmtx/special.hpp"
#include "rmtx/weights.hpp"

namespace rmtx {

namespace {

constexpr int kMaxJpdfN = 6;
constexpr int kMaxBruteN = 3;

void check_args(int n, int nu, double a)
{
    TransitionParams{n, nu, a}.validate();
    require_subcritical(a, "jpdf");
}

}  // namespace

double jpdf_const(int n, int nu, double a)
{
    check_args(n, nu, a);
    const double eps = (1.0 - a) * (1.0 + a);
    double v = 0.5 * n * (3.0 + n + nu) * std::log(2.0) - n * std::log(a) - 0.5 * n * (n + nu) * std::log(eps);
    for (int j = 0; j < n; ++j) v -= ln_gamma((j + 3) / 2.0) + ln_gamma((j + nu + 1) / 2.0);
    return v;
}

JpdfValue jpdf_eval(int n, int nu, double a, const std::vector<double>& lambda)
{
    check_args(n, nu, a);
    if (n > kMaxJpdfN) throw SizeError("jpdf_eval: n is limited to " + std::to_string(kMaxJpdfN));
    if (static_cast<int>(lambda.size()) != n) throw ParityError("jpdf_eval: need exactly n arguments");
    for (double l : lambda)
        if (!(l >= 0)) throw DomainError("jpdf_eval: arguments must be nonnegative");

    JpdfValue out;
    out.log_constant = jpdf_const(n, nu, a);
    out.vandermonde_part = vandermonde_sq(lambda);
    if (out.vandermonde_part == 0.0) {
        out.degenerate = true;
        return out;
    }
    const bool odd = n % 2 == 1;
    AntisymMatrix m(n + (odd ? 1 : 0));
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) m.set(j, k, G_weight(nu, a, lambda[j], lambda[k]));
        if (odd) m.set(j, n, g_weight(nu, a, lambda[j]));
    }
    out.pfaffian_part = pfaffian(m);
    out.value = std::exp(out.log_constant) * out.vandermonde_part * out.pfaffian_part;
    return out;
}

double corr_Rk_bruteforce(int n, int nu, double a, const std::vector<double>& points, const QuadratureSpec& spec)
{
    check_args(n, nu, a);
    if (n > kMaxBruteN) throw SizeError("corr_Rk_bruteforce: n is limited to " + std::to_string(kMaxBruteN));
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > n) throw DomainError("corr_Rk_bruteforce: need 1 <= k <= n points");

    double count = 1.0;  // n! / (n-k)!
    for (int i = n - k + 1; i <= n; ++i) count *= i;

    std::vector<double> args(points);
    args.resize(n);
    const auto density = [&]() { return jpdf_eval(n, nu, a, args).value; };

    const int free = n - k;
    if (free == 0) return count * density();
    if (free == 1) {
        const double v = integrate_halfline_gaussian(
            [&](double x) {
                args[k] = x;
                return density();
            },
            2.0, spec, 0.0, points);
        return count * v;
    }
    const double v = integrate_quadrant(
        [&](double x, double y) {
            args[k] = x;
            args[k + 1] = y;
            return density();
        },
        2.0, spec);
    return count * v;
}

double selberg_log(int n, double kappa, double beta)
{
    if (n < 1) throw DomainError("selberg: n must be positive");
    if (!(beta > 0)) throw DomainError("selberg: beta must be positive");
    if (!(kappa > -1)) throw DomainError("selberg: kappa must exceed -1");
    double v = (n * (kappa + 1.0) + 0.5 * beta * n * (n - 1)) * std::log(2.0 / beta);
    for (int j = 0; j < n; ++j)
        v += ln_gamma(1.0 + 0.5 * beta * (j + 1)) + ln_gamma(1.0 + kappa + 0.5 * beta * j) - ln_gamma(1.0 + 0.5 * beta);
    return v;
}

double selberg(int n, double kappa, double beta) { return std::exp(selberg_log(n, kappa, beta)); }

}  // namespace rmtx
