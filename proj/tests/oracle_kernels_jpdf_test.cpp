// Reference values for kernels, correlation functions and the joint density.
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rmtx/jpdf.hpp"
#include "rmtx/kernels.hpp"
#include "rmtx/quad.hpp"

using namespace rmtx;

namespace {

constexpr double kPi = std::numbers::pi;

double half_normal(double x) { return 2.0 * std::sqrt(2.0 / kPi) * std::exp(-2.0 * x * x); }

QuadratureSpec tight()
{
    QuadratureSpec s;
    s.abs_tol = 1e-13;
    s.rel_tol = 1e-11;
    return s;
}

}  // namespace

TEST(OracleTransforms, BarOfOneIsMinusGBar)
{
    for (int nu = 0; nu <= 1; ++nu)
        for (double x : {0.2, 0.9, 1.7}) {
            const SqPolynomial one{{1.0L}, true};
            EXPECT_NEAR(transform_bar(one, nu, 0.5, x), -G_bar(nu, 0.5, x), 1e-8);
        }
}

TEST(OracleTransforms, EqualPolynomialsCancelInKernel)
{
    const SqPolynomial p = p_poly(2, 0, 0.5);
    for (double x : {0.3, 1.1}) {
        const double pb = transform_bar(p, 0, 0.5, x);
        EXPECT_EQ(p(x) * pb - p(x) * pb, 0.0);
    }
}

TEST(OracleTransforms, TildeMatchesModifiedWeightQuadrature)
{
    const SqPolynomial p = p_poly(1, 0, 0.5);
    for (double x : {0.5, 1.2}) {
        const double direct = integrate_halfline_gaussian(
            [&](double y) { return p(y) * H_weight(0, 0.5, x, y); }, 2.0, tight(), x, {x});
        EXPECT_NEAR(transform_tilde(p, 0, 0.5, x), direct, 1e-8);
    }
}

TEST(OracleTransforms, TildeDecaysWithWeight)
{
    const SqPolynomial p = p_poly(1, 0, 0.5);
    const double v = std::abs(transform_tilde(p, 0, 0.5, 6.0));
    EXPECT_LT(v, 1e3 * std::exp(-2.0 * 36.0));
}

TEST(OracleTransforms, TildeTwoTolerances)
{
    const SqPolynomial p = p_poly(1, 0, 0.5);
    QuadratureSpec loose;
    loose.rel_tol = 1e-7;
    const double a = transform_tilde(p, 0, 0.5, 0.5, loose);
    const double b = transform_tilde(p, 0, 0.5, 0.5, tight());
    EXPECT_NEAR(a, b, 1e-7);
}

TEST(OracleKernelSlice, SingleValueBorderOnly)
{
    const double gb = g_bar(0, 0.5);
    const KernelSlice k = kernel_slice(1, 0, 0.5, 0.4, 0.9);
    EXPECT_EQ(k.I, 0.0);
    // the border term carries the second argument of S
    EXPECT_NEAR(k.S_xy, g_weight(0, 0.5, 0.9) / gb, 1e-13);
    EXPECT_NEAR(k.S_yx, g_weight(0, 0.5, 0.4) / gb, 1e-13);
    EXPECT_NEAR(k.D, H_weight(0, 0.5, 0.4, 0.9), 1e-13);
    const KernelSlice d = kernel_slice(1, 0, 0.5, 0.7, 0.7);
    EXPECT_NEAR(d.S_xy, g_weight(0, 0.5, 0.7) / gb, 1e-13);
}

TEST(OracleKernelSlice, DiagonalIntegratesToN)
{
    const double v = integrate_halfline_gaussian([](double x) { return kernel_slice(2, 0, 0.5, x, x).S_xy; }, 2.0,
                                                 tight(), 1.5);
    EXPECT_NEAR(v, 2.0, 1e-6);
    EXPECT_NEAR(kernel_slice(4, 1, 0.5, 0.8, 0.8).I, 0.0, 1e-14);
}

TEST(OracleDensity, SingleValueIsHalfNormal)
{
    for (double a : {0.1, 0.5, 0.9})
        for (double x : {0.0, 0.4, 1.3})
            EXPECT_NEAR(density_R1(1, 0, a, x), half_normal(x), 1e-12) << "a=" << a << " x=" << x;
}

TEST(OracleDensity, IntegratesToN)
{
    for (double a : {0.2, 0.5, 0.9})
        for (int nu = 0; nu <= 1; ++nu)
            for (int n = 1; n <= 5; ++n) {
                auto cache = transform_cache({n, nu, a});
                const double v = integrate_halfline_gaussian([&](double x) { return density_R1(*cache, x); }, 2.0,
                                                             tight(), std::sqrt(n));
                EXPECT_NEAR(v, n, 1e-6) << "a=" << a << " nu=" << nu << " n=" << n;
            }
}

TEST(OracleDensity, ZeroModeRepulsion)
{
    for (int n : {1, 2, 3, 4}) {
        EXPECT_NEAR(density_R1(n, 1, 0.5, 0.0), 0.0, 1e-14);
        EXPECT_LT(density_R1(n, 1, 0.5, 1e-3), 1e-2);
    }
}

TEST(OracleCorrelations, RkReducesToLowerOrders)
{
    auto cache = transform_cache({4, 0, 0.5});
    for (double x : {0.3, 1.0}) EXPECT_NEAR(corr_Rk(*cache, {x}), density_R1(*cache, x), 1e-14);
    for (auto [x, y] : {std::pair{0.3, 0.9}, std::pair{1.2, 0.5}})
        EXPECT_NEAR(corr_Rk(*cache, {x, y}), corr_R2(*cache, x, y), 1e-10);
    EXPECT_NEAR(corr_Rk(*cache, {0.6, 0.6, 1.1}), 0.0, 1e-8);
}

TEST(OracleCorrelations, PairFunction)
{
    for (int n : {2, 3, 4})
        for (int nu = 0; nu <= 1; ++nu) {
            auto cache = transform_cache({n, nu, 0.5});
            EXPECT_NEAR(corr_R2(*cache, 0.8, 0.8), 0.0, 1e-8);
            EXPECT_NEAR(corr_R2(*cache, 0.3, 1.1), corr_R2(*cache, 1.1, 0.3), 1e-10);
            for (double x : {0.4, 1.0}) {
                const double m = integrate_halfline_gaussian([&](double y) { return corr_R2(*cache, x, y); }, 2.0,
                                                             tight(), std::sqrt(n) + x, {x});
                EXPECT_NEAR(m, (n - 1) * density_R1(*cache, x), 1e-5) << "n=" << n << " nu=" << nu << " x=" << x;
            }
        }
}

TEST(OracleSmallest, Truncation)
{
    for (double s : {0.1, 0.5, 1.2}) {
        const TruncatedValue v = smallest_p1_truncated(1, 0, 0.5, s);
        EXPECT_NEAR(v.value, density_R1(1, 0, 0.5, s), 1e-14);
    }
    EXPECT_NEAR(smallest_p1_truncated(4, 1, 0.5, 0.0).value, 0.0, 1e-14);
    for (double s : {0.22, 0.25, 0.28})
        EXPECT_NEAR(smallest_p1_truncated(4, 1, 1e-3, s).value, smallest_exact_chgoe(4, 1, s), 2e-2);
}

TEST(OracleReferenceDensities, Chgoe)
{
    for (int n : {2, 4})
        for (int nu = 0; nu <= 1; ++nu) {
            const double v = integrate_halfline_gaussian([&](double x) { return density_chgoe_ref(n, nu, x); }, 2.0,
                                                         tight(), std::sqrt(n));
            EXPECT_NEAR(v, n, 1e-5);
            double sup = 0.0;
            for (int i = 0; i <= 150; ++i) {
                const double x = 3.0 * i / 150;
                sup = std::max(sup, std::abs(density_R1(n, nu, 1e-3, x) - density_chgoe_ref(n, nu, x)));
            }
            EXPECT_LT(sup, 5e-3);
        }
    EXPECT_NEAR(density_chgoe_ref(2, 1, 0.0), 0.0, 1e-14);
}

TEST(OracleReferenceDensities, Gaoe)
{
    for (int n : {1, 2, 3, 4, 5})
        for (int nu = 0; nu <= 1; ++nu) {
            const double v = integrate_halfline_gaussian([&](double x) { return density_gaoe_ref(n, nu, x); }, 2.0,
                                                         tight(), std::sqrt(n));
            EXPECT_NEAR(v, n, 1e-8);
            double sup = 0.0;
            for (int i = 0; i <= 150; ++i) {
                const double x = 4.0 * i / 150;
                sup = std::max(sup, std::abs(density_R1(n, nu, 1.0 - 1e-6, x) - density_gaoe_ref(n, nu, x)));
            }
            EXPECT_LT(sup, 1e-3);
        }
    EXPECT_NEAR(density_gaoe_ref(3, 1, 0.0), 0.0, 1e-14);
}

TEST(OracleSmallestExact, Properties)
{
    for (int n : {1, 2, 4, 7}) {
        const double v = integrate_halfline_gaussian([&](double s) { return smallest_exact_chgoe(n, 1, s); }, 2.0 * n,
                                                     tight());
        EXPECT_NEAR(v, 1.0, 1e-10);
    }
    // mode of 4 n s exp(-2 n s^2) at s = 1/(2 sqrt(n))
    const double h = 1e-5;
    const double d = (smallest_exact_chgoe(4, 1, 0.25 + h) - smallest_exact_chgoe(4, 1, 0.25 - h)) / (2 * h);
    EXPECT_NEAR(d, 0.0, 1e-6);
}

TEST(OracleJpdfConstant, SingleValue)
{
    for (int nu = 0; nu <= 1; ++nu)
        for (double a : {0.2, 0.5, 0.9}) EXPECT_NEAR(std::exp(jpdf_const(1, nu, a)) * g_bar(nu, a), 1.0, 1e-12);
}

TEST(OracleJpdfConstant, PairNormalizes)
{
    const double v = integrate_quadrant(
        [](double x, double y) {
            const JpdfValue j = jpdf_eval(2, 0, 0.5, {x, y});
            return j.degenerate ? 0.0 : j.value;
        },
        2.0, tight(), 1.5);
    EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(OracleJpdf, Values)
{
    const double c = std::exp(jpdf_const(1, 0, 0.5));
    EXPECT_NEAR(jpdf_eval(1, 0, 0.5, {0.6}).value, c * g_weight(0, 0.5, 0.6), 1e-14);
    const JpdfValue z = jpdf_eval(2, 0, 0.5, {0.7, 0.7});
    EXPECT_TRUE(z.degenerate);
    EXPECT_EQ(z.value, 0.0);
    const double c2 = std::exp(jpdf_const(2, 0, 0.5));
    EXPECT_NEAR(jpdf_eval(2, 0, 0.5, {0.5, 1.0}).value, c2 * (1.0 - 0.25) * G_weight(0, 0.5, 0.5, 1.0), 1e-14);
}

TEST(OracleBruteForce, SingleValue)
{
    for (int nu = 0; nu <= 1; ++nu)
        for (double x : {0.3, 1.1}) {
            const double c = std::exp(jpdf_const(1, nu, 0.5));
            EXPECT_NEAR(corr_Rk_bruteforce(1, nu, 0.5, {x}), c * g_weight(nu, 0.5, x), 1e-14);
            EXPECT_NEAR(corr_Rk_bruteforce(1, nu, 0.5, {x}), density_R1(1, nu, 0.5, x), 1e-12);
        }
}

TEST(OracleBruteForce, DensityPairOnGrid)
{
    auto cache = transform_cache({2, 0, 0.5});
    for (int i = 0; i < 20; ++i) {
        const double x = 0.05 + 0.13 * i;
        EXPECT_NEAR(corr_Rk_bruteforce(2, 0, 0.5, {x}), density_R1(*cache, x), 1e-6) << x;
    }
}

TEST(OracleBruteForce, PairFunctionThreeValues)
{
    auto cache = transform_cache({3, 0, 0.5});
    for (double x : {0.2, 0.6, 1.0, 1.4, 1.9})
        for (double y : {0.3, 0.7, 1.1, 1.5, 2.0})
            EXPECT_NEAR(corr_Rk_bruteforce(3, 0, 0.5, {x, y}), corr_R2(*cache, x, y), 1e-5) << x << " " << y;
}

TEST(OracleSelberg, Values)
{
    for (double kappa : {0.0, 0.5, 2.0})
        for (double beta : {1.0, 2.0, 4.0})
            EXPECT_NEAR(selberg(1, kappa, beta), std::pow(2.0 / beta, kappa + 1) * std::tgamma(kappa + 1),
                        1e-12 * selberg(1, kappa, beta));
    auto quad2 = [](double kappa, double beta) {
        QuadratureSpec s;
        s.abs_tol = 1e-13;
        s.rel_tol = 1e-11;
        // symmetric integrand, so twice the integral over y < x keeps the kink at the panel edge
        return 2.0 * integrate_semi_infinite(
                         [&](double x) {
                             return integrate_finite(
                                 [&](double y) {
                                     return std::pow(x * y, kappa) * std::pow(x - y, beta) *
                                            std::exp(-beta / 2 * (x + y));
                                 },
                                 0.0, x, s);
                         },
                         s);
    };
    EXPECT_NEAR(selberg(2, 0.0, 2.0), quad2(0.0, 2.0), 1e-8 * selberg(2, 0.0, 2.0));
    EXPECT_NEAR(selberg(2, 1.0, 1.0), quad2(1.0, 1.0), 1e-8 * selberg(2, 1.0, 1.0));
}
