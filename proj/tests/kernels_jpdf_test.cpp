#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "rmtx/errors.hpp"
#include "rmtx/jpdf.hpp"
#include "rmtx/kernels.hpp"

using namespace rmtx;

TEST(TransformCache, RejectsLargeN) { EXPECT_THROW(TransformCache({kMaxKernelN + 1, 0, 0.5}), SizeError); }

TEST(TransformCache, RejectsSupercritical) { EXPECT_THROW(TransformCache({2, 0, 1.5}), DomainError); }

TEST(TransformCache, IndexLayout)
{
    const TransformCache even({4, 0, 0.5});
    ASSERT_EQ(even.pairs().size(), 2u);
    EXPECT_EQ(even.pairs()[0].j, 0);
    EXPECT_EQ(even.pairs()[1].j, 2);
    EXPECT_FALSE(even.odd());
    const TransformCache odd({5, 1, 0.5});
    ASSERT_EQ(odd.pairs().size(), 2u);
    EXPECT_EQ(odd.pairs()[0].j, 1);
    EXPECT_EQ(odd.pairs()[1].j, 3);
    EXPECT_TRUE(odd.odd());
}

TEST(TransformCache, MemoisesEntries)
{
    const TransformCache c({3, 0, 0.4});
    EXPECT_EQ(c.size(), 0u);
    const double d1 = c.at(0.7).density;
    const double d2 = c.at(0.7).density;
    EXPECT_EQ(d1, d2);
    EXPECT_EQ(c.size(), 1u);
}

TEST(TransformCache, ConcurrentAccess)
{
    const TransformCache c({4, 1, 0.6});
    std::vector<double> out(8);
    std::vector<std::thread> ts;
    for (int k = 0; k < 8; ++k) ts.emplace_back([&, k] { out[k] = c.at(0.1 * (k % 4) + 0.2).density; });
    for (auto& t : ts) t.join();
    for (int k = 0; k < 4; ++k) EXPECT_EQ(out[k], out[k + 4]);
}

TEST(Kernel, NegativeArgumentRejected) { EXPECT_THROW(density_R1(2, 0, 0.5, -0.1), DomainError); }

TEST(Kernel, GaugeIndependence)
{
    for (int n : {3, 4})
        for (int nu = 0; nu <= 1; ++nu) {
            auto c0 = transform_cache({n, nu, 0.5}, 0.0);
            auto c1 = transform_cache({n, nu, 0.5}, 0.8);
            for (double x : {0.3, 1.0, 1.9}) {
                EXPECT_NEAR(density_R1(*c0, x), density_R1(*c1, x), 1e-9);
                EXPECT_NEAR(corr_R2(*c0, x, 0.6), corr_R2(*c1, x, 0.6), 1e-8);
            }
        }
}

TEST(Kernel, SliceSymmetries)
{
    auto c = transform_cache({4, 1, 0.7});
    const KernelSlice s = kernel_slice(*c, 0.4, 1.1);
    const KernelSlice t = kernel_slice(*c, 1.1, 0.4);
    EXPECT_NEAR(s.I, -t.I, 1e-12);
    EXPECT_NEAR(s.D, -t.D, 1e-12);
    EXPECT_NEAR(s.S_xy, t.S_yx, 1e-12);
    const KernelSlice diag = kernel_slice(*c, 0.8, 0.8);
    EXPECT_NEAR(diag.S_xy, density_R1(*c, 0.8), 1e-12);
    EXPECT_NEAR(diag.D, 0.0, 1e-12);
}

TEST(Kernel, PairFunctionFromPfaffian)
{
    auto c = transform_cache({3, 1, 0.5});
    EXPECT_NEAR(corr_Rk(*c, {0.5, 1.2}), corr_R2(*c, 0.5, 1.2), 1e-12);
    EXPECT_NEAR(corr_Rk(*c, {0.9}), density_R1(*c, 0.9), 1e-12);
    // coincident points repel
    EXPECT_NEAR(corr_R2(*c, 0.9, 0.9), 0.0, 1e-10);
}

TEST(Kernel, ThreePointVanishesBeyondN)
{
    auto c = transform_cache({2, 0, 0.5});
    EXPECT_NEAR(corr_Rk(*c, {0.3, 0.8, 1.4}), 0.0, 1e-10);
}

TEST(Truncated, OrderOneIsDensity)
{
    auto c = transform_cache({4, 0, 0.5});
    EXPECT_NEAR(smallest_p1_truncated(*c, 0.5, 1).value, density_R1(*c, 0.5), 1e-14);
    EXPECT_THROW(smallest_p1_truncated(*c, 0.5, 3), DomainError);
    EXPECT_THROW(smallest_p1_truncated(*c, -0.5), DomainError);
}

TEST(Truncated, BecomesInvalidAtLargeS)
{
    auto c = transform_cache({4, 0, 0.5});
    EXPECT_TRUE(smallest_p1_truncated(*c, 0.1).valid);
    EXPECT_FALSE(smallest_p1_truncated(*c, 1.5).valid);
}

TEST(ReferenceDensities, Errors)
{
    EXPECT_THROW(density_chgoe_ref(3, 0, 0.5), ParityError);
    EXPECT_THROW(density_gaoe_ref(0, 0, 0.5), DomainError);
    EXPECT_THROW(smallest_exact_chgoe(2, 0, -1.0), DomainError);
}

TEST(ReferenceDensities, SmallestLawsNormalised)
{
    for (int n : {2, 3, 4})
        for (int nu = 0; nu <= 1; ++nu) {
            const double m = integrate_halfline_gaussian([&](double s) { return smallest_exact_chgoe(n, nu, s); },
                                                         0.5 * n);
            EXPECT_NEAR(m, 1.0, 1e-8) << n << " " << nu;
        }
}

TEST(Jpdf, SymmetricUnderPermutation)
{
    const JpdfValue a = jpdf_eval(3, 1, 0.5, {0.3, 0.9, 1.4});
    const JpdfValue b = jpdf_eval(3, 1, 0.5, {1.4, 0.3, 0.9});
    EXPECT_NEAR(a.value, b.value, 1e-13 * a.value);
    EXPECT_GT(a.value, 0.0);
}

TEST(Jpdf, CoincidentArgumentsDegenerate)
{
    const JpdfValue v = jpdf_eval(2, 0, 0.5, {0.7, 0.7});
    EXPECT_TRUE(v.degenerate);
    EXPECT_EQ(v.value, 0.0);
}

TEST(Jpdf, Errors)
{
    EXPECT_THROW(jpdf_eval(7, 0, 0.5, std::vector<double>(7, 0.5)), SizeError);
    EXPECT_THROW(jpdf_eval(2, 0, 0.5, {0.5}), ParityError);
    EXPECT_THROW(jpdf_eval(2, 0, 0.5, {0.5, -0.5}), DomainError);
    EXPECT_THROW(corr_Rk_bruteforce(4, 0, 0.5, {0.5}), SizeError);
    EXPECT_THROW(corr_Rk_bruteforce(2, 0, 0.5, {0.5, 0.6, 0.7}), DomainError);
    EXPECT_THROW(selberg(2, -1.0, 1.0), DomainError);
}

TEST(Jpdf, ConstantMatchesEvaluation)
{
    const JpdfValue v = jpdf_eval(2, 1, 0.4, {0.5, 1.0});
    EXPECT_DOUBLE_EQ(v.log_constant, jpdf_const(2, 1, 0.4));
    EXPECT_NEAR(v.value, std::exp(v.log_constant) * v.pfaffian_part * v.vandermonde_part, 1e-14);
}

TEST(Selberg, LogForm)
{
    EXPECT_NEAR(std::exp(selberg_log(3, 0.5, 1.0)), selberg(3, 0.5, 1.0), 1e-12 * selberg(3, 0.5, 1.0));
}
