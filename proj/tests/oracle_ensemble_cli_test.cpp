// Reference behaviour of the samplers, Monte Carlo estimators and the command line.
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rmtx/cli.hpp"
#include "rmtx/ensemble.hpp"
#include "rmtx/kernels.hpp"
#include "rmtx/sop.hpp"

using namespace rmtx;

namespace {

constexpr double kPi = std::numbers::pi;

double half_normal(double x) { return 2.0 * std::sqrt(2.0 / kPi) * std::exp(-2.0 * x * x); }

SamplerConfig config(int n, int nu, double a, long samples, std::uint64_t seed, Model model = Model::two_matrix)
{
    SamplerConfig c;
    c.model = model;
    c.params = {n, nu, a};
    c.samples = samples;
    c.seed = seed;
    c.streams = 4;
    return c;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr)
{
    args.insert(args.begin(), "rmtx_cli");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int rc = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

std::vector<std::vector<double>> read_csv(const std::string& path)
{
    std::ifstream f(path);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool header = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir()
{
    auto p = std::filesystem::temp_directory_path() / "rmtx_oracle_cli";
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(OracleTwoMatrixSampler, BlockVarianceSmallA)
{
    const double a = 0.05;
    CounterRng rng(3, 0);
    double s2 = 0.0;
    long count = 0;
    for (int k = 0; k < 20000; ++k) {
        const AntisymMatrix m = sample_two_matrix({3, 0, a}, rng);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                s2 += m(i, j) * m(i, j);
                ++count;
            }
    }
    const double var = s2 / count, expect = a * a / 4;
    // variance of a chi-square mean: 2 sigma^4 / count
    EXPECT_NEAR(var, expect, 3 * std::sqrt(2.0 / count) * expect);
}

TEST(OracleTwoMatrixSampler, SinglePairIsHalfNormal)
{
    for (double a : {0.1, 0.6, 0.95}) {
        const Histogram h = mc_density_histogram(config(1, 0, a, 100000, 11), 0.0, 2.0, 40);
        EXPECT_LT(compare_to_density(h, half_normal).max_z, 4.0) << "a=" << a;
    }
}

TEST(OracleTwoMatrixSampler, TraceMomentIdentity)
{
    CounterRng rng(4, 0);
    double tr = 0.0, sv = 0.0;
    const int draws = 20000;
    for (int k = 0; k < draws; ++k) {
        const AntisymMatrix m = sample_two_matrix({3, 1, 0.4}, rng);
        double t = 0.0;
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t j = 0; j < m.dim(); ++j) t += m(i, j) * m(i, j);
        tr += t;
        for (double l : singular_values_antisym(m, 1).singular_values) sv += 2 * l * l;
    }
    EXPECT_NEAR(tr / draws, sv / draws, 1e-9 * tr / draws);
    // 9 entries inside the diagonal blocks with variance a^2/4, 12 coupling entries with variance 1/4
    const double expected = 2.0 * (9 * 0.16 / 4 + 12 * 0.25);
    EXPECT_NEAR(tr / draws, expected, 0.02 * expected);
}

TEST(OracleThreeMatrixSampler, DiagonalBlockVariance)
{
    const double a = 0.3;
    CounterRng rng(5, 0);
    double s2 = 0.0;
    long count = 0;
    for (int k = 0; k < 20000; ++k) {
        const AntisymMatrix m = sample_three_matrix({3, 1, a}, rng);
        for (int i = 3; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j) {
                s2 += m(i, j) * m(i, j);
                ++count;
            }
    }
    const double expect = a * a / 4;
    EXPECT_NEAR(s2 / count, expect, 3 * std::sqrt(2.0 / count) * expect);
}

TEST(OracleThreeMatrixSampler, AgreesWithTwoMatrixModel)
{
    const Histogram two = mc_density_histogram(config(3, 1, 0.5, 100000, 21), 0.0, 4.5, 60);
    const Histogram three = mc_density_histogram(config(3, 1, 0.5, 100000, 22, Model::three_matrix), 0.0, 4.5, 60);
    EXPECT_LT(compare_histograms(two, three).max_z, 4.0);
}

TEST(OracleDensityHistogram, MatchesKernelDensity)
{
    auto cache = transform_cache({4, 0, 0.5});
    const Histogram h = mc_density_histogram(config(4, 0, 0.5, 100000, 31), 0.0, 4.5, 60);
    EXPECT_LT(compare_to_density(h, [&](double x) { return density_R1(*cache, x); }).max_z, 4.0);
    double mass = 0.0;
    for (int i = 0; i < h.bins; ++i) mass += h.density(i) * h.width();
    EXPECT_NEAR(mass, 4.0, 1e-3);
}

TEST(OracleDensityHistogram, Deterministic)
{
    const Histogram a = mc_density_histogram(config(3, 0, 0.7, 20000, 99), 0.0, 4.0, 50);
    const Histogram b = mc_density_histogram(config(3, 0, 0.7, 20000, 99), 0.0, 4.0, 50);
    EXPECT_EQ(a.counts, b.counts);
}

TEST(OracleSmallestHistogram, ChiralLimitExactLaw)
{
    const Histogram h = mc_smallest_histogram(config(4, 1, 1e-3, 100000, 41), 0.0, 1.5, 60);
    EXPECT_LT(compare_to_density(h, [](double s) { return smallest_exact_chgoe(4, 1, s); }).max_z, 3.0);
    const Histogram h0 = mc_smallest_histogram(config(4, 0, 1e-3, 100000, 42), 0.0, 1.5, 60);
    EXPECT_LT(compare_to_density(h0, [](double s) { return smallest_exact_chgoe(4, 0, s); }).max_z, 3.0);
}

TEST(OracleSmallestHistogram, TricomiLawAtTwo)
{
    const Histogram h = mc_smallest_histogram(config(2, 0, 1e-3, 100000, 43), 0.0, 2.0, 40);
    EXPECT_LT(compare_to_density(h, [](double s) { return smallest_exact_chgoe(2, 0, s); }).max_z, 3.0);
}

TEST(OracleSmallestHistogram, TruncatedExpansionAtSmallS)
{
    // compared where the third-order term of the expansion is below 1e-3
    auto cache = transform_cache({4, 0, 0.5});
    const Histogram h = mc_smallest_histogram(config(4, 0, 0.5, 100000, 44), 0.0, 2.0, 60);
    const BinCheck b = compare_to_density(
        h, [&](double s) { return smallest_p1_truncated(*cache, s).value; },
        [](double, double hi) { return hi <= 0.4; });
    EXPECT_GE(b.bins_checked, 10);
    EXPECT_LT(b.max_z, 4.0);
}

TEST(OracleSmallestHistogram, UnitMass)
{
    const Histogram h = mc_smallest_histogram(config(3, 1, 0.6, 5000, 45), 0.0, 50.0, 10);
    EXPECT_EQ(h.total_values, h.matrices);
    double mass = 0.0;
    for (int i = 0; i < h.bins; ++i) mass += h.density(i) * h.width();
    EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(OracleHeine, FirstPolynomial)
{
    CounterRng rng(51, 0);
    const McEstimate e = heine_mc(1, 0, 0.5, 1.0, 1000000, rng);
    EXPECT_LT(std::abs(e.estimate - 0.75), 3 * e.std_error);
}

TEST(OracleHeine, ZerothPolynomialIsExact)
{
    CounterRng rng(52, 0);
    const McEstimate e = heine_mc(0, 1, 0.5, 0.7, 100, rng);
    EXPECT_EQ(e.estimate, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(OracleHeine, ZerothDualPolynomial)
{
    const double a = 0.5, ct = 0.3;
    const SqPolynomial q = q_poly(0, 0, a, ct);
    const double c = static_cast<double>(q.coeffs[0]);
    CounterRng rng(53, 0);
    const McEstimate e = heine_mc(0, 0, a, 1.0, 100, rng, HeineKind::q, c);
    EXPECT_LE(std::abs(e.estimate - q(1.0)), std::max(3 * e.std_error, 1e-15));
}

TEST(OracleSplit, FactorizesAtLargeA)
{
    CounterRng r1(61, 0), r2(62, 0), r3(63, 0);
    EXPECT_TRUE(mc_split_compare(4, 0, 100.0, 10000, r1).passed());
    EXPECT_TRUE(mc_split_compare(3, 1, 100.0, 10000, r2).passed());
    EXPECT_FALSE(mc_split_compare(4, 0, 1.0, 10000, r3).passed());
}

TEST(OracleCli, DensityCsvIntegratesToN)
{
    const std::string path = (scratch_dir() / "d.csv").string();
    ASSERT_EQ(run_cli({"density", "--n", "4", "--nu", "0", "--a", "0.5", "--grid", "0:3:300", "--out", path}), 0);
    const auto rows = read_csv(path);
    ASSERT_EQ(rows.size(), 300u);
    double integral = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        integral += 0.5 * (rows[i][1] + rows[i - 1][1]) * (rows[i][0] - rows[i - 1][0]);
    EXPECT_NEAR(integral, 4.0, 1e-3);
}

TEST(OracleCli, HistogramRerunIsByteIdentical)
{
    const std::string p1 = (scratch_dir() / "m1.csv").string(), p2 = (scratch_dir() / "m2.csv").string();
    const std::vector<std::string> base{"density-mc", "--model", "three", "--n",    "3",  "--nu",   "1",
                                        "--a",        "0.9",     "--samples", "100000", "--bins", "60", "--seed",
                                        "42"};
    auto a1 = base, a2 = base;
    a1.insert(a1.end(), {"--out", p1});
    a2.insert(a2.end(), {"--out", p2});
    ASSERT_EQ(run_cli(a1), 0);
    ASSERT_EQ(run_cli(a2), 0);
    EXPECT_EQ(slurp(p1), slurp(p2));
    const auto rows = read_csv(p1);
    ASSERT_EQ(rows.size(), 60u);
    EXPECT_EQ(rows[0].size(), 4u);
}

TEST(OracleCli, JpdfOracleSuitePasses)
{
    std::string out, err;
    EXPECT_EQ(run_cli({"suite", "--name", "jpdf-oracle", "--a", "0.5"}, &out, &err), 0) << err;
}
