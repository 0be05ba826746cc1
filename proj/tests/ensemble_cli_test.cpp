#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmtx/cli.hpp"
#include "rmtx/ensemble.hpp"
#include "rmtx/errors.hpp"
#include "rmtx/kernels.hpp"
#include "rmtx/suites.hpp"

using namespace rmtx;

namespace {

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

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "rmtx_unit_cli";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::filesystem::remove(p);
    std::filesystem::remove(p.string() + ".meta.jsonl");
    return p;
}

}  // namespace

TEST(CounterRng, Deterministic)
{
    CounterRng a(42, 3), b(42, 3);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.counter(), 100u);
}

TEST(CounterRng, StreamsAndSeedsDiffer)
{
    CounterRng a(42, 0), b(42, 1), c(43, 0);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
}

TEST(CounterRng, UniformOpenInterval)
{
    CounterRng r(1, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(CounterRng, NormalMoments)
{
    CounterRng r(2, 0);
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
        const double z = r.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s1 / m, 0.0, 0.01);
    EXPECT_NEAR(s2 / m, 1.0, 0.01);
    EXPECT_NEAR(s4 / m, 3.0, 0.06);
    // a pair of normals uses two words
    CounterRng q(3, 0);
    q.normal();
    q.normal();
    EXPECT_EQ(q.counter(), 2u);
}

TEST(SamplerConfig, Validate)
{
    SamplerConfig c;
    c.params = {3, 0, 1.2};
    EXPECT_THROW(c.validate(), DomainError);
    c.model = Model::three_matrix;
    EXPECT_NO_THROW(c.validate());
    c.samples = 0;
    EXPECT_THROW(c.validate(), DomainError);
    c.samples = 10;
    c.streams = 0;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Samplers, ShapeAndAntisymmetry)
{
    CounterRng r(4, 0);
    const AntisymMatrix m = sample_two_matrix({3, 1, 0.5}, r);
    ASSERT_EQ(m.dim(), 7u);
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_EQ(m(i, i), 0.0);
        for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(m(i, j), -m(j, i));
    }
    EXPECT_THROW(sample_two_matrix({3, 1, 1.0}, r), DomainError);
    EXPECT_EQ(sample_three_matrix({2, 0, 5.0}, r).dim(), 4u);
    EXPECT_EQ(sample_gaoe(5, r).dim(), 5u);
    EXPECT_THROW(sample_gaoe(0, r), DomainError);
}

TEST(Histogram, StreamCountDoesNotChangeTotals)
{
    SamplerConfig c;
    c.params = {2, 0, 0.5};
    c.samples = 1001;
    c.streams = 3;
    const Histogram h = mc_density_histogram(c, 0.0, 100.0, 10);
    EXPECT_EQ(h.matrices, 1001);
    EXPECT_EQ(h.total_values, 2002);
    EXPECT_DOUBLE_EQ(h.per_matrix, 2.0);
    long sum = 0;
    for (long v : h.counts) sum += v;
    EXPECT_EQ(sum, 2002);
}

TEST(Histogram, SeedChangesCounts)
{
    SamplerConfig c;
    c.params = {2, 1, 0.5};
    c.samples = 2000;
    c.seed = 1;
    const Histogram a = mc_density_histogram(c, 0.0, 3.0, 30);
    c.seed = 2;
    const Histogram b = mc_density_histogram(c, 0.0, 3.0, 30);
    EXPECT_NE(a.counts, b.counts);
    EXPECT_LT(compare_histograms(a, b).max_z, 5.0);
}

TEST(Histogram, PoissonError)
{
    Histogram h;
    h.lo = 0.0;
    h.hi = 1.0;
    h.bins = 2;
    h.counts = {16, 0};
    h.matrices = 4;
    EXPECT_DOUBLE_EQ(h.density(0), 8.0);
    EXPECT_DOUBLE_EQ(h.poisson_err(0), 2.0);
    EXPECT_EQ(h.poisson_err(1), 0.0);
}

TEST(CompareToDensity, DetectsWrongDensity)
{
    SamplerConfig c;
    c.params = {1, 0, 0.5};
    c.samples = 20000;
    const Histogram h = mc_density_histogram(c, 0.0, 2.0, 20);
    const BinCheck bad = compare_to_density(h, [](double x) { return 2.0 * std::exp(-2.0 * x); });
    EXPECT_GT(bad.max_z, 10.0);
    EXPECT_FALSE(bad.within(4.0));
    EXPECT_GE(bad.worst_bin, 0);
    const BinCheck none = compare_to_density(h, [](double) { return 0.0; }, [](double, double) { return false; });
    EXPECT_EQ(none.bins_checked, 0);
}

TEST(Heine, Errors)
{
    CounterRng r(5, 0);
    EXPECT_THROW(heine_mc(7, 0, 0.5, 1.0, 10, r), SizeError);
    EXPECT_THROW(heine_mc(-1, 0, 0.5, 1.0, 10, r), DomainError);
    EXPECT_THROW(heine_mc(1, 0, 0.5, 1.0, 1, r), DomainError);
}

TEST(KsStatistic, Values)
{
    std::vector<double> a{0.1, 0.2, 0.3}, b{0.1, 0.2, 0.3};
    EXPECT_EQ(ks_statistic(a, b), 0.0);
    std::vector<double> c{3.0, 1.0, 2.0}, d{10.0, 11.0};
    EXPECT_EQ(ks_statistic(c, d), 1.0);
    std::vector<double> e{1.0, 3.0}, f{2.0, 4.0};
    EXPECT_DOUBLE_EQ(ks_statistic(e, f), 0.5);
}

TEST(Suites, UnknownName)
{
    EXPECT_THROW(run_suite("nonexistent"), DomainError);
    EXPECT_FALSE(suite_names().empty());
    EXPECT_TRUE(all_passed({}));
    EXPECT_FALSE(all_passed({CheckResult{"s", "c", 1.0, 0.5, false}}));
}

TEST(CliFormat, ShortestRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456.789}) {
        const std::string s = cli::format_double(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(cli::format_double(0.1), "0.1");
}

TEST(CliGrid, Parse)
{
    const cli::Grid g = cli::parse_grid("0:2:5");
    EXPECT_EQ(g.points, 5);
    EXPECT_DOUBLE_EQ(g.at(4), 2.0);
    EXPECT_DOUBLE_EQ(g.at(1), 0.5);
    EXPECT_THROW(cli::parse_grid("0:2"), DomainError);
    EXPECT_THROW(cli::parse_grid("2:0:5"), DomainError);
    EXPECT_THROW(cli::parse_grid("0:1:1"), DomainError);
    EXPECT_THROW(cli::parse_grid("0:x:4"), DomainError);
    EXPECT_THROW(cli::parse_grid("0:1:2.5"), DomainError);
    const auto r = cli::parse_range("0.5:3");
    EXPECT_EQ(r.first, 0.5);
    EXPECT_EQ(r.second, 3.0);
}

TEST(CliExitCodes, DomainAndParseErrors)
{
    std::string err;
    EXPECT_EQ(run_cli({"density", "--n", "2", "--a", "-1"}, nullptr, &err), 2);
    EXPECT_EQ(run_cli({"density", "--bogus"}, nullptr, &err), 2);
    EXPECT_NE(err.find("--grid"), std::string::npos);
    EXPECT_EQ(run_cli({"density", "--grid", "1:0:3"}), 2);
    EXPECT_EQ(run_cli({"density-mc", "--model", "two", "--a", "1.5", "--samples", "10"}), 2);
    EXPECT_EQ(run_cli({"suite", "--name", "nope"}), 2);
}

TEST(CliExitCodes, ValidationFailure)
{
    EXPECT_EQ(run_cli({"split-test", "--n", "2", "--a", "1", "--samples", "5000"}), 4);
}

TEST(CliCsv, RoundTripAndMetadata)
{
    const auto path = scratch("density.csv");
    ASSERT_EQ(run_cli({"density", "--n", "3", "--nu", "1", "--a", "0.4", "--grid", "0.2:1.8:5", "--out", path.string()}),
              0);
    std::ifstream f(path);
    std::string line;
    std::vector<std::string> data;
    bool saw_header = false;
    while (std::getline(f, line)) {
        if (line.rfind("# ", 0) == 0) continue;
        if (!saw_header) {
            EXPECT_EQ(line, "x,value");
            saw_header = true;
            continue;
        }
        data.push_back(line);
    }
    ASSERT_EQ(data.size(), 5u);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto comma = data[i].find(',');
        const double x = std::stod(data[i].substr(0, comma));
        const double v = std::stod(data[i].substr(comma + 1));
        EXPECT_DOUBLE_EQ(x, 0.2 + 0.4 * i);
        EXPECT_EQ(v, density_R1(3, 1, 0.4, x));
    }
    std::ifstream meta(path.string() + ".meta.jsonl");
    std::string record;
    ASSERT_TRUE(std::getline(meta, record));
    EXPECT_NE(record.find("\"command\":\"density\""), std::string::npos);
    EXPECT_NE(record.find("git_describe"), std::string::npos);
}

TEST(CliCsv, StdoutWhenNoPath)
{
    std::string out;
    ASSERT_EQ(run_cli({"sop", "--n", "2", "--nu", "0", "--a", "0.5"}, &out), 0);
    EXPECT_NE(out.find("j,k,p_coeff,q_coeff,h"), std::string::npos);
}

TEST(CliCsv, SmallestColumns)
{
    std::string out;
    ASSERT_EQ(run_cli({"smallest", "--n", "4", "--a", "0.5", "--grid", "0.1:0.5:3"}, &out), 0);
    EXPECT_NE(out.find("x,value"), std::string::npos);
}
