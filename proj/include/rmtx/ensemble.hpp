#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmtx/linalg.hpp"
#include "rmtx/weights.hpp"

namespace rmtx {

/// Counter-based generator: output k of stream s is a fixed hash of (key(seed, s), k),
/// so a stream's values do not depend on how other streams are scheduled.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform on (0, 1).
    double uniform();
    /// Standard normal by Box-Muller; consumes exactly two words per pair of draws.
    double normal();
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class Model { two_matrix, three_matrix };

struct SamplerConfig {
    Model model = Model::two_matrix;
    TransitionParams params;
    long samples = 100000;
    std::uint64_t seed = 1;
    int streams = 1;

    void validate() const;
};

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    int bins = 1;
    std::vector<long> counts;
    long total_values = 0;   // values that fell inside [lo, hi)
    long matrices = 0;       // sampled matrices
    double per_matrix = 1.0; // values recorded per matrix (n, or 1 for the smallest)

    double width() const { return (hi - lo) / bins; }
    double bin_lo(int i) const { return lo + i * width(); }
    double bin_hi(int i) const { return lo + (i + 1) * width(); }
    /// counts / (matrices * width): integrates to per_matrix over the whole axis.
    double density(int i) const;
    double poisson_err(int i) const;
};

/// J = i M with M = H + [[0, W], [-W^T, 0]]: H antisymmetric with entries N(0, a^2/4),
/// W of size n x (n+nu) with entries N(0, (1-a^2)/4).
AntisymMatrix sample_two_matrix(const TransitionParams& params, CounterRng& rng);

/// M = [[a A, W], [-W^T, a B]] with A (n x n), B ((n+nu) x (n+nu)) antisymmetric and
/// all independent entries N(0, 1/4). Valid for every a > 0.
AntisymMatrix sample_three_matrix(const TransitionParams& params, CounterRng& rng);

/// Antisymmetric GAOE block of size dim with entries N(0, 1/4).
AntisymMatrix sample_gaoe(int dim, CounterRng& rng);

AntisymMatrix sample(const SamplerConfig& config, CounterRng& rng);

/// Histogram of all n singular values per matrix.
Histogram mc_density_histogram(const SamplerConfig& config, double lo, double hi, int bins);
/// Histogram of the smallest singular value per matrix.
Histogram mc_smallest_histogram(const SamplerConfig& config, double lo, double hi, int bins);

struct BinCheck {
    int bins_checked = 0;
    double max_z = 0.0;   // largest |observed - expected| / sigma over the checked bins
    int worst_bin = -1;
    bool within(double n_sigma) const { return max_z <= n_sigma; }
};

/// Compares every bin with the bin average of `density` (per matrix). Sigma is the Poisson
/// width of the expected count, floored at one event. Bins for which `use_bin(lo, hi)` is
/// false are skipped.
BinCheck compare_to_density(const Histogram& h, const std::function<double(double)>& density,
                            const std::function<bool(double, double)>& use_bin = {});

/// Bin-by-bin comparison of two histograms with the same binning; sigma from both counts.
BinCheck compare_histograms(const Histogram& a, const Histogram& b);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

enum class HeineKind { p, q };

/// Average of x^-nu det(x - J) (p) or of the same times (x^2 + Tr J^2 / 2 + c) (q)
/// over two-matrix samples of dimension 2j + nu.
McEstimate heine_mc(int j, int nu, double a, double x, long samples, CounterRng& rng,
                    HeineKind which = HeineKind::p, double c = 0.0);

struct SplitCompare {
    double statistic = 0.0;       // two-sample Kolmogorov-Smirnov distance
    double critical_value = 0.0;  // 1% level
    bool passed() const { return statistic < critical_value; }
};

/// Singular values of J/a from the three-matrix model against those of independent
/// GAOE blocks of sizes n and n + nu.
SplitCompare mc_split_compare(int n, int nu, double a_large, long samples, CounterRng& rng);

/// Two-sample Kolmogorov-Smirnov statistic (inputs are sorted in place).
double ks_statistic(std::vector<double>& x, std::vector<double>& y);

}  // namespace rmtx
