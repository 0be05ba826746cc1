#include "rmtx/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "rmtx/errors.hpp"
#include "rmtx/quad.hpp"

namespace rmtx {

namespace {

// SplitMix64 finaliser
std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

void fill_antisym_block(AntisymMatrix& m, std::size_t offset, std::size_t dim, double sigma, CounterRng& rng)
{
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) m.set(offset + i, offset + j, sigma * rng.normal());
}

// Runs body(stream, rng, count) for every stream in parallel; count splits config.samples.
void for_each_stream(const SamplerConfig& config, const std::function<void(int, CounterRng&, long)>& body)
{
    const int s = config.streams;
    std::vector<std::thread> workers;
    workers.reserve(s);
    for (int k = 0; k < s; ++k) {
        const long count = config.samples / s + (k < config.samples % s ? 1 : 0);
        workers.emplace_back([&, k, count] {
            CounterRng rng(config.seed, static_cast<std::uint64_t>(k));
            body(k, rng, count);
        });
    }
    for (auto& w : workers) w.join();
}

Histogram make_histogram(double lo, double hi, int bins)
{
    if (!(lo < hi)) throw DomainError("histogram: need lo < hi");
    if (bins < 1) throw DomainError("histogram: need at least one bin");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.bins = bins;
    h.counts.assign(bins, 0);
    return h;
}

void record(Histogram& h, double v)
{
    if (v < h.lo || v >= h.hi) return;
    const int b = std::min(h.bins - 1, static_cast<int>((v - h.lo) / h.width()));
    ++h.counts[b];
    ++h.total_values;
}

Histogram run_histogram(const SamplerConfig& config, double lo, double hi, int bins, bool smallest_only)
{
    config.validate();
    const Histogram empty = make_histogram(lo, hi, bins);
    std::vector<Histogram> parts(config.streams, empty);
    const int nu = config.params.nu;
    for_each_stream(config, [&](int k, CounterRng& rng, long count) {
        Histogram& h = parts[k];
        for (long i = 0; i < count; ++i) {
            const SpectrumPairs sp = singular_values_antisym(sample(config, rng), nu);
            if (smallest_only) {
                record(h, sp.singular_values.back());
            } else {
                for (double v : sp.singular_values) record(h, v);
            }
        }
        h.matrices = count;
    });
    Histogram out = empty;
    out.per_matrix = smallest_only ? 1.0 : config.params.n;
    for (const Histogram& h : parts) {
        for (int b = 0; b < bins; ++b) out.counts[b] += h.counts[b];
        out.total_values += h.total_values;
        out.matrices += h.matrices;
    }
    return out;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden * mix64(stream + 1)))
{
}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + kGolden * ++counter_); }

double CounterRng::uniform()
{
    // 53 random bits, shifted off zero
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

void SamplerConfig::validate() const
{
    params.validate();
    if (model == Model::two_matrix && !(params.a < 1.0))
        throw DomainError("two-matrix model requires 0 < a < 1; use the three-matrix model for a >= 1");
    if (samples < 1) throw DomainError("samples must be positive");
    if (streams < 1) throw DomainError("streams must be positive");
}

double Histogram::density(int i) const
{
    return matrices > 0 ? counts[i] / (static_cast<double>(matrices) * width()) : 0.0;
}

double Histogram::poisson_err(int i) const
{
    return matrices > 0 ? std::sqrt(static_cast<double>(counts[i])) / (static_cast<double>(matrices) * width()) : 0.0;
}

AntisymMatrix sample_two_matrix(const TransitionParams& params, CounterRng& rng)
{
    params.validate();
    require_subcritical(params.a, "sample_two_matrix");
    const int n = params.n, nu = params.nu;
    const std::size_t dim = params.dim();
    const double sh = params.a / 2.0;
    const double sw = std::sqrt((1.0 - params.a) * (1.0 + params.a)) / 2.0;
    AntisymMatrix m(dim);
    fill_antisym_block(m, 0, dim, sh, rng);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n + nu; ++j) m.set(i, n + j, m(i, n + j) + sw * rng.normal());
    return m;
}

AntisymMatrix sample_three_matrix(const TransitionParams& params, CounterRng& rng)
{
    params.validate();
    const int n = params.n, nu = params.nu;
    AntisymMatrix m(params.dim());
    fill_antisym_block(m, 0, n, params.a / 2.0, rng);
    fill_antisym_block(m, n, n + nu, params.a / 2.0, rng);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n + nu; ++j) m.set(i, n + j, 0.5 * rng.normal());
    return m;
}

AntisymMatrix sample_gaoe(int dim, CounterRng& rng)
{
    if (dim < 1) throw DomainError("sample_gaoe: dimension must be positive");
    AntisymMatrix m(dim);
    fill_antisym_block(m, 0, dim, 0.5, rng);
    return m;
}

AntisymMatrix sample(const SamplerConfig& config, CounterRng& rng)
{
    return config.model == Model::two_matrix ? sample_two_matrix(config.params, rng)
                                             : sample_three_matrix(config.params, rng);
}

Histogram mc_density_histogram(const SamplerConfig& config, double lo, double hi, int bins)
{
    return run_histogram(config, lo, hi, bins, false);
}

Histogram mc_smallest_histogram(const SamplerConfig& config, double lo, double hi, int bins)
{
    return run_histogram(config, lo, hi, bins, true);
}

BinCheck compare_to_density(const Histogram& h, const std::function<double(double)>& density,
                            const std::function<bool(double, double)>& use_bin)
{
    BinCheck out;
    QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    spec.abs_tol = 1e-12;
    for (int i = 0; i < h.bins; ++i) {
        const double lo = h.bin_lo(i), hi = h.bin_hi(i);
        if (use_bin && !use_bin(lo, hi)) continue;
        const double expected = h.matrices * integrate_finite(density, lo, hi, spec);
        const double sigma = std::sqrt(std::max(expected, 1.0));
        const double z = std::abs(h.counts[i] - expected) / sigma;
        ++out.bins_checked;
        if (z > out.max_z || out.worst_bin < 0) {
            out.max_z = std::max(out.max_z, z);
            out.worst_bin = i;
        }
    }
    return out;
}

BinCheck compare_histograms(const Histogram& a, const Histogram& b)
{
    if (a.bins != b.bins || a.lo != b.lo || a.hi != b.hi)
        throw DomainError("compare_histograms: binning differs");
    if (a.matrices < 1 || b.matrices < 1) throw DomainError("compare_histograms: empty histogram");
    BinCheck out;
    const double ra = 1.0 / a.matrices, rb = 1.0 / b.matrices;
    for (int i = 0; i < a.bins; ++i) {
        const double diff = a.counts[i] * ra - b.counts[i] * rb;
        const double var = std::max<double>(a.counts[i], 1) * ra * ra + std::max<double>(b.counts[i], 1) * rb * rb;
        const double z = std::abs(diff) / std::sqrt(var);
        ++out.bins_checked;
        if (z > out.max_z || out.worst_bin < 0) {
            out.max_z = std::max(out.max_z, z);
            out.worst_bin = i;
        }
    }
    return out;
}

McEstimate heine_mc(int j, int nu, double a, double x, long samples, CounterRng& rng, HeineKind which, double c)
{
    if (j < 0) throw DomainError("heine_mc: j must be nonnegative");
    if (j > 6) throw SizeError("heine_mc: j is limited to 6");
    if (nu != 0 && nu != 1) throw DomainError("heine_mc: nu must be 0 or 1");
    require_subcritical(a, "heine_mc");
    if (samples < 2) throw DomainError("heine_mc: need at least two samples");
    const double x2 = x * x;
    if (j == 0) return {which == HeineKind::p ? 1.0 : x2 + c, 0.0};

    // Welford accumulation
    double mean = 0.0, m2 = 0.0;
    for (long s = 0; s < samples; ++s) {
        const AntisymMatrix m = sample_two_matrix(TransitionParams{j, nu, a}, rng);
        const SpectrumPairs sp = singular_values_antisym(m, nu);
        double v = 1.0, trace = 0.0;
        for (double l : sp.singular_values) {
            v *= x2 - l * l;
            trace += l * l;
        }
        if (which == HeineKind::q) v *= x2 + trace + c;
        const double d = v - mean;
        mean += d / (s + 1);
        m2 += d * (v - mean);
    }
    return {mean, std::sqrt(m2 / (samples - 1) / samples)};
}

double ks_statistic(std::vector<double>& x, std::vector<double>& y)
{
    if (x.empty() || y.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, k = 0;
    double d = 0.0;
    while (i < x.size() && k < y.size()) {
        const double t = std::min(x[i], y[k]);
        while (i < x.size() && x[i] <= t) ++i;
        while (k < y.size() && y[k] <= t) ++k;
        d = std::max(d, std::abs(i / nx - k / ny));
    }
    return d;
}

SplitCompare mc_split_compare(int n, int nu, double a_large, long samples, CounterRng& rng)
{
    const TransitionParams params{n, nu, a_large};
    params.validate();
    if (samples < 10) throw DomainError("mc_split_compare: need at least 10 samples");
    std::vector<double> joint, split;
    joint.reserve(samples * n);
    split.reserve(samples * n);
    const int nb = n + nu;
    const bool both_odd = n % 2 == 1 && nb % 2 == 1;
    for (long s = 0; s < samples; ++s) {
        std::vector<double> sv = singular_values_antisym(sample_three_matrix(params, rng), nu).singular_values;
        // two odd blocks: their zero modes couple through W/a into one O(1/a) value, left out of both sides
        if (both_odd) sv.pop_back();
        for (double v : sv) joint.push_back(v / a_large);
        for (double v : singular_values_antisym(sample_gaoe(n, rng), n % 2).singular_values) split.push_back(v);
        for (double v : singular_values_antisym(sample_gaoe(nb, rng), nb % 2).singular_values) split.push_back(v);
    }
    SplitCompare out;
    out.statistic = ks_statistic(joint, split);
    // values from one matrix are dependent; the matrix count is used as the effective sample size
    const double m = static_cast<double>(samples);
    out.critical_value = 1.628 * std::sqrt(2.0 / m);
    return out;
}

}  // namespace rmtx
