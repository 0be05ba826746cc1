#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "rmtx/quad.hpp"
#include "rmtx/sop.hpp"
#include "rmtx/weights.hpp"

namespace rmtx {

namespace detail {
class PreciseTransforms;
class PreciseEntry;
}

/// The 2x2 matrix kernel at a point pair.
struct KernelSlice {
    double I = 0.0;
    double S_xy = 0.0;
    double S_yx = 0.0;
    double D = 0.0;
    TransitionParams params;
};

/// Largest n accepted by the kernel layer. Beyond it the spread of the (1-a^2)
/// powers across the normalisations h_j exhausts double precision near a = 1.
inline constexpr int kMaxKernelN = 16;

/// int_0^inf poly(y) G_nu(x,y) dy by direct half-line quadrature.
double transform_bar(const SqPolynomial& poly, int nu, double a, double x, const QuadratureSpec& spec = {});
/// int_0^inf poly(y) H_nu(x,y) dy by direct half-line quadrature.
double transform_tilde(const SqPolynomial& poly, int nu, double a, double x, const QuadratureSpec& spec = {});

/// Bar transforms of several polynomials at x through their smoothed form:
/// one Gaussian average over a piecewise closed-form function, shared by all of them.
std::vector<double> transform_bar_smoothed(const std::vector<SqPolynomial>& polys, int nu, double a, double x,
                                           const QuadratureSpec& spec = {});

/// Polynomials, normalisations and memoised transforms for one (n, nu, a).
/// Even n = 2m uses indices 0, 2, ..., 2m-2; odd n = 2m-1 uses 1, 3, ..., 2m-3
/// together with the border terms in g_nu.
class TransformCache {
public:
    TransformCache(const TransitionParams& params, double c_tilde = 0.0, const QuadratureSpec& spec = {});

    const TransitionParams& params() const { return params_; }
    bool odd() const { return params_.n % 2 == 1; }
    const std::vector<SopPair>& pairs() const { return pairs_; }

    struct Entry {
        std::vector<double> p, q;              // polynomial values
        std::vector<double> p_trans, q_trans;  // bar (even n) or tilde (odd n) transforms
        double g = 0.0;                        // g_nu(x), odd n only
        double G_bar = 0.0;                    // Gbar_nu(x), odd n only
        double density = 0.0;                  // S(x, x)
        std::shared_ptr<const detail::PreciseEntry> precise;
    };

    /// Values at x, computed on first use. Safe to call from several threads.
    Entry at(double x) const;
    std::size_t size() const;
    /// I, S and D at (x, y).
    KernelSlice slice(double x, double y) const;
    /// Decimal digits of the multiprecision transform path, 0 when long double is used.
    int precision_digits() const;

private:
    Entry compute(double x) const;

    TransitionParams params_;
    QuadratureSpec spec_;
    std::vector<SopPair> pairs_;
    std::vector<double> int_g_p_, int_g_q_, int_Gbar_p_, int_Gbar_q_;
    double g_bar_ = 1.0;
    std::shared_ptr<const detail::PreciseTransforms> precise_;
    mutable std::mutex mutex_;
    mutable std::map<double, Entry> entries_;
};

/// Shared cache for (n, nu, a, c_tilde); built once per process.
std::shared_ptr<const TransformCache> transform_cache(const TransitionParams& params, double c_tilde = 0.0);

KernelSlice kernel_slice(const TransformCache& cache, double x, double y);
KernelSlice kernel_slice(int n, int nu, double a, double x, double y);

double density_R1(const TransformCache& cache, double lambda);
double density_R1(int n, int nu, double a, double lambda);

/// Pfaffian of the 2k x 2k kernel matrix at the given points.
double corr_Rk(const TransformCache& cache, const std::vector<double>& points);
double corr_Rk(int n, int nu, double a, const std::vector<double>& points);

/// S(x,x) S(y,y) - I(x,y) D(x,y) - S(x,y) S(y,x).
double corr_R2(const TransformCache& cache, double x, double y);
double corr_R2(int n, int nu, double a, double x, double y);

struct TruncatedValue {
    double value;
    /// false once the truncated series has gone negative.
    bool valid;
};

/// R1(s) - int_0^s R2(s,x) dx; order 1 keeps only R1(s).
TruncatedValue smallest_p1_truncated(const TransformCache& cache, double s, int order = 2);
TruncatedValue smallest_p1_truncated(int n, int nu, double a, double s, int order = 2);

/// Spectral density at a = 0 (even n only).
double density_chgoe_ref(int n, int nu, double lambda, const QuadratureSpec& spec = {});
/// Spectral density at a = 1.
double density_gaoe_ref(int n, int nu, double lambda);
/// Exact smallest-singular-value density at a = 0.
double smallest_exact_chgoe(int n, int nu, double s);

}  // namespace rmtx
