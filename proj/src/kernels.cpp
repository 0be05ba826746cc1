#include "rmtx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "rmtx/errors.hpp"
#include "rmtx/linalg.hpp"
#include "rmtx/special.hpp"
#include "precise.hpp"

namespace rmtx {

namespace {

using LD = long double;
constexpr double kPi = std::numbers::pi;

void check_kernel_params(const TransitionParams& p)
{
    p.validate();
    require_subcritical(p.a, "kernels");
    if (p.n > kMaxKernelN) throw SizeError("kernel layer supports n <= " + std::to_string(kMaxKernelN));
}

// K_k(z) = int_z^inf u^k exp(-2u^2) du for k = 0..deg, z >= 0.
void upper_moments(double z, std::vector<LD>& out)
{
    const LD zl = z;
    const LD e = std::exp(-2.0L * zl * zl);
    out[0] = std::sqrt(std::numbers::pi_v<LD> / 8.0L) * std::erfc(std::sqrt(2.0L) * zl);
    if (out.size() > 1) out[1] = e / 4.0L;
    LD zp = zl;  // z^(k-1) for k = 2
    for (std::size_t k = 2; k < out.size(); ++k) {
        out[k] = ((k - 1.0L) * out[k - 2] + zp * e) / 4.0L;
        zp *= zl;
    }
}

}  // namespace

double transform_bar(const SqPolynomial& poly, int nu, double a, double x, const QuadratureSpec& spec)
{
    require_subcritical(a, "transform_bar");
    if (x < 0) throw DomainError("transform_bar: x must be nonnegative");
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    const double extent = std::max(x, std::sqrt((2 * poly.degree() + nu) / 4.0));
    return integrate_halfline_gaussian([&](double y) { return poly(y) * G_weight(nu, a, x, y); }, 2.0, s, extent,
                                       {x});
}

double transform_tilde(const SqPolynomial& poly, int nu, double a, double x, const QuadratureSpec& spec)
{
    require_subcritical(a, "transform_tilde");
    if (x < 0) throw DomainError("transform_tilde: x must be nonnegative");
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    const double extent = std::max(x, std::sqrt((2 * poly.degree() + nu) / 4.0));
    return integrate_halfline_gaussian([&](double y) { return poly(y) * H_weight(nu, a, x, y); }, 2.0, s, extent,
                                       {x});
}

std::vector<double> transform_bar_smoothed(const std::vector<SqPolynomial>& polys, int nu, double a, double x,
                                           const QuadratureSpec& spec)
{
    require_subcritical(a, "transform_bar_smoothed");
    if (x < 0) throw DomainError("transform_bar_smoothed: x must be nonnegative");
    const std::size_t k = polys.size();
    std::vector<std::vector<LD>> c;
    std::size_t deg = 0;
    for (const auto& p : polys) {
        c.push_back(smoothed_coefficients(p, nu, a));
        deg = std::max(deg, c.back().size());
    }
    std::vector<LD> k0(deg);
    upper_moments(0.0, k0);
    std::vector<LD> total(k, 0.0L);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t m = 0; m < c[i].size(); ++m) total[i] += c[i][m] * k0[m];

    const double eps = (1.0 - a) * (1.0 + a);
    const double root_eps = std::sqrt(eps);
    const double sigma = a * root_eps / 2.0;
    const double parity = nu == 0 ? 1.0 : -1.0;

    // Psi(s) = int_0^inf sign(t - s) exp(-2t^2/eps) F(t) dt, extended to s < 0 with parity (-1)^nu,
    // averaged over s = eps x + sigma V.
    const ScaledVectorFn integrand = [&](double v, double* out, double* mag) {
        const double s = eps * x + sigma * v;
        const double w = std::exp(-0.5 * v * v) / std::sqrt(2.0 * kPi);
        const double sgn = s < 0 ? parity : 1.0;
        std::vector<LD> km(deg);
        upper_moments(std::abs(s) / root_eps, km);
        for (std::size_t i = 0; i < k; ++i) {
            LD sum = -total[i], abs_sum = 0.0L;
            for (std::size_t m = 0; m < c[i].size(); ++m) {
                sum += 2.0L * c[i][m] * km[m];
                abs_sum += std::abs(c[i][m]) * (2.0L * km[m] + k0[m]);
            }
            out[i] = w * sgn * static_cast<double>(sum);
            mag[i] = w * static_cast<double>(abs_sum);
        }
    };
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    s.rel_tol = std::min(spec.rel_tol, 1e-12);
    const double lim = gaussian_cutoff(0.5, spec);
    const double v0 = -eps * x / sigma;
    std::vector<double> breaks;
    if (v0 > -lim) breaks.push_back(v0);
    std::vector<double> e = integrate_finite_scaled(integrand, k, -lim, lim, s, breaks);

    const double pref = std::pow(x, nu) * std::exp(-2.0 * x * x) * kPi * a * a * root_eps / 8.0 * root_eps;
    for (double& val : e) val *= pref;
    return e;
}

TransformCache::TransformCache(const TransitionParams& params, double c_tilde, const QuadratureSpec& spec)
    : params_(params), spec_(spec)
{
    check_kernel_params(params_);
    const int nu = params_.nu;
    const double a = params_.a;
    const int m = (params_.n + 1) / 2;
    if (odd()) {
        for (int j = 1; j <= m - 1; ++j) pairs_.push_back(make_sop_pair(2 * j - 1, nu, a, c_tilde));
    } else {
        for (int j = 0; j <= m - 1; ++j) pairs_.push_back(make_sop_pair(2 * j, nu, a, c_tilde));
    }
    precise_ = detail::make_precise_transforms(params_, c_tilde);
    if (odd()) g_bar_ = g_bar(nu, a);
    if (!odd() || precise_) return;

    std::vector<SqPolynomial> polys;
    for (const auto& pr : pairs_) {
        polys.push_back(pr.p);
        polys.push_back(pr.q);
    }
    if (polys.empty()) return;
    const std::size_t k = polys.size();
    polys.push_back(SqPolynomial{{1.0L}, true});
    // row of the constant polynomial: <1, P> = int P Gbar
    const std::vector<double> m1 = skew_product_matrix(polys, nu, a, false, spec_, SkewMethod::smoothed);
    for (std::size_t i = 0; i < k; ++i) {
        const double ig = integral_against_g_smoothed(polys[i], nu, a);
        const double iG = m1[k * (k + 1) + i];
        if (i % 2 == 0) {
            int_g_p_.push_back(ig);
            int_Gbar_p_.push_back(iG);
        } else {
            int_g_q_.push_back(ig);
            int_Gbar_q_.push_back(iG);
        }
    }
}

TransformCache::Entry TransformCache::compute(double x) const
{
    const int nu = params_.nu;
    const double a = params_.a;
    Entry e;
    std::vector<SqPolynomial> polys;
    for (const auto& pr : pairs_) {
        e.p.push_back(pr.p(x));
        e.q.push_back(pr.q(x));
        polys.push_back(pr.p);
        polys.push_back(pr.q);
    }
    if (precise_) {
        detail::PreciseValues v = precise_->eval(x);
        e.p_trans = std::move(v.p_trans);
        e.q_trans = std::move(v.q_trans);
        e.g = v.g;
        e.G_bar = v.G_bar;
        e.density = v.density;
        e.precise = std::move(v.entry);
        return e;
    }
    if (odd()) {
        e.g = g_weight(nu, a, x);
        e.G_bar = G_bar(nu, a, x);
        e.density = e.g / g_bar_;
    }
    if (polys.empty()) return e;
    const std::vector<double> t = transform_bar_smoothed(polys, nu, a, x, spec_);
    for (std::size_t j = 0; j < pairs_.size(); ++j) {
        double pt = t[2 * j], qt = t[2 * j + 1];
        if (odd()) {
            pt += (-e.g * int_Gbar_p_[j] + e.G_bar * int_g_p_[j]) / g_bar_;
            qt += (-e.g * int_Gbar_q_[j] + e.G_bar * int_g_q_[j]) / g_bar_;
        }
        e.p_trans.push_back(pt);
        e.q_trans.push_back(qt);
        e.density += (e.p[j] * qt - e.q[j] * pt) / pairs_[j].h;
    }
    return e;
}

TransformCache::Entry TransformCache::at(double x) const
{
    if (x < 0) throw DomainError("kernel arguments must be nonnegative");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(x);
        if (it != entries_.end()) return it->second;
    }
    Entry e = compute(x);
    std::lock_guard<std::mutex> lock(mutex_);
    if (entries_.size() > 200000) entries_.clear();
    entries_.emplace(x, e);
    return e;
}

int TransformCache::precision_digits() const { return precise_ ? precise_->digits() : 0; }

std::size_t TransformCache::size() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

std::shared_ptr<const TransformCache> transform_cache(const TransitionParams& params, double c_tilde)
{
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double, double>, std::shared_ptr<const TransformCache>> registry;
    check_kernel_params(params);
    const auto key = std::make_tuple(params.n, params.nu, params.a, c_tilde);
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = registry.find(key);
        if (it != registry.end()) return it->second;
    }
    auto cache = std::make_shared<const TransformCache>(params, c_tilde);
    std::lock_guard<std::mutex> lock(mutex);
    return registry.emplace(key, cache).first->second;
}

namespace {

std::shared_ptr<const TransformCache> cache_for(int n, int nu, double a)
{
    return transform_cache(TransitionParams{n, nu, a});
}

double s_part(const TransformCache::Entry& ex, const TransformCache::Entry& ey,
              std::size_t j)
{
    return ex.p[j] * ey.q_trans[j] - ex.q[j] * ey.p_trans[j];
}

}  // namespace

KernelSlice TransformCache::slice(double x, double y) const
{
    const Entry ex = at(x);
    const Entry ey = at(y);
    const int nu = params_.nu;
    const double a = params_.a;
    KernelSlice k;
    k.params = params_;
    if (precise_) {
        const detail::PreciseSlice ps = precise_->slice(*ex.precise, *ey.precise, x, y);
        k.I = ps.I;
        k.S_xy = ps.S_xy;
        k.S_yx = ps.S_yx;
        k.D = ps.D;
        return k;
    }
    for (std::size_t j = 0; j < pairs_.size(); ++j) {
        const double h = pairs_[j].h;
        k.S_xy += s_part(ex, ey, j) / h;
        k.S_yx += s_part(ey, ex, j) / h;
        k.D += (ex.q_trans[j] * ey.p_trans[j] - ex.p_trans[j] * ey.q_trans[j]) / h;
        k.I += (ex.q[j] * ey.p[j] - ex.p[j] * ey.q[j]) / h;
    }
    if (odd()) {
        k.S_xy += ey.g / g_bar_;
        k.S_yx += ex.g / g_bar_;
        k.D += H_weight(nu, a, x, y);
    } else {
        k.D += G_weight(nu, a, x, y);
    }
    return k;
}

KernelSlice kernel_slice(const TransformCache& cache, double x, double y) { return cache.slice(x, y); }

KernelSlice kernel_slice(int n, int nu, double a, double x, double y)
{
    return kernel_slice(*cache_for(n, nu, a), x, y);
}

double density_R1(const TransformCache& cache, double lambda) { return cache.at(lambda).density; }

double density_R1(int n, int nu, double a, double lambda) { return density_R1(*cache_for(n, nu, a), lambda); }

double corr_Rk(const TransformCache& cache, const std::vector<double>& points)
{
    const std::size_t k = points.size();
    if (k == 0) return 1.0;
    if (static_cast<int>(k) > cache.params().n) return 0.0;
    std::vector<KernelSlice> slices;
    double imax = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = i + 1; l < k; ++l) {
            slices.push_back(cache.slice(points[i], points[l]));
            imax = std::max(imax, std::abs(slices.back().I));
            dmax = std::max(dmax, std::abs(slices.back().D));
        }
    // I and D differ by many orders of magnitude near a = 1; diag(1/s, s, ...) congruence
    // balances them without changing the Pfaffian.
    const double s2 = (imax > 0 && dmax > 0) ? std::sqrt(imax / dmax) : 1.0;
    AntisymMatrix m(2 * k);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) {
        m.set(2 * i, 2 * i + 1, density_R1(cache, points[i]));
        for (std::size_t l = i + 1; l < k; ++l) {
            const KernelSlice& s = slices[idx++];
            m.set(2 * i, 2 * l, s.I / s2);
            m.set(2 * i, 2 * l + 1, s.S_xy);
            m.set(2 * i + 1, 2 * l, -s.S_yx);
            m.set(2 * i + 1, 2 * l + 1, s.D * s2);
        }
    }
    return pfaffian(m);
}

double corr_Rk(int n, int nu, double a, const std::vector<double>& points)
{
    return corr_Rk(*cache_for(n, nu, a), points);
}

double corr_R2(const TransformCache& cache, double x, double y)
{
    if (cache.params().n < 2) return 0.0;
    const KernelSlice s = kernel_slice(cache, x, y);
    return density_R1(cache, x) * density_R1(cache, y) - s.I * s.D - s.S_xy * s.S_yx;
}

double corr_R2(int n, int nu, double a, double x, double y) { return corr_R2(*cache_for(n, nu, a), x, y); }

TruncatedValue smallest_p1_truncated(const TransformCache& cache, double s, int order)
{
    if (s < 0) throw DomainError("smallest_p1_truncated: s must be nonnegative");
    if (order != 1 && order != 2) throw DomainError("smallest_p1_truncated: order must be 1 or 2");
    double v = density_R1(cache, s);
    if (order == 2 && s > 0 && cache.params().n > 1) {
        QuadratureSpec spec;
        spec.abs_tol = 1e-12;
        v -= integrate_finite([&](double x) { return corr_R2(cache, s, x); }, 0.0, s, spec);
    }
    return {v, v >= 0.0};
}

TruncatedValue smallest_p1_truncated(int n, int nu, double a, double s, int order)
{
    return smallest_p1_truncated(*cache_for(n, nu, a), s, order);
}

double density_chgoe_ref(int n, int nu, double lambda, const QuadratureSpec& spec)
{
    if (n < 1 || n % 2 != 0) throw ParityError("density_chgoe_ref: n must be even");
    if (nu != 0 && nu != 1) throw DomainError("nu must be 0 or 1");
    if (lambda < 0) throw DomainError("density_chgoe_ref: lambda must be nonnegative");
    const int m = n / 2;
    const double z = 4.0 * lambda * lambda;
    std::vector<double> pref(m), l_lam(m), b_lam(m);
    for (int j = 0; j < m; ++j) {
        pref[j] = std::exp((2 * nu + 2) * std::log(2.0) + ln_gamma(2 * j + 1.0) - ln_gamma(2 * j + nu + 1.0));
        l_lam[j] = laguerre(2 * j, nu, z);
        b_lam[j] = (2 * j + 1) * laguerre(2 * j + 1, nu, z) -
                   (2 * j + nu) * (laguerre(2 * j, nu, z) + laguerre(2 * j - 1, nu, z));
    }
    const auto integrand = [&](double u) {
        const double w = u * u;
        const double zu = 4.0 * w;
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            const double b_u = (2 * j + 1) * laguerre(2 * j + 1, nu, zu) -
                               (2 * j + nu) * (laguerre(2 * j, nu, zu) + laguerre(2 * j - 1, nu, zu));
            sum += pref[j] * (l_lam[j] * b_u - laguerre(2 * j, nu, zu) * b_lam[j]);
        }
        const double sign = lambda > u ? 1.0 : (lambda < u ? -1.0 : 0.0);
        return std::pow(lambda * u, nu) * std::exp(-2.0 * w - 2.0 * lambda * lambda) * sign * sum;
    };
    QuadratureSpec s = spec;
    s.abs_tol = 1e-300;
    return integrate_halfline_gaussian(integrand, 2.0, s, std::sqrt(n + 1.0), {lambda});
}

double density_gaoe_ref(int n, int nu, double lambda)
{
    if (n < 1) throw DomainError("density_gaoe_ref: n must be positive");
    if (nu != 0 && nu != 1) throw DomainError("nu must be 0 or 1");
    if (lambda < 0) throw DomainError("density_gaoe_ref: lambda must be nonnegative");
    double sum = 0.0;
    const double z = std::sqrt(2.0) * lambda;
    for (int j = 0; j < n; ++j) {
        const int k = 2 * j + nu;
        const double h = hermite_h(k, z);
        const double log_norm = 0.5 * std::log(kPi) + (k - 1.5) * std::log(2.0) + ln_gamma(k + 1.0);
        sum += h * h * std::exp(-log_norm);
    }
    return sum * std::exp(-2.0 * lambda * lambda);
}

double smallest_exact_chgoe(int n, int nu, double s)
{
    if (n < 1) throw DomainError("smallest_exact_chgoe: n must be positive");
    if (nu != 0 && nu != 1) throw DomainError("nu must be 0 or 1");
    if (s < 0) throw DomainError("smallest_exact_chgoe: s must be nonnegative");
    const double e = std::exp(-2.0 * n * s * s);
    if (nu == 1) return 4.0 * n * s * e;
    const double alpha = (n - 1) / 2.0;
    double u = 1.0;
    if (n > 1) u = s > 0 ? tricomi_u(alpha, -0.5, 2.0 * s * s) : std::exp(ln_gamma(1.5) - ln_gamma(alpha + 1.5));
    return n * std::sqrt(8.0 / kPi) * std::exp(ln_gamma((n + 1) / 2.0)) * e * u;
}

}  // namespace rmtx
