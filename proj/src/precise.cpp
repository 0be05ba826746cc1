#include "precise.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "rmtx/errors.hpp"
#include "sop_impl.hpp"

namespace rmtx::detail {

namespace {

namespace mp = boost::multiprecision;

template <unsigned D>
using Mp = mp::number<mp::mpfr_float_backend<D>, mp::et_off>;

// Indices used by the kernel sums for n.
std::vector<int> kernel_indices(const TransitionParams& p)
{
    std::vector<int> idx;
    const int m = (p.n + 1) / 2;
    if (p.n % 2 == 1) {
        for (int j = 1; j <= m - 1; ++j) idx.push_back(2 * j - 1);
    } else {
        for (int j = 0; j <= m - 1; ++j) idx.push_back(2 * j);
    }
    return idx;
}

template <class R>
struct EntryImpl final : PreciseEntry {
    std::vector<R> p, q, pt, qt;
    R g = 0, G_bar = 0;
};

template <class R>
class PreciseImpl final : public PreciseTransforms {
public:
    PreciseImpl(const TransitionParams& params, double c_tilde, int digits)
        : nu_(params.nu), odd_(params.n % 2 == 1), digits_(digits)
    {
        using std::sqrt;
        pi_ = boost::math::constants::pi<R>();
        a_ = R(params.a);
        eps_ = (1 - a_) * (1 + a_);
        root_eps_ = sqrt(eps_);
        beta_ = sqrt(R(2)) / a_;
        c_ = 2 + beta_ * beta_;
        const R ct(c_tilde);
        for (int j : kernel_indices(params)) {
            p_.push_back(p_coeffs<R>(j, nu_, a_));
            q_.push_back(q_coeffs<R>(j, nu_, a_, ct));
            sp_.push_back(smoothed_coeffs<R>(p_.back(), nu_, a_));
            sq_.push_back(smoothed_coeffs<R>(q_.back(), nu_, a_));
            h_.push_back(pi_ * a_ * a_ * pow_int(eps_, 2 * j + 2 + nu_) * exact_factorial<R>(j) *
                         exact_factorial<R>(j + nu_) / pow_int(R(2), 4 * j + 2 * nu_ + 7));
            max_deg_ = std::max(max_deg_, static_cast<int>(sq_.back().size()) - 1);
        }
        legendre_rule(std::max(24, digits_ / 2));
        const std::vector<R> one{R(1)};
        s1_ = smoothed_coeffs<R>(one, nu_, a_);
        max_deg_ = std::max(max_deg_, static_cast<int>(s1_.size()) - 1);
        half_moments(max_deg_, R(2), half_);

        if (odd_) {
            const R w = sqrt(pi_ * a_ * a_ * eps_ / 2) / 2;
            g_bar_ = nu_ == 0 ? w * sqrt(pi_ / 2) / 2 : w * root_eps_ / 4;
            for (std::size_t i = 0; i < p_.size(); ++i) {
                int_g_p_.push_back(int_g(sp_[i]));
                int_g_q_.push_back(int_g(sq_[i]));
                int_Gbar_p_.push_back(int_Gbar(sp_[i]));
                int_Gbar_q_.push_back(int_Gbar(sq_[i]));
            }
        }
    }

    int digits() const override { return digits_; }

    PreciseValues eval(double xd) const override
    {
        using std::exp;
        using std::sqrt;
        const R x(xd);
        std::vector<R> moments;
        transform_moments(x, moments);
        const R pref = pow_int(x, nu_) * exp(-2 * x * x) * pi_ * a_ * a_ * eps_ / 8;
        const auto transform = [&](const std::vector<R>& c) {
            R s = 0;
            for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * moments[k];
            return pref * s;
        };

        auto e = std::make_shared<EntryImpl<R>>();
        R density = 0;
        if (odd_) {
            const R w = sqrt(pi_ * a_ * a_ * eps_ / 2) / 2 * exp(-2 * x * x);
            e->g = nu_ == 0 ? w : w * x * boost::math::erf(sqrt(2 * eps_) * x / a_);
            e->G_bar = -transform(s1_);
            density = e->g / g_bar_;
        }
        const R t = x * x;
        PreciseValues out;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            R pt = transform(sp_[i]), qt = transform(sq_[i]);
            if (odd_) {
                pt += (-e->g * int_Gbar_p_[i] + e->G_bar * int_g_p_[i]) / g_bar_;
                qt += (-e->g * int_Gbar_q_[i] + e->G_bar * int_g_q_[i]) / g_bar_;
            }
            e->p.push_back(horner(p_[i], t));
            e->q.push_back(horner(q_[i], t));
            density += (e->p.back() * qt - e->q.back() * pt) / h_[i];
            out.p_trans.push_back(static_cast<double>(pt));
            out.q_trans.push_back(static_cast<double>(qt));
            e->pt.push_back(std::move(pt));
            e->qt.push_back(std::move(qt));
        }
        out.g = static_cast<double>(e->g);
        out.G_bar = static_cast<double>(e->G_bar);
        out.density = static_cast<double>(density);
        out.entry = std::move(e);
        return out;
    }

    PreciseSlice slice(const PreciseEntry& exb, const PreciseEntry& eyb, double xd, double yd) const override
    {
        const auto& ex = static_cast<const EntryImpl<R>&>(exb);
        const auto& ey = static_cast<const EntryImpl<R>&>(eyb);
        R I = 0, sxy = 0, syx = 0, D = 0;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            I += (ex.q[i] * ey.p[i] - ex.p[i] * ey.q[i]) / h_[i];
            sxy += (ex.p[i] * ey.qt[i] - ex.q[i] * ey.pt[i]) / h_[i];
            syx += (ey.p[i] * ex.qt[i] - ey.q[i] * ex.pt[i]) / h_[i];
            D += (ex.qt[i] * ey.pt[i] - ex.pt[i] * ey.qt[i]) / h_[i];
        }
        D += two_point(R(xd), R(yd));
        if (odd_) {
            sxy += ey.g / g_bar_;
            syx += ex.g / g_bar_;
            D += (ey.g * ex.G_bar - ex.g * ey.G_bar) / g_bar_;
        }
        return {static_cast<double>(I), static_cast<double>(sxy), static_cast<double>(syx), static_cast<double>(D)};
    }

private:
    // G_nu(x, y)
    R two_point(const R& x, const R& y) const
    {
        using std::exp;
        using std::sqrt;
        if (x == y) return R(0);
        const R lo = x < y ? x : y, hi = x < y ? y : x;
        const R gamma = root_eps_ / a_;
        const R pref = pi_ * a_ * a_ * eps_ / 8 * exp(-2 * (x * x + y * y));
        R bracket = boost::math::erf(gamma * (hi - lo)) * boost::math::erf(gamma * (hi + lo));
        if (nu_ == 1) {
            const R r = sqrt(R(2)) * gamma;
            const R c = r * (hi + lo);
            const auto f = [&](R u) { return boost::math::erf(c - u) * exp(-u * u); };
            bracket -= 2 / sqrt(pi_) * integrate(f, r * lo, r * hi);
            bracket *= x * y;
        }
        const R v = pref * bracket;
        return x < y ? v : R(-v);
    }

    // Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration
    void legendre_rule(int n)
    {
        using std::abs;
        using std::cos;
        const R tol = 1 / pow_int(R(10), digits_ + 5);
        for (int i = 1; i <= n; ++i) {
            R z = cos(pi_ * (i - R(0.25)) / (n + R(0.5)));
            R dp = 0;
            for (int it = 0; it < 100; ++it) {
                R p0 = 1, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const R p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                    p0 = std::move(p1);
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1);
                const R step = p1 / dp;
                z -= step;
                if (abs(step) < tol) break;
            }
            gl_nodes_.push_back(z);
            gl_weights_.push_back(2 / ((1 - z * z) * dp * dp));
        }
    }

    // composite rule with panels no wider than 1/4
    template <class F>
    R integrate(const F& f, const R& lo, const R& hi) const
    {
        using std::ceil;
        const int panels = std::max(1, static_cast<int>(ceil(static_cast<double>((hi - lo) * 4))));
        const R w = (hi - lo) / panels;
        R total = 0;
        for (int k = 0; k < panels; ++k) {
            const R mid = lo + (k + R(0.5)) * w;
            R s = 0;
            for (std::size_t i = 0; i < gl_nodes_.size(); ++i) s += gl_weights_[i] * f(mid + w / 2 * gl_nodes_[i]);
            total += s * w / 2;
        }
        return total;
    }

    static R pow_int(const R& b, int e)
    {
        R r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }

    static R horner(const std::vector<R>& c, const R& t)
    {
        R r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
        return r;
    }

    // int_0^inf u^k exp(-p u^2) du, k = 0..n
    void half_moments(int n, const R& p, std::vector<R>& out) const
    {
        using std::sqrt;
        out.assign(n + 1, R(0));
        out[0] = sqrt(pi_ / p) / 2;
        if (n >= 1) out[1] = 1 / (2 * p);
        for (int k = 2; k <= n; ++k) out[k] = (k - 1) * out[k - 2] / (2 * p);
    }

    // int_0^inf P g_nu
    R int_g(const std::vector<R>& c) const
    {
        using std::sqrt;
        R s = 0;
        for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * half_[k];
        return sqrt(pi_ * a_ * a_ / 2) * root_eps_ / 2 * s;
    }

    // int_0^inf P Gbar_nu = <1, P>
    R int_Gbar(const std::vector<R>& c) const
    {
        using std::atan;
        using std::sqrt;
        const int n = static_cast<int>(c.size()) - 1;
        std::vector<R> quarter;
        half_moments(n, R(4), quarter);
        R s = 0;
        if (nu_ == 0) {
            // int_0^inf u^k exp(-2u^2) erf(sqrt2 u) du by recurrence from k = 0, 1
            std::vector<R> e(n + 1);
            e[0] = atan(R(1)) / sqrt(2 * pi_);
            if (n >= 1) e[1] = sqrt(R(2)) / (2 * sqrt(pi_)) * quarter[0];
            for (int k = 2; k <= n; ++k)
                e[k] = (k - 1) * e[k - 2] / 4 + sqrt(R(2)) / (2 * sqrt(pi_)) * quarter[k - 1];
            for (int k = 0; k <= n; ++k) s += c[k] * (2 * e[k] - half_[k]);
            return pi_ * a_ * a_ * eps_ / 8 * sqrt(pi_ / 8) * s;
        }
        for (int k = 0; k <= n; ++k) s += c[k] * (half_[k] - 2 * quarter[k]);
        return pi_ * a_ * a_ * eps_ * root_eps_ / 32 * s;
    }

    // F_m = int_0^inf u^m exp(-c (u + d)^2) du
    void shifted_moments(const R& d, int n, std::vector<R>& f) const
    {
        using std::exp;
        using std::sqrt;
        f.assign(n + 1, R(0));
        f[0] = sqrt(pi_ / c_) / 2 * boost::math::erfc(sqrt(c_) * d);
        if (n >= 1) f[1] = exp(-c_ * d * d) / (2 * c_) - d * f[0];
        for (int m = 2; m <= n; ++m) f[m] = (m - 1) * f[m - 2] / (2 * c_) - d * f[m - 1];
    }

    // E_m(b) = int_0^inf u^m exp(-2u^2 - beta^2 (u + b)^2) du
    void gauss_erf_kernel(const R& b, int n, std::vector<R>& e) const
    {
        using std::exp;
        const R b2 = beta_ * beta_;
        shifted_moments(b2 * b / c_, n, e);
        const R scale = exp(-2 * b2 * b * b / c_);
        for (R& v : e) v *= scale;
    }

    // int_0^b exp(-kappa t^2) erf(lambda t) dt by its Taylor series
    R owen_integral(const R& b) const
    {
        using std::abs;
        using std::sqrt;
        const R b2 = beta_ * beta_;
        const R kappa = 2 * b2 / c_;
        const R lambda = b2 / sqrt(c_);
        const R mu = kappa + lambda * lambda;
        const R lead = 2 * lambda / sqrt(pi_);
        const R tol = 1 / pow_int(R(10), digits_ + 5);
        // f = sum a_k t^k with (k+1) a_{k+1} = -2 kappa a_{k-1} + lead e_k, e_k from exp(-mu t^2)
        R a_prev = 0;   // a_{k-1}
        R a_cur = lead; // a_1
        R ek = 1;       // coefficient of t^0 in exp(-mu t^2)
        R bp = b * b;   // b^(k+1) for k = 1
        R sum = a_cur * bp / 2;
        R peak = abs(sum);
        for (int k = 1; k < 100000; k += 2) {
            // advance from a_k to a_{k+2}
            ek *= -mu / ((k + 1) / 2);
            const R next = (-2 * kappa * a_cur + lead * ek) / (k + 2);
            a_prev = a_cur;
            a_cur = next;
            bp *= b * b;
            const R term = a_cur * bp / (k + 3);
            sum += term;
            peak = std::max(peak, abs(term));
            if (k > 4 && abs(term) < tol * peak && abs(a_prev * bp) < tol * peak) break;
        }
        return sum;
    }

    // M_k = int_0^inf u^k exp(-2u^2) W(u) du with the sign-averaging function W
    void transform_moments(const R& x, std::vector<R>& m) const
    {
        using std::atan;
        using std::sqrt;
        const int n = max_deg_;
        const R x0 = root_eps_ * x;
        std::vector<R> ep, em;
        gauss_erf_kernel(x0, n, ep);
        gauss_erf_kernel(-x0, n, em);
        const R k = beta_ / (2 * sqrt(pi_));
        m.assign(n + 1, R(0));
        if (nu_ == 0) {
            // sums A_k(x0) + A_k(-x0), A_k(b) = int u^k exp(-2u^2) erf(beta (u + b))
            std::vector<R> s(n + 1, R(0));
            s[0] = 2 * atan(beta_ / sqrt(R(2))) / sqrt(2 * pi_) - 2 * beta_ / sqrt(c_) * owen_integral(x0);
            for (int i = 2; i <= n; i += 2) s[i] = (i - 1) * s[i - 2] / 4 + k * (ep[i - 1] + em[i - 1]);
            for (int i = 0; i <= n; i += 2) m[i] = s[i] - half_[i];
            return;
        }
        const R erf_b = boost::math::erf(beta_ * x0);
        std::vector<R> d(n + 1, R(0));  // A_k(-x0) - A_k(x0)
        for (int i = 1; i <= n; i += 2) {
            d[i] = k * (em[i - 1] - ep[i - 1]);
            if (i == 1) d[i] -= erf_b / 2;
            else d[i] += (i - 1) * d[i - 2] / 4;
            m[i] = d[i] + erf_b * half_[i];
        }
    }

    int nu_;
    bool odd_;
    int digits_;
    int max_deg_ = 0;
    R pi_, a_, eps_, root_eps_, beta_, c_, g_bar_;
    std::vector<std::vector<R>> p_, q_, sp_, sq_;
    std::vector<R> s1_, h_, half_;
    std::vector<R> int_g_p_, int_g_q_, int_Gbar_p_, int_Gbar_q_;
    std::vector<R> gl_nodes_, gl_weights_;
};

}  // namespace

double cancelled_digits(const TransitionParams& params)
{
    const std::vector<int> idx = kernel_indices(params);
    const int top = idx.empty() ? 0 : idx.back();
    const double eps = (1.0 - params.a) * (1.0 + params.a);
    return (2.0 * top + params.nu + 2.0) * std::log10(1.0 / eps);
}

std::unique_ptr<PreciseTransforms> make_precise_transforms(const TransitionParams& params, double c_tilde)
{
    const double lost = cancelled_digits(params);
    if (lost < 4.0 || kernel_indices(params).empty()) return nullptr;
    // the erf-moment series at x = 5 loses log10 e^(2 eps x^2 / a^2) digits
    const double eps = (1.0 - params.a) * (1.0 + params.a);
    const double guard = 50.0 * eps / (params.a * params.a) / std::log(10.0);
    const double need = 25.0 + lost + guard;
    if (need <= 50) return std::make_unique<PreciseImpl<Mp<50>>>(params, c_tilde, 50);
    if (need <= 100) return std::make_unique<PreciseImpl<Mp<100>>>(params, c_tilde, 100);
    if (need <= 200) return std::make_unique<PreciseImpl<Mp<200>>>(params, c_tilde, 200);
    if (need <= 400) return std::make_unique<PreciseImpl<Mp<400>>>(params, c_tilde, 400);
    throw SizeError("kernel transforms need more than 400 digits for these parameters");
}

}  // namespace rmtx::detail
