#pragma once

// Coefficient constructors for p_j and q_j, generic in the scalar type so the
// same code serves long double and the multiprecision kernel path.

#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>

namespace rmtx::detail {

template <class R>
R exact_factorial(int k)
{
    R r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

template <class R>
R exact_binomial(int n, int k)
{
    if (k < 0 || k > n) return R(0);
    R r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// Coefficients of H_n(x) in powers of x.
template <class R>
std::vector<R> hermite_coeffs(int n)
{
    std::vector<R> h0{R(1)};
    if (n == 0) return h0;
    std::vector<R> h1{R(0), R(2)};
    for (int k = 1; k < n; ++k) {
        std::vector<R> h2(k + 2, R(0));
        for (int i = 0; i <= k; ++i) h2[i + 1] += 2 * h1[i];
        for (int i = 0; i < k; ++i) h2[i] -= R(2 * k) * h0[i];
        h0 = std::move(h1);
        h1 = std::move(h2);
    }
    return h1;
}

template <class R>
std::vector<R> poly_mul(const std::vector<R>& a, const std::vector<R>& b)
{
    std::vector<R> r(a.size() + b.size() - 1, R(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) r[i + k] += a[i] * b[k];
    return r;
}

// Coefficients of L_k^(alpha)(z) in powers of z.
template <class R>
std::vector<R> laguerre_coeffs(int k, int alpha)
{
    if (k < 0) return {};
    std::vector<R> c(k + 1);
    for (int i = 0; i <= k; ++i) {
        const R sign = (i % 2 == 0) ? R(1) : R(-1);
        c[i] = sign * exact_binomial<R>(k + alpha, k - i) / exact_factorial<R>(i);
    }
    return c;
}

// int y^(2k) exp(-c y^2) dy over the real line.
template <class R>
R gaussian_moment(int k, const R& c)
{
    using std::pow;
    using std::sqrt;
    R dfact = 1;
    for (int i = 2 * k - 1; i > 1; i -= 2) dfact *= i;
    return dfact * sqrt(boost::math::constants::pi<R>()) / (pow(R(2), k) * pow(c, k) * sqrt(c));
}

// Coefficients in t of int y^(2 ypow) exp(-c y^2) L_k^(alpha)(beta t + y^2) dy.
template <class R>
std::vector<R> laguerre_block(int k, int alpha, const R& beta, const R& c, int ypow, std::size_t size)
{
    using std::pow;
    std::vector<R> out(size, R(0));
    const std::vector<R> l = laguerre_coeffs<R>(k, alpha);
    for (int i = 0; i < static_cast<int>(l.size()); ++i)
        for (int r = 0; r <= i; ++r)
            out[i - r] += l[i] * exact_binomial<R>(i, r) * pow(beta, i - r) * gaussian_moment<R>(r + ypow, c);
    return out;
}

// j! (1+a^2)^(j+1/2) / ((-4)^j sqrt(2 pi) a)
template <class R>
R laguerre_prefactor(int j, const R& a)
{
    using std::pow;
    using std::sqrt;
    const R opa2 = 1 + a * a;
    return exact_factorial<R>(j) * pow(opa2, j) * sqrt(opa2) /
           (pow(R(-4), j) * sqrt(2 * boost::math::constants::pi<R>()) * a);
}

// p_j from the finite double-Hermite sum, coefficients in t, before forcing monicity.
template <class R>
std::vector<R> p_coeffs(int j, int nu, const R& a)
{
    using std::pow;
    std::vector<R> t(j + 1, R(0));
    for (int k = 0; k <= j; ++k) {
        const R ck = exact_factorial<R>(j) * exact_factorial<R>(j + nu) /
                     (exact_factorial<R>(k) * exact_factorial<R>(j - k) * exact_factorial<R>(j - k + nu));
        const std::vector<R> prod = poly_mul(hermite_coeffs<R>(j - k), hermite_coeffs<R>(j - k + nu));
        for (int m = 0; 2 * m + nu < static_cast<int>(prod.size()); ++m) {
            // (a^2/8)^(j+nu/2) (2/a^2)^(m+nu/2) (-2/a^2)^k
            const R scale = pow(a, 2 * (j - m - k)) / pow(R(8), j) * pow(R(2), m - nu) * pow(R(-2), k);
            t[m] += ck * scale * prod[2 * m + nu];
        }
    }
    t.back() = 1;
    return t;
}

// q_j from the three-Laguerre form, coefficients in t.
template <class R>
std::vector<R> q_coeffs(int j, int nu, const R& a, const R& c_tilde)
{
    const R a2 = a * a;
    const R eps = (1 - a) * (1 + a);
    const R c = (1 + a2) / (2 * a2);
    const R opa2 = 1 + a2;
    const R beta = 4 / opa2;
    const std::size_t size = j + 2;
    const R pref = laguerre_prefactor<R>(j, a);

    std::vector<R> out(size, R(0));
    const auto add = [&](const std::vector<R>& blk, const R& factor, int tshift) {
        for (std::size_t i = 0; i + tshift < size && i < blk.size(); ++i) out[i + tshift] += factor * blk[i];
    };
    const std::vector<R> b2 = laguerre_block<R>(j - 2, nu + 2, beta, c, 0, size);
    const std::vector<R> b1 = laguerre_block<R>(j - 1, nu + 1, beta, c, 0, size);
    const std::vector<R> b0 = laguerre_block<R>(j, nu, beta, c, 0, size);
    const std::vector<R> b0y = laguerre_block<R>(j, nu, beta, c, 1, size);
    add(b2, R(-4) / (opa2 * opa2), 1);
    add(b1, R(2 * nu + 1) / (2 * opa2), 0);
    add(b1, -4 * eps / (2 * opa2), 1);
    add(b0, R(1), 1);
    add(b0, -eps * (2 * j * a2 - 1) / (4 * a2) + c_tilde, 0);
    add(b0y, -eps * opa2 / (4 * a2 * a2), 0);
    for (R& v : out) v *= pref;
    out.back() = 1;
    return out;
}

// Coefficients in u of F(sqrt(1-a^2) u), F(s) = E[(s + a Z/2)^nu P(s + a Z/2)].
template <class R>
std::vector<R> smoothed_coeffs(const std::vector<R>& poly, int nu, const R& a)
{
    using std::sqrt;
    const R var = a * a / 4;
    const R root_eps = sqrt((1 - a) * (1 + a));
    const int deg = 2 * (static_cast<int>(poly.size()) - 1) + nu;
    std::vector<R> out(deg + 1, R(0));
    for (int m = 0; m < static_cast<int>(poly.size()); ++m) {
        const int n = 2 * m + nu;
        R dfact = 1, varpow = 1;
        for (int k = 0; 2 * k <= n; ++k) {
            if (k > 0) {
                dfact *= 2 * k - 1;
                varpow *= var;
            }
            out[n - 2 * k] += poly[m] * exact_binomial<R>(n, 2 * k) * varpow * dfact;
        }
    }
    R scale = 1;
    for (R& c : out) {
        c *= scale;
        scale *= root_eps;
    }
    return out;
}

}  // namespace rmtx::detail
