#include "rmtx/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>

#include "rmtx/ensemble.hpp"
#include "rmtx/errors.hpp"
#include "rmtx/jpdf.hpp"
#include "rmtx/kernels.hpp"
#include "rmtx/linalg.hpp"
#include "rmtx/quad.hpp"
#include "rmtx/sop.hpp"
#include "rmtx/weights.hpp"

namespace rmtx {

namespace {

using Results = std::vector<CheckResult>;

std::string label(const char* fmt, double a, int nu)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a, nu);
    return buf;
}

void add(Results& out, const std::string& suite, const std::string& name, double observed, double tol,
         bool upper_bound = true)
{
    const bool ok = upper_bound ? (observed <= tol) : (observed > tol);
    out.push_back({suite, name, observed, tol, ok && std::isfinite(observed)});
}

std::vector<double> a_values(const SuiteOptions& o, std::vector<double> defaults)
{
    if (o.a) return {*o.a};
    return defaults;
}

// ---------------------------------------------------------------------------

Results skeworth_suite(const SuiteOptions& o)
{
    Results out;
    for (double a : a_values(o, {0.2, 0.5, 0.9})) {
        require_subcritical(a, "skeworth suite");
        for (int nu = 0; nu <= 1; ++nu) {
            for (int parity = 0; parity <= 1; ++parity) {
                std::vector<SqPolynomial> polys;
                std::vector<int> idx;
                for (int j = parity; j <= 7; j += 2) {
                    polys.push_back(p_poly(j, nu, a));
                    polys.push_back(q_poly(j, nu, a));
                    idx.push_back(j);
                }
                const auto m = skew_product_matrix(polys, nu, a, parity == 1, {}, SkewMethod::smoothed);
                const std::size_t k = polys.size();
                double zero = 0.0, hrel = 0.0;
                for (std::size_t r = 0; r < k; ++r)
                    for (std::size_t c = 0; c < k; ++c) {
                        const int jr = idx[r / 2], jc = idx[c / 2];
                        const double v = m[r * k + c];
                        if (jr == jc && r % 2 != c % 2) {
                            const double h = norm_h(jr, nu, a);
                            hrel = std::max(hrel, std::abs((r % 2 == 0 ? v : -v) / h - 1.0));
                        } else {
                            zero = std::max(zero, std::abs(v) / std::sqrt(norm_h(jr, nu, a) * norm_h(jc, nu, a)));
                        }
                    }
                const char* kind = parity == 0 ? "even" : "odd";
                add(out, "skeworth", label("a=%g nu=%d ", a, nu) + kind + " vanishing products", zero, 1e-8);
                add(out, "skeworth", label("a=%g nu=%d ", a, nu) + kind + " <p,q> vs h", hrel, 1e-6);
                if (parity == 1) {
                    double worst = 0.0;
                    for (const SqPolynomial& p : polys) {
                        SqPolynomial mag = p;
                        for (auto& c : mag.coeffs) c = std::abs(c);
                        const double scale = integral_against_g_smoothed(mag, nu, a);
                        worst = std::max(worst, std::abs(integral_against_g_smoothed(p, nu, a)) / scale);
                    }
                    add(out, "skeworth", label("a=%g nu=%d odd int p g = 0", a, nu), worst, 1e-8);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Results weights_suite(const SuiteOptions& o)
{
    Results out;
    const std::vector<double> grid{0.15, 0.5, 1.0, 1.6, 2.3};
    QuadratureSpec tight;
    tight.abs_tol = 1e-14;
    tight.rel_tol = 1e-12;
    for (double a : a_values(o, {0.2, 0.5, 0.9})) {
        require_subcritical(a, "weights suite");
        for (int nu = 0; nu <= 1; ++nu) {
            double g_err = 0.0, g_scale = 0.0;
            for (double y : grid) {
                const double ref = g_weight_def_oracle(nu, a, y, tight);
                g_err = std::max(g_err, std::abs(g_weight(nu, a, y) - ref));
                g_scale = std::max(g_scale, std::abs(ref));
            }
            add(out, "weights", label("a=%g nu=%d g closed vs integral", a, nu), g_err / g_scale, 1e-8);

            double G_err = 0.0, G_scale = 0.0;
            for (double x : grid)
                for (double y : grid) {
                    const double ref = G_weight_def_oracle(nu, a, x, y, tight);
                    G_err = std::max(G_err, std::abs(G_weight(nu, a, x, y) - ref));
                    G_scale = std::max(G_scale, std::abs(ref));
                }
            add(out, "weights", label("a=%g nu=%d G closed vs integral", a, nu), G_err / G_scale, 1e-8);

            double Gb_err = 0.0, Gb_scale = 0.0;
            for (double y : grid) {
                const double ref = integrate_halfline_gaussian([&](double x) { return G_weight(nu, a, x, y); }, 2.0,
                                                               tight, y, {y});
                Gb_err = std::max(Gb_err, std::abs(G_bar(nu, a, y) - ref));
                Gb_scale = std::max(Gb_scale, std::abs(ref));
            }
            add(out, "weights", label("a=%g nu=%d Gbar vs int G", a, nu), Gb_err / Gb_scale, 1e-8);

            const double gb = g_bar(nu, a);
            const double spread = std::max(std::abs(g_bar_direct(nu, a) - gb), std::abs(g_bar_gamma(nu, a) - gb));
            add(out, "weights", label("a=%g nu=%d gbar forms agree", a, nu), spread / std::abs(gb), 1e-12);
            const double gq = integrate_halfline_gaussian([&](double y) { return g_weight(nu, a, y); }, 2.0, tight);
            add(out, "weights", label("a=%g nu=%d gbar vs int g", a, nu), std::abs(gq - gb) / std::abs(gb), 1e-8);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Results jpdf_oracle_suite(const SuiteOptions& o)
{
    Results out;
    for (double a : a_values(o, {0.5})) {
        require_subcritical(a, "jpdf-oracle suite");
        for (int nu = 0; nu <= 1; ++nu)
            add(out, "jpdf-oracle", label("a=%g nu=%d n=1 exp(log C) * gbar = 1", a, nu),
                std::abs(std::exp(jpdf_const(1, nu, a)) * g_bar(nu, a) - 1.0), 1e-12);
        for (int n = 2; n <= 3; ++n)
            for (int nu = 0; nu <= 1; ++nu) {
                auto cache = transform_cache({n, nu, a});
                double r1 = 0.0;
                for (double x : {0.3, 0.8, 1.4}) {
                    const double ref = corr_Rk_bruteforce(n, nu, a, {x});
                    r1 = std::max(r1, std::abs(density_R1(*cache, x) - ref));
                }
                add(out, "jpdf-oracle", label("a=%g nu=%d ", a, nu) + "n=" + std::to_string(n) + " R1", r1, 1e-6);
                double r2 = 0.0;
                for (auto [x, y] : {std::pair{0.4, 0.9}, std::pair{1.1, 0.6}}) {
                    const double ref = corr_Rk_bruteforce(n, nu, a, {x, y});
                    r2 = std::max(r2, std::abs(corr_R2(*cache, x, y) - ref));
                }
                add(out, "jpdf-oracle", label("a=%g nu=%d ", a, nu) + "n=" + std::to_string(n) + " R2", r2, 1e-5);
            }
    }
    return out;
}

// ---------------------------------------------------------------------------

Results pfaffian_suite(const SuiteOptions& o)
{
    Results out;
    CounterRng rng(o.seed, 0);
    double pf_rel = 0.0, det_rel = 0.0, odd = 0.0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t dim = 1 + k % 8;
        AntisymMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) m.set(i, j, rng.normal());
        if (dim % 2 == 1) {
            odd = std::max(odd, std::abs(pfaffian(m, true)));
            continue;
        }
        const double pf = pfaffian(m);
        const double ref = pfaffian_recursive(m);
        pf_rel = std::max(pf_rel, std::abs(pf - ref) / std::abs(ref));
        const double det = determinant(m.matrix());
        det_rel = std::max(det_rel, std::abs(pf * pf - det) / std::abs(det));
    }
    add(out, "pfaffian", "Parlett-Reid vs expansion", pf_rel, 1e-10);
    add(out, "pfaffian", "Pf^2 vs det", det_rel, 1e-8);
    add(out, "pfaffian", "odd dimension gives 0", odd, 0.0);
    return out;
}

// ---------------------------------------------------------------------------

double sup_distance(const std::function<double(double)>& f, const std::function<double(double)>& g, double hi)
{
    double d = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = hi * i / 200.0;
        d = std::max(d, std::abs(f(x) - g(x)));
    }
    return d;
}

double coeff_distance(const SqPolynomial& p, const SqPolynomial& q)
{
    double d = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < std::max(p.coeffs.size(), q.coeffs.size()); ++k) {
        const double a = k < p.coeffs.size() ? static_cast<double>(p.coeffs[k]) : 0.0;
        const double b = k < q.coeffs.size() ? static_cast<double>(q.coeffs[k]) : 0.0;
        d = std::max(d, std::abs(a - b));
        scale = std::max(scale, std::abs(b));
    }
    return d / scale;
}

Results limits_suite(const SuiteOptions&)
{
    Results out;
    for (int nu = 0; nu <= 1; ++nu) {
        for (int n : {2, 4}) {
            auto ref = [&](double x) { return density_chgoe_ref(n, nu, x); };
            const double hi = std::sqrt(2.0 * n) + 1.5;
            const double d2 = sup_distance([&](double x) { return density_R1(n, nu, 1e-2, x); }, ref, hi);
            const double d3 = sup_distance([&](double x) { return density_R1(n, nu, 1e-3, x); }, ref, hi);
            const std::string tag = "n=" + std::to_string(n) + " nu=" + std::to_string(nu);
            add(out, "limits", tag + " chGOE a=1e-2", d2, 1e-2);
            add(out, "limits", tag + " chGOE a=1e-3 below a=1e-2", d3, d2);
        }
        for (int n : {2, 3, 4, 5}) {
            auto ref = [&](double x) { return density_gaoe_ref(n, nu, x); };
            const double hi = std::sqrt(2.0 * n) + 1.5;
            const double d4 = sup_distance([&](double x) { return density_R1(n, nu, 1.0 - 1e-4, x); }, ref, hi);
            const double d5 = sup_distance([&](double x) { return density_R1(n, nu, 1.0 - 1e-5, x); }, ref, hi);
            const std::string tag = "n=" + std::to_string(n) + " nu=" + std::to_string(nu);
            add(out, "limits", tag + " GAOE a=1-1e-4", d4, 1e-2);
            add(out, "limits", tag + " GAOE a=1-1e-5 below a=1-1e-4", d5, d4);
        }
        double chgoe = 0.0, gaoe = 0.0, split = 0.0;
        for (int j = 0; j <= 4; ++j) {
            chgoe = std::max(chgoe, coeff_distance(p_poly(j, nu, 1e-4), p_limit_chgoe(j, nu)));
            gaoe = std::max(gaoe, coeff_distance(p_poly(j, nu, 1.0 - 1e-6), p_limit_gaoe(j, nu)));
            const double big = 1e3;
            const SqPolynomial p = p_poly(j, nu, big), lim = p_limit_split(j, nu);
            double d = 0.0, scale = 0.0;
            for (double x : {0.2, 0.5, 0.9, 1.3, 1.7, 2.2}) {
                const double lhs = std::pow(big, -2.0 * j) * std::pow(x, nu) * p(big * x);
                const double rhs = std::pow(x, nu) * lim(x);
                d = std::max(d, std::abs(lhs - rhs));
                scale = std::max(scale, std::abs(rhs));
            }
            split = std::max(split, d / scale);
        }
        const std::string tag = "nu=" + std::to_string(nu);
        add(out, "limits", tag + " p(a=1e-4) vs chGOE polynomials", chgoe, 1e-6);
        add(out, "limits", tag + " p(a=1-1e-6) vs GAOE polynomials", gaoe, 1e-4);
        add(out, "limits", tag + " rescaled p(a=1e3) vs split polynomials", split, 1e-4);
    }
    return out;
}

// ---------------------------------------------------------------------------

Results heine_suite(const SuiteOptions& o)
{
    Results out;
    for (double a : a_values(o, {0.5})) {
        require_subcritical(a, "heine suite");
        for (int nu = 0; nu <= 1; ++nu)
            for (int j = 0; j <= 3; ++j) {
                const SqPolynomial p = p_poly(j, nu, a);
                double z = 0.0;
                int stream = 0;
                for (double x : {0.6, 1.3}) {
                    CounterRng rng(o.seed, 100 * j + 10 * nu + stream++);
                    const McEstimate e = heine_mc(j, nu, a, x, o.samples, rng);
                    const double diff = std::abs(e.estimate - p(x));
                    z = std::max(z, e.std_error > 0 ? diff / e.std_error : (diff == 0 ? 0.0 : INFINITY));
                }
                add(out, "heine",
                    label("a=%g nu=%d ", a, nu) + "j=" + std::to_string(j) + " <det> vs p (sigmas)", z, 3.0);
            }
        CounterRng rng(o.seed, 999);
        const McEstimate q0 = heine_mc(0, 0, a, 1.0, 10, rng, HeineKind::q, 0.25);
        add(out, "heine", label("a=%g nu=%d j=0 q = x^2 + c", a, 0), std::abs(q0.estimate - 1.25), 0.0);
    }
    for (double a : {0.2, 0.7}) {
        SamplerConfig c;
        c.params = {1, 0, a};
        c.samples = o.samples;
        c.seed = o.seed;
        c.streams = o.streams;
        const Histogram h = mc_density_histogram(c, 0.0, 2.0, 40);
        const BinCheck b = compare_to_density(
            h, [](double x) { return 2.0 * std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0 * x * x); });
        add(out, "heine", label("a=%g nu=%d n=1 half-normal density (sigmas)", a, 0), b.max_z, 4.0);
    }
    return out;
}

// ---------------------------------------------------------------------------

Results split_suite(const SuiteOptions& o)
{
    Results out;
    const long samples = 10000;
    for (auto [n, nu] : {std::pair{4, 0}, std::pair{3, 1}}) {
        CounterRng rng(o.seed, 10 * n + nu);
        const SplitCompare s = mc_split_compare(n, nu, 100.0, samples, rng);
        add(out, "split", "a=100 n=" + std::to_string(n) + " nu=" + std::to_string(nu) + " KS below critical",
            s.statistic, s.critical_value);
    }
    CounterRng rng(o.seed, 77);
    const SplitCompare control = mc_split_compare(4, 0, 1.0, samples, rng);
    add(out, "split", "control a=1 n=4 nu=0 KS above critical", control.statistic, control.critical_value, false);
    return out;
}

using SuiteFn = Results (*)(const SuiteOptions&);

const std::map<std::string, SuiteFn>& registry()
{
    static const std::map<std::string, SuiteFn> r{
        {"skeworth", skeworth_suite}, {"weights", weights_suite}, {"jpdf-oracle", jpdf_oracle_suite},
        {"pfaffian", pfaffian_suite}, {"limits", limits_suite},   {"heine", heine_suite},
        {"split", split_suite},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"skeworth", "weights", "jpdf-oracle", "pfaffian",
                                                "limits",   "heine",   "split"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& options)
{
    const auto it = registry().find(name);
    if (it == registry().end()) throw DomainError("unknown suite '" + name + "'");
    return it->second(options);
}

bool all_passed(const std::vector<CheckResult>& results)
{
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace rmtx
