#include "rmtx/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "rmtx/errors.hpp"

namespace rmtx {

namespace {

constexpr int kNodes = 15;

struct GaussLegendre {
    std::array<double, kNodes> x{};
    std::array<double, kNodes> w{};

    GaussLegendre()
    {
        const double pi = std::acos(-1.0);
        for (int i = 0; i < kNodes; ++i) {
            double z = std::cos(pi * (i + 0.75) / (kNodes + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= kNodes; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = kNodes * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& rule()
{
    static const GaussLegendre gl;
    return gl;
}

struct Panel {
    double a, b;
    int depth;
    std::vector<double> left, right;          // GL15 on each half
    std::vector<double> left_abs, right_abs;  // GL15 of |f| on each half
    std::vector<double> err;                  // |coarse - (left + right)|
};

class VecIntegrator {
public:
    VecIntegrator(const ScaledVectorFn& f, std::size_t dim, const QuadratureSpec& spec)
        : f_(f), dim_(dim), spec_(spec), buf_(dim), mag_(dim) {}

    std::vector<double> run(double lo, double hi, const std::vector<double>& breaks,
                            std::vector<double>* magnitude_out = nullptr)
    {
        std::vector<double> cuts{lo};
        for (double b : breaks)
            if (b > lo && b < hi) cuts.push_back(b);
        std::sort(cuts.begin() + 1, cuts.end());
        cuts.push_back(hi);

        std::vector<Panel> panels;
        std::vector<double> val(dim_), absv(dim_);
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            if (!(cuts[s + 1] > cuts[s])) continue;
            gl(cuts[s], cuts[s + 1], val, absv);
            panels.push_back(make_panel(cuts[s], cuts[s + 1], 0, val));
        }

        std::vector<double> total(dim_), errsum(dim_), abssum(dim_), tol(dim_);
        const double eps = std::numeric_limits<double>::epsilon();
        while (true) {
            std::fill(total.begin(), total.end(), 0.0);
            std::fill(errsum.begin(), errsum.end(), 0.0);
            std::fill(abssum.begin(), abssum.end(), 0.0);
            for (const Panel& p : panels)
                for (std::size_t k = 0; k < dim_; ++k) {
                    total[k] += p.left[k] + p.right[k];
                    errsum[k] += p.err[k];
                    abssum[k] += p.left_abs[k] + p.right_abs[k];
                }
            bool done = true;
            for (std::size_t k = 0; k < dim_; ++k) {
                tol[k] = std::max({spec_.abs_tol, spec_.rel_tol * std::abs(total[k]), 50.0 * eps * abssum[k]});
                if (!(errsum[k] <= tol[k])) done = false;
            }
            if (done) {
                if (magnitude_out) *magnitude_out = abssum;
                return total;
            }

            std::size_t worst = panels.size();
            double worst_score = 0.0;
            for (std::size_t i = 0; i < panels.size(); ++i) {
                const Panel& p = panels[i];
                if (p.depth >= spec_.max_depth) continue;
                double score = 0.0;
                for (std::size_t k = 0; k < dim_; ++k) {
                    if (p.err[k] <= 50.0 * eps * (p.left_abs[k] + p.right_abs[k])) continue;
                    score = std::max(score, p.err[k] / tol[k]);
                }
                if (std::isnan(score)) score = std::numeric_limits<double>::infinity();
                if (score > worst_score) {
                    worst_score = score;
                    worst = i;
                }
            }
            if (worst == panels.size()) {
                // Only roundoff-limited or depth-exhausted panels remain.
                bool depth_limited = false;
                for (const Panel& p : panels)
                    for (std::size_t k = 0; k < dim_; ++k)
                        if (p.err[k] > 50.0 * eps * (p.left_abs[k] + p.right_abs[k]) && p.depth >= spec_.max_depth)
                            depth_limited = true;
                if (!depth_limited) {
                    if (magnitude_out) *magnitude_out = abssum;
                    return total;
                }
                throw ConvergenceError("quadrature: maximum depth reached", total[0], errsum[0]);
            }
            if (static_cast<int>(panels.size()) >= spec_.max_panels)
                throw ConvergenceError("quadrature: panel budget exhausted", total[0], errsum[0]);

            Panel p = std::move(panels[worst]);
            panels[worst] = panels.back();
            panels.pop_back();
            const double mid = 0.5 * (p.a + p.b);
            panels.push_back(make_panel(p.a, mid, p.depth + 1, p.left));
            panels.push_back(make_panel(mid, p.b, p.depth + 1, p.right));
        }
    }

private:
    void gl(double a, double b, std::vector<double>& val, std::vector<double>& absv)
    {
        const GaussLegendre& r = rule();
        const double h = 0.5 * (b - a), c = 0.5 * (a + b);
        std::fill(val.begin(), val.end(), 0.0);
        std::fill(absv.begin(), absv.end(), 0.0);
        for (int i = 0; i < kNodes; ++i) {
            f_(c + h * r.x[i], buf_.data(), mag_.data());
            for (std::size_t k = 0; k < dim_; ++k) {
                val[k] += r.w[i] * buf_[k];
                absv[k] += r.w[i] * mag_[k];
            }
        }
        for (std::size_t k = 0; k < dim_; ++k) {
            val[k] *= h;
            absv[k] *= h;
        }
    }

    Panel make_panel(double a, double b, int depth, const std::vector<double>& coarse)
    {
        Panel p{a, b, depth, std::vector<double>(dim_), std::vector<double>(dim_), std::vector<double>(dim_),
                std::vector<double>(dim_), std::vector<double>(dim_)};
        const double mid = 0.5 * (a + b);
        gl(a, mid, p.left, p.left_abs);
        gl(mid, b, p.right, p.right_abs);
        for (std::size_t k = 0; k < dim_; ++k) {
            p.err[k] = std::abs(coarse[k] - (p.left[k] + p.right[k]));
            if (std::isnan(p.left[k] + p.right[k])) p.err[k] = std::numeric_limits<double>::quiet_NaN();
        }
        return p;
    }

    const ScaledVectorFn& f_;
    std::size_t dim_;
    QuadratureSpec spec_;
    std::vector<double> buf_, mag_;
};

}  // namespace

void QuadratureSpec::validate() const
{
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("quadrature: tolerances must be positive");
    if (max_depth > 60 || max_depth < 1) throw DomainError("quadrature: max_depth must lie in [1,60]");
    if (truncation_margin < 6) throw DomainError("quadrature: truncation_margin must be >= 6");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const
{
    QuadratureSpec s = *this;
    s.abs_tol *= factor;
    s.rel_tol *= factor;
    return s;
}

std::vector<double> integrate_finite_vec(const VectorFn& f, std::size_t dim, double lo, double hi,
                                         const QuadratureSpec& spec, const std::vector<double>& breaks)
{
    spec.validate();
    if (hi < lo) throw DomainError("integrate_finite: lo > hi");
    if (hi == lo) return std::vector<double>(dim, 0.0);
    const ScaledVectorFn g = [&f, dim](double x, double* out, double* mag) {
        f(x, out);
        for (std::size_t k = 0; k < dim; ++k) mag[k] = std::abs(out[k]);
    };
    VecIntegrator integ(g, dim, spec);
    return integ.run(lo, hi, breaks);
}

std::vector<double> integrate_finite_scaled(const ScaledVectorFn& f, std::size_t dim, double lo, double hi,
                                            const QuadratureSpec& spec, const std::vector<double>& breaks,
                                            std::vector<double>* magnitude_integral)
{
    spec.validate();
    if (hi < lo) throw DomainError("integrate_finite: lo > hi");
    if (hi == lo) {
        if (magnitude_integral) magnitude_integral->assign(dim, 0.0);
        return std::vector<double>(dim, 0.0);
    }
    VecIntegrator integ(f, dim, spec);
    return integ.run(lo, hi, breaks, magnitude_integral);
}

double integrate_finite(const ScalarFn& f, double lo, double hi, const QuadratureSpec& spec,
                        const std::vector<double>& breaks)
{
    const VectorFn g = [&f](double x, double* out) { out[0] = f(x); };
    return integrate_finite_vec(g, 1, lo, hi, spec, breaks)[0];
}

double gaussian_cutoff(double decay, const QuadratureSpec& spec, double extent)
{
    if (!(decay > 0)) throw DomainError("gaussian decay must be positive");
    return spec.truncation_margin / std::sqrt(decay) + std::abs(extent);
}

std::vector<double> integrate_halfline_gaussian_vec(const VectorFn& f, std::size_t dim, double decay,
                                                    const QuadratureSpec& spec, double extent,
                                                    const std::vector<double>& breaks)
{
    return integrate_finite_vec(f, dim, 0.0, gaussian_cutoff(decay, spec, extent), spec, breaks);
}

double integrate_halfline_gaussian(const ScalarFn& f, double decay, const QuadratureSpec& spec, double extent,
                                   const std::vector<double>& breaks)
{
    return integrate_finite(f, 0.0, gaussian_cutoff(decay, spec, extent), spec, breaks);
}

double integrate_line_gaussian(const ScalarFn& f, double decay, double center, const QuadratureSpec& spec)
{
    const double half = gaussian_cutoff(decay, spec, 0.0);
    return integrate_finite(f, center - half, center + half, spec, {center});
}

double integrate_quadrant(const std::function<double(double, double)>& f, double decay, const QuadratureSpec& spec,
                          double extent)
{
    const QuadratureSpec inner = spec.tightened(0.1);
    const ScalarFn outer = [&](double x) {
        return integrate_halfline_gaussian([&](double y) { return f(x, y); }, decay, inner, extent, {x});
    };
    return integrate_halfline_gaussian(outer, decay, spec, extent);
}

double integrate_semi_infinite(const ScalarFn& f, const QuadratureSpec& spec)
{
    const ScalarFn g = [&f](double u) {
        const double om = 1.0 - u;
        return f(u / om) / (om * om);
    };
    return integrate_finite(g, 0.0, 1.0, spec, {0.5});
}

}  // namespace rmtx
