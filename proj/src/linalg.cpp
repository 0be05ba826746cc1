#include "rmtx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "rmtx/errors.hpp"

namespace rmtx {

Matrix::Matrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries))
{
    if (a_.size() != n * n)
        throw ParityError("matrix: expected " + std::to_string(n * n) + " entries, got " +
                          std::to_string(a_.size()));
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const
{
    if (rhs.n_ != n_) throw ParityError("matrix product: dimension mismatch");
    Matrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

Matrix Matrix::transpose() const
{
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const
{
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius() const
{
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

AntisymMatrix AntisymMatrix::from_matrix(const Matrix& m, double tol)
{
    AntisymMatrix out(m.dim());
    const double scale = std::max(m.max_abs(), 1e-300);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (std::abs(m(i, i)) > tol * scale) throw ParityError("antisymmetric matrix: nonzero diagonal");
        for (std::size_t j = i + 1; j < m.dim(); ++j) {
            if (std::abs(m(i, j) + m(j, i)) > tol * scale)
                throw ParityError("antisymmetric matrix: M(i,j) != -M(j,i)");
            out.set(i, j, 0.5 * (m(i, j) - m(j, i)));
        }
    }
    return out;
}

void AntisymMatrix::set(std::size_t i, std::size_t j, double v)
{
    if (i == j) {
        if (v != 0.0) throw ParityError("antisymmetric matrix: diagonal must vanish");
        return;
    }
    m_(i, j) = v;
    m_(j, i) = -v;
}

AntisymMatrix AntisymMatrix::conjugated(const Matrix& o) const
{
    const Matrix full = o * m_ * o.transpose();
    AntisymMatrix out(dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j) out.set(i, j, 0.5 * (full(i, j) - full(j, i)));
    return out;
}

EigenResult sym_eigen(const Matrix& s_in, bool want_vectors)
{
    const std::size_t n = s_in.dim();
    Matrix s = s_in;
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
    EigenResult res;

    const double norm = s.frobenius();
    const double stop = 1e-14 * norm;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * s(i, j) * s(i, j);
        if (std::sqrt(off) <= stop) break;
        res.sweeps = sweep + 1;

        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                if (want_vectors)
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - sn * vkq;
                        v(k, q) = sn * vkp + c * vkq;
                    }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s(a, a) < s(b, b); });
    res.values.resize(n);
    if (want_vectors) res.vectors = Matrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        res.values[k] = s(order[k], order[k]);
        if (want_vectors)
            for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = v(i, order[k]);
    }
    return res;
}

SpectrumPairs singular_values_antisym(const AntisymMatrix& m, int nu)
{
    const std::size_t n_dim = m.dim();
    if (nu != 0 && nu != 1) throw ParityError("nu must be 0 or 1");
    if (static_cast<int>(n_dim % 2) != nu)
        throw ParityError("dimension " + std::to_string(n_dim) + " inconsistent with nu=" + std::to_string(nu));

    // -M^2 = M^T M, symmetric positive semi-definite
    Matrix s(n_dim);
    const Matrix& a = m.matrix();
    for (std::size_t i = 0; i < n_dim; ++i)
        for (std::size_t j = i; j < n_dim; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_dim; ++k) acc += a(k, i) * a(k, j);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    const EigenResult eig = sym_eigen(s, false);

    SpectrumPairs out;
    out.nu_zero_modes = nu;
    const std::size_t pairs = n_dim / 2;
    out.singular_values.resize(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
        const double mean = 0.5 * (eig.values[nu + 2 * k] + eig.values[nu + 2 * k + 1]);
        out.singular_values[pairs - 1 - k] = std::sqrt(std::max(mean, 0.0));
    }
    return out;
}

double pfaffian(const Matrix& m_in, bool allow_odd)
{
    const std::size_t n = m_in.dim();
    if (n % 2 == 1) {
        if (allow_odd) return 0.0;
        throw ParityError("pfaffian: odd dimension " + std::to_string(n));
    }
    if (n == 0) return 1.0;
    Matrix a = m_in;
    double pf = 1.0;
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        std::size_t kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (std::size_t i = k + 2; i < n; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                kp = i;
            }
        if (kp != k + 1) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k + 1, j), a(kp, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, kp));
            pf = -pf;
        }
        if (a(k + 1, k) == 0.0) return 0.0;
        const double piv = a(k, k + 1);
        pf *= piv;
        if (k + 2 < n) {
            std::vector<double> tau(n, 0.0);
            for (std::size_t i = k + 2; i < n; ++i) tau[i] = a(k, i) / piv;
            for (std::size_t i = k + 2; i < n; ++i)
                for (std::size_t j = k + 2; j < n; ++j)
                    a(i, j) += tau[i] * a(j, k + 1) - a(i, k + 1) * tau[j];
        }
    }
    return pf;
}

double pfaffian(const AntisymMatrix& m, bool allow_odd) { return pfaffian(m.matrix(), allow_odd); }

namespace {

double pf_expand(const Matrix& a, std::vector<std::size_t>& idx)
{
    if (idx.empty()) return 1.0;
    const std::size_t first = idx.front();
    double sum = 0.0;
    for (std::size_t j = 1; j < idx.size(); ++j) {
        const double entry = a(first, idx[j]);
        if (entry == 0.0) continue;
        std::vector<std::size_t> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t k = 1; k < idx.size(); ++k)
            if (k != j) rest.push_back(idx[k]);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        sum += sign * entry * pf_expand(a, rest);
    }
    return sum;
}

}  // namespace

double pfaffian_recursive(const AntisymMatrix& m)
{
    const std::size_t n = m.dim();
    if (n % 2 == 1) throw ParityError("pfaffian_recursive: odd dimension");
    if (n > 10) throw SizeError("pfaffian_recursive: N=" + std::to_string(n) + " exceeds 10");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return pf_expand(m.matrix(), idx);
}

double vandermonde_sq(const std::vector<double>& lambda)
{
    double prod = 1.0;
    for (std::size_t a = 0; a < lambda.size(); ++a)
        for (std::size_t b = a + 1; b < lambda.size(); ++b)
            prod *= lambda[b] * lambda[b] - lambda[a] * lambda[a];
    return prod;
}

double determinant(const Matrix& m)
{
    const std::size_t n = m.dim();
    Matrix a = m;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

Matrix orthogonal_from_normals(std::size_t n, const std::vector<double>& normals)
{
    if (normals.size() < n * n) throw ParityError("orthogonal_from_normals: not enough draws");
    Matrix q(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = normals[j * n + i];
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += q(i, k) * col[i];
                for (std::size_t i = 0; i < n; ++i) col[i] -= dot * q(i, k);
            }
        double norm = 0.0;
        for (double c : col) norm += c * c;
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) q(i, j) = col[i] / norm;
    }
    return q;
}

SkewTridiagonal::SkewTridiagonal(const AntisymMatrix& m)
{
    const std::size_t n = m.dim();
    n_ = n;
    Matrix a = m.matrix();
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = a(k + 1, k) > 0 ? -norm : norm;
        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        double vv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vv += v[i] * v[i];
        if (vv == 0.0) continue;
        const double f = 2.0 / vv;
        for (std::size_t j = k; j < n; ++j) {
            double w = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) w += v[i] * a(i, j);
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= f * v[i] * w;
        }
        for (std::size_t i = k; i < n; ++i) {
            double w = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) w += a(i, j) * v[j];
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * w * v[j];
        }
    }
    e_.resize(n > 0 ? n - 1 : 0);
    for (std::size_t k = 0; k + 1 < n; ++k) e_[k] = a(k + 1, k);
}

double SkewTridiagonal::char_poly(double x) const
{
    if (n_ == 0) return 1.0;
    double d_prev = 1.0;
    double d = x;
    for (std::size_t k = 0; k < e_.size(); ++k) {
        const double next = x * d - e_[k] * e_[k] * d_prev;
        d_prev = d;
        d = next;
    }
    return d;
}

}  // namespace rmtx
