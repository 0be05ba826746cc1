#pragma once

#include <cstddef>
#include <vector>

namespace rmtx {

/// Dense square real matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    Matrix(std::size_t n, std::vector<double> entries);

    static Matrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<double>& data() const { return a_; }

    Matrix operator*(const Matrix& rhs) const;
    Matrix transpose() const;
    double max_abs() const;
    double frobenius() const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Real antisymmetric matrix. Every write through set() also writes the
/// mirrored entry, so entries(i,j) == -entries(j,i) holds exactly.
class AntisymMatrix {
public:
    AntisymMatrix() = default;
    explicit AntisymMatrix(std::size_t n) : m_(n) {}

    /// Build from a full matrix; throws ParityError when it is not antisymmetric.
    static AntisymMatrix from_matrix(const Matrix& m, double tol = 0.0);

    std::size_t dim() const { return m_.dim(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v);
    const Matrix& matrix() const { return m_; }

    /// O M O^T for an orthogonal O.
    AntisymMatrix conjugated(const Matrix& o) const;

private:
    Matrix m_;
};

struct EigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector of values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
EigenResult sym_eigen(const Matrix& s, bool want_vectors = true);

struct SpectrumPairs {
    std::vector<double> singular_values;  // descending, size n
    int nu_zero_modes = 0;
    int n_pairs() const { return static_cast<int>(singular_values.size()); }
};

/// Singular values of an antisymmetric matrix of size 2n+nu from the spectrum of -M^2.
SpectrumPairs singular_values_antisym(const AntisymMatrix& m, int nu);

/// Pfaffian by Parlett-Reid elimination with partial pivoting.
/// Odd dimension throws ParityError unless allow_odd is set, in which case 0 is returned.
double pfaffian(const AntisymMatrix& m, bool allow_odd = false);
double pfaffian(const Matrix& m, bool allow_odd = false);

/// Expansion along the first row; exponential cost, used as a reference for N <= 10.
double pfaffian_recursive(const AntisymMatrix& m);

/// prod_{a<b} (lambda_b^2 - lambda_a^2)
double vandermonde_sq(const std::vector<double>& lambda);

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& m);

/// Random orthogonal matrix from Gram-Schmidt of a Gaussian matrix; `normals`
/// must hold at least n*n standard normal draws.
Matrix orthogonal_from_normals(std::size_t n, const std::vector<double>& normals);

/// Characteristic-polynomial value det(x*1 - iM) = x^nu prod_k (x^2 - lambda_k^2),
/// evaluated through an orthogonal reduction to skew-tridiagonal form.
class SkewTridiagonal {
public:
    explicit SkewTridiagonal(const AntisymMatrix& m);
    double char_poly(double x) const;
    const std::vector<double>& offdiag() const { return e_; }

private:
    std::size_t n_ = 0;
    std::vector<double> e_;
};

}  // namespace rmtx
