#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "common/error.hpp"

namespace resonet {

using cplx = std::complex<double>;

// Dense complex matrix, row-major storage. This is the one numeric container
// the physics layers are written against; decompositions are delegated to a
// LAPACK-quality backend inside matrix.cpp so the rest of the code never
// touches backend types directly.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    Matrix transpose() const;
    Matrix conjugate() const;
    Matrix adjoint() const;

    cplx trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    bool is_finite() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(cplx scale);

  private:
    std::size_t rows_, cols_;
    std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(cplx scale, Matrix a);
Matrix operator*(Matrix a, cplx scale);
Matrix operator*(const Matrix& a, const Matrix& b);

// Kronecker product. Result dimension (a.rows*b.rows) x (a.cols*b.cols) is
// capped so superoperator construction cannot silently explode.
inline constexpr std::size_t kMaxKronDim = 1u << 20;
Matrix kron(const Matrix& a, const Matrix& b);

// Column-stacking vectorization: vec(rho)[c*n + r] = rho(r, c), and its
// inverse. All superoperators in this codebase use this convention, under
// which vec(A X B) = (B^T kron A) vec(X).
std::vector<cplx> vec_columns(const Matrix& m);
Matrix unvec_columns(const std::vector<cplx>& v, std::size_t rows, std::size_t cols);

// Matrix-vector product y = a * x.
std::vector<cplx> matvec(const Matrix& a, const std::vector<cplx>& x);

struct LeastSquaresResult {
    std::vector<cplx> x;
    std::size_t estimated_rank = 0;
    bool rank_deficient = false;
};

// Minimizes ||a x - b||_2 via column-pivoted QR. Requires rows >= cols.
// Rank deficiency (estimated rank < cols) is reported in the result rather
// than thrown, because some callers legitimately probe near-singular systems
// and decide for themselves.
LeastSquaresResult solve_linear_least_squares(const Matrix& a, const std::vector<cplx>& b);

// Eigenvalues of a general square matrix (no ordering guarantee). Capped at
// dimension 64: every density-matrix-sized problem in this project fits, and
// anything larger indicates a misuse.
std::vector<cplx> eigenvalues_general(const Matrix& a);

struct SingularPair {
    double smallest = 0.0;
    double second_smallest = 0.0;
};

// Two smallest singular values of a (used to certify null-space dimension).
SingularPair smallest_singular_pair(const Matrix& a);

}  // namespace resonet
