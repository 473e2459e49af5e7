#include "numeric/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace resonet {

namespace {

using EigenRowMajor =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenColMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::Map<const EigenRowMajor> map_of(const Matrix& m) {
    return Eigen::Map<const EigenRowMajor>(
        m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

Eigen::Map<EigenRowMajor> map_of(Matrix& m) {
    return Eigen::Map<EigenRowMajor>(
        m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::Dimension,
            std::string(op) + ": shape mismatch");
}

}  // namespace

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

Matrix Matrix::conjugate() const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
    return out;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

cplx Matrix::trace() const {
    require(rows_ == cols_, ErrorCode::Dimension, "trace: matrix not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

bool Matrix::is_finite() const {
    for (const cplx& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(cplx scale) {
    for (cplx& v : data_) v *= scale;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cplx scale, Matrix a) { return a *= scale; }
Matrix operator*(Matrix a, cplx scale) { return a *= scale; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), ErrorCode::Dimension, "operator*: inner dimension mismatch");
    Matrix out(a.rows(), b.cols());
    map_of(out).noalias() = map_of(a) * map_of(b);
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    std::size_t rows = a.rows() * b.rows();
    std::size_t cols = a.cols() * b.cols();
    require(a.rows() > 0 && b.rows() > 0 && a.cols() > 0 && b.cols() > 0,
            ErrorCode::InvalidArgument, "kron: empty operand");
    require(rows <= kMaxKronDim && cols <= kMaxKronDim, ErrorCode::Dimension,
            "kron: result exceeds configured maximum dimension");
    Matrix out(rows, cols);
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx aval = a(ar, ac);
            if (aval == cplx(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = aval * b(br, bc);
        }
    return out;
}

std::vector<cplx> vec_columns(const Matrix& m) {
    std::vector<cplx> v(m.rows() * m.cols());
    std::size_t k = 0;
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) v[k++] = m(r, c);
    return v;
}

Matrix unvec_columns(const std::vector<cplx>& v, std::size_t rows, std::size_t cols) {
    require(v.size() == rows * cols, ErrorCode::Dimension, "unvec: size mismatch");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = v[k++];
    return m;
}

std::vector<cplx> matvec(const Matrix& a, const std::vector<cplx>& x) {
    require(a.cols() == x.size(), ErrorCode::Dimension, "matvec: dimension mismatch");
    std::vector<cplx> y(a.rows());
    Eigen::Map<const Eigen::VectorXcd> xm(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXcd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
    ym.noalias() = map_of(a) * xm;
    return y;
}

LeastSquaresResult solve_linear_least_squares(const Matrix& a, const std::vector<cplx>& b) {
    require(a.rows() >= a.cols(), ErrorCode::Dimension,
            "solve_linear_least_squares: fewer rows than columns");
    require(b.size() == a.rows(), ErrorCode::Dimension,
            "solve_linear_least_squares: right-hand side length mismatch");
    require(a.is_finite(), ErrorCode::InvalidArgument,
            "solve_linear_least_squares: non-finite entries");

    EigenColMajor ac = map_of(a);
    Eigen::Map<const Eigen::VectorXcd> bm(b.data(), static_cast<Eigen::Index>(b.size()));

    Eigen::ColPivHouseholderQR<EigenColMajor> qr(ac);
    Eigen::VectorXcd x = qr.solve(bm);

    LeastSquaresResult result;
    result.x.assign(x.data(), x.data() + x.size());
    result.estimated_rank = static_cast<std::size_t>(qr.rank());
    result.rank_deficient = result.estimated_rank < a.cols();
    return result;
}

std::vector<cplx> eigenvalues_general(const Matrix& a) {
    require(a.rows() == a.cols(), ErrorCode::Dimension, "eigenvalues_general: matrix not square");
    require(a.rows() >= 1 && a.rows() <= 64, ErrorCode::Dimension,
            "eigenvalues_general: dimension outside supported range [1, 64]");
    require(a.is_finite(), ErrorCode::InvalidArgument, "eigenvalues_general: non-finite entries");

    EigenColMajor ac = map_of(a);
    Eigen::ComplexEigenSolver<EigenColMajor> es(ac, /*computeEigenvectors=*/false);
    require(es.info() == Eigen::Success, ErrorCode::NoConvergence,
            "eigenvalues_general: eigenvalue iteration failed");

    const auto& ev = es.eigenvalues();
    return std::vector<cplx>(ev.data(), ev.data() + ev.size());
}

SingularPair smallest_singular_pair(const Matrix& a) {
    require(a.rows() >= 2 && a.cols() >= 2, ErrorCode::Dimension,
            "smallest_singular_pair: need at least a 2x2 matrix");
    require(a.is_finite(), ErrorCode::InvalidArgument,
            "smallest_singular_pair: non-finite entries");

    EigenColMajor ac = map_of(a);
    Eigen::VectorXd sv;
    if (a.rows() <= 128 && a.cols() <= 128) {
        Eigen::JacobiSVD<EigenColMajor> svd(ac);
        sv = svd.singularValues();
    } else {
        Eigen::BDCSVD<EigenColMajor> svd(ac);
        sv = svd.singularValues();
    }
    // Singular values come out in decreasing order.
    SingularPair p;
    p.smallest = sv(sv.size() - 1);
    p.second_smallest = sv(sv.size() - 2);
    return p;
}

}  // namespace resonet
