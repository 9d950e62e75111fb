#include "mathforge/ratmat.hpp"

#include <utility>

namespace mathforge {

const char* to_string(MatErrc code) {
    switch (code) {
        case MatErrc::NotSquare: return "NotSquare";
        case MatErrc::TriangleRequires3x3: return "TriangleRequires3x3";
        case MatErrc::DimensionMismatch: return "DimensionMismatch";
        case MatErrc::Singular: return "Singular";
        case MatErrc::NoUniqueSolution: return "NoUniqueSolution";
    }
    return "?";
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw std::invalid_argument("entry count does not match shape");
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::column(std::span<const Rational> values) {
    return RatMatrix(values.size(), 1, std::vector<Rational>(values.begin(), values.end()));
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::minor_matrix(std::size_t r, std::size_t c) const {
    if (rows_ < 2 || cols_ < 2) throw std::invalid_argument("minor of a matrix with a unit dimension");
    std::vector<Rational> out;
    out.reserve((rows_ - 1) * (cols_ - 1));
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0; j < cols_; ++j)
            if (j != c) out.push_back((*this)(i, j));
    }
    return RatMatrix(rows_ - 1, cols_ - 1, std::move(out));
}

namespace {

void require_same_shape(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw MatError(MatErrc::DimensionMismatch, "matrix shapes differ");
}

void require_square(const RatMatrix& m) {
    if (!m.square()) throw MatError(MatErrc::NotSquare, "matrix is not square");
}

// Forward elimination to upper-triangular form. Pivot is the first nonzero
// entry at or below the diagonal; each row swap flips the sign. Returns the
// determinant of the square part (columns [0, rows)).
Rational eliminate(RatMatrix& m) {
    const std::size_t n = m.rows();
    Rational sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m(p, k).is_zero()) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(k, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k).is_zero()) continue;
            Rational f = m(i, k) / m(k, k);
            m(i, k) = 0;
            for (std::size_t j = k + 1; j < m.cols(); ++j) m(i, j) -= f * m(k, j);
        }
    }
    Rational d = sign;
    for (std::size_t k = 0; k < n; ++k) d *= m(k, k);
    return d;
}

Rational det_triangle(const RatMatrix& m) {
    const auto& a = m;
    return a(0, 0) * a(1, 1) * a(2, 2) + a(0, 1) * a(1, 2) * a(2, 0) + a(0, 2) * a(1, 0) * a(2, 1) -
           a(0, 2) * a(1, 1) * a(2, 0) - a(0, 0) * a(1, 2) * a(2, 1) - a(0, 1) * a(1, 0) * a(2, 2);
}

Rational det_cofactor(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Rational sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        Rational term = m(0, j) * det_cofactor(m.minor_matrix(0, j));
        if (j % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

RatMatrix inverse_gauss(const RatMatrix& m) {
    const std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    if (eliminate(aug).is_zero()) throw MatError(MatErrc::Singular, "matrix is singular");
    // back substitution on the upper-triangular left block
    for (std::size_t k = n; k-- > 0;) {
        Rational pivot = aug(k, k);
        for (std::size_t j = k; j < 2 * n; ++j) aug(k, j) /= pivot;
        for (std::size_t i = 0; i < k; ++i) {
            if (aug(i, k).is_zero()) continue;
            Rational f = aug(i, k);
            for (std::size_t j = k; j < 2 * n; ++j) aug(i, j) -= f * aug(k, j);
        }
    }
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

RatMatrix solve_gauss(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.rows();
    RatMatrix aug(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n) = b(i, 0);
    }
    if (eliminate(aug).is_zero())
        throw MatError(MatErrc::NoUniqueSolution, "system has no unique solution");
    RatMatrix x(n, 1);
    for (std::size_t k = n; k-- > 0;) {
        Rational acc = aug(k, n);
        for (std::size_t j = k + 1; j < n; ++j) acc -= aug(k, j) * x(j, 0);
        x(k, 0) = acc / aug(k, k);
    }
    return x;
}

// Cofactor expansion is factorial in n; past the generator's 5x5 cap the
// determinants switch to elimination.
DetMethod cramer_det_method(std::size_t n) {
    return n <= 5 ? DetMethod::Cofactor : DetMethod::TriangularReduction;
}

RatMatrix solve_cramer(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.rows();
    const DetMethod method = cramer_det_method(n);
    Rational d = det(a, method);
    if (d.is_zero()) throw MatError(MatErrc::Singular, "coefficient matrix is singular");
    RatMatrix x(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
        RatMatrix ak = a;
        for (std::size_t i = 0; i < n; ++i) ak(i, k) = b(i, 0);
        x(k, 0) = det(ak, method) / d;
    }
    return x;
}

}  // namespace

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    require_same_shape(a, b);
    RatMatrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    require_same_shape(a, b);
    RatMatrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
}

RatMatrix operator*(const Rational& k, const RatMatrix& m) {
    RatMatrix r = m;
    for (auto& e : r.data_) e *= k;
    return r;
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows())
        throw MatError(MatErrc::DimensionMismatch,
                       "cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                           " by " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    RatMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

LinSystem::LinSystem(RatMatrix a_, RatMatrix b_, std::vector<std::string> names)
    : a(std::move(a_)), b(std::move(b_)), var_names(std::move(names)) {
    require_square(a);
    if (b.rows() != a.rows() || b.cols() != 1)
        throw MatError(MatErrc::DimensionMismatch, "right-hand side must be an n x 1 column");
    if (var_names.empty()) {
        for (std::size_t i = 1; i <= a.rows(); ++i) var_names.push_back("x" + std::to_string(i));
    } else if (var_names.size() != a.rows()) {
        throw MatError(MatErrc::DimensionMismatch, "variable name count differs from unknowns");
    }
}

Rational det(const RatMatrix& m, DetMethod method) {
    require_square(m);
    switch (method) {
        case DetMethod::Triangle:
            if (m.rows() != 3)
                throw MatError(MatErrc::TriangleRequires3x3, "the triangle rule applies to 3x3 only");
            return det_triangle(m);
        case DetMethod::Cofactor:
            return det_cofactor(m);
        case DetMethod::TriangularReduction: {
            RatMatrix work = m;
            return eliminate(work);
        }
    }
    throw std::logic_error("unknown determinant method");
}

Rational cofactor(const RatMatrix& m, std::size_t r, std::size_t c) {
    require_square(m);
    if (m.rows() == 1) return 1;
    Rational minor = det_cofactor(m.minor_matrix(r, c));
    return (r + c) % 2 == 0 ? minor : -minor;
}

RatMatrix adjugate(const RatMatrix& m) {
    require_square(m);
    const std::size_t n = m.rows();
    RatMatrix adj(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) adj(j, i) = cofactor(m, i, j);
    return adj;
}

RatMatrix inverse(const RatMatrix& m, InvMethod method) {
    require_square(m);
    switch (method) {
        case InvMethod::Adjugate: {
            Rational d = det(m, DetMethod::Cofactor);
            if (d.is_zero()) throw MatError(MatErrc::Singular, "matrix is singular");
            return d.reciprocal() * adjugate(m);
        }
        case InvMethod::Gauss:
            return inverse_gauss(m);
    }
    throw std::logic_error("unknown inversion method");
}

RatMatrix solve(const LinSystem& sys, SolveMethod method) {
    switch (method) {
        case SolveMethod::Cramer:
            return solve_cramer(sys.a, sys.b);
        case SolveMethod::InverseMatrix:
            return mat_mul(inverse(sys.a, InvMethod::Adjugate), sys.b);
        case SolveMethod::Gauss:
            return solve_gauss(sys.a, sys.b);
    }
    throw std::logic_error("unknown solve method");
}

RatMatrix mat_poly(std::span<const Rational> coeffs, const RatMatrix& m) {
    require_square(m);
    if (coeffs.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
    const auto id = RatMatrix::identity(m.rows());
    RatMatrix acc = coeffs[0] * id;
    for (std::size_t i = 1; i < coeffs.size(); ++i) acc = mat_mul(acc, m) + coeffs[i] * id;
    return acc;
}

RatMatrix solve_matrix_eq(const RatMatrix& a, const RatMatrix& b, const RatMatrix& c) {
    if (!a.square() || !b.square() || a.rows() != b.rows())
        throw MatError(MatErrc::DimensionMismatch, "A and B must be square of equal size");
    if (c.rows() != a.rows())
        throw MatError(MatErrc::DimensionMismatch, "C row count must match A");
    RatMatrix ab = mat_mul(a, b);
    if (det(ab, DetMethod::TriangularReduction).is_zero())
        throw MatError(MatErrc::Singular, "AB is singular");
    return mat_mul(inverse(ab, InvMethod::Gauss), c);
}

}  // namespace mathforge
