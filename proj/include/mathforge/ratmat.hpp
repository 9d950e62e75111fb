#pragma once

#include "mathforge/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mathforge {

enum class MatErrc {
    NotSquare,
    TriangleRequires3x3,
    DimensionMismatch,
    Singular,
    NoUniqueSolution,
};

const char* to_string(MatErrc code);

class MatError : public std::runtime_error {
public:
    MatError(MatErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    MatErrc code() const noexcept { return code_; }

private:
    MatErrc code_;
};

/// Dense row-major matrix of exact rationals.
class RatMatrix {
public:
    /// rows x cols zero matrix; both dimensions must be >= 1.
    RatMatrix(std::size_t rows, std::size_t cols);
    RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static RatMatrix identity(std::size_t n);
    static RatMatrix column(std::span<const Rational> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Rational> entries() const { return data_; }

    RatMatrix transpose() const;
    /// Copy with row r and column c removed.
    RatMatrix minor_matrix(std::size_t r, std::size_t c) const;

    friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator*(const Rational& k, const RatMatrix& m);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> data_;
};

/// Throws MatError{DimensionMismatch} when a.cols() != b.rows().
RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
inline RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) { return mat_mul(a, b); }

enum class DetMethod { Triangle, Cofactor, TriangularReduction };
enum class InvMethod { Adjugate, Gauss };
enum class SolveMethod { Cramer, InverseMatrix, Gauss };

struct LinSystem {
    RatMatrix a;
    RatMatrix b;  // n x 1
    std::vector<std::string> var_names;

    /// Checks shapes and fills var_names with x1..xn when empty.
    LinSystem(RatMatrix a, RatMatrix b, std::vector<std::string> var_names = {});
};

Rational det(const RatMatrix& m, DetMethod method);
RatMatrix inverse(const RatMatrix& m, InvMethod method);
RatMatrix solve(const LinSystem& sys, SolveMethod method);

/// Cofactor C(r,c) = (-1)^(r+c) * det(minor(r,c)).
Rational cofactor(const RatMatrix& m, std::size_t r, std::size_t c);
RatMatrix adjugate(const RatMatrix& m);

/// Horner evaluation of a polynomial (coefficients highest degree first)
/// at a square matrix; the constant term contributes c*I.
RatMatrix mat_poly(std::span<const Rational> coeffs, const RatMatrix& m);

/// X with a*b*X = c.
RatMatrix solve_matrix_eq(const RatMatrix& a, const RatMatrix& b, const RatMatrix& c);

}  // namespace mathforge
