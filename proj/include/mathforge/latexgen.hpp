#pragma once

#include "mathforge/answer.hpp"
#include "mathforge/ratmat.hpp"

#include <span>
#include <string>
#include <string_view>

namespace mathforge::latex {

enum class MatrixDelimiter { Paren, Vert };

/// A LaTeX fragment. Inline snippets belong between `$` delimiters; a
/// non-inline snippet is plain text (e.g. a non-existence message).
struct MathSnippet {
    std::string text;
    bool inline_math = true;

    /// "$text$" for inline math, the bare text otherwise.
    std::string wrapped() const { return inline_math ? "$" + text + "$" : text; }

    friend bool operator==(const MathSnippet&, const MathSnippet&) = default;
};

MathSnippet render_rational(const Rational& q);
MathSnippet render_matrix(const RatMatrix& m, MatrixDelimiter delim);
MathSnippet render_system(const LinSystem& sys);
MathSnippet render_poly(std::span<const Rational> coeffs, std::string_view var);
MathSnippet render_answer(const Answer& ans);

/// "x1" -> "x_{1}"; names without a trailing number pass through.
std::string render_symbol(std::string_view name);

/// Linear form sum(coeffs[i] * vars[i]) with the sign and unit-coefficient
/// conventions used by render_system; "0" when every coefficient is zero.
std::string render_linear_form(std::span<const Rational> coeffs, std::span<const std::string> vars);

}  // namespace mathforge::latex
