#include "mathforge/latexgen.hpp"

#include <cctype>
#include <string>

namespace mathforge::latex {

namespace {

std::string magnitude(const Rational& q) {
    const Rational a = q.abs();
    if (a.is_integer()) return a.numerator().str();
    return "\\frac{" + a.numerator().str() + "}{" + a.denominator().str() + "}";
}

// Appends coeff*monomial with the sum's sign conventions. An empty monomial
// is a constant term, which always prints its coefficient.
void append_term(std::string& out, const Rational& coeff, const std::string& monomial) {
    if (coeff.is_zero()) return;
    if (coeff.sign() < 0)
        out += '-';
    else if (!out.empty())
        out += '+';
    if (monomial.empty() || coeff.abs() != Rational(1)) out += magnitude(coeff);
    out += monomial;
}

}  // namespace

MathSnippet render_rational(const Rational& q) {
    return {(q.sign() < 0 ? "-" : "") + magnitude(q), true};
}

MathSnippet render_matrix(const RatMatrix& m, MatrixDelimiter delim) {
    const bool vert = delim == MatrixDelimiter::Vert;
    std::string s = vert ? "\\left|" : "\\left(";
    s += "\\begin{array}{" + std::string(m.cols(), 'c') + "}";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i != 0) s += "\\\\";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s += ' ';
            s += render_rational(m(i, j)).text;
            if (j + 1 != m.cols()) s += '&';
        }
    }
    s += "\\end{array}";
    s += vert ? "\\right|" : "\\right)";
    return {std::move(s), true};
}

std::string render_symbol(std::string_view name) {
    std::size_t cut = name.size();
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
    if (cut == 0 || cut == name.size()) return std::string(name);
    return std::string(name.substr(0, cut)) + "_{" + std::string(name.substr(cut)) + "}";
}

std::string render_linear_form(std::span<const Rational> coeffs, std::span<const std::string> vars) {
    std::string s;
    for (std::size_t j = 0; j < coeffs.size(); ++j) append_term(s, coeffs[j], render_symbol(vars[j]));
    return s.empty() ? "0" : s;
}

MathSnippet render_system(const LinSystem& sys) {
    std::string s = "\\left\\{\\begin{array}{l}";
    const std::size_t n = sys.a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (i != 0) s += "\\\\";
        std::vector<Rational> row(sys.a.entries().begin() + i * n, sys.a.entries().begin() + (i + 1) * n);
        s += ' ';
        s += render_linear_form(row, sys.var_names);
        s += '=';
        s += render_rational(sys.b(i, 0)).text;
    }
    s += "\\end{array}\\right.";
    return {std::move(s), true};
}

MathSnippet render_poly(std::span<const Rational> coeffs, std::string_view var) {
    std::string s;
    const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
    const std::string v = render_symbol(var);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::size_t power = degree - i;
        std::string monomial;
        if (power == 1)
            monomial = v;
        else if (power > 1)
            monomial = v + "^{" + std::to_string(power) + "}";
        append_term(s, coeffs[i], monomial);
    }
    return {s.empty() ? "0" : s, true};
}

MathSnippet render_answer(const Answer& ans) {
    struct Visitor {
        MathSnippet operator()(const ScalarAnswer& a) const { return render_rational(a.value); }
        MathSnippet operator()(const MatrixAnswer& a) const {
            return render_matrix(a.value, MatrixDelimiter::Paren);
        }
        MathSnippet operator()(const VectorAnswer& a) const {
            std::string s = "\\left(";
            for (std::size_t i = 0; i < a.value.size(); ++i) {
                if (i != 0) s += ",\\,";
                s += render_rational(a.value[i]).text;
            }
            s += "\\right)";
            return {std::move(s), true};
        }
        MathSnippet operator()(const MessageAnswer& a) const { return {a.text, false}; }
    };
    return std::visit(Visitor{}, ans);
}

}  // namespace mathforge::latex
