#include "mathforge/taskgen.hpp"

#include "mathforge/latexgen.hpp"

namespace mathforge {

using latex::MatrixDelimiter;
using latex::render_matrix;

namespace {

constexpr std::string_view kKindNames[] = {"determinant", "product", "inverse",
                                           "matrix_eq",   "mat_poly", "system"};

Segment text(std::string s) { return {Segment::Kind::Text, std::move(s)}; }
Segment strong(std::string s) { return {Segment::Kind::Strong, std::move(s)}; }
Segment math(std::string s) { return {Segment::Kind::Math, std::move(s)}; }
Segment display(std::string s) { return {Segment::Kind::DisplayMath, std::move(s)}; }
Segment line_break() { return {Segment::Kind::Break, {}}; }

void append_lines(std::vector<Segment>& out, const std::vector<std::string>& lines) {
    for (const auto& line : lines) {
        out.push_back(line_break());
        out.push_back(text(line));
    }
}

std::string paren(const RatMatrix& m) { return render_matrix(m, MatrixDelimiter::Paren).text; }

Rational draw_entry(Rng& rng, const GeneratorParams& p) {
    return Rational(rng.uniform_int(p.entry_lo, p.entry_hi));
}

[[noreturn]] void non_generable(std::string_view what, const GeneratorParams& p) {
    throw TaskError(TaskErrc::NonGenerable,
                    std::string(what) + " after " + std::to_string(p.max_attempts) +
                        " attempts with entries in [" + std::to_string(p.entry_lo) + ", " +
                        std::to_string(p.entry_hi) + "]");
}

}  // namespace

std::string_view task_kind_name(TaskKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<TaskKind> task_kind_from_name(std::string_view name) {
    for (TaskKind k : kAllTaskKinds)
        if (task_kind_name(k) == name) return k;
    return std::nullopt;
}

std::size_t answer_count(TaskKind kind) { return kind == TaskKind::Product ? 2 : 1; }

void GeneratorParams::validate() const {
    auto bad = [](const std::string& m) { throw TaskError(TaskErrc::BadParams, m); };
    if (entry_lo > entry_hi) bad("entry_lo must not exceed entry_hi");
    if (dim_lo < 1) bad("dim_lo must be at least 1");
    if (dim_lo > dim_hi) bad("dim_lo must not exceed dim_hi");
    if (dim_hi > 5) bad("dim_hi must not exceed 5");
    if (max_attempts < 1) bad("max_attempts must be at least 1");
}

RatMatrix draw_matrix(Rng& rng, std::size_t rows, std::size_t cols, const GeneratorParams& params) {
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = draw_entry(rng, params);
    return m;
}

TaskInstance build_determinant_task(const RatMatrix& m, const WorksheetStrings& t) {
    TaskInstance task{TaskKind::Determinant, {}, {}};
    task.statement = {text(t.det_intro), math(render_matrix(m, MatrixDelimiter::Vert).text),
                      text(t.det_using)};
    append_lines(task.statement, t.det_methods);
    task.answers.emplace_back(ScalarAnswer{det(m, DetMethod::Cofactor)});
    return task;
}

TaskInstance build_product_task(const RatMatrix& a, const RatMatrix& b, const WorksheetStrings& t) {
    TaskInstance task{TaskKind::Product, {}, {}};
    task.statement = {text(t.product_intro), strong("AB"), text(t.product_and), strong("BA"), text(":"),
                      line_break(), math("A=" + paren(a) + ",\\;B=" + paren(b))};
    auto product_or_message = [](const RatMatrix& x, const RatMatrix& y, const std::string& missing) -> Answer {
        if (x.cols() != y.rows()) return MessageAnswer{missing};
        return MatrixAnswer{mat_mul(x, y)};
    };
    task.answers.push_back(product_or_message(a, b, t.product_ab_missing));
    task.answers.push_back(product_or_message(b, a, t.product_ba_missing));
    return task;
}

TaskInstance build_inverse_task(const RatMatrix& m, const WorksheetStrings& t) {
    TaskInstance task{TaskKind::Inverse, {}, {}};
    task.statement = {text(t.inverse_intro), math(paren(m)), text(":")};
    append_lines(task.statement, t.inverse_methods);
    task.answers.emplace_back(MatrixAnswer{inverse(m, InvMethod::Adjugate)});
    return task;
}

TaskInstance build_matrix_eq_task(const RatMatrix& a, const RatMatrix& b, const RatMatrix& c,
                                  const WorksheetStrings& t) {
    TaskInstance task{TaskKind::MatrixEq, {}, {}};
    task.statement = {text(t.matrix_eq_intro), strong("ABX=C"), text(":"), line_break(),
                      math("A=" + paren(a) + ",\\;B=" + paren(b) + ",\\;C=" + paren(c))};
    task.answers.emplace_back(MatrixAnswer{solve_matrix_eq(a, b, c)});
    return task;
}

TaskInstance build_matpoly_task(std::span<const Rational> coeffs, const RatMatrix& m, const WorksheetStrings& t) {
    TaskInstance task{TaskKind::MatPoly, {}, {}};
    task.statement = {text(t.matpoly_intro), math("f(A)"), text(t.matpoly_if),
                      math("A=" + paren(m) + ",\\;f(x)=" + latex::render_poly(coeffs, "x").text)};
    task.answers.emplace_back(MatrixAnswer{mat_poly(coeffs, m)});
    return task;
}

TaskInstance build_system_task(std::span<const Rational> roots, const RatMatrix& a, const WorksheetStrings& t) {
    RatMatrix b = mat_mul(a, RatMatrix::column(roots));
    LinSystem sys(a, std::move(b));
    TaskInstance task{TaskKind::System, {}, {}};
    task.statement = {text(t.system_intro)};
    append_lines(task.statement, t.system_methods);
    task.statement.push_back(display(latex::render_system(sys).text));
    task.answers.emplace_back(VectorAnswer{std::vector<Rational>(roots.begin(), roots.end())});
    return task;
}

TaskInstance gen_determinant_task(Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    p.validate();
    return build_determinant_task(draw_matrix(rng, 3, 3, p), t);
}

TaskInstance gen_product_task(Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    p.validate();
    auto draw_shaped = [&] {
        auto rows = static_cast<std::size_t>(rng.uniform_int(p.dim_lo, p.dim_hi));
        auto cols = static_cast<std::size_t>(rng.uniform_int(p.dim_lo, p.dim_hi));
        return draw_matrix(rng, rows, cols, p);
    };
    RatMatrix a = draw_shaped();
    RatMatrix b = draw_shaped();
    return build_product_task(a, b, t);
}

TaskInstance gen_inverse_task(Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    p.validate();
    for (std::size_t attempt = 0; attempt < p.max_attempts; ++attempt) {
        RatMatrix m = draw_matrix(rng, 3, 3, p);
        if (!det(m, DetMethod::TriangularReduction).is_zero()) return build_inverse_task(m, t);
    }
    non_generable("no invertible 3x3 matrix", p);
}

TaskInstance gen_matrix_eq_task(Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    p.validate();
    for (std::size_t attempt = 0; attempt < p.max_attempts; ++attempt) {
        RatMatrix a = draw_matrix(rng, 2, 2, p);
        RatMatrix b = draw_matrix(rng, 2, 2, p);
        if (det(mat_mul(a, b), DetMethod::Cofactor).is_zero()) continue;
        RatMatrix c = draw_matrix(rng, 2, 2, p);
        return build_matrix_eq_task(a, b, c, t);
    }
    non_generable("no invertible product AB", p);
}

TaskInstance gen_matpoly_task(Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    p.validate();
    RatMatrix m = draw_matrix(rng, 3, 3, p);
    std::vector<Rational> coeffs;
    coeffs.reserve(p.poly_degree + 1);
    for (std::size_t attempt = 0;; ++attempt) {
        if (attempt == p.max_attempts) non_generable("no nonzero leading coefficient", p);
        Rational lead = draw_entry(rng, p);
        if (lead.is_zero()) continue;
        coeffs.push_back(lead);
        break;
    }
    for (std::size_t i = 0; i < p.poly_degree; ++i) coeffs.push_back(draw_entry(rng, p));
    return build_matpoly_task(coeffs, m, t);
}

TaskInstance gen_system_task(Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    p.validate();
    std::vector<Rational> roots;
    for (int i = 0; i < 3; ++i) roots.push_back(draw_entry(rng, p));
    for (std::size_t attempt = 0; attempt < p.max_attempts; ++attempt) {
        RatMatrix a = draw_matrix(rng, 3, 3, p);
        if (!det(a, DetMethod::TriangularReduction).is_zero()) return build_system_task(roots, a, t);
    }
    non_generable("no nonsingular coefficient matrix", p);
}

TaskInstance gen_task(TaskKind kind, Rng& rng, const GeneratorParams& p, const WorksheetStrings& t) {
    switch (kind) {
        case TaskKind::Determinant: return gen_determinant_task(rng, p, t);
        case TaskKind::Product: return gen_product_task(rng, p, t);
        case TaskKind::Inverse: return gen_inverse_task(rng, p, t);
        case TaskKind::MatrixEq: return gen_matrix_eq_task(rng, p, t);
        case TaskKind::MatPoly: return gen_matpoly_task(rng, p, t);
        case TaskKind::System: return gen_system_task(rng, p, t);
    }
    throw std::logic_error("unknown task kind");
}

}  // namespace mathforge
