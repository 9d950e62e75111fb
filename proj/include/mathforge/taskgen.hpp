#pragma once

#include "mathforge/answer.hpp"
#include "mathforge/locale.hpp"
#include "mathforge/ratmat.hpp"
#include "mathforge/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mathforge {

enum class TaskKind { Determinant, Product, Inverse, MatrixEq, MatPoly, System };

inline constexpr TaskKind kAllTaskKinds[] = {TaskKind::Determinant, TaskKind::Product,
                                             TaskKind::Inverse,     TaskKind::MatrixEq,
                                             TaskKind::MatPoly,     TaskKind::System};

/// Template identifiers: determinant, product, inverse, matrix_eq, mat_poly, system.
std::string_view task_kind_name(TaskKind kind);
std::optional<TaskKind> task_kind_from_name(std::string_view name);

/// Number of answer-key entries a task of this kind contributes.
std::size_t answer_count(TaskKind kind);

enum class TaskErrc { NonGenerable, BadParams };

class TaskError : public std::runtime_error {
public:
    TaskError(TaskErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    TaskErrc code() const noexcept { return code_; }

private:
    TaskErrc code_;
};

struct GeneratorParams {
    std::int64_t entry_lo = -5;
    std::int64_t entry_hi = 5;
    std::size_t dim_lo = 1;
    std::size_t dim_hi = 3;
    std::size_t poly_degree = 2;
    std::size_t max_attempts = 1000;

    /// Throws TaskError{BadParams}.
    void validate() const;

    friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// One piece of a task statement.
struct Segment {
    enum class Kind {
        Text,         // plain prose
        Strong,       // emphasised prose, e.g. the matrix names in "AB"
        Math,         // inline LaTeX
        DisplayMath,  // LaTeX on its own line
        Break,        // line break
    };
    Kind kind;
    std::string text;

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct TaskInstance {
    TaskKind kind;
    std::vector<Segment> statement;
    std::vector<Answer> answers;

    friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

// Builders over explicit inputs. The random generators draw inputs and
// delegate to these.

TaskInstance build_determinant_task(const RatMatrix& m, const WorksheetStrings& text);
TaskInstance build_product_task(const RatMatrix& a, const RatMatrix& b, const WorksheetStrings& text);
/// Throws MatError{Singular} for a singular matrix.
TaskInstance build_inverse_task(const RatMatrix& m, const WorksheetStrings& text);
TaskInstance build_matrix_eq_task(const RatMatrix& a, const RatMatrix& b, const RatMatrix& c,
                                  const WorksheetStrings& text);
TaskInstance build_matpoly_task(std::span<const Rational> coeffs, const RatMatrix& m,
                                const WorksheetStrings& text);
/// Right-hand side is a * roots; the answer is the roots vector.
TaskInstance build_system_task(std::span<const Rational> roots, const RatMatrix& a,
                               const WorksheetStrings& text);

TaskInstance gen_determinant_task(Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);
TaskInstance gen_product_task(Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);
TaskInstance gen_inverse_task(Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);
TaskInstance gen_matrix_eq_task(Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);
TaskInstance gen_matpoly_task(Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);
TaskInstance gen_system_task(Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);

TaskInstance gen_task(TaskKind kind, Rng& rng, const GeneratorParams& params, const WorksheetStrings& text);

/// Random matrix with integer entries in [entry_lo, entry_hi], row-major draws.
RatMatrix draw_matrix(Rng& rng, std::size_t rows, std::size_t cols, const GeneratorParams& params);

}  // namespace mathforge
