#pragma once

#include "mathforge/taskgen.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mathforge {

enum class WorksheetErrc { ParseError, UnknownTaskKind, BadParams, BadRequest, NonGenerable };

const char* to_string(WorksheetErrc code);

class WorksheetError : public std::runtime_error {
public:
    WorksheetError(WorksheetErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    WorksheetError(WorksheetErrc code, const std::string& what, std::size_t variant, std::size_t task)
        : std::runtime_error(what), code_(code), variant_(variant), task_(task) {}

    WorksheetErrc code() const noexcept { return code_; }
    /// 1-based coordinates of the task that failed to generate.
    std::optional<std::size_t> variant() const { return variant_; }
    std::optional<std::size_t> task() const { return task_; }

private:
    WorksheetErrc code_;
    std::optional<std::size_t> variant_;
    std::optional<std::size_t> task_;
};

struct WorksheetTemplate {
    std::string id;
    std::string title;
    std::string lang = "uk";
    std::vector<TaskKind> task_kinds;
    GeneratorParams params;

    std::size_t answer_stride() const;
};

/// Parses a JSON template: {"id", "title", "tasks": [kind...], "lang"?, "params"?}.
WorksheetTemplate load_template(std::string_view json_text);

/// Built-in templates ("linear-algebra", "square-matrices").
const std::vector<WorksheetTemplate>& builtin_templates();
const WorksheetTemplate* find_builtin_template(std::string_view id);
/// JSON source of a built-in template, as shipped under data/templates.
std::string_view builtin_template_source(std::string_view id);

inline constexpr std::size_t kMaxVariants = 500;

struct WorksheetRequest {
    std::string template_id;
    std::size_t num_variants = 1;
    std::uint64_t seed = 0;
    bool show_answers = false;

    /// Throws WorksheetError{BadRequest} outside 1..kMaxVariants.
    void validate() const;
};

struct Variant {
    std::size_t index;  // 1-based
    std::vector<TaskInstance> tasks;
};

struct WorksheetDoc {
    std::string title;
    std::string lang;
    std::size_t stride = 0;
    std::vector<Variant> variants;
    /// answer_key[v * stride + i] is answer i of variant v (0-based v).
    std::vector<Answer> answer_key;
};

/// Variant v (0-based) draws from Rng(seed + v).
WorksheetDoc build_worksheet(const WorksheetTemplate& tmpl, const WorksheetRequest& req);

/// Body fragment: the task section, then the answers section when requested.
std::string render_html(const WorksheetDoc& doc, bool show_answers);
/// Full HTML page around render_html, with a head hook for a math renderer.
std::string render_html_page(const WorksheetDoc& doc, bool show_answers);

/// Standalone article-class document.
std::string render_latex(const WorksheetDoc& doc, bool show_answers);

/// Marker comment in the page head where a client-side math renderer goes.
inline constexpr std::string_view kMathRendererHook = "<!-- mathforge:math-renderer -->";

}  // namespace mathforge
