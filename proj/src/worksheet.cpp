#include "mathforge/worksheet.hpp"

#include "mathforge/latexgen.hpp"

#include <nlohmann/json.hpp>

namespace mathforge {

namespace {

using nlohmann::json;

constexpr std::string_view kLinearAlgebraSource = R"({
  "id": "linear-algebra",
  "title": "Контрольна робота з лінійної алгебри",
  "lang": "uk",
  "tasks": ["determinant", "product", "inverse", "matrix_eq", "mat_poly", "system"],
  "params": {"entry_lo": -5, "entry_hi": 5, "dim_lo": 1, "dim_hi": 3, "poly_degree": 2}
}
)";

constexpr std::string_view kSquareMatricesSource = R"({
  "id": "square-matrices",
  "title": "Квадратні матриці",
  "lang": "uk",
  "tasks": ["determinant", "inverse", "mat_poly"],
  "params": {"entry_lo": -3, "entry_hi": 3, "poly_degree": 3}
}
)";

[[noreturn]] void fail(WorksheetErrc code, const std::string& msg) { throw WorksheetError(code, msg); }

template <typename T>
T read_param(const json& v, std::string_view key) {
    if (!v.is_number_integer()) fail(WorksheetErrc::BadParams, "param '" + std::string(key) + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
        if (v.get<std::int64_t>() < 0) fail(WorksheetErrc::BadParams, "param '" + std::string(key) + "' must be >= 0");
    }
    return v.get<T>();
}

std::string html_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string latex_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\textbackslash{}"; break;
            case '{': case '}': case '%': case '&': case '#': case '_': case '$':
                out += '\\';
                out += c;
                break;
            case '^': out += "\\^{}"; break;
            case '~': out += "\\~{}"; break;
            default: out += c;
        }
    }
    return out;
}

std::string statement_html(const std::vector<Segment>& segments) {
    std::string s;
    for (const auto& seg : segments) {
        switch (seg.kind) {
            case Segment::Kind::Text: s += html_escape(seg.text); break;
            case Segment::Kind::Strong: s += "<b>" + html_escape(seg.text) + "</b>"; break;
            case Segment::Kind::Math: s += "$" + html_escape(seg.text) + "$"; break;
            case Segment::Kind::DisplayMath: s += "<br>$$" + html_escape(seg.text) + "$$"; break;
            case Segment::Kind::Break: s += "<br>"; break;
        }
    }
    return s;
}

std::string statement_latex(const std::vector<Segment>& segments) {
    std::string s;
    for (const auto& seg : segments) {
        switch (seg.kind) {
            case Segment::Kind::Text: s += latex_escape(seg.text); break;
            case Segment::Kind::Strong: s += "\\textbf{" + latex_escape(seg.text) + "}"; break;
            case Segment::Kind::Math: s += "$" + seg.text + "$"; break;
            case Segment::Kind::DisplayMath: s += "\n\\[" + seg.text + "\\]\n"; break;
            case Segment::Kind::Break: s += "\\\\\n"; break;
        }
    }
    return s;
}

// Answer labels: the product task names its two answers AB and BA.
const char* answer_label(TaskKind kind, std::size_t i) {
    if (kind != TaskKind::Product) return nullptr;
    return i == 0 ? "AB" : "BA";
}

std::string answer_html(const Answer& a) {
    return "<span class=\"answer\">" + html_escape(latex::render_answer(a).wrapped()) + "</span>";
}

std::string answer_latex(const Answer& a) {
    auto snippet = latex::render_answer(a);
    return snippet.inline_math ? snippet.wrapped() : latex_escape(snippet.text);
}

}  // namespace

const char* to_string(WorksheetErrc code) {
    switch (code) {
        case WorksheetErrc::ParseError: return "ParseError";
        case WorksheetErrc::UnknownTaskKind: return "UnknownTaskKind";
        case WorksheetErrc::BadParams: return "BadParams";
        case WorksheetErrc::BadRequest: return "BadRequest";
        case WorksheetErrc::NonGenerable: return "NonGenerable";
    }
    return "?";
}

std::size_t WorksheetTemplate::answer_stride() const {
    std::size_t n = 0;
    for (TaskKind k : task_kinds) n += answer_count(k);
    return n;
}

WorksheetTemplate load_template(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(WorksheetErrc::ParseError, e.what());
    }
    if (!doc.is_object()) fail(WorksheetErrc::ParseError, "template must be a JSON object");

    auto str_field = [&](const char* key, bool required) -> std::string {
        if (!doc.contains(key)) {
            if (required) fail(WorksheetErrc::ParseError, std::string("missing field '") + key + "'");
            return {};
        }
        if (!doc[key].is_string()) fail(WorksheetErrc::ParseError, std::string("field '") + key + "' must be a string");
        return doc[key].get<std::string>();
    };

    WorksheetTemplate t;
    t.id = str_field("id", true);
    t.title = str_field("title", true);
    if (t.id.empty()) fail(WorksheetErrc::ParseError, "template id is empty");
    if (auto lang = str_field("lang", false); !lang.empty()) t.lang = lang;
    if (!has_worksheet_language(t.lang)) fail(WorksheetErrc::ParseError, "unsupported language '" + t.lang + "'");

    if (!doc.contains("tasks") || !doc["tasks"].is_array())
        fail(WorksheetErrc::ParseError, "field 'tasks' must be a list of task kinds");
    for (const auto& k : doc["tasks"]) {
        if (!k.is_string()) fail(WorksheetErrc::ParseError, "task kinds must be strings");
        auto kind = task_kind_from_name(k.get<std::string>());
        if (!kind) fail(WorksheetErrc::UnknownTaskKind, "unknown task kind '" + k.get<std::string>() + "'");
        t.task_kinds.push_back(*kind);
    }
    if (t.task_kinds.empty()) fail(WorksheetErrc::ParseError, "template has no tasks");

    if (doc.contains("params")) {
        const auto& p = doc["params"];
        if (!p.is_object()) fail(WorksheetErrc::BadParams, "'params' must be an object");
        for (const auto& [key, v] : p.items()) {
            if (key == "entry_lo") t.params.entry_lo = read_param<std::int64_t>(v, key);
            else if (key == "entry_hi") t.params.entry_hi = read_param<std::int64_t>(v, key);
            else if (key == "dim_lo") t.params.dim_lo = read_param<std::size_t>(v, key);
            else if (key == "dim_hi") t.params.dim_hi = read_param<std::size_t>(v, key);
            else if (key == "poly_degree") t.params.poly_degree = read_param<std::size_t>(v, key);
            else if (key == "max_attempts") t.params.max_attempts = read_param<std::size_t>(v, key);
            else fail(WorksheetErrc::BadParams, "unknown param '" + key + "'");
        }
    }
    try {
        t.params.validate();
    } catch (const TaskError& e) {
        fail(WorksheetErrc::BadParams, e.what());
    }
    return t;
}

const std::vector<WorksheetTemplate>& builtin_templates() {
    static const std::vector<WorksheetTemplate> all = {load_template(kLinearAlgebraSource),
                                                       load_template(kSquareMatricesSource)};
    return all;
}

const WorksheetTemplate* find_builtin_template(std::string_view id) {
    for (const auto& t : builtin_templates())
        if (t.id == id) return &t;
    return nullptr;
}

std::string_view builtin_template_source(std::string_view id) {
    if (id == "linear-algebra") return kLinearAlgebraSource;
    if (id == "square-matrices") return kSquareMatricesSource;
    return {};
}

void WorksheetRequest::validate() const {
    if (num_variants < 1 || num_variants > kMaxVariants)
        fail(WorksheetErrc::BadRequest,
             "num_variants must be between 1 and " + std::to_string(kMaxVariants));
}

WorksheetDoc build_worksheet(const WorksheetTemplate& tmpl, const WorksheetRequest& req) {
    req.validate();
    const auto& text = worksheet_strings(tmpl.lang);
    WorksheetDoc doc;
    doc.title = tmpl.title;
    doc.lang = tmpl.lang;
    doc.stride = tmpl.answer_stride();
    doc.answer_key.reserve(doc.stride * req.num_variants);

    for (std::size_t v = 0; v < req.num_variants; ++v) {
        Rng rng(req.seed + v);
        Variant variant{v + 1, {}};
        for (std::size_t i = 0; i < tmpl.task_kinds.size(); ++i) {
            try {
                variant.tasks.push_back(gen_task(tmpl.task_kinds[i], rng, tmpl.params, text));
            } catch (const TaskError& e) {
                auto code = e.code() == TaskErrc::BadParams ? WorksheetErrc::BadParams : WorksheetErrc::NonGenerable;
                throw WorksheetError(code,
                                     "variant " + std::to_string(v + 1) + ", task " + std::to_string(i + 1) +
                                         " (" + std::string(task_kind_name(tmpl.task_kinds[i])) + "): " + e.what(),
                                     v + 1, i + 1);
            }
            const auto& answers = variant.tasks.back().answers;
            doc.answer_key.insert(doc.answer_key.end(), answers.begin(), answers.end());
        }
        doc.variants.push_back(std::move(variant));
    }
    return doc;
}

std::string render_html(const WorksheetDoc& doc, bool show_answers) {
    const auto& text = worksheet_strings(doc.lang);
    std::string s;
    s += "<h2 class=\"worksheet-title\">" + html_escape(doc.title) + "</h2>\n";
    for (const auto& v : doc.variants) {
        s += "<h3 class=\"variant\" style=\"text-align:center\">" + text.variant + " " +
             std::to_string(v.index) + "</h3>\n";
        for (std::size_t i = 0; i < v.tasks.size(); ++i)
            s += "<p class=\"task\">" + std::to_string(i + 1) + ". " + statement_html(v.tasks[i].statement) + "</p>\n";
    }
    if (!show_answers) return s;

    s += "<hr>\n<p><b>" + text.answers + "</b></p>\n";
    for (const auto& v : doc.variants) {
        s += "<p class=\"variant-answers\"><b>" + text.variant + " " + std::to_string(v.index) + "</b>: ";
        for (std::size_t i = 0; i < v.tasks.size(); ++i) {
            if (i != 0) s += "; ";
            s += std::to_string(i + 1) + ". ";
            const auto& task = v.tasks[i];
            for (std::size_t j = 0; j < task.answers.size(); ++j) {
                if (j != 0) s += ", ";
                if (const char* label = answer_label(task.kind, j)) s += std::string("<b>") + label + "</b>=";
                s += answer_html(task.answers[j]);
            }
        }
        s += "</p>\n";
    }
    return s;
}

std::string render_html_page(const WorksheetDoc& doc, bool show_answers) {
    std::string s = "<!DOCTYPE html>\n<html lang=\"" + doc.lang + "\">\n<head>\n<meta charset=\"utf-8\">\n<title>" +
                    html_escape(doc.title) + "</title>\n" + std::string(kMathRendererHook) + "\n</head>\n<body>\n";
    s += render_html(doc, show_answers);
    s += "</body>\n</html>\n";
    return s;
}

std::string render_latex(const WorksheetDoc& doc, bool show_answers) {
    const auto& text = worksheet_strings(doc.lang);
    std::string s;
    s += "\\documentclass[12pt]{article}\n";
    s += "\\usepackage[utf8]{inputenc}\n";
    s += "\\usepackage[T2A]{fontenc}\n";
    s += doc.lang == "en" ? "\\usepackage[english]{babel}\n" : "\\usepackage[ukrainian]{babel}\n";
    s += "\\usepackage{amsmath}\n";
    s += "\\begin{document}\n";
    s += "\\section*{" + latex_escape(doc.title) + "}\n";
    for (const auto& v : doc.variants) {
        s += "\\subsection*{" + text.variant + " " + std::to_string(v.index) + "}\n";
        s += "\\begin{enumerate}\n";
        for (const auto& task : v.tasks) s += "\\item " + statement_latex(task.statement) + "\n";
        s += "\\end{enumerate}\n";
    }
    if (show_answers) {
        s += "\\section*{" + text.answers + "}\n";
        for (const auto& v : doc.variants) {
            s += "\\paragraph{" + text.variant + " " + std::to_string(v.index) + ":} ";
            for (std::size_t i = 0; i < v.tasks.size(); ++i) {
                if (i != 0) s += "; ";
                s += std::to_string(i + 1) + ".~";
                const auto& task = v.tasks[i];
                for (std::size_t j = 0; j < task.answers.size(); ++j) {
                    if (j != 0) s += ", ";
                    if (const char* label = answer_label(task.kind, j)) s += std::string("\\textbf{") + label + "}=";
                    s += answer_latex(task.answers[j]);
                }
            }
            s += "\n\n";
        }
    }
    s += "\\end{document}\n";
    return s;
}

}  // namespace mathforge
