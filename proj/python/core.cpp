#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mathforge/esengine.hpp"
#include "mathforge/ratmat.hpp"
#include "mathforge/service.hpp"
#include "mathforge/worksheet.hpp"

namespace py = pybind11;
using namespace mathforge;

namespace {

// Python ints and strings like "3/4" both map to Rational.
Rational to_rational(const py::handle& h) {
    if (py::isinstance<py::int_>(h)) return Rational::parse(py::str(h).cast<std::string>());
    return Rational::parse(h.cast<std::string>());
}

RatMatrix to_matrix(const std::vector<std::vector<py::object>>& rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("matrix needs at least one entry");
    RatMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged matrix");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = to_rational(rows[r][c]);
    }
    return m;
}

std::vector<std::vector<std::string>> from_matrix(const RatMatrix& m) {
    std::vector<std::vector<std::string>> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r].push_back(m(r, c).str());
    return out;
}

py::object value_to_py(const kb::Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return py::str(*s);
    return py::str(std::get<Rational>(v).str());
}

py::dict question_dict(const es::Question& q) {
    py::dict d;
    d["attr"] = q.attr;
    d["prompt"] = q.prompt;
    d["type"] = std::string(kb::prompt_type_name(q.type));
    d["choices"] = q.choices;
    d["choice_labels"] = q.choice_labels;
    d["allow_no_response"] = q.allow_no_response;
    py::list opts;
    for (const auto& o : q.cf_options) opts.append(py::make_tuple(o.percent, o.label));
    d["cf_options"] = opts;
    d["no_response_label"] = q.no_response_label;
    return d;
}

class PySession {
public:
    explicit PySession(const std::string& kb_text)
        : s_(es::Session::start(std::make_shared<const kb::KnowledgeBase>(kb::parse_kb(kb_text)))) {}

    std::string status() const { return es::to_string(s_.status()); }
    py::object pending() const { return s_.pending() ? py::object(question_dict(*s_.pending())) : py::none(); }

    void answer(const std::string& attr, const py::object& values, const py::object& cf) {
        Rational c = cf.is_none() ? Rational(100) : to_rational(cf);
        std::vector<es::CFValue> list;
        auto one = [&](const py::handle& v) {
            if (py::isinstance<py::int_>(v)) list.push_back({to_rational(v), c});
            else list.push_back({v.cast<std::string>(), c});
        };
        if (py::isinstance<py::list>(values) || py::isinstance<py::tuple>(values))
            for (auto v : values) one(v);
        else one(values);
        s_.answer(attr, std::move(list));
    }
    void no_response(const std::string& attr) { s_.answer(attr, es::NoResponse{}); }

    py::list conclusions() const {
        py::list out;
        for (const auto& c : s_.conclusions()) {
            py::dict d;
            d["goal"] = c.goal;
            d["value"] = c.value ? py::object(py::str(*c.value)) : py::none();
            d["cf"] = c.cf;
            d["accepted"] = c.accepted;
            out.append(d);
        }
        return out;
    }
    py::list trace() const {
        py::list out;
        for (const auto& e : s_.trace())
            out.append(py::make_tuple(es::to_string(e.kind), e.rule, e.attr, e.value ? value_to_py(*e.value) : py::none(),
                                      es::display_cf(e.cf)));
        return out;
    }
    std::string why() const { return s_.why_ask(); }
    std::string explain() const { return s_.explain(); }
    void restart() { s_.restart(); }

private:
    es::Session s_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact matrix algebra, worksheet generation and a certainty-factor expert-system shell";

    py::register_exception<es::EngineError>(m, "EngineError", PyExc_ValueError);
    py::register_exception<kb::KbError>(m, "KbError", PyExc_ValueError);
    py::register_exception<WorksheetError>(m, "WorksheetError", PyExc_ValueError);
    py::register_exception<MatError>(m, "MatError", PyExc_ValueError);

    m.def(
        "det",
        [](const std::vector<std::vector<py::object>>& rows, const std::string& method) {
            DetMethod dm;
            if (method == "triangle") dm = DetMethod::Triangle;
            else if (method == "cofactor") dm = DetMethod::Cofactor;
            else if (method == "reduction") dm = DetMethod::TriangularReduction;
            else throw py::value_error("unknown determinant method: " + method);
            return det(to_matrix(rows), dm).str();
        },
        py::arg("rows"), py::arg("method") = "triangle", "Exact determinant as a 'p/q' string");
    m.def(
        "inverse", [](const std::vector<std::vector<py::object>>& rows) { return from_matrix(inverse(to_matrix(rows), InvMethod::Gauss)); },
        py::arg("rows"));

    m.def("template_ids", [] {
        std::vector<std::string> ids;
        for (const auto& t : builtin_templates()) ids.push_back(t.id);
        return ids;
    });
    m.def(
        "generate_worksheet",
        [](const std::string& template_id, std::size_t num_variants, std::uint64_t seed, bool show_answers, const std::string& format) {
            const auto* t = find_builtin_template(template_id);
            if (!t) throw WorksheetError(WorksheetErrc::BadRequest, "no template '" + template_id + "'");
            WorksheetRequest req{template_id, num_variants, seed, show_answers};
            req.validate();
            auto doc = build_worksheet(*t, req);
            return format == "latex" ? render_latex(doc, show_answers) : render_html(doc, show_answers);
        },
        py::arg("template_id"), py::arg("num_variants") = 1, py::arg("seed") = 0, py::arg("show_answers") = false,
        py::arg("format") = "html");

    m.def("combine_cf", py::overload_cast<int, int>(&es::combine_cf), py::arg("a"), py::arg("b"));
    m.def(
        "canonical_kb", [](py::bytes data) { return kb::serialize_kb(kb::parse_kb(std::string(data))); }, py::arg("data"),
        "Parses KB bytes (UTF-8 or UTF-16 with BOM) and returns the canonical text");
    m.def(
        "validate_kb",
        [](py::bytes data) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (const auto& d : kb::validate_kb(kb::parse_kb(std::string(data))))
                out.emplace_back(kb::to_string(d.kind), d.subject, d.message);
            return out;
        },
        py::arg("data"));

    py::class_<PySession>(m, "Session")
        .def(py::init<const std::string&>(), py::arg("kb_text"))
        .def_property_readonly("status", &PySession::status)
        .def_property_readonly("pending", &PySession::pending)
        .def("answer", &PySession::answer, py::arg("attr"), py::arg("values"), py::arg("cf") = py::none())
        .def("no_response", &PySession::no_response, py::arg("attr"))
        .def("conclusions", &PySession::conclusions)
        .def("trace", &PySession::trace)
        .def("why", &PySession::why)
        .def("explain", &PySession::explain)
        .def("restart", &PySession::restart);

    py::class_<service::Api>(m, "Api")
        .def(py::init([](const std::string& kb_dir) {
                 service::ApiOptions o;
                 o.kb_dir = kb_dir;
                 return std::make_unique<service::Api>(o);
             }),
             py::arg("kb_dir") = "")
        .def(
            "handle",
            [](service::Api& api, const std::string& method, const std::string& path, py::bytes body) {
                auto r = api.handle(method, path, std::string(body));
                return py::make_tuple(r.status, py::bytes(r.body));
            },
            py::arg("method"), py::arg("path"), py::arg("body") = py::bytes(""),
            "Returns (status, body bytes) exactly as the HTTP server would");
}
