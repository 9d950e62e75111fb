#include "mathforge/service.hpp"

#include "mathforge/latexgen.hpp"
#include "mathforge/worksheet.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/container_hash/hash.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace mathforge::service {

using nlohmann::ordered_json;

namespace {

ApiError bad_request(const std::string& message) { return {400, "BadRequest", message}; }

ApiResponse json_response(int status, const ordered_json& j) { return {status, "application/json; charset=utf-8", j.dump()}; }

ApiResponse error_response(const ApiError& e) {
    ordered_json body;
    body["error"]["code"] = e.code;
    body["error"]["message"] = e.message;
    body["error"]["details"] = ordered_json::parse(e.details_json);
    return json_response(e.status, body);
}

ApiError from_engine(const es::EngineError& e) {
    switch (e.code()) {
        case es::EngineErrc::InvalidKB: return {422, "InvalidKB", e.what()};
        case es::EngineErrc::NotPending:
        case es::EngineErrc::NotFinished: return {409, "WrongState", e.what()};
        case es::EngineErrc::WrongAttribute: return {409, "WrongAttribute", e.what()};
        case es::EngineErrc::BadValue: return {400, "BadValue", e.what()};
        case es::EngineErrc::BadCF: return {400, "BadCF", e.what()};
    }
    return {500, "Internal", e.what()};
}

ApiError from_kb(const kb::KbError& e) {
    ordered_json details;
    details["line"] = e.line() ? ordered_json(e.line()) : ordered_json(nullptr);
    return {400, kb::to_string(e.code()), e.what(), details.dump()};
}

ApiError from_worksheet(const WorksheetError& e) {
    ordered_json details = nullptr;
    if (e.variant()) details = {{"variant", *e.variant()}, {"task", *e.task()}};
    switch (e.code()) {
        case WorksheetErrc::NonGenerable: return {422, "NonGenerable", e.what(), details.dump()};
        case WorksheetErrc::BadRequest: return {400, "BadRequest", e.what(), details.dump()};
        default: return {400, to_string(e.code()), e.what(), details.dump()};
    }
}

ordered_json parse_body(std::string_view body) {
    try {
        return ordered_json::parse(body);
    } catch (const ordered_json::parse_error& e) {
        throw bad_request(std::string("request body is not JSON: ") + e.what());
    }
}

ordered_json answer_json(const Answer& a) {
    auto rat = [](const Rational& q) { return q.str(); };
    ordered_json j;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ScalarAnswer>) {
                j["kind"] = "scalar";
                j["value"] = rat(x.value);
            } else if constexpr (std::is_same_v<T, VectorAnswer>) {
                j["kind"] = "vector";
                j["value"] = ordered_json::array();
                for (const auto& q : x.value) j["value"].push_back(rat(q));
            } else if constexpr (std::is_same_v<T, MatrixAnswer>) {
                j["kind"] = "matrix";
                j["value"] = ordered_json::array();
                for (std::size_t r = 0; r < x.value.rows(); ++r) {
                    auto row = ordered_json::array();
                    for (std::size_t c = 0; c < x.value.cols(); ++c) row.push_back(rat(x.value(r, c)));
                    j["value"].push_back(row);
                }
            } else {
                j["kind"] = "message";
                j["value"] = x.text;
            }
        },
        a);
    j["latex"] = latex::render_answer(a).wrapped();
    return j;
}

ordered_json value_json(const kb::Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    return std::get<Rational>(v).str();
}

kb::Value value_from_json(const ordered_json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number()) return j.dump();  // the engine parses decimals for Numeric prompts
    throw ApiError{400, "BadValue", "an answer value must be a string or a number"};
}

Rational cf_from_json(const ordered_json& j) {
    try {
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_number()) return Rational::parse(j.dump());
        if (j.is_string()) return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
    throw ApiError{400, "BadCF", "cf must be a number in [0, 100]"};
}

ordered_json question_json(const es::Question& q) {
    ordered_json j;
    j["attr"] = q.attr;
    j["prompt"] = q.prompt;
    j["type"] = kb::prompt_type_name(q.type);
    j["choices"] = q.choices;
    j["choice_labels"] = q.choice_labels;
    j["allow_no_response"] = q.allow_no_response;
    j["cf_options"] = ordered_json::array();
    for (const auto& o : q.cf_options) j["cf_options"].push_back({{"percent", o.percent}, {"label", o.label}});
    j["no_response_label"] = q.no_response_label;
    return j;
}

ordered_json session_json(const std::string& id, const SessionStore::Entry& e) {
    const auto& s = e.session;
    ordered_json j;
    j["session_id"] = id;
    j["kb_id"] = e.kb_id;
    j["status"] = es::to_string(s.status());
    j["question"] = s.pending() ? question_json(*s.pending()) : ordered_json(nullptr);
    j["conclusions"] = ordered_json::array();
    if (s.status() != es::Status::InProgress)
        for (const auto& c : s.conclusions())
            j["conclusions"].push_back({{"goal", c.goal},
                                        {"value", c.value ? ordered_json(*c.value) : ordered_json(nullptr)},
                                        {"cf", c.cf},
                                        {"accepted", c.accepted}});
    j["trace_cursor"] = s.trace().size();
    return j;
}

ordered_json trace_json(const es::Session& s) {
    auto events = ordered_json::array();
    for (const auto& e : s.trace()) {
        ordered_json j;
        j["kind"] = es::to_string(e.kind);
        j["rule"] = e.rule;
        j["attr"] = e.attr;
        j["value"] = e.value ? value_json(*e.value) : ordered_json(nullptr);
        j["cf"] = es::display_cf(e.cf);
        events.push_back(j);
    }
    return events;
}

ordered_json kb_summary(const std::string& id, const kb::KnowledgeBase& kb) {
    ordered_json j;
    j["id"] = id;
    j["title"] = kb.title;
    j["goals"] = kb.goals;
    j["min_cf"] = kb.min_cf;
    return j;
}

ordered_json diagnostics_json(const std::vector<kb::Diagnostic>& diags) {
    auto out = ordered_json::array();
    for (const auto& d : diags)
        out.push_back({{"kind", kb::to_string(d.kind)}, {"subject", d.subject}, {"message", d.message}});
    return out;
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    boost::split(parts, path, boost::is_any_of("/"));
    std::erase_if(parts, [](const std::string& p) { return p.empty(); });
    return parts;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t KbRegistry::load_dir(const std::filesystem::path& dir) {
    std::size_t n = 0;
    if (dir.empty() || !std::filesystem::is_directory(dir)) return 0;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".kb") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        add(ss.str(), f.stem().string());
        ++n;
    }
    return n;
}

std::string KbRegistry::add(std::string_view text, std::optional<std::string> id) {
    auto kb = std::make_shared<const kb::KnowledgeBase>(kb::parse_kb(text));
    if (!id) {
        auto canonical = kb::serialize_kb(*kb);
        char buf[24];
        std::snprintf(buf, sizeof buf, "kb-%016zx", boost::hash_value(canonical));
        id = buf;
    }
    std::lock_guard lock(mutex_);
    kbs_[*id] = std::move(kb);
    return *id;
}

std::shared_ptr<const kb::KnowledgeBase> KbRegistry::find(std::string_view id) const {
    std::lock_guard lock(mutex_);
    auto it = kbs_.find(id);
    return it == kbs_.end() ? nullptr : it->second;
}

std::vector<KbRegistry::Entry> KbRegistry::list() const {
    std::lock_guard lock(mutex_);
    std::vector<Entry> out;
    for (const auto& [id, kb] : kbs_) out.push_back({id, kb});
    return out;
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::chrono::seconds idle_timeout, std::function<Clock::time_point()> now)
    : idle_timeout_(idle_timeout), now_(std::move(now)) {}

SessionStore::Entry::Entry(std::string kb, es::Session s, Clock::time_point t)
    : kb_id(std::move(kb)), session(std::move(s)), last_activity(t) {}

std::string SessionStore::new_id() {
    static thread_local std::random_device rd;
    std::string id;
    for (int i = 0; i < 4; ++i) {
        char buf[9];
        std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
        id += buf;
    }
    return id;
}

std::string SessionStore::create(std::string kb_id, es::Session session) {
    sweep();
    auto entry = std::make_shared<Entry>(std::move(kb_id), std::move(session), now_());
    std::lock_guard lock(mutex_);
    std::string id;
    do id = new_id();
    while (sessions_.count(id));
    sessions_.emplace(id, std::move(entry));
    return id;
}

bool SessionStore::with(std::string_view id, const std::function<void(Entry&)>& fn) {
    std::shared_ptr<Entry> entry;
    {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        entry = it->second;
    }
    std::lock_guard lock(entry->mutex);
    auto now = now_();
    if (now - entry->last_activity > idle_timeout_) {
        std::lock_guard store_lock(mutex_);
        sessions_.erase(std::string(id));
        return false;
    }
    entry->last_activity = now;
    fn(*entry);
    return true;
}

std::size_t SessionStore::size() {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

void SessionStore::sweep() {
    auto now = now_();
    std::lock_guard lock(mutex_);
    std::erase_if(sessions_, [&](const auto& kv) {
        std::unique_lock entry_lock(kv.second->mutex, std::try_to_lock);
        return entry_lock.owns_lock() && now - kv.second->last_activity > idle_timeout_;
    });
}

// ---------------------------------------------------------------------------

controls::ControlPanel worksheet_form_panel() {
    using namespace controls;
    ControlPanel p;
    p.caption = "Генератор контрольних робіт";
    Selector templates;
    for (const auto& t : builtin_templates()) templates.values.push_back(t.id);
    templates.default_value = templates.values.front();
    templates.label = "Шаблон";
    p.controls.emplace_back("template", templates);
    p.controls.emplace_back("num_variants", InputBox{"2", "Кількість варіантів", InputType::Integer, 4});
    p.controls.emplace_back("seed", InputBox{"0", "Зерно генератора", InputType::Integer, 12});
    p.controls.emplace_back("show_answers", Checkbox{false, "Показувати відповіді"});
    p.layout = LayoutSpec{{{"template"}, {"num_variants", "seed"}}, {{"show_answers"}}, {}, {}};
    return p;
}

Api::Api(ApiOptions options)
    : options_(std::move(options)), sessions_(options_.idle_timeout, options_.now) {
    kbs_.load_dir(options_.kb_dir);
}

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view body) {
    try {
        return route(method, split_path(path), body);
    } catch (const ApiError& e) {
        return error_response(e);
    } catch (const es::EngineError& e) {
        return error_response(from_engine(e));
    } catch (const kb::KbError& e) {
        return error_response(from_kb(e));
    } catch (const WorksheetError& e) {
        return error_response(from_worksheet(e));
    } catch (const ordered_json::exception& e) {
        return error_response(bad_request(std::string("malformed request: ") + e.what()));
    } catch (const std::exception& e) {
        return error_response({500, "Internal", e.what()});
    }
}

ApiResponse Api::route(std::string_view method, const std::vector<std::string>& p, std::string_view body) {
    auto is = [&](std::string_view m, std::initializer_list<std::string_view> parts) {
        if (method != m || p.size() != parts.size()) return false;
        std::size_t i = 0;
        for (auto part : parts) {
            if (part != "*" && p[i] != part) return false;
            ++i;
        }
        return true;
    };

    if (is("GET", {"healthz"})) return json_response(200, {{"status", "ok"}});
    if (p.empty() || p[0] != "api") throw ApiError{404, "NotFound", "no such endpoint"};

    if (is("GET", {"api", "templates"})) {
        auto out = ordered_json::array();
        for (const auto& t : builtin_templates()) {
            ordered_json j;
            j["id"] = t.id;
            j["title"] = t.title;
            j["lang"] = t.lang;
            j["tasks"] = ordered_json::array();
            for (auto k : t.task_kinds) j["tasks"].push_back(task_kind_name(k));
            j["answer_stride"] = t.answer_stride();
            out.push_back(j);
        }
        return json_response(200, out);
    }
    if (is("GET", {"api", "worksheets", "form"}))
        return {200, "application/json; charset=utf-8", controls::render_form_spec(worksheet_form_panel())};
    if (is("POST", {"api", "worksheets"})) return post_worksheet(body);

    if (is("POST", {"api", "kb", "validate"})) {
        std::string text;
        try {
            text = kb::decode_text(body);
        } catch (const kb::KbError& e) {
            throw ApiError{400, "EncodingError", e.what()};
        }
        ordered_json out;
        try {
            auto kb = kb::parse_kb(text);
            auto diags = kb::validate_kb(kb);
            out["valid"] = diags.empty();
            out["diagnostics"] = diagnostics_json(diags);
        } catch (const kb::KbError& e) {
            out["valid"] = false;
            out["diagnostics"] = ordered_json::array(
                {{{"kind", kb::to_string(e.code())}, {"subject", ""}, {"message", e.what()}, {"line", e.line()}}});
        }
        return json_response(200, out);
    }
    if (is("POST", {"api", "kb", "compile"})) {
        auto kb = kb::table_to_rules(kb::parse_decision_table(body));
        return json_response(200, {{"kb_text", kb::serialize_kb(kb)}});
    }
    if (is("GET", {"api", "kbs"})) {
        auto out = ordered_json::array();
        for (const auto& e : kbs_.list()) out.push_back(kb_summary(e.id, *e.kb));
        return json_response(200, out);
    }
    if (is("POST", {"api", "kbs"})) {
        auto id = kbs_.add(body);
        return json_response(201, kb_summary(id, *kbs_.find(id)));
    }
    if (is("GET", {"api", "kbs", "*"}) || is("GET", {"api", "kbs", "*", "translations"})) {
        auto kb = kbs_.find(p[2]);
        if (!kb) throw ApiError{404, "UnknownKB", "no knowledge base '" + p[2] + "'"};
        if (p.size() == 3) return json_response(200, kb_summary(p[2], *kb));
        ordered_json out = ordered_json::object();
        for (const auto& t : kb::default_translations()) out[t.key] = kb->translate(t.key);
        for (const auto& t : kb->translations) out[t.key] = t.text;
        return json_response(200, out);
    }

    if (is("POST", {"api", "consultations"})) return create_consultation(body);
    if (p.size() >= 3 && p.size() <= 4 && p[1] == "consultations")
        return consultation(method, p[2], p.size() == 4 ? p[3] : "", body);

    throw ApiError{404, "NotFound", "no such endpoint"};
}

ApiResponse Api::post_worksheet(std::string_view body) {
    auto j = parse_body(body);
    if (!j.is_object()) throw bad_request("worksheet request must be an object");
    WorksheetRequest req;
    req.template_id = j.value("template", std::string{});
    auto n = j.value("num_variants", std::int64_t{1});
    if (n < 1) throw ApiError{400, "BadRequest", "num_variants must be at least 1"};
    req.num_variants = static_cast<std::size_t>(n);
    req.seed = j.value("seed", std::uint64_t{0});
    req.show_answers = j.value("show_answers", false);
    req.validate();
    const auto* tmpl = find_builtin_template(req.template_id);
    if (!tmpl) throw ApiError{404, "UnknownTemplate", "no worksheet template '" + req.template_id + "'"};
    auto doc = build_worksheet(*tmpl, req);
    ordered_json out;
    out["html"] = render_html(doc, req.show_answers);
    out["latex"] = render_latex(doc, req.show_answers);
    out["answer_key"] = ordered_json::array();
    for (std::size_t i = 0; i < doc.answer_key.size(); ++i) {
        auto a = answer_json(doc.answer_key[i]);
        a["variant"] = i / doc.stride + 1;
        a["index"] = i % doc.stride;
        out["answer_key"].push_back(a);
    }
    return json_response(200, out);
}

ApiResponse Api::create_consultation(std::string_view body) {
    auto j = parse_body(body);
    auto kb_id = j.at("kb_id").get<std::string>();
    auto kb = kbs_.find(kb_id);
    if (!kb) throw ApiError{404, "UnknownKB", "no knowledge base '" + kb_id + "'"};
    auto id = sessions_.create(kb_id, es::Session::start(kb));
    ApiResponse r;
    sessions_.with(id, [&](SessionStore::Entry& e) { r = json_response(201, session_json(id, e)); });
    return r;
}

ApiResponse Api::consultation(std::string_view method, const std::string& id, const std::string& verb, std::string_view body) {
    auto is = [&](std::string_view m, std::string_view v) { return method == m && verb == v; };
    if (!is("GET", "") && !is("POST", "answers") && !is("GET", "why") && !is("GET", "explain") && !is("POST", "restart") &&
        !is("GET", "trace"))
        throw ApiError{404, "NotFound", "no such endpoint"};

    std::optional<ordered_json> request;
    if (is("POST", "answers")) request = parse_body(body);

    ApiResponse r;
    bool found = sessions_.with(id, [&](SessionStore::Entry& e) {
        auto& s = e.session;
        if (verb == "why") {
            r = json_response(200, {{"text", s.why_ask()}});
        } else if (verb == "explain") {
            r = json_response(200, {{"text", s.explain()}});
        } else if (verb == "trace") {
            r = json_response(200, {{"events", trace_json(s)}});
        } else if (verb == "restart") {
            s.restart();
            r = json_response(200, session_json(id, e));
        } else if (verb == "answers") {
            if (!s.pending()) throw es::EngineError(es::EngineErrc::NotPending, "no question is pending");
            const auto& j = *request;
            if (!j.is_object()) throw bad_request("answer must be an object");
            auto attr = j.value("attr", s.pending()->attr);
            if (j.value("no_response", false)) {
                s.answer(attr, es::NoResponse{});
            } else {
                std::vector<es::CFValue> values;
                Rational default_cf = j.contains("cf") ? cf_from_json(j["cf"]) : Rational(100);
                if (j.contains("values")) {
                    for (const auto& v : j.at("values")) {
                        if (v.is_object())
                            values.push_back({value_from_json(v.at("value")), v.contains("cf") ? cf_from_json(v["cf"]) : default_cf});
                        else values.push_back({value_from_json(v), default_cf});
                    }
                } else if (j.contains("value")) {
                    values.push_back({value_from_json(j["value"]), default_cf});
                } else {
                    throw ApiError{400, "BadValue", "answer needs value, values or no_response"};
                }
                s.answer(attr, std::move(values));
            }
            r = json_response(200, session_json(id, e));
        } else {
            r = json_response(200, session_json(id, e));
        }
    });
    if (!found) throw ApiError{404, "UnknownSession", "no consultation '" + id + "'"};
    return r;
}

}  // namespace mathforge::service
