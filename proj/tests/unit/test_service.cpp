#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mathforge/service.hpp"
#include "mathforge/worksheet.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <thread>

using namespace mathforge;
using namespace mathforge::service;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* one_rule_kb =
    "ATTRIBUTE q TYPE YesNo PROMPT \"q?\"\n"
    "ATTRIBUTE G TYPE Choice CHOICES \"g\"\n"
    "GOAL G\n"
    "RULE \"r1\" IF q = \"yes\" THEN G = \"g\" CF 100\n";

ApiOptions bundled() {
    ApiOptions o;
    o.kb_dir = std::string(MATHFORGE_DATA_DIR) + "/kb";
    return o;
}

json body(const ApiResponse& r) { return json::parse(r.body); }

std::string error_code(const ApiResponse& r) { return body(r)["error"]["code"]; }

}  // namespace

TEST_CASE("bundled KBs are registered by file stem") {
    Api api(bundled());
    auto r = api.handle("GET", "/api/kbs", "");
    REQUIRE(r.status == 200);
    std::set<std::string> ids;
    for (const auto& k : body(r)) ids.insert(k["id"].get<std::string>());
    CHECK(ids == std::set<std::string>{"diffeq", "integration", "linsys-method"});
    auto tr = body(api.handle("GET", "/api/kbs/integration/translations", ""));
    CHECK(tr["TR_RESULTS"] == "РЕКОМЕНДАЦІЯ:");
    CHECK(tr["B_WHYASK"] == "Чому питаємо?");
    CHECK(api.handle("GET", "/api/kbs/nope", "").status == 404);
    CHECK(api.handle("GET", "/healthz", "").status == 200);
    CHECK(api.handle("GET", "/api/nothing", "").status == 404);
}

TEST_CASE("worksheets") {
    Api api;
    auto r = api.handle("POST", "/api/worksheets", R"({"template":"linear-algebra","num_variants":2,"seed":7,"show_answers":true})");
    REQUIRE(r.status == 200);
    auto j = body(r);
    const auto* tmpl = find_builtin_template("linear-algebra");
    // oracle: one answer per slot, stride slots per variant
    std::size_t stride = 0;
    for (auto k : tmpl->task_kinds) stride += answer_count(k);
    CHECK(j["answer_key"].size() == 2 * stride);
    CHECK(j["answer_key"].size() == 14);
    CHECK(j["answer_key"][stride]["variant"] == 2);
    CHECK(j["answer_key"][stride]["index"] == 0);

    auto doc = build_worksheet(*tmpl, {"linear-algebra", 2, 7, true});
    CHECK(j["html"] == render_html(doc, true));
    CHECK(j["latex"] == render_latex(doc, true));

    auto again = api.handle("POST", "/api/worksheets", R"({"template":"linear-algebra","num_variants":2,"seed":7,"show_answers":true})");
    CHECK(again.body == r.body);

    CHECK(api.handle("POST", "/api/worksheets", R"({"template":"linear-algebra","num_variants":0})").status == 400);
    auto unknown = api.handle("POST", "/api/worksheets", R"({"template":"nope","num_variants":1})");
    CHECK(unknown.status == 404);
    CHECK(error_code(unknown) == "UnknownTemplate");
    CHECK(api.handle("POST", "/api/worksheets", "{").status == 400);

    auto templates = body(api.handle("GET", "/api/templates", ""));
    CHECK(templates[0]["id"] == "linear-algebra");
    CHECK(templates[0]["answer_stride"] == stride);
    auto form = controls::parse_form_spec(api.handle("GET", "/api/worksheets/form", "").body);
    CHECK(form == worksheet_form_panel());
    CHECK(controls::check_panel(form).empty());
}

TEST_CASE("kb validate and compile") {
    Api api;
    auto demo = read_file(std::string(MATHFORGE_DATA_DIR) + "/kb/diffeq.kb");
    auto r = api.handle("POST", "/api/kb/validate", demo);  // UTF-16LE with BOM
    REQUIRE(r.status == 200);
    CHECK(body(r) == json{{"valid", true}, {"diagnostics", json::array()}});

    auto unreachable = api.handle("POST", "/api/kb/validate",
                                  "ATTRIBUTE q TYPE YesNo PROMPT \"q?\"\nATTRIBUTE G TYPE Choice CHOICES \"g\"\nGOAL G\n");
    auto j = body(unreachable);
    CHECK(j["valid"] == false);
    REQUIRE(j["diagnostics"].size() == 1);
    CHECK(j["diagnostics"][0]["kind"] == "UnreachableGoal");

    auto syntax = body(api.handle("POST", "/api/kb/validate", "RULE oops\n"));
    CHECK(syntax["valid"] == false);
    CHECK(syntax["diagnostics"][0]["kind"] == "SyntaxError");

    CHECK(api.handle("POST", "/api/kb/validate", std::string("\xFF\xFE\x00\xD8", 4)).status == 400);

    auto compiled = api.handle("POST", "/api/kb/compile", read_file(std::string(MATHFORGE_DATA_DIR) + "/tables/consistency.dt"));
    REQUIRE(compiled.status == 200);
    auto text = body(compiled)["kb_text"].get<std::string>();
    CHECK(body(api.handle("POST", "/api/kb/validate", text))["valid"] == true);

    auto up = api.handle("POST", "/api/kbs", one_rule_kb);
    REQUIRE(up.status == 201);
    auto id = body(up)["id"].get<std::string>();
    CHECK(body(api.handle("POST", "/api/kbs", one_rule_kb))["id"] == id);  // content addressed
    auto bad = api.handle("POST", "/api/kbs", "ATTRIBUTE q TYPE Maybe\n");
    CHECK(bad.status == 400);
    CHECK(error_code(bad) == "SyntaxError");
}

TEST_CASE("consultation protocol") {
    Api api;
    auto id = body(api.handle("POST", "/api/kbs", one_rule_kb))["id"].get<std::string>();
    auto created = api.handle("POST", "/api/consultations", json{{"kb_id", id}}.dump());
    REQUIRE(created.status == 201);
    auto c = body(created);
    auto sid = c["session_id"].get<std::string>();
    CHECK(sid.size() == 32);
    CHECK(c["status"] == "InProgress");
    CHECK(c["question"]["attr"] == "q");
    CHECK(c["question"]["choice_labels"] == json{"Так", "Ні"});
    CHECK(c["trace_cursor"] == 2);
    auto base = "/api/consultations/" + sid;

    auto early = api.handle("GET", base + "/explain", "");
    CHECK(early.status == 409);
    CHECK(error_code(early) == "WrongState");
    auto why = body(api.handle("GET", base + "/why", ""));
    CHECK(why["text"].get<std::string>().find("ПРАВИЛО: r1") != std::string::npos);

    CHECK(error_code(api.handle("POST", base + "/answers", R"({"value":"maybe","cf":100})")) == "BadValue");
    CHECK(error_code(api.handle("POST", base + "/answers", R"({"value":"yes","cf":150})")) == "BadCF");
    CHECK(error_code(api.handle("POST", base + "/answers", R"({"attr":"G","value":"g"})")) == "WrongAttribute");

    auto done = api.handle("POST", base + "/answers", R"({"value":"yes","cf":100})");
    REQUIRE(done.status == 200);
    auto d = body(done);
    CHECK(d["status"] == "Concluded");
    CHECK(d["question"].is_null());
    CHECK(d["conclusions"] == json::array({{{"goal", "G"}, {"value", "g"}, {"cf", 100}, {"accepted", true}}}));
    CHECK(body(api.handle("GET", base + "/explain", ""))["text"].get<std::string>().rfind("ВИСНОВОК:\nG є: g з 100% довіри", 0) == 0);
    CHECK(api.handle("GET", base + "/why", "").status == 409);
    auto trace = body(api.handle("GET", base + "/trace", ""))["events"];
    CHECK(trace.size() == d["trace_cursor"]);
    CHECK(trace.back()["kind"] == "GoalConcluded");

    auto restarted = body(api.handle("POST", base + "/restart", ""));
    CHECK(restarted["status"] == "InProgress");
    CHECK(restarted["question"] == c["question"]);
    auto unanswered = body(api.handle("POST", base + "/answers", R"({"no_response":true})"));
    CHECK(unanswered["status"] == "Undeterminable");

    CHECK(error_code(api.handle("GET", "/api/consultations/ffff/why", "")) == "UnknownSession");
    CHECK(error_code(api.handle("POST", "/api/consultations", R"({"kb_id":"none"})")) == "UnknownKB");
}

TEST_CASE("sessions expire after the idle timeout") {
    auto now = Clock::time_point{};
    ApiOptions o;
    o.idle_timeout = std::chrono::minutes(30);
    o.now = [&] { return now; };
    Api api(o);
    auto id = body(api.handle("POST", "/api/kbs", one_rule_kb))["id"].get<std::string>();
    auto sid = body(api.handle("POST", "/api/consultations", json{{"kb_id", id}}.dump()))["session_id"].get<std::string>();
    now += std::chrono::minutes(29);
    CHECK(api.handle("GET", "/api/consultations/" + sid, "").status == 200);
    now += std::chrono::minutes(29);  // activity above refreshed the clock
    CHECK(api.handle("GET", "/api/consultations/" + sid, "").status == 200);
    now += std::chrono::minutes(31);
    CHECK(error_code(api.handle("GET", "/api/consultations/" + sid, "")) == "UnknownSession");
    CHECK(api.sessions().size() == 0);
}

TEST_CASE("live server: two interleaved consultations and a worksheet") {
    Api api(bundled());
    HttpServer server(api);
    int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });

    httplib::Client cli("127.0.0.1", port);
    auto post = [&](const std::string& path, const json& j) {
        auto r = cli.Post(path, j.dump(), "application/json");
        REQUIRE(r);
        return std::make_pair(r->status, json::parse(r->body));
    };
    auto get = [&](const std::string& path) {
        auto r = cli.Get(path);
        REQUIRE(r);
        return std::make_pair(r->status, json::parse(r->body));
    };

    auto [s1, a] = post("/api/consultations", {{"kb_id", "diffeq"}});
    auto [s2, b] = post("/api/consultations", {{"kb_id", "diffeq"}});
    CHECK(s1 == 201);
    CHECK(s2 == 201);
    auto ida = a["session_id"].get<std::string>(), idb = b["session_id"].get<std::string>();
    CHECK(ida != idb);

    // a: first order, separable; b: first order, homogeneous
    std::vector<std::pair<json, json>> script = {
        {{{"value", 1}}, {{"value", 1}}},
        {{{"value", "yes"}}, {{"value", "no"}}},
        {{{"value", "no"}}, {{"value", "yes"}}},
        {{{"value", "нелінійно"}}, {{"value", "нелінійно"}}},
        {{{"value", "no"}}, {{"value", "no"}}},
    };
    for (const auto& [ans_a, ans_b] : script) {
        a = post("/api/consultations/" + ida + "/answers", ans_a).second;
        b = post("/api/consultations/" + idb + "/answers", ans_b).second;
    }
    CHECK(a["status"] == "Concluded");
    CHECK(b["status"] == "Concluded");
    CHECK(a["conclusions"][0]["value"] == "з відокремлюваними змінними");
    CHECK(b["conclusions"][0]["value"] == "однорідне");
    CHECK(b["conclusions"][0]["cf"] == 90);

    // no cross-talk: each trace equals a solo replay through the library
    auto replay = [&](const std::vector<json>& answers) {
        auto s = es::Session::start(api.kbs().find("diffeq"));
        for (const auto& ans : answers) {
            const auto& v = ans["value"];
            kb::Value value = v.is_number() ? kb::Value{Rational(v.get<int>())} : kb::Value{v.get<std::string>()};
            s.answer(s.pending()->attr, {{value, Rational(100)}});
        }
        auto events = json::array();
        for (const auto& e : s.trace()) events.push_back(std::string(es::to_string(e.kind)) + " " + e.rule + " " + e.attr);
        return events;
    };
    auto served = [&](const std::string& id) {
        auto events = json::array();
        auto trace = get("/api/consultations/" + id + "/trace").second;
        for (const auto& e : trace["events"])
            events.push_back(e["kind"].get<std::string>() + " " + e["rule"].get<std::string>() + " " + e["attr"].get<std::string>());
        return events;
    };
    std::vector<json> only_a, only_b;
    for (const auto& [x, y] : script) {
        only_a.push_back(x);
        only_b.push_back(y);
    }
    CHECK(served(ida) == replay(only_a));
    CHECK(served(idb) == replay(only_b));
    CHECK(get("/api/consultations/" + ida + "/explain").second["text"].get<std::string>().find("змінні - Так було уведено") !=
          std::string::npos);
    CHECK(get("/api/consultations/" + idb + "/explain").second["text"].get<std::string>().find("змінні - Ні було уведено") !=
          std::string::npos);

    auto [ws, w] = post("/api/worksheets", {{"template", "linear-algebra"}, {"num_variants", 2}, {"seed", 7}, {"show_answers", true}});
    CHECK(ws == 200);
    CHECK(w["answer_key"].size() == 14);
    CHECK(w["html"].get<std::string>().find("Варіант 2") != std::string::npos);

    server.stop();
    loop.join();
}
