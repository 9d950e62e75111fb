// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kb_gen.hpp"
#include "latex_reparse.hpp"
#include "mathforge/consult.hpp"
#include "mathforge/locale.hpp"
#include "mathforge/ratmat.hpp"
#include "mathforge/service.hpp"
#include "mathforge/taskgen.hpp"
#include "mathforge/worksheet.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace mathforge;
using nlohmann::json;

namespace {

struct Outcome {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string data(const std::string& rel) { return std::string(MATHFORGE_DATA_DIR) + "/" + rel; }

const WorksheetStrings& uk() { return worksheet_strings("uk"); }

const RatMatrix& matrix_of(const Answer& a) { return std::get<MatrixAnswer>(a).value; }

std::vector<Rational> column(const RatMatrix& m) {
    std::vector<Rational> out;
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m(r, 0));
    return out;
}

// -- worked worksheet ---------------------------------------------------------

void worked_worksheet(Outcome& o) {
    auto t1 = build_determinant_task(RatMatrix{{-1, 1, -2}, {-2, 2, -1}, {-1, 3, 4}}, uk());
    o.expect(t1.answers == std::vector<Answer>{ScalarAnswer{6}}, "task 1: det = 6");

    auto t2 = build_product_task(RatMatrix{{-4, -4}}, RatMatrix{{0, 4, 3}, {3, 2, 1}}, uk());
    o.expect(t2.answers.size() == 2 && t2.answers[0] == Answer{MatrixAnswer{RatMatrix{{-12, -24, -16}}}},
             "task 2: AB = (-12, -24, -16)");
    o.expect(t2.answers.size() == 2 && t2.answers[1] == Answer{MessageAnswer{"Добуток ВА не існує"}},
             "task 2: BA does not exist");

    RatMatrix m3{{-4, -2, -1}, {2, -3, -4}, {3, 4, -3}};
    auto t3 = build_inverse_task(m3, uk());
    o.expect(oracle::perm_det(m3) == -105, "task 3: det = -105");
    o.expect(oracle::naive_mul(m3, matrix_of(t3.answers[0])) == RatMatrix::identity(3), "task 3: m X = I");

    RatMatrix a{{5, -5}, {-2, 4}}, b{{2, -2}, {-3, -4}}, c{{-4, 3}, {1, 0}};
    auto t4 = build_matrix_eq_task(a, b, c, uk());
    o.expect(oracle::naive_mul(oracle::naive_mul(a, b), matrix_of(t4.answers[0])) == c, "task 4: ABX = C");

    RatMatrix m5{{4, 2, 1}, {4, -2, -1}, {0, -5, -4}};
    std::vector<Rational> f{-3, 5, -5};
    auto t5 = build_matpoly_task(f, m5, uk());
    o.expect(matrix_of(t5.answers[0]) == oracle::power_sum(f, m5), "task 5: f(A) = -3A^2 + 5A - 5I");

    RatMatrix a6{{3, -2, -5}, {4, -4, -3}, {-5, -4, 0}};
    std::vector<Rational> roots{-1, -2, 5};
    auto t6 = build_system_task(roots, a6, uk());
    o.expect(t6.answers[0] == Answer{VectorAnswer{roots}}, "task 6: answer (-1, -2, 5)");
    auto [pa, pb] = oracle::parse_system(t6.statement.back().text, 3);
    LinSystem sys(pa, pb);
    for (auto method : {SolveMethod::Cramer, SolveMethod::InverseMatrix, SolveMethod::Gauss})
        o.expect(column(solve(sys, method)) == roots, "task 6: every method solves to (-1, -2, 5)");
}

// -- method equivalence ------------------------------------------------------

void methods(Outcome& o) {
    std::mt19937_64 g(2024);
    for (int i = 0; i < 200; ++i) {
        auto m = oracle::random_matrix(g, 3, 3, -9, 9);
        auto d = det(m, DetMethod::Triangle);
        o.expect(d == det(m, DetMethod::Cofactor) && d == det(m, DetMethod::TriangularReduction) && d == oracle::perm_det(m),
                 "3x3 determinant methods agree");
    }
    int inverses = 0;
    while (inverses < 100) {
        auto n = static_cast<std::size_t>(1 + g() % 4);
        auto m = oracle::random_matrix(g, n, n, -6, 6);
        if (oracle::perm_det(m).is_zero()) continue;
        ++inverses;
        auto adj = inverse(m, InvMethod::Adjugate);
        o.expect(adj == inverse(m, InvMethod::Gauss), "inverse methods agree");
        o.expect(oracle::naive_mul(m, adj) == RatMatrix::identity(n), "m * inverse = I");
    }
    int systems = 0;
    while (systems < 100) {
        auto n = static_cast<std::size_t>(1 + g() % 4);
        auto a = oracle::random_matrix(g, n, n, -6, 6);
        if (oracle::perm_det(a).is_zero()) continue;
        ++systems;
        LinSystem sys(a, oracle::random_matrix(g, n, 1, -20, 20));
        auto x = solve(sys, SolveMethod::Cramer);
        o.expect(x == solve(sys, SolveMethod::InverseMatrix) && x == solve(sys, SolveMethod::Gauss), "solve methods agree");
        o.expect(oracle::naive_mul(a, x) == sys.b, "A x = b");
    }
}

// -- roots first -------------------------------------------------------------

void roots_first(Outcome& o) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        auto task = gen_system_task(rng, {}, uk());
        const auto& roots = std::get<VectorAnswer>(task.answers[0]).value;
        for (const auto& r : roots) o.expect(r.denominator() == 1, "seeded roots are integers");
        auto [a, b] = oracle::parse_system(task.statement.back().text, roots.size());
        o.expect(column(solve(LinSystem(a, b), SolveMethod::Gauss)) == roots, "solving returns the seeded roots");
    }
    const auto& tmpl = *find_builtin_template("linear-algebra");
    std::mt19937_64 g(31);
    for (int i = 0; i < 50; ++i) {
        std::size_t n = 1 + g() % 12;
        auto doc = build_worksheet(tmpl, {"linear-algebra", n, g(), true});
        o.expect(doc.stride == 7 && doc.answer_key.size() == 7 * n, "answer key holds 7 x num_variants answers");
    }
}

// -- determinism -------------------------------------------------------------

std::optional<std::string> run_tool(const std::string& args) {
#ifdef MATHFORGE_TOOL
    std::string cmd = std::string("\"") + MATHFORGE_TOOL + "\" " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return std::nullopt;
    std::string out;
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    if (pclose(p) != 0) return std::nullopt;
    return out;
#else
    (void)args;
    return std::nullopt;
#endif
}

void determinism(Outcome& o) {
#ifdef MATHFORGE_TOOL
    auto first = run_tool("gen linear-algebra -n 3 --seed 42 --answers");
    auto second = run_tool("gen linear-algebra -n 3 --seed 42 --answers");
    o.expect(first && second && !first->empty() && *first == *second, "CLI gen output is byte-identical across runs");
    auto tex1 = run_tool("gen linear-algebra -n 3 --seed 42 --answers --format latex");
    auto tex2 = run_tool("gen linear-algebra -n 3 --seed 42 --answers --format latex");
    o.expect(tex1 && tex2 && *tex1 == *tex2, "CLI LaTeX output is byte-identical across runs");
    if (first) {
        auto doc = build_worksheet(*find_builtin_template("linear-algebra"), {"linear-algebra", 3, 42, true});
        o.expect(*first == render_html(doc, true), "CLI output equals the library rendering");
    }
#else
    o.expect(false, "the mathforge tool was not built");
#endif
    const auto& tmpl = *find_builtin_template("linear-algebra");
    WorksheetRequest req{"linear-algebra", 3, 42, true};
    auto a = build_worksheet(tmpl, req);
    auto b = build_worksheet(tmpl, req);
    o.expect(render_html(a, true) == render_html(b, true), "HTML renders identically");
    o.expect(render_latex(a, true) == render_latex(b, true), "LaTeX renders identically");
    // the task section does not depend on the answers flag
    o.expect(render_html(a, true).starts_with(render_html(a, false)), "HTML task section is the same with and without answers");
    auto tex_off = render_latex(a, false), tex_on = render_latex(a, true);
    auto body = tex_off.size() - std::string_view("\\end{document}\n").size();
    o.expect(tex_on.compare(0, body, tex_off, 0, body) == 0, "LaTeX task section is the same with and without answers");
}

// -- KB round trip -----------------------------------------------------------

void kb_round_trip(Outcome& o) {
    oracle::KbGen gen(4242);
    for (int i = 0; i < 100; ++i) {
        auto kb = gen();
        auto text = kb::serialize_kb(kb);
        o.expect(kb::parse_kb(text) == kb, "generated KB survives parse(serialize)");
        o.expect(kb::parse_kb(kb::encode_utf16le(text)) == kb, "generated KB survives a UTF-16 round trip");
    }
    for (const char* name : {"diffeq.kb", "linsys-method.kb", "integration.kb"}) {
        auto bytes = read_file(data(std::string("kb/") + name));
        auto kb = kb::parse_kb(bytes);
        auto text = kb::serialize_kb(kb);
        o.expect(kb::parse_kb(text) == kb, std::string(name) + ": UTF-8 round trip");
        o.expect(kb::parse_kb(kb::encode_utf16le(text)) == kb, std::string(name) + ": UTF-16 round trip");
        o.expect(kb::validate_kb(kb).empty(), std::string(name) + ": validates clean");
    }
    auto compiled = kb::table_to_rules(kb::parse_decision_table(read_file(data("tables/consistency.dt"))));
    o.expect(kb::validate_kb(compiled).empty(), "table_to_rules output validates clean");
    o.expect(kb::parse_kb(kb::serialize_kb(compiled)) == compiled, "compiled table round-trips");
}

// -- engine contract ---------------------------------------------------------

std::shared_ptr<const kb::KnowledgeBase> one_rule(int rule_cf, int min_cf) {
    return std::make_shared<const kb::KnowledgeBase>(kb::parse_kb(
        "MINCF " + std::to_string(min_cf) +
        "\nATTRIBUTE q TYPE YesNo PROMPT \"q?\"\nATTRIBUTE G TYPE Choice CHOICES \"g\"\nGOAL G\n"
        "RULE \"r1\" IF q = \"yes\" THEN G = \"g\" CF " +
        std::to_string(rule_cf) + "\n"));
}

std::set<std::string> closure_oracle(const kb::KnowledgeBase& kb) {
    std::set<std::string> seen(kb.goals.begin(), kb.goals.end());
    std::vector<std::string> todo(kb.goals.begin(), kb.goals.end());
    while (!todo.empty()) {
        auto a = todo.back();
        todo.pop_back();
        for (const auto& r : kb.rules)
            if (r.concludes(a))
                for (const auto& p : r.premises)
                    if (seen.insert(p.attr).second) todo.push_back(p.attr);
    }
    return seen;
}

void engine(Outcome& o) {
    for (int m : {80, 50, 1, 100}) {
        auto at = es::Session::start(one_rule(m, m));
        at.answer("q", {{std::string("yes"), Rational(100)}});
        o.expect(at.status() == es::Status::Concluded && at.conclusions().front().accepted, "cf = min_cf is accepted");
        if (m == 1) continue;
        auto below = es::Session::start(one_rule(m - 1, m));
        below.answer("q", {{std::string("yes"), Rational(100)}});
        o.expect(!below.conclusions().front().accepted && below.explain().find("G - неможливо визначити") != std::string::npos,
                 "cf = min_cf - 1 is reported as undeterminable");
    }
    for (int x = 0; x <= 100; ++x) {
        o.expect(es::combine_cf(0, x) == x, "combine(0, x) = x");
        o.expect(es::combine_cf(100, x) == 100, "combine(100, x) = 100");
    }
    o.expect(es::combine_cf(60, 60) == 84, "combine(60, 60) = 84");
    std::mt19937_64 g(1000);
    std::uniform_int_distribution<int> pct(0, 100);
    for (int i = 0; i < 1000; ++i) {
        Rational a(pct(g)), b(pct(g)), c(pct(g));
        o.expect(es::combine_cf(a, b) == es::combine_cf(b, a), "combination is order independent");
        o.expect(es::combine_cf(es::combine_cf(a, b), c) == es::combine_cf(a, es::combine_cf(b, c)), "combination regroups exactly");
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        oracle::KbGen kbgen(seed + 77);
        auto kb = std::make_shared<const kb::KnowledgeBase>(kbgen());
        auto closure = closure_oracle(*kb);
        auto s = es::Session::start(kb);
        std::mt19937_64 r(seed);
        while (s.status() == es::Status::InProgress) {
            const auto& q = *s.pending();
            o.expect(closure.count(q.attr) == 1, "asked attribute '" + q.attr + "' lies in the goals' premise closure");
            if (r() % 5 == 0) s.answer(q.attr, es::NoResponse{});
            else if (q.choices.empty()) s.answer(q.attr, {{Rational(static_cast<int>(r() % 7) - 3), Rational(100)}});
            else s.answer(q.attr, {{q.choices[r() % q.choices.size()], Rational(r() % 2 ? 100 : 50)}});
        }
    }
    auto demo = std::make_shared<const kb::KnowledgeBase>(kb::parse_kb(read_file(data("kb/diffeq.kb"))));
    for (int run = 0; run < 2; ++run) {
        std::istringstream in(read_file(data("transcripts/diffeq.in")));
        std::ostringstream out;
        es::run_consult(demo, in, out);
        o.expect(out.str() == read_file(data("transcripts/diffeq.out")), "golden consultation transcript replays identically");
    }
}

// -- service -----------------------------------------------------------------

void service_live(Outcome& o) {
    service::ApiOptions options;
    options.kb_dir = data("kb");
    service::Api api(options);
    service::HttpServer server(api);
    int port = server.bind("127.0.0.1", 0);
    if (port <= 0) {
        o.expect(false, "server binds a port");
        return;
    }
    std::thread loop([&] { server.listen(); });
    httplib::Client cli("127.0.0.1", port);
    auto post = [&](const std::string& path, const json& body) -> json {
        auto r = cli.Post(path, body.dump(), "application/json");
        if (!r) return json{{"status", -1}};
        auto j = json::parse(r->body);
        j["http_status"] = r->status;
        return j;
    };
    auto get = [&](const std::string& path) -> json {
        auto r = cli.Get(path);
        return r ? json::parse(r->body) : json::object();
    };

    auto a = post("/api/consultations", {{"kb_id", "diffeq"}});
    auto b = post("/api/consultations", {{"kb_id", "linsys-method"}});
    o.expect(a["http_status"] == 201 && b["http_status"] == 201, "consultations are created");
    auto ida = a.value("session_id", std::string{}), idb = b.value("session_id", std::string{});
    std::vector<json> script_a = {{{"value", 1}}, {{"value", "no"}}, {{"value", "yes"}}, {{"value", "нелінійно"}}, {{"value", "no"}}};
    std::vector<json> script_b = {{{"value", "yes"}}, {{"value", -105}}, {{"no_response", true}}, {{"values", {"обернену матрицю"}}}};
    for (std::size_t i = 0; i < std::max(script_a.size(), script_b.size()); ++i) {
        if (i < script_a.size()) a = post("/api/consultations/" + ida + "/answers", script_a[i]);
        if (i < script_b.size()) b = post("/api/consultations/" + idb + "/answers", script_b[i]);
    }
    o.expect(a["status"] == "Concluded" && a["conclusions"][0]["value"] == "однорідне" && a["conclusions"][0]["cf"] == 90,
             "session A concludes 'однорідне' at 90");
    o.expect(b["status"] == "Concluded" && b["conclusions"].size() == 2 && b["conclusions"][1]["value"] == "матричний метод",
             "session B concludes the matrix method");

    // each served trace must match a solo library replay of the same answers
    auto replay = [&](const std::string& kb_id, const std::vector<json>& script) {
        auto api_solo = service::Api(options);
        auto id = json::parse(api_solo.handle("POST", "/api/consultations", json{{"kb_id", kb_id}}.dump()).body)["session_id"];
        for (const auto& step : script) api_solo.handle("POST", "/api/consultations/" + id.get<std::string>() + "/answers", step.dump());
        return json::parse(api_solo.handle("GET", "/api/consultations/" + id.get<std::string>() + "/trace", "").body);
    };
    o.expect(get("/api/consultations/" + ida + "/trace") == replay("diffeq", script_a), "session A trace has no cross-talk");
    o.expect(get("/api/consultations/" + idb + "/trace") == replay("linsys-method", script_b), "session B trace has no cross-talk");
    o.expect(get("/api/consultations/" + ida + "/explain")["text"].get<std::string>().starts_with("ВИСНОВОК:"), "explain is served");

    auto w = post("/api/worksheets", {{"template", "linear-algebra"}, {"num_variants", 2}, {"seed", 7}, {"show_answers", true}});
    o.expect(w["http_status"] == 200 && w["answer_key"].size() == 14, "worksheet request returns 14 answers");
    auto doc = build_worksheet(*find_builtin_template("linear-algebra"), {"linear-algebra", 2, 7, true});
    o.expect(w["html"] == render_html(doc, true), "served worksheet equals the library rendering");
    o.expect(post("/api/worksheets", {{"template", "nope"}})["http_status"] == 404, "unknown template is 404");

    server.stop();
    loop.join();
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Outcome&)> run;
        double limit_s;
    };
    const Criterion criteria[] = {
        {"Worked worksheet reproduction", worked_worksheet, 1.0},
        {"Method equivalence", methods, 5.0},
        {"Roots-first property", roots_first, 0},
        {"Determinism", determinism, 0},
        {"KB round-trip", kb_round_trip, 0},
        {"Engine contract", engine, 0},
        {"Service", service_live, 0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs >= c.limit_s)
            o.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s");
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3f s", secs);
        if (o.failures.empty()) {
            std::cout << "PASS " << c.name << " (" << timing << ")\n";
        } else {
            ++failed;
            std::cout << "FAIL " << c.name << " (" << timing << "): " << o.failures.front();
            if (o.failures.size() > 1) std::cout << " [+" << o.failures.size() - 1 << " more]";
            std::cout << "\n";
        }
    }
    return failed ? 1 : 0;
}
