#include "mathforge/consult.hpp"
#include "mathforge/service.hpp"
#include "mathforge/worksheet.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace mathforge;

namespace {

constexpr int kUsageError = 2;
constexpr int kFailure = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

WorksheetTemplate resolve_template(const std::string& name) {
    if (const auto* t = find_builtin_template(name)) return *t;
    return load_template(read_file(name));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Worksheet generator and expert-system shell"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a worksheet");
    std::string template_name, format = "html", output;
    std::size_t variants = 1;
    std::uint64_t seed = 0;
    bool answers = false;
    gen->add_option("template", template_name, "Built-in template id or template JSON file")->required();
    gen->add_option("-n,--variants", variants, "Number of variants")->default_val(1);
    gen->add_option("--seed", seed, "Seed")->default_val(0);
    gen->add_flag("--answers", answers, "Append the answers section");
    gen->add_option("--format", format, "Output format")->check(CLI::IsMember({"html", "page", "latex"}))->default_val("html");
    gen->add_option("-o,--output", output, "Output file (default stdout)");

    // kb validate / kb compile
    auto* kbcmd = app.add_subcommand("kb", "Knowledge-base tools");
    kbcmd->require_subcommand(1);
    auto* validate = kbcmd->add_subcommand("validate", "Parse and check a knowledge base");
    std::string kb_file;
    validate->add_option("file", kb_file, "Knowledge base file")->required()->check(CLI::ExistingFile);
    auto* compile = kbcmd->add_subcommand("compile", "Compile a decision table into a knowledge base");
    std::string table_file, kb_out;
    bool utf16 = false;
    compile->add_option("table", table_file, "Decision table JSON")->required()->check(CLI::ExistingFile);
    compile->add_option("-o,--output", kb_out, "Output .kb file (default stdout)");
    compile->add_flag("--utf16", utf16, "Write UTF-16LE with a byte-order mark");

    // consult
    auto* consult = app.add_subcommand("consult", "Run a consultation on the terminal");
    std::string consult_file;
    consult->add_option("file", consult_file, "Knowledge base file")->required()->check(CLI::ExistingFile);

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    std::string host = "127.0.0.1", kb_dir = std::string(MATHFORGE_DATA_DIR) + "/kb", static_dir;
    int port = 8080;
    serve->add_option("--host", host, "Listen address")->default_val("127.0.0.1");
    serve->add_option("--port", port, "Port (MATHFORGE_PORT overrides)")->default_val(8080);
    serve->add_option("--kb-dir", kb_dir, "Directory of bundled .kb files");
    serve->add_option("--static-dir", static_dir, "Directory served under /");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*gen) {
            WorksheetRequest req{template_name, variants, seed, answers};
            req.validate();
            auto doc = build_worksheet(resolve_template(template_name), req);
            std::string text = format == "latex"  ? render_latex(doc, answers)
                               : format == "page" ? render_html_page(doc, answers)
                                                  : render_html(doc, answers);
            write_output(output, text);
        } else if (*validate) {
            auto kb = kb::parse_kb(read_file(kb_file));
            auto diags = kb::validate_kb(kb);
            for (const auto& d : diags) std::cout << kb::to_string(d.kind) << " '" << d.subject << "': " << d.message << "\n";
            if (!diags.empty()) return kFailure;
            std::cout << "ok: " << kb.attributes.size() << " attributes, " << kb.rules.size() << " rules, " << kb.goals.size()
                      << " goals\n";
        } else if (*compile) {
            auto text = kb::serialize_kb(kb::table_to_rules(kb::parse_decision_table(read_file(table_file))));
            write_output(kb_out, utf16 ? kb::encode_utf16le(text) : text);
        } else if (*consult) {
            auto kb = std::make_shared<const kb::KnowledgeBase>(kb::parse_kb(read_file(consult_file)));
            auto status = es::run_consult(kb, std::cin, std::cout);
            if (status == es::Status::InProgress) return kFailure;
        } else if (*serve) {
            if (const char* env = std::getenv("MATHFORGE_PORT")) port = std::atoi(env);
            service::ApiOptions options;
            options.kb_dir = kb_dir;
            options.static_dir = static_dir;
            service::Api api(options);
            service::HttpServer server(api);
            int bound = server.bind(host, port);
            if (bound < 0) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
            std::cerr << "listening on http://" << host << ":" << bound << "\n";
            server.listen();
        }
    } catch (const kb::KbError& e) {
        std::cerr << "error: " << kb::to_string(e.code()) << ": " << e.what();
        if (e.line()) std::cerr << " (line " << e.line() << ")";
        std::cerr << "\n";
        return kFailure;
    } catch (const WorksheetError& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return 0;
}
