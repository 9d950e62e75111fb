#include "mathforge/eskb.hpp"

#include <boost/locale/encoding_utf.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace mathforge::kb {

std::string_view prompt_type_name(PromptType t) {
    switch (t) {
        case PromptType::YesNo: return "YesNo";
        case PromptType::MultChoice: return "MultChoice";
        case PromptType::ForcedChoice: return "ForcedChoice";
        case PromptType::Choice: return "Choice";
        case PromptType::AllChoice: return "AllChoice";
        case PromptType::Numeric: return "Numeric";
    }
    return "?";
}

std::optional<PromptType> prompt_type_from_name(std::string_view name) {
    for (auto t : kAllPromptTypes)
        if (prompt_type_name(t) == name) return t;
    return std::nullopt;
}

bool is_choice_like(PromptType t) { return t != PromptType::YesNo && t != PromptType::Numeric; }

std::string value_str(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    return std::get<Rational>(v).str();
}

std::vector<std::string> AttributeDef::allowed_values() const {
    if (type == PromptType::YesNo) return {std::string(kYes), std::string(kNo)};
    return choices;
}

std::string_view op_symbol(Op op) {
    switch (op) {
        case Op::Eq: return "=";
        case Op::Lt: return "<";
        case Op::Gt: return ">";
        case Op::Ne: return "!=";
    }
    return "=";
}

bool RuleDef::concludes(std::string_view attr) const {
    return std::any_of(conclusions.begin(), conclusions.end(), [&](const Conclusion& c) { return c.attr == attr; });
}

const AttributeDef* KnowledgeBase::find_attribute(std::string_view name) const {
    auto it = std::find_if(attributes.begin(), attributes.end(), [&](const AttributeDef& a) { return a.name == name; });
    return it == attributes.end() ? nullptr : &*it;
}

const RuleDef* KnowledgeBase::find_rule(std::string_view name) const {
    auto it = std::find_if(rules.begin(), rules.end(), [&](const RuleDef& r) { return r.name == name; });
    return it == rules.end() ? nullptr : &*it;
}

bool KnowledgeBase::is_goal(std::string_view name) const {
    return std::find(goals.begin(), goals.end(), name) != goals.end();
}

std::string KnowledgeBase::translate(std::string_view key) const {
    for (const auto& t : translations)
        if (t.key == key) return t.text;
    for (const auto& t : default_translations())
        if (t.key == key) return t.text;
    return std::string(key);
}

const char* to_string(KbErrc c) {
    switch (c) {
        case KbErrc::EncodingError: return "EncodingError";
        case KbErrc::SyntaxError: return "SyntaxError";
        case KbErrc::UndeclaredAttribute: return "UndeclaredAttribute";
        case KbErrc::BadCF: return "BadCF";
        case KbErrc::BadTable: return "BadTable";
        case KbErrc::EmptyColumn: return "EmptyColumn";
        case KbErrc::NoGoalAction: return "NoGoalAction";
    }
    return "?";
}

namespace {

std::string located(const std::string& message, std::size_t line) {
    return line ? "line " + std::to_string(line) + ": " + message : message;
}

}  // namespace

KbError::KbError(KbErrc code, const std::string& message, std::size_t line)
    : std::runtime_error(located(message, line)), code_(code), line_(line) {}

const char* to_string(DiagKind k) {
    switch (k) {
        case DiagKind::Malformed: return "Malformed";
        case DiagKind::UnreachableGoal: return "UnreachableGoal";
        case DiagKind::DeadRule: return "DeadRule";
        case DiagKind::DuplicateRuleName: return "DuplicateRuleName";
        case DiagKind::CycleWarning: return "CycleWarning";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Encoding

std::string decode_text(std::string_view bytes) {
    namespace conv = boost::locale::conv;
    auto starts = [&](std::string_view bom) { return bytes.substr(0, bom.size()) == bom; };
    try {
        if (starts("\xFF\xFE") || starts("\xFE\xFF")) {
            bool little = bytes[0] == '\xFF';
            auto body = bytes.substr(2);
            if (body.size() % 2 != 0) throw KbError(KbErrc::EncodingError, "odd byte count in UTF-16 text");
            std::u16string units(body.size() / 2, u'\0');
            for (std::size_t i = 0; i < units.size(); ++i) {
                auto lo = static_cast<unsigned char>(body[2 * i + (little ? 0 : 1)]);
                auto hi = static_cast<unsigned char>(body[2 * i + (little ? 1 : 0)]);
                units[i] = static_cast<char16_t>(lo | (hi << 8));
            }
            return conv::utf_to_utf<char>(units, conv::stop);
        }
        if (starts("\xEF\xBB\xBF")) bytes.remove_prefix(3);
        std::string text(bytes);
        conv::utf_to_utf<char32_t>(text, conv::stop);  // validation only
        if (text.find('\0') != std::string::npos)
            throw KbError(KbErrc::EncodingError, "NUL byte in text (UTF-16 without a byte-order mark?)");
        return text;
    } catch (const conv::conversion_error&) {
        throw KbError(KbErrc::EncodingError, "text is neither valid UTF-8 nor BOM-marked UTF-16");
    }
}

std::string encode_utf16le(std::string_view utf8) {
    namespace conv = boost::locale::conv;
    auto units = conv::utf_to_utf<char16_t>(std::string(utf8), conv::stop);
    std::string out = "\xFF\xFE";
    for (char16_t u : units) {
        out.push_back(static_cast<char>(u & 0xFF));
        out.push_back(static_cast<char>(u >> 8));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Kind { Word, String, Op } kind;
    std::string text;
    Op op = Op::Eq;
};

constexpr std::string_view kNotEqualSign = "\xE2\x89\xA0";  // U+2260

std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto word_char = [&](std::size_t k) {
        char c = line[k];
        if (c == ' ' || c == '\t' || c == '"' || c == '=' || c == '<' || c == '>' || c == '!') return false;
        return line.substr(k, kNotEqualSign.size()) != kNotEqualSign;
    };
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t') {
            ++i;
        } else if (c == '"') {
            std::string s;
            ++i;
            for (;;) {
                if (i >= line.size()) throw KbError(KbErrc::SyntaxError, "unterminated string", lineno);
                char d = line[i++];
                if (d == '"') break;
                if (d == '\\') {
                    if (i >= line.size()) throw KbError(KbErrc::SyntaxError, "dangling escape", lineno);
                    char e = line[i++];
                    if (e == 'n') s.push_back('\n');
                    else if (e == '"' || e == '\\') s.push_back(e);
                    else throw KbError(KbErrc::SyntaxError, std::string("unknown escape \\") + e, lineno);
                } else {
                    s.push_back(d);
                }
            }
            out.push_back({Token::Kind::String, std::move(s)});
        } else if (line.substr(i, kNotEqualSign.size()) == kNotEqualSign) {
            out.push_back({Token::Kind::Op, std::string(kNotEqualSign), Op::Ne});
            i += kNotEqualSign.size();
        } else if (line.substr(i, 2) == "!=" || line.substr(i, 2) == "<>") {
            out.push_back({Token::Kind::Op, std::string(line.substr(i, 2)), Op::Ne});
            i += 2;
        } else if (c == '=' || c == '<' || c == '>') {
            out.push_back({Token::Kind::Op, std::string(1, c), c == '=' ? Op::Eq : c == '<' ? Op::Lt : Op::Gt});
            ++i;
        } else if (c == '!') {
            throw KbError(KbErrc::SyntaxError, "stray '!'", lineno);
        } else {
            auto start = i;
            while (i < line.size() && word_char(i)) ++i;
            out.push_back({Token::Kind::Word, std::string(line.substr(start, i - start))});
        }
    }
    return out;
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, std::size_t lineno) : toks_(std::move(tokens)), line_(lineno) {}

    bool done() const { return pos_ >= toks_.size(); }

    bool peek_word(std::string_view w) const {
        return !done() && toks_[pos_].kind == Token::Kind::Word && toks_[pos_].text == w;
    }

    [[noreturn]] void fail(const std::string& message) const { throw KbError(KbErrc::SyntaxError, message, line_); }

    const Token& next(const char* what) {
        if (done()) fail(std::string("expected ") + what + " at end of line");
        return toks_[pos_++];
    }

    void keyword(std::string_view w) {
        const auto& t = next(std::string(w).c_str());
        if (t.kind != Token::Kind::Word || t.text != w) fail("expected " + std::string(w) + ", found '" + t.text + "'");
    }

    std::string word(const char* what) {
        const auto& t = next(what);
        if (t.kind != Token::Kind::Word) fail(std::string("expected ") + what + ", found '" + t.text + "'");
        return t.text;
    }

    std::string string(const char* what) {
        const auto& t = next(what);
        if (t.kind != Token::Kind::String) fail(std::string("expected quoted ") + what + ", found '" + t.text + "'");
        return t.text;
    }

    Op op() {
        const auto& t = next("operator");
        if (t.kind != Token::Kind::Op) fail("expected an operator, found '" + t.text + "'");
        return t.op;
    }

    Value value() {
        const auto& t = next("value");
        if (t.kind == Token::Kind::String) return t.text;
        if (t.kind == Token::Kind::Op) fail("expected a value, found '" + t.text + "'");
        try {
            return Rational::parse(t.text);
        } catch (const std::invalid_argument&) {
            fail("expected a quoted string or a number, found '" + t.text + "'");
        }
    }

    int integer(const char* what, KbErrc range_code, int lo, int hi) {
        auto w = word(what);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(w, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != w.size() || w.empty()) fail(std::string("expected an integer ") + what + ", found '" + w + "'");
        if (v < lo || v > hi)
            throw KbError(range_code, std::string(what) + " " + w + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", line_);
        return static_cast<int>(v);
    }

    void end() {
        if (!done()) fail("unexpected '" + toks_[pos_].text + "'");
    }

    std::size_t line() const { return line_; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

bool is_translation_key(std::string_view k) {
    return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

struct PendingRef {
    std::string attr;
    std::size_t line;
};

void check_value_kind(const AttributeDef& a, const Value& v, std::size_t line, const char* where) {
    bool numeric = std::holds_alternative<Rational>(v);
    if (a.type == PromptType::Numeric && !numeric)
        throw KbError(KbErrc::SyntaxError, std::string(where) + " on Numeric attribute '" + a.name + "' needs a number", line);
    if (a.type != PromptType::Numeric && numeric)
        throw KbError(KbErrc::SyntaxError,
                      std::string(where) + " on " + std::string(prompt_type_name(a.type)) + " attribute '" + a.name +
                          "' needs a quoted value",
                      line);
}

}  // namespace

KnowledgeBase parse_kb(std::string_view bytes) {
    auto text = decode_text(bytes);
    KnowledgeBase kb;
    std::vector<std::string> pending_comments;
    std::vector<std::size_t> rule_lines;
    std::map<std::string, std::size_t> goal_lines;
    bool seen_title = false;
    bool seen_mincf = false;

    auto take_comments = [&] { return std::exchange(pending_comments, {}); };
    auto flush_to_header = [&] {
        for (auto& c : take_comments()) kb.header_comments.push_back(std::move(c));
    };

    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto raw = std::string_view(text).substr(start, nl == std::string::npos ? std::string::npos : nl - start);
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        auto first = raw.find_first_not_of(" \t");
        if (first == std::string_view::npos) continue;
        auto line = raw.substr(first);

        if (line.substr(0, 3) == "REM" && (line.size() == 3 || line[3] == ' ' || line[3] == '\t')) {
            pending_comments.emplace_back(line.size() > 4 ? line.substr(4) : std::string_view{});
            continue;
        }

        LineParser p(tokenize(line, lineno), lineno);
        auto kw = p.word("keyword");
        if (kw == "TITLE") {
            if (seen_title) p.fail("duplicate TITLE");
            seen_title = true;
            kb.title = p.string("title");
            p.end();
            flush_to_header();
        } else if (kw == "MINCF") {
            if (seen_mincf) p.fail("duplicate MINCF");
            seen_mincf = true;
            kb.min_cf = p.integer("MINCF", KbErrc::BadCF, 1, 100);
            p.end();
            flush_to_header();
        } else if (kw == "TRANSLATE") {
            Translation t;
            t.key = p.word("translation key");
            if (!is_translation_key(t.key)) p.fail("bad translation key '" + t.key + "'");
            if (p.op() != Op::Eq) p.fail("expected '=' after translation key");
            t.text = p.string("translation text");
            p.end();
            for (const auto& other : kb.translations)
                if (other.key == t.key) p.fail("duplicate translation key " + t.key);
            t.comments = take_comments();
            kb.translations.push_back(std::move(t));
        } else if (kw == "ATTRIBUTE") {
            AttributeDef a;
            a.name = p.word("attribute name");
            if (kb.find_attribute(a.name)) p.fail("attribute '" + a.name + "' declared twice");
            p.keyword("TYPE");
            auto tname = p.word("prompt type");
            auto t = prompt_type_from_name(tname);
            if (!t) p.fail("unknown prompt type '" + tname + "'");
            a.type = *t;
            std::set<std::string> clauses;
            while (!p.done()) {
                auto clause = p.word("clause");
                if (!clauses.insert(clause).second) p.fail("duplicate " + clause + " clause");
                if (clause == "PROMPT") {
                    a.prompt = p.string("prompt");
                    if (a.prompt.empty()) p.fail("empty PROMPT");
                } else if (clause == "CHOICES") {
                    a.choices.push_back(p.string("choice"));
                    while (!p.done() && !p.peek_word("PROMPT") && !p.peek_word("DEFAULT")) a.choices.push_back(p.string("choice"));
                } else if (clause == "DEFAULT") {
                    a.default_value = p.value();
                } else {
                    p.fail("unknown ATTRIBUTE clause '" + clause + "'");
                }
            }
            if (a.default_value) check_value_kind(a, *a.default_value, lineno, "DEFAULT");
            a.comments = take_comments();
            kb.attributes.push_back(std::move(a));
        } else if (kw == "GOAL") {
            auto g = p.word("goal attribute");
            p.end();
            if (kb.is_goal(g)) p.fail("goal '" + g + "' listed twice");
            kb.goals.push_back(g);
            goal_lines[g] = lineno;
            flush_to_header();
        } else if (kw == "RULE") {
            RuleDef r;
            r.name = p.string("rule name");
            p.keyword("IF");
            do {
                Premise pr;
                pr.attr = p.word("attribute");
                pr.op = p.op();
                pr.value = p.value();
                r.premises.push_back(std::move(pr));
            } while (!p.peek_word("THEN") && (p.keyword("AND"), true));
            p.keyword("THEN");
            do {
                Conclusion c;
                c.attr = p.word("attribute");
                if (p.op() != Op::Eq) p.fail("conclusions assign with '='");
                c.value = p.value();
                p.keyword("CF");
                c.cf = p.integer("CF", KbErrc::BadCF, 0, 100);
                r.conclusions.push_back(std::move(c));
            } while (!p.done() && (p.keyword("AND"), true));
            r.comments = take_comments();
            kb.rules.push_back(std::move(r));
            rule_lines.push_back(lineno);
        } else {
            p.fail("unknown keyword '" + kw + "'");
        }
    }
    kb.trailing_comments = take_comments();

    // references may point forward, so they are resolved once the file is read
    for (const auto& [g, line] : goal_lines)
        if (!kb.find_attribute(g)) throw KbError(KbErrc::UndeclaredAttribute, "goal '" + g + "' is not a declared attribute", line);
    for (std::size_t i = 0; i < kb.rules.size(); ++i) {
        const auto& r = kb.rules[i];
        auto line = rule_lines[i];
        auto lookup = [&](const std::string& name) -> const AttributeDef& {
            const auto* a = kb.find_attribute(name);
            if (!a) throw KbError(KbErrc::UndeclaredAttribute, "rule \"" + r.name + "\" uses undeclared attribute '" + name + "'", line);
            return *a;
        };
        for (const auto& pr : r.premises) {
            const auto& a = lookup(pr.attr);
            check_value_kind(a, pr.value, line, "premise");
            if ((pr.op == Op::Lt || pr.op == Op::Gt) && a.type != PromptType::Numeric)
                throw KbError(KbErrc::SyntaxError, "'<' and '>' need a Numeric attribute, '" + a.name + "' is not", line);
        }
        for (const auto& c : r.conclusions) {
            check_value_kind(lookup(c.attr), c.value, line, "conclusion");
            for (const auto& pr : r.premises)
                if (pr.attr == c.attr)
                    throw KbError(KbErrc::SyntaxError, "rule \"" + r.name + "\" concludes '" + c.attr + "', which it also tests", line);
        }
    }
    return kb;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string render_value(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
    return std::get<Rational>(v).str();
}

void comments_to(std::string& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out += c.empty() ? "REM\n" : "REM " + c + "\n";
}

}  // namespace

std::string serialize_kb(const KnowledgeBase& kb) {
    std::string out;
    comments_to(out, kb.header_comments);
    if (!kb.title.empty()) out += "TITLE " + quote(kb.title) + "\n";
    out += "MINCF " + std::to_string(kb.min_cf) + "\n";

    if (!kb.translations.empty()) out += "\n";
    for (const auto& t : kb.translations) {
        comments_to(out, t.comments);
        out += "TRANSLATE " + t.key + " = " + quote(t.text) + "\n";
    }

    if (!kb.attributes.empty()) out += "\n";
    for (const auto& a : kb.attributes) {
        comments_to(out, a.comments);
        out += "ATTRIBUTE " + a.name + " TYPE " + std::string(prompt_type_name(a.type));
        if (!a.prompt.empty()) out += " PROMPT " + quote(a.prompt);
        if (!a.choices.empty()) {
            out += " CHOICES";
            for (const auto& c : a.choices) out += " " + quote(c);
        }
        if (a.default_value) out += " DEFAULT " + render_value(*a.default_value);
        out += "\n";
    }

    if (!kb.goals.empty()) out += "\n";
    for (const auto& g : kb.goals) out += "GOAL " + g + "\n";

    if (!kb.rules.empty()) out += "\n";
    for (const auto& r : kb.rules) {
        comments_to(out, r.comments);
        out += "RULE " + quote(r.name) + " IF";
        for (std::size_t i = 0; i < r.premises.size(); ++i) {
            const auto& p = r.premises[i];
            out += (i ? " AND " : " ") + p.attr + " " + std::string(op_symbol(p.op)) + " " + render_value(p.value);
        }
        out += " THEN";
        for (std::size_t i = 0; i < r.conclusions.size(); ++i) {
            const auto& c = r.conclusions[i];
            out += (i ? " AND " : " ") + c.attr + " = " + render_value(c.value) + " CF " + std::to_string(c.cf);
        }
        out += "\n";
    }
    if (!kb.trailing_comments.empty()) out += "\n";
    comments_to(out, kb.trailing_comments);
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool is_attribute_name(std::string_view n) {
    if (n.empty() || n == "AND" || n == "THEN" || n == "IF" || n == "CF") return false;
    for (char c : n)
        if (c == ' ' || c == '\t' || c == '"' || c == '=' || c == '<' || c == '>' || c == '!' || c == '\n' || c == '\r')
            return false;
    return n.find(kNotEqualSign) == std::string_view::npos;
}

}  // namespace

std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb) {
    std::vector<Diagnostic> out;
    auto add = [&](DiagKind k, const std::string& subject, std::string message) {
        out.push_back({k, subject, std::move(message)});
    };

    if (kb.min_cf < 1 || kb.min_cf > 100) add(DiagKind::Malformed, "MINCF", "MINCF " + std::to_string(kb.min_cf) + " outside [1, 100]");
    if (kb.goals.empty()) add(DiagKind::Malformed, "GOAL", "no goal attribute");

    std::set<std::string> attr_names;
    for (const auto& a : kb.attributes) {
        if (!is_attribute_name(a.name)) add(DiagKind::Malformed, a.name, "'" + a.name + "' is not a usable attribute name");
        if (!attr_names.insert(a.name).second) add(DiagKind::Malformed, a.name, "attribute declared twice");
        if (is_choice_like(a.type) && a.askable() && a.choices.size() < 2)
            add(DiagKind::Malformed, a.name, "a prompted choice attribute needs at least two choices");
        if (!is_choice_like(a.type) && !a.choices.empty())
            add(DiagKind::Malformed, a.name, std::string(prompt_type_name(a.type)) + " attributes take no CHOICES");
        if (a.default_value) {
            bool numeric = std::holds_alternative<Rational>(*a.default_value);
            if (numeric != (a.type == PromptType::Numeric)) add(DiagKind::Malformed, a.name, "DEFAULT has the wrong value kind");
            else if (!numeric) {
                auto allowed = a.allowed_values();
                if (std::find(allowed.begin(), allowed.end(), value_str(*a.default_value)) == allowed.end())
                    add(DiagKind::Malformed, a.name, "DEFAULT '" + value_str(*a.default_value) + "' is not a declared value");
            }
        }
    }
    for (const auto& g : kb.goals)
        if (!attr_names.contains(g)) add(DiagKind::Malformed, g, "goal is not a declared attribute");

    // values each attribute can take: declared ones, or for unprompted
    // attributes without a list, whatever rules conclude
    std::map<std::string, std::set<std::string>> reachable_values;
    for (const auto& r : kb.rules)
        for (const auto& c : r.conclusions) reachable_values[c.attr].insert(value_str(c.value));

    std::set<std::string> rule_names;
    for (const auto& r : kb.rules) {
        if (!rule_names.insert(r.name).second) add(DiagKind::DuplicateRuleName, r.name, "rule name used more than once");
        if (r.premises.empty()) add(DiagKind::Malformed, r.name, "rule has no premises");
        if (r.conclusions.empty()) add(DiagKind::Malformed, r.name, "rule has no conclusions");
        for (const auto& c : r.conclusions) {
            const auto* a = kb.find_attribute(c.attr);
            if (!a) {
                add(DiagKind::Malformed, r.name, "conclusion on undeclared attribute '" + c.attr + "'");
                continue;
            }
            if (c.cf < 0 || c.cf > 100) add(DiagKind::Malformed, r.name, "CF " + std::to_string(c.cf) + " outside [0, 100]");
            if (std::holds_alternative<Rational>(c.value) != (a->type == PromptType::Numeric))
                add(DiagKind::Malformed, r.name, "conclusion value kind does not match '" + c.attr + "'");
            else if (a->type != PromptType::Numeric && (a->type == PromptType::YesNo || !a->choices.empty())) {
                auto allowed = a->allowed_values();
                if (std::find(allowed.begin(), allowed.end(), value_str(c.value)) == allowed.end())
                    add(DiagKind::Malformed, r.name, "concludes undeclared value '" + value_str(c.value) + "' for '" + c.attr + "'");
            }
            if (std::any_of(r.premises.begin(), r.premises.end(), [&](const Premise& p) { return p.attr == c.attr; }))
                add(DiagKind::Malformed, r.name, "rule concludes '" + c.attr + "', which it also tests");
        }
        for (const auto& p : r.premises) {
            const auto* a = kb.find_attribute(p.attr);
            if (!a) {
                add(DiagKind::Malformed, r.name, "premise on undeclared attribute '" + p.attr + "'");
                continue;
            }
            bool numeric_value = std::holds_alternative<Rational>(p.value);
            if (numeric_value != (a->type == PromptType::Numeric)) {
                add(DiagKind::Malformed, r.name, "premise value kind does not match '" + p.attr + "'");
                continue;
            }
            if ((p.op == Op::Lt || p.op == Op::Gt) && a->type != PromptType::Numeric) {
                add(DiagKind::Malformed, r.name, "'<' and '>' need a Numeric attribute");
                continue;
            }
            if (numeric_value) {
                if (!a->askable() && !reachable_values.contains(p.attr) && !a->default_value)
                    add(DiagKind::DeadRule, r.name, "'" + p.attr + "' can neither be asked nor derived");
                continue;
            }
            auto v = value_str(p.value);
            bool declared_list = a->type == PromptType::YesNo || !a->choices.empty();
            if (declared_list) {
                auto allowed = a->allowed_values();
                if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
                    add(DiagKind::DeadRule, r.name, "'" + v + "' is not a declared value of '" + p.attr + "'");
                    continue;
                }
            }
            if (!a->askable()) {
                const auto& derivable = reachable_values[p.attr];
                bool by_default = a->default_value && value_str(*a->default_value) == v;
                if (p.op == Op::Eq && !derivable.contains(v) && !by_default)
                    add(DiagKind::DeadRule, r.name, "no rule derives '" + p.attr + "' = '" + v + "' and it is never asked");
                else if (derivable.empty() && !a->default_value)
                    add(DiagKind::DeadRule, r.name, "'" + p.attr + "' can neither be asked nor derived");
            }
        }
    }

    for (const auto& g : kb.goals)
        if (attr_names.contains(g) &&
            std::none_of(kb.rules.begin(), kb.rules.end(), [&](const RuleDef& r) { return r.concludes(g); }))
            add(DiagKind::UnreachableGoal, g, "no rule concludes this goal");

    // derivation graph: premise attribute -> concluded attribute
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& r : kb.rules)
        for (const auto& p : r.premises)
            for (const auto& c : r.conclusions) edges[p.attr].insert(c.attr);
    std::map<std::string, int> colour;  // 0 unseen, 1 on stack, 2 done
    std::vector<std::string> stack;
    std::function<void(const std::string&)> visit = [&](const std::string& a) {
        colour[a] = 1;
        stack.push_back(a);
        for (const auto& b : edges[a]) {
            if (colour[b] == 1) {
                auto from = std::find(stack.begin(), stack.end(), b);
                std::string path;
                for (auto it = from; it != stack.end(); ++it) path += *it + " -> ";
                add(DiagKind::CycleWarning, b, "derivation cycle " + path + b);
            } else if (colour[b] == 0) {
                visit(b);
            }
        }
        stack.pop_back();
        colour[a] = 2;
    };
    for (const auto& a : kb.attributes)
        if (colour[a.name] == 0) visit(a.name);

    return out;
}

std::vector<std::string> premise_closure(const KnowledgeBase& kb) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::vector<std::string> work(kb.goals.rbegin(), kb.goals.rend());
    while (!work.empty()) {
        auto a = work.back();
        work.pop_back();
        if (!seen.insert(a).second) continue;
        out.push_back(a);
        for (const auto& r : kb.rules)
            if (r.concludes(a))
                for (const auto& p : r.premises) work.push_back(p.attr);
    }
    return out;
}

}  // namespace mathforge::kb
