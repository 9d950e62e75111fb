#include "mathforge/consult.hpp"

#include <boost/algorithm/string.hpp>

#include <algorithm>

#include <istream>
#include <ostream>

namespace mathforge::es {

namespace {

void print_question(const Session& s, std::ostream& out) {
    const auto& q = *s.pending();
    const auto& kb = s.kb();
    out << "[" << q.attr << "] " << (q.prompt.empty() ? q.attr : q.prompt) << "\n";
    if (q.choices.empty()) out << "  (" << kb::prompt_type_name(q.type) << ")\n";
    for (std::size_t i = 0; i < q.choice_labels.size(); ++i) out << "  " << i + 1 << ". " << q.choice_labels[i] << "\n";
    out << "  0. " << q.no_response_label << "\n";
    out << "  " << kb.translate("TR_HOWCONF");
    for (std::size_t i = 0; i < q.cf_options.size(); ++i) out << (i ? " / " : " ") << q.cf_options[i].label;
    out << "\n";
}

kb::Value parse_item(const Question& q, const std::string& item) {
    if (q.choices.empty()) return item;  // Numeric: the engine parses the number
    if (!item.empty() && std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        auto k = std::stoul(item);
        if (k >= 1 && k <= q.choices.size()) return q.choices[k - 1];
    }
    for (std::size_t i = 0; i < q.choices.size(); ++i)
        if (item == q.choice_labels[i]) return q.choices[i];
    return item;
}

}  // namespace

Status run_consult(std::shared_ptr<const kb::KnowledgeBase> kbp, std::istream& in, std::ostream& out) {
    auto s = Session::start(std::move(kbp));
    if (!s.kb().title.empty()) out << s.kb().translate("TR_KB") << " " << s.kb().title << "\n\n";
    std::string line;
    while (s.status() == Status::InProgress) {
        print_question(s, out);
        if (!std::getline(in, line)) return Status::InProgress;
        boost::trim(line);
        out << "> " << line << "\n";
        const auto& q = *s.pending();
        try {
            if (line == "?") {
                out << s.why_ask() << "\n";
                continue;
            }
            if (line == "!") {
                s.restart();
                out << "\n";
                continue;
            }
            if (line.empty() || line == "0" || line == q.no_response_label) {
                s.answer(q.attr, NoResponse{});
                out << "\n";
                continue;
            }
            Rational cf(100);
            if (auto at = line.rfind('@'); at != std::string::npos) {
                cf = Rational::parse(boost::trim_copy(line.substr(at + 1)));
                line = boost::trim_copy(line.substr(0, at));
            }
            std::vector<std::string> items;
            boost::split(items, line, boost::is_any_of(";"));
            std::vector<CFValue> values;
            for (auto& item : items) values.push_back({parse_item(q, boost::trim_copy(item)), cf});
            s.answer(q.attr, std::move(values));
        } catch (const EngineError& e) {
            out << "! " << e.what() << "\n";
        } catch (const std::invalid_argument& e) {
            out << "! " << e.what() << "\n";
        }
        out << "\n";
    }
    out << s.explain();
    return s.status();
}

}  // namespace mathforge::es
