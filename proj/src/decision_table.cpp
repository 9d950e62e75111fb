#include "mathforge/eskb.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>

namespace mathforge::kb {

using nlohmann::json;

namespace {

[[noreturn]] void bad_table(const std::string& message) { throw KbError(KbErrc::BadTable, message); }

AttributeDef attribute_from_json(const json& j, bool needs_prompt) {
    AttributeDef a;
    a.name = j.at("name").get<std::string>();
    auto type = j.value("type", std::string(needs_prompt ? "YesNo" : "Choice"));
    auto t = prompt_type_from_name(type);
    if (!t) bad_table("unknown prompt type '" + type + "' for '" + a.name + "'");
    a.type = *t;
    a.prompt = j.value("prompt", std::string{});
    if (needs_prompt && a.prompt.empty()) bad_table("condition '" + a.name + "' has no prompt");
    if (j.contains("choices")) a.choices = j.at("choices").get<std::vector<std::string>>();
    return a;
}

Op op_from_text(const std::string& s) {
    if (s == "=") return Op::Eq;
    if (s == "<") return Op::Lt;
    if (s == ">") return Op::Gt;
    if (s == "!=" || s == "<>" || s == "\xE2\x89\xA0") return Op::Ne;
    bad_table("unknown operator '" + s + "'");
}

Value cell_value(const json& v, const AttributeDef& a) {
    if (a.type == PromptType::Numeric) {
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_string()) {
            try {
                return Rational::parse(v.get<std::string>());
            } catch (const std::invalid_argument&) {
            }
        }
        bad_table("cell for Numeric '" + a.name + "' needs a number");
    }
    if (!v.is_string()) bad_table("cell for '" + a.name + "' needs a string");
    return v.get<std::string>();
}

}  // namespace

DecisionTable parse_decision_table(std::string_view json_text) {
    json j;
    try {
        j = json::parse(decode_text(json_text));
    } catch (const json::parse_error& e) {
        bad_table(std::string("decision table is not JSON: ") + e.what());
    }
    try {
        DecisionTable dt;
        dt.title = j.value("title", std::string{});
        dt.min_cf = j.value("min_cf", kDefaultMinCf);
        for (const auto& c : j.at("conditions")) dt.conditions.push_back({attribute_from_json(c, true)});
        for (const auto& a : j.at("actions")) dt.actions.push_back({attribute_from_json(a, false), a.value("goal", false)});
        for (const auto& r : j.at("rules")) {
            TableColumn col;
            col.name = r.value("name", std::string{});
            const auto& conds = r.at("conditions");
            const auto& acts = r.at("actions");
            if (conds.size() != dt.conditions.size() || acts.size() != dt.actions.size())
                bad_table("rule column '" + col.name + "' does not match the table's row counts");
            for (std::size_t i = 0; i < conds.size(); ++i) {
                const auto& cell = conds[i];
                const auto& attr = dt.conditions[i].attr;
                if (cell.is_null()) col.conditions.emplace_back();
                else if (cell.is_object())
                    col.conditions.push_back(ConditionCell{op_from_text(cell.at("op").get<std::string>()), cell_value(cell.at("value"), attr)});
                else col.conditions.push_back(ConditionCell{Op::Eq, cell_value(cell, attr)});
            }
            for (std::size_t i = 0; i < acts.size(); ++i) {
                const auto& cell = acts[i];
                const auto& attr = dt.actions[i].attr;
                if (cell.is_null()) col.actions.emplace_back();
                else if (cell.is_object())
                    col.actions.push_back(ActionCell{cell_value(cell.at("value"), attr), cell.value("cf", 100)});
                else col.actions.push_back(ActionCell{cell_value(cell, attr), 100});
            }
            dt.columns.push_back(std::move(col));
        }
        return dt;
    } catch (const json::exception& e) {
        bad_table(std::string("malformed decision table: ") + e.what());
    }
}

KnowledgeBase table_to_rules(const DecisionTable& dt) {
    if (std::none_of(dt.actions.begin(), dt.actions.end(), [](const TableAction& a) { return a.goal; }))
        throw KbError(KbErrc::NoGoalAction, "no action row is marked as a goal");

    KnowledgeBase kb;
    kb.title = dt.title;
    kb.min_cf = dt.min_cf;
    std::set<std::string> names;
    for (const auto& c : dt.conditions) {
        if (!names.insert(c.attr.name).second) bad_table("row name '" + c.attr.name + "' used twice");
        kb.attributes.push_back(c.attr);
    }
    for (const auto& a : dt.actions) {
        if (!names.insert(a.attr.name).second) bad_table("row name '" + a.attr.name + "' used twice");
        auto def = a.attr;
        if (def.type != PromptType::Numeric && def.type != PromptType::YesNo && def.choices.empty()) {
            // action value lists may be left implicit: collect them from the cells
            auto row = static_cast<std::size_t>(&a - dt.actions.data());
            for (const auto& col : dt.columns)
                if (row < col.actions.size() && col.actions[row]) {
                    auto v = value_str(col.actions[row]->value);
                    if (std::find(def.choices.begin(), def.choices.end(), v) == def.choices.end()) def.choices.push_back(v);
                }
        }
        kb.attributes.push_back(std::move(def));
        if (a.goal) kb.goals.push_back(a.attr.name);
    }

    for (std::size_t k = 0; k < dt.columns.size(); ++k) {
        const auto& col = dt.columns[k];
        RuleDef r;
        if (col.name.empty()) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%02zu", k + 1);
            r.name = buf;
        } else {
            r.name = col.name;
        }
        if (col.conditions.size() != dt.conditions.size() || col.actions.size() != dt.actions.size())
            bad_table("rule column '" + r.name + "' does not match the table's row counts");
        for (std::size_t i = 0; i < col.conditions.size(); ++i)
            if (col.conditions[i]) r.premises.push_back({dt.conditions[i].attr.name, col.conditions[i]->op, col.conditions[i]->value});
        for (std::size_t i = 0; i < col.actions.size(); ++i)
            if (col.actions[i]) r.conclusions.push_back({dt.actions[i].attr.name, col.actions[i]->value, col.actions[i]->cf});
        if (r.premises.empty() || r.conclusions.empty())
            throw KbError(KbErrc::EmptyColumn, "rule column '" + r.name + "' needs at least one condition and one action");
        kb.rules.push_back(std::move(r));
    }

    auto diags = validate_kb(kb);
    if (!diags.empty()) {
        std::string message = "compiled rules do not validate";
        for (const auto& d : diags) message += std::string("; ") + to_string(d.kind) + " '" + d.subject + "': " + d.message;
        bad_table(message);
    }
    return kb;
}

}  // namespace mathforge::kb
