#pragma once

#include "mathforge/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mathforge::kb {

enum class PromptType { YesNo, MultChoice, ForcedChoice, Choice, AllChoice, Numeric };

inline constexpr PromptType kAllPromptTypes[] = {PromptType::YesNo,  PromptType::MultChoice, PromptType::ForcedChoice,
                                                 PromptType::Choice, PromptType::AllChoice,  PromptType::Numeric};

std::string_view prompt_type_name(PromptType t);
std::optional<PromptType> prompt_type_from_name(std::string_view name);

/// Types answered by picking from a declared list.
bool is_choice_like(PromptType t);

/// A premise or conclusion value: text, or an exact number for Numeric attributes.
using Value = std::variant<std::string, Rational>;

std::string value_str(const Value& v);

inline constexpr std::string_view kYes = "yes";
inline constexpr std::string_view kNo = "no";

struct AttributeDef {
    std::string name;
    PromptType type = PromptType::YesNo;
    std::string prompt;  // empty: derived only, never asked
    std::vector<std::string> choices;
    std::optional<Value> default_value;  // applied at cf 100 on NoResponse
    std::vector<std::string> comments;

    bool askable() const { return !prompt.empty(); }
    /// Declared choices, or yes/no for YesNo; empty for Numeric.
    std::vector<std::string> allowed_values() const;

    friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

enum class Op { Eq, Lt, Gt, Ne };

std::string_view op_symbol(Op op);

struct Premise {
    std::string attr;
    Op op = Op::Eq;
    Value value;
    friend bool operator==(const Premise&, const Premise&) = default;
};

struct Conclusion {
    std::string attr;
    Value value;
    int cf = 100;
    friend bool operator==(const Conclusion&, const Conclusion&) = default;
};

struct RuleDef {
    std::string name;
    std::vector<Premise> premises;
    std::vector<Conclusion> conclusions;
    std::vector<std::string> comments;

    bool concludes(std::string_view attr) const;

    friend bool operator==(const RuleDef&, const RuleDef&) = default;
};

struct Translation {
    std::string key;
    std::string text;
    std::vector<std::string> comments;
    friend bool operator==(const Translation&, const Translation&) = default;
};

inline constexpr int kDefaultMinCf = 80;

struct KnowledgeBase {
    std::string title;
    int min_cf = kDefaultMinCf;
    std::vector<Translation> translations;  // file order
    std::vector<AttributeDef> attributes;   // declaration order
    std::vector<std::string> goals;
    std::vector<RuleDef> rules;             // evaluation order
    std::vector<std::string> header_comments;
    std::vector<std::string> trailing_comments;

    const AttributeDef* find_attribute(std::string_view name) const;
    const RuleDef* find_rule(std::string_view name) const;
    bool is_goal(std::string_view name) const;

    /// The KB's TRANSLATE entry for key, falling back to the default table.
    std::string translate(std::string_view key) const;

    friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

/// The default Ukrainian interface strings (the REM/TRANSLATE block shipped
/// as data/translations/uk.txt).
const std::vector<Translation>& default_translations();
std::string_view default_translations_source();

enum class KbErrc { EncodingError, SyntaxError, UndeclaredAttribute, BadCF, BadTable, EmptyColumn, NoGoalAction };

const char* to_string(KbErrc c);

class KbError : public std::runtime_error {
public:
    KbError(KbErrc code, const std::string& message, std::size_t line = 0);
    KbErrc code() const { return code_; }
    /// 1-based source line, 0 when not tied to a line.
    std::size_t line() const { return line_; }

private:
    KbErrc code_;
    std::size_t line_;
};

/// Decodes UTF-8 (optionally with BOM), or UTF-16LE/BE with BOM, to UTF-8.
std::string decode_text(std::string_view bytes);

KnowledgeBase parse_kb(std::string_view bytes);

/// Canonical UTF-8 text; parse_kb(serialize_kb(kb)) == kb.
std::string serialize_kb(const KnowledgeBase& kb);

std::string encode_utf16le(std::string_view utf8);

enum class DiagKind { Malformed, UnreachableGoal, DeadRule, DuplicateRuleName, CycleWarning };

const char* to_string(DiagKind k);

struct Diagnostic {
    DiagKind kind;
    std::string subject;  // rule name or attribute name
    std::string message;
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Empty iff the KB is fit for consultation.
std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb);

/// Attributes a consultation may need: the goals plus every premise
/// attribute of rules that conclude something in the set, transitively.
std::vector<std::string> premise_closure(const KnowledgeBase& kb);

struct TableCondition {
    AttributeDef attr;
};

struct TableAction {
    AttributeDef attr;
    bool goal = false;
};

struct ConditionCell {
    Op op = Op::Eq;
    Value value;
};

struct ActionCell {
    Value value;
    int cf = 100;
};

struct TableColumn {
    std::string name;  // empty: two-digit column number
    std::vector<std::optional<ConditionCell>> conditions;
    std::vector<std::optional<ActionCell>> actions;
};

struct DecisionTable {
    std::string title;
    int min_cf = kDefaultMinCf;
    std::vector<TableCondition> conditions;
    std::vector<TableAction> actions;
    std::vector<TableColumn> columns;
};

/// Reads the .dt JSON interchange format.
DecisionTable parse_decision_table(std::string_view json_text);

/// One rule per column, left to right. The result passes validate_kb.
KnowledgeBase table_to_rules(const DecisionTable& dt);

}  // namespace mathforge::kb
