#pragma once

#include "mathforge/eskb.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mathforge::es {

/// Exact certainty-factor combination for two sources: a + b(100 - a)/100.
Rational combine_cf(const Rational& a, const Rational& b);

/// Integer-percent form of combine_cf, rounded half-up.
int combine_cf(int a, int b);

/// Rounds an exact cf to the integer percent shown to users.
int display_cf(const Rational& cf);

struct CFValue {
    kb::Value value;
    Rational cf{100};
    friend bool operator==(const CFValue&, const CFValue&) = default;
};

/// The universal "Не знаю" reply.
struct NoResponse {};

enum class Status { InProgress, Concluded, Undeterminable };

const char* to_string(Status s);

struct CfOption {
    int percent;
    std::string label;
};

struct Question {
    std::string attr;
    std::string prompt;
    kb::PromptType type;
    std::vector<std::string> choices;        // machine values; yes/no for YesNo, empty for Numeric
    std::vector<std::string> choice_labels;  // what the user sees
    bool allow_no_response = false;          // MultChoice's own "cannot answer" option
    std::vector<CfOption> cf_options;
    std::string no_response_label;
};

enum class TraceKind { RuleTried, RuleFired, RuleFailed, Asked, Answered, NoAnswer, Defaulted, GoalConcluded };

const char* to_string(TraceKind k);

struct TraceEvent {
    TraceKind kind;
    std::string rule;
    std::string attr;
    std::optional<kb::Value> value;
    Rational cf;
    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct ConclusionResult {
    std::string goal;
    std::optional<std::string> value;  // empty when nothing was derived
    int cf = 0;
    bool accepted = false;
    friend bool operator==(const ConclusionResult&, const ConclusionResult&) = default;
};

enum class EngineErrc { InvalidKB, NotPending, WrongAttribute, BadValue, BadCF, NotFinished };

const char* to_string(EngineErrc c);

class EngineError : public std::runtime_error {
public:
    EngineError(EngineErrc code, const std::string& message) : std::runtime_error(message), code_(code) {}
    EngineErrc code() const { return code_; }

private:
    EngineErrc code_;
};

/// How an attribute got its values.
enum class Source { Unknown, Input, NoResponse, Defaulted, Derived };

/// One consultation: resumable backward chaining over an immutable KB.
class Session {
public:
    /// Throws InvalidKB for malformed or cyclic KBs; unreachable goals and
    /// dead rules are tolerated and simply fail to conclude.
    static Session start(std::shared_ptr<const kb::KnowledgeBase> kb);

    const kb::KnowledgeBase& kb() const { return *kb_; }
    std::shared_ptr<const kb::KnowledgeBase> kb_ptr() const { return kb_; }
    Status status() const { return status_; }
    const std::optional<Question>& pending() const { return pending_; }
    const std::vector<TraceEvent>& trace() const { return trace_; }

    void answer(std::string_view attr, std::vector<CFValue> values);
    void answer(std::string_view attr, NoResponse);

    /// One entry per derived goal value, or one empty entry for a goal
    /// with nothing derived; goals in declaration order.
    std::vector<ConclusionResult> conclusions() const;

    /// The rule under trial that needs the pending attribute.
    std::string why_ask() const;

    /// Results, fired rules, inputs and defaults for every goal.
    std::string explain() const;

    void restart();

    const std::vector<CFValue>& values_of(std::string_view attr) const;
    Source source_of(std::string_view attr) const;

private:
    enum class RuleState { Untried, Tried, Fired, Failed };
    enum class Eval { Done, Pending };

    struct AttrState {
        std::vector<CFValue> values;
        Source source = Source::Unknown;
        bool determined = false;
        bool asked = false;
    };

    explicit Session(std::shared_ptr<const kb::KnowledgeBase> kb);

    void run();
    bool determine(const std::string& attr);
    Eval evaluate(std::size_t rule);
    std::optional<Rational> premise_cf(const kb::Premise& p) const;
    void add_value(const std::string& attr, const kb::Value& v, const Rational& cf);
    Question make_question(const kb::AttributeDef& a) const;
    void check_pending(std::string_view attr) const;
    void resume();

    std::string show_value(const std::string& attr, const kb::Value& v) const;
    std::string show_rule(const kb::RuleDef& r) const;
    std::string with_cf(const Rational& cf) const;
    void explain_attr(const std::string& attr, std::vector<std::string>& lines, std::vector<std::string>& seen) const;

    std::shared_ptr<const kb::KnowledgeBase> kb_;
    std::map<std::string, AttrState, std::less<>> memory_;
    std::vector<RuleState> rule_state_;
    std::vector<Rational> fired_cf_;  // min premise cf of each fired rule
    std::vector<std::pair<std::size_t, std::string>> stack_;  // (rule, attribute it serves)
    std::vector<std::pair<std::size_t, std::string>> why_;    // snapshot at the pending question
    std::optional<Question> pending_;
    Status status_ = Status::InProgress;
    std::vector<TraceEvent> trace_;
};

}  // namespace mathforge::es
