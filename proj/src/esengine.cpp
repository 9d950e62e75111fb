#include "mathforge/esengine.hpp"

#include <algorithm>
#include <set>

namespace mathforge::es {

using kb::AttributeDef;
using kb::Op;
using kb::PromptType;
using kb::RuleDef;
using kb::Value;

Rational combine_cf(const Rational& a, const Rational& b) { return a + b * (Rational(100) - a) / Rational(100); }

int combine_cf(int a, int b) { return display_cf(combine_cf(Rational(a), Rational(b))); }

int display_cf(const Rational& cf) { return static_cast<int>(cf.round_half_up()); }

const char* to_string(Status s) {
    switch (s) {
        case Status::InProgress: return "InProgress";
        case Status::Concluded: return "Concluded";
        case Status::Undeterminable: return "Undeterminable";
    }
    return "?";
}

const char* to_string(TraceKind k) {
    switch (k) {
        case TraceKind::RuleTried: return "RuleTried";
        case TraceKind::RuleFired: return "RuleFired";
        case TraceKind::RuleFailed: return "RuleFailed";
        case TraceKind::Asked: return "Asked";
        case TraceKind::Answered: return "Answered";
        case TraceKind::NoAnswer: return "NoAnswer";
        case TraceKind::Defaulted: return "Defaulted";
        case TraceKind::GoalConcluded: return "GoalConcluded";
    }
    return "?";
}

const char* to_string(EngineErrc c) {
    switch (c) {
        case EngineErrc::InvalidKB: return "InvalidKB";
        case EngineErrc::NotPending: return "NotPending";
        case EngineErrc::WrongAttribute: return "WrongAttribute";
        case EngineErrc::BadValue: return "BadValue";
        case EngineErrc::BadCF: return "BadCF";
        case EngineErrc::NotFinished: return "NotFinished";
    }
    return "?";
}

Session::Session(std::shared_ptr<const kb::KnowledgeBase> kb) : kb_(std::move(kb)) {
    rule_state_.assign(kb_->rules.size(), RuleState::Untried);
    fired_cf_.assign(kb_->rules.size(), Rational(0));
}

Session Session::start(std::shared_ptr<const kb::KnowledgeBase> kb) {
    if (!kb) throw EngineError(EngineErrc::InvalidKB, "no knowledge base");
    for (const auto& d : kb::validate_kb(*kb))
        if (d.kind == kb::DiagKind::Malformed || d.kind == kb::DiagKind::CycleWarning)
            throw EngineError(EngineErrc::InvalidKB, std::string(kb::to_string(d.kind)) + " '" + d.subject + "': " + d.message);
    Session s(std::move(kb));
    s.run();
    return s;
}

void Session::restart() {
    Session fresh(kb_);
    fresh.run();
    *this = std::move(fresh);
}

const std::vector<CFValue>& Session::values_of(std::string_view attr) const {
    static const std::vector<CFValue> none;
    auto it = memory_.find(attr);
    return it == memory_.end() ? none : it->second.values;
}

Source Session::source_of(std::string_view attr) const {
    auto it = memory_.find(attr);
    return it == memory_.end() ? Source::Unknown : it->second.source;
}

// ---------------------------------------------------------------------------
// Chaining

void Session::run() {
    pending_.reset();
    stack_.clear();
    for (const auto& g : kb_->goals) {
        if (!determine(g)) {
            status_ = Status::InProgress;
            return;
        }
    }
    bool any = false;
    for (const auto& c : conclusions()) {
        if (!c.accepted) continue;
        any = true;
        trace_.push_back({TraceKind::GoalConcluded, "", c.goal, Value{*c.value}, Rational(c.cf)});
    }
    status_ = any ? Status::Concluded : Status::Undeterminable;
}

bool Session::determine(const std::string& attr) {
    auto& st = memory_[attr];
    if (st.determined) return true;
    for (std::size_t i = 0; i < kb_->rules.size(); ++i) {
        const auto& r = kb_->rules[i];
        if (!r.concludes(attr) || rule_state_[i] == RuleState::Fired || rule_state_[i] == RuleState::Failed) continue;
        if (rule_state_[i] == RuleState::Untried) {
            rule_state_[i] = RuleState::Tried;
            trace_.push_back({TraceKind::RuleTried, r.name, attr, {}, {}});
        }
        stack_.emplace_back(i, attr);
        if (evaluate(i) == Eval::Pending) return false;
        stack_.pop_back();
    }
    auto& state = memory_[attr];  // evaluate may have grown the map
    const auto* def = kb_->find_attribute(attr);
    if (!state.values.empty() || !def->askable()) {
        state.determined = true;
        if (state.source == Source::Unknown && !state.values.empty()) state.source = Source::Derived;
        return true;
    }
    if (!state.asked) {
        state.asked = true;
        trace_.push_back({TraceKind::Asked, "", attr, {}, {}});
    }
    pending_ = make_question(*def);
    why_ = stack_;
    return false;
}

Session::Eval Session::evaluate(std::size_t i) {
    const auto& r = kb_->rules[i];
    Rational weakest(100);
    for (const auto& p : r.premises) {
        if (!determine(p.attr)) return Eval::Pending;
        auto cf = premise_cf(p);
        if (!cf || cf->sign() <= 0) {
            rule_state_[i] = RuleState::Failed;
            trace_.push_back({TraceKind::RuleFailed, r.name, p.attr, {}, {}});
            return Eval::Done;
        }
        weakest = std::min(weakest, *cf);
    }
    rule_state_[i] = RuleState::Fired;
    fired_cf_[i] = weakest;
    for (const auto& c : r.conclusions) {
        auto cf = weakest * Rational(c.cf) / Rational(100);
        trace_.push_back({TraceKind::RuleFired, r.name, c.attr, c.value, cf});
        add_value(c.attr, c.value, cf);
    }
    return Eval::Done;
}

std::optional<Rational> Session::premise_cf(const kb::Premise& p) const {
    auto it = memory_.find(p.attr);
    if (it == memory_.end()) return std::nullopt;
    std::vector<const CFValue*> live;
    for (const auto& v : it->second.values)
        if (v.cf.sign() > 0) live.push_back(&v);
    if (live.empty()) return std::nullopt;
    switch (p.op) {
        case Op::Eq:
            for (const auto* v : live)
                if (v->value == p.value) return v->cf;
            return std::nullopt;
        case Op::Ne: {
            Rational best(0);
            for (const auto* v : live) {
                if (v->value == p.value) return std::nullopt;
                best = std::max(best, v->cf);
            }
            return best;
        }
        case Op::Lt:
        case Op::Gt: {
            const auto* bound = std::get_if<Rational>(&p.value);
            for (const auto* v : live) {
                const auto* x = std::get_if<Rational>(&v->value);
                if (bound && x && (p.op == Op::Lt ? *x < *bound : *x > *bound)) return v->cf;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

void Session::add_value(const std::string& attr, const Value& v, const Rational& cf) {
    auto& st = memory_[attr];
    for (auto& existing : st.values)
        if (existing.value == v) {
            existing.cf = combine_cf(existing.cf, cf);
            return;
        }
    st.values.push_back({v, cf});
}

Question Session::make_question(const AttributeDef& a) const {
    Question q;
    q.attr = a.name;
    q.prompt = a.prompt;
    q.type = a.type;
    if (a.type == PromptType::YesNo) {
        q.choices = {std::string(kb::kYes), std::string(kb::kNo)};
        q.choice_labels = {kb_->translate("TR_YES"), kb_->translate("TR_NO")};
    } else if (a.type != PromptType::Numeric) {
        q.choices = a.choices;
        q.choice_labels = a.choices;
    }
    q.allow_no_response = a.type == PromptType::MultChoice;
    q.cf_options = {{50, kb_->translate("TR_LOWCONF")}, {100, kb_->translate("TR_HICONF")}};
    q.no_response_label = kb_->translate("TR_NORESP");
    return q;
}

// ---------------------------------------------------------------------------
// Answers

void Session::check_pending(std::string_view attr) const {
    if (status_ != Status::InProgress || !pending_) throw EngineError(EngineErrc::NotPending, "no question is pending");
    if (pending_->attr != attr)
        throw EngineError(EngineErrc::WrongAttribute,
                          "the pending question is about '" + pending_->attr + "', not '" + std::string(attr) + "'");
}

void Session::answer(std::string_view attr, std::vector<CFValue> values) {
    check_pending(attr);
    const auto& def = *kb_->find_attribute(attr);
    if (values.empty()) throw EngineError(EngineErrc::BadValue, "no value given");
    if (values.size() > 1 && def.type != PromptType::AllChoice)
        throw EngineError(EngineErrc::BadValue, "'" + def.name + "' takes a single value");
    auto allowed = def.allowed_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto& v = values[i];
        if (v.cf.sign() < 0 || v.cf > Rational(100))
            throw EngineError(EngineErrc::BadCF, "confidence " + v.cf.str() + " outside [0, 100]");
        if (def.type == PromptType::Numeric) {
            if (const auto* s = std::get_if<std::string>(&v.value)) {
                try {
                    v.value = Rational::parse(*s);
                } catch (const std::invalid_argument&) {
                    throw EngineError(EngineErrc::BadValue, "'" + *s + "' is not a number");
                }
            }
        } else {
            const auto* s = std::get_if<std::string>(&v.value);
            if (!s || std::find(allowed.begin(), allowed.end(), *s) == allowed.end())
                throw EngineError(EngineErrc::BadValue, "'" + kb::value_str(v.value) + "' is not an allowed answer for '" + def.name + "'");
        }
        for (std::size_t j = 0; j < i; ++j)
            if (values[j].value == v.value) throw EngineError(EngineErrc::BadValue, "value given twice");
    }
    auto& st = memory_[std::string(attr)];
    for (const auto& v : values) {
        trace_.push_back({TraceKind::Answered, "", def.name, v.value, v.cf});
        st.values.push_back(v);
    }
    st.source = Source::Input;
    st.determined = true;
    resume();
}

void Session::answer(std::string_view attr, NoResponse) {
    check_pending(attr);
    const auto& def = *kb_->find_attribute(attr);
    auto& st = memory_[std::string(attr)];
    if (def.default_value) {
        st.values.push_back({*def.default_value, Rational(100)});
        st.source = Source::Defaulted;
        trace_.push_back({TraceKind::Defaulted, "", def.name, *def.default_value, Rational(100)});
    } else {
        st.source = Source::NoResponse;
        trace_.push_back({TraceKind::NoAnswer, "", def.name, {}, {}});
    }
    st.determined = true;
    resume();
}

void Session::resume() {
    why_.clear();
    run();
}

std::vector<ConclusionResult> Session::conclusions() const {
    std::vector<ConclusionResult> out;
    for (const auto& g : kb_->goals) {
        const auto& values = values_of(g);
        if (values.empty()) {
            out.push_back({g, std::nullopt, 0, false});
            continue;
        }
        for (const auto& v : values) {
            int cf = display_cf(v.cf);
            out.push_back({g, kb::value_str(v.value), cf, cf >= kb_->min_cf});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Texts

std::string Session::show_value(const std::string& attr, const Value& v) const {
    const auto* def = kb_->find_attribute(attr);
    if (def && def->type == PromptType::YesNo) {
        if (v == Value{std::string(kb::kYes)}) return kb_->translate("TR_YES");
        if (v == Value{std::string(kb::kNo)}) return kb_->translate("TR_NO");
    }
    return kb::value_str(v);
}

std::string Session::with_cf(const Rational& cf) const {
    return kb_->translate("TR_WITH") + " " + std::to_string(display_cf(cf)) + kb_->translate("TR_CONF");
}

std::string Session::show_rule(const RuleDef& r) const {
    auto op_text = [&](Op op) {
        switch (op) {
            case Op::Eq: return kb_->translate("TR_EQUAL");
            case Op::Lt: return kb_->translate("TR_LESSTHAN");
            case Op::Gt: return kb_->translate("TR_GREATER");
            case Op::Ne: return kb_->translate("TR_NOTEQUAL");
        }
        return std::string("=");
    };
    std::string s = kb_->translate("TR_RULE") + " " + r.name + "\n";
    for (std::size_t i = 0; i < r.premises.size(); ++i) {
        const auto& p = r.premises[i];
        s += (i ? kb_->translate("TR_AND") : kb_->translate("TR_IF")) + " " + p.attr + " " + op_text(p.op) + " " +
             show_value(p.attr, p.value) + "\n";
    }
    for (std::size_t i = 0; i < r.conclusions.size(); ++i) {
        const auto& c = r.conclusions[i];
        s += (i ? kb_->translate("TR_AND") : kb_->translate("TR_THEN")) + " " + c.attr + " " + kb_->translate("TR_EQUAL") +
             " " + show_value(c.attr, c.value) + " " + with_cf(Rational(c.cf)) + "\n";
    }
    return s;
}

std::string Session::why_ask() const {
    if (status_ != Status::InProgress || !pending_) throw EngineError(EngineErrc::NotPending, "no question is pending");
    const auto& tofind = kb_->translate("TR_TOFIND");
    const auto& avalue = kb_->translate("TR_AVALUE");
    if (why_.empty()) return tofind + " " + avalue + " " + pending_->attr + "\n";
    const auto& [rule, attr] = why_.back();
    return tofind + " " + avalue + " " + attr + " " + kb_->translate("TR_ISNEEDED") + "\n" + show_rule(kb_->rules[rule]);
}

void Session::explain_attr(const std::string& attr, std::vector<std::string>& lines, std::vector<std::string>& seen) const {
    if (std::find(seen.begin(), seen.end(), attr) != seen.end()) return;
    seen.push_back(attr);
    auto it = memory_.find(attr);
    const AttrState empty;
    const auto& st = it == memory_.end() ? empty : it->second;
    const auto& is = kb_->translate("TR_EQUAL");

    switch (st.source) {
        case Source::Input:
            for (const auto& v : st.values)
                lines.push_back(attr + " " + is + " " + show_value(attr, v.value) + " " + kb_->translate("TR_WASINPUT") +
                                std::to_string(display_cf(v.cf)) + kb_->translate("TR_CONF"));
            return;
        case Source::Defaulted:
            lines.push_back(attr + " " + kb_->translate("TR_DEFAULTED") + " " + show_value(attr, st.values.front().value));
            return;
        case Source::NoResponse:
            lines.push_back(attr + " " + kb_->translate("TR_NOTFOUND"));
            return;
        case Source::Unknown:
        case Source::Derived:
            break;
    }

    std::vector<std::string> premise_attrs;
    auto collect = [&](const RuleDef& r) {
        for (const auto& p : r.premises) {
            auto m = memory_.find(p.attr);
            if (m != memory_.end() && m->second.determined &&
                std::find(premise_attrs.begin(), premise_attrs.end(), p.attr) == premise_attrs.end())
                premise_attrs.push_back(p.attr);
        }
    };

    lines.push_back(kb_->translate("TR_VALUEFOR") + " " + attr);
    std::map<std::string, int> sources;
    for (std::size_t i = 0; i < kb_->rules.size(); ++i) {
        const auto& r = kb_->rules[i];
        if (!r.concludes(attr) || rule_state_[i] == RuleState::Untried) continue;
        collect(r);
        if (rule_state_[i] != RuleState::Fired) continue;
        auto text = show_rule(r);
        text.pop_back();
        lines.push_back(text);
        for (const auto& c : r.conclusions) {
            if (c.attr != attr) continue;
            auto cf = fired_cf_[i] * Rational(c.cf) / Rational(100);
            lines.push_back(kb_->translate("TR_DETERMINED") + " " + attr + " " + is + " " + show_value(attr, c.value) + " " + with_cf(cf));
            ++sources[kb::value_str(c.value)];
        }
    }
    if (st.values.empty()) lines.push_back(attr + " " + kb_->translate("TR_NOTFOUND"));
    for (const auto& v : st.values)
        if (sources[kb::value_str(v.value)] > 1)
            lines.push_back(kb_->translate("TR_HOWCF1") + " " + attr + " " + is + " " + show_value(attr, v.value) + ": " +
                            std::to_string(display_cf(v.cf)) + kb_->translate("TR_CONF"));
    for (const auto& p : premise_attrs) explain_attr(p, lines, seen);
}

std::string Session::explain() const {
    if (status_ == Status::InProgress) throw EngineError(EngineErrc::NotFinished, "the consultation is still in progress");
    std::vector<std::string> lines;
    lines.push_back(kb_->translate("TR_RESULTS"));
    for (const auto& g : kb_->goals) {
        bool any = false;
        for (const auto& c : conclusions()) {
            if (c.goal != g || !c.accepted) continue;
            any = true;
            lines.push_back(g + " " + kb_->translate("TR_ISRESULT") + " " + show_value(g, Value{*c.value}) + " " +
                            with_cf(Rational(c.cf)));
        }
        if (!any) lines.push_back(g + " " + kb_->translate("TR_EQUAL") + " " + kb_->translate("TR_NOTDETERMINED"));
    }
    lines.push_back(kb_->translate("TR_MINCF") + " " + std::to_string(kb_->min_cf));
    std::vector<std::string> seen;
    for (const auto& g : kb_->goals) {
        lines.emplace_back();
        explain_attr(g, lines, seen);
    }
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

}  // namespace mathforge::es
