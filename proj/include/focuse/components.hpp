#pragma once

// Assumption/guarantee components evaluated one interval at a time.
//
// Transitions are tried in declaration order and the first matching guard
// fires. A state variable the fired transition does not update keeps its
// value; an output channel it does not mention carries the empty list.
// When nothing fires the whole step defaults: state kept, outputs empty.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "focuse/causality.hpp"
#include "focuse/diagnostic.hpp"
#include "focuse/streams.hpp"

namespace focuse {

using Value = std::variant<std::int64_t, Message>;

std::string to_string(const Value& v);

enum class ValueType { Int, Msg };

struct Expr {
    enum class Kind { Int, Msg, Var, Len, Add, Sub };

    Kind kind = Kind::Int;
    std::int64_t int_value = 0;
    std::optional<Message> message;  // Kind::Msg
    std::string name;                // Var: variable; Len: channel
    std::vector<Expr> args;          // Add/Sub: lhs, rhs
    SourceSpan span;

    static Expr integer(std::int64_t v);
    static Expr msg(Message m);
    static Expr var(std::string name);
    static Expr len(std::string channel);
    static Expr add(Expr lhs, Expr rhs);
    static Expr sub(Expr lhs, Expr rhs);

    bool operator==(const Expr& o) const;
};

struct Pattern {
    enum class Kind { Empty, Single, Any, Literal };

    Kind kind = Kind::Any;
    std::string binder;   // Single: "_" binds nothing
    MessageList literal;  // Literal

    bool operator==(const Pattern&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(CompareOp op);

struct Condition {
    enum class Kind { True, False, Match, Compare, Not, And, Or };

    Kind kind = Kind::True;
    std::string channel;  // Match
    Pattern pattern;      // Match
    CompareOp op = CompareOp::Eq;
    std::vector<Expr> terms;          // Compare: lhs, rhs
    std::vector<Condition> operands;  // Not: one; And/Or: two
    SourceSpan span;

    static Condition always();
    static Condition never();
    static Condition match(std::string channel, Pattern p);
    static Condition compare(Expr lhs, CompareOp op, Expr rhs);
    static Condition negate(Condition c);
    static Condition conj(Condition lhs, Condition rhs);
    static Condition disj(Condition lhs, Condition rhs);

    bool operator==(const Condition& o) const;
};

// One piece of an output list: either explicit elements or the current
// interval of an input channel.
struct ListTerm {
    bool is_channel = false;
    std::string channel;
    std::vector<Expr> elements;
    SourceSpan span;

    bool operator==(const ListTerm& o) const;
};

struct OutputAssign {
    std::string channel;
    std::vector<ListTerm> terms;  // concatenated
    SourceSpan span;

    bool operator==(const OutputAssign& o) const;
};

struct UpdateAssign {
    std::string var;
    Expr value;
    SourceSpan span;

    bool operator==(const UpdateAssign& o) const;
};

struct Transition {
    std::vector<Condition> guard;  // conjunction of Match / Compare / True atoms
    std::vector<OutputAssign> outputs;
    std::vector<UpdateAssign> updates;
    SourceSpan span;

    bool operator==(const Transition& o) const;
};

struct Declared {
    std::string name;
    SourceSpan span;

    bool operator==(const Declared& o) const { return name == o.name; }
};

struct StateVar {
    std::string name;
    Value initial;
    SourceSpan span;

    bool operator==(const StateVar& o) const { return name == o.name && initial == o.initial; }
};

struct ComponentSpec {
    std::string name;
    std::vector<Declared> inputs;
    std::vector<Declared> outputs;
    std::vector<StateVar> state;
    Condition assumption = Condition::always();
    // Causality properties over the component's own channel names.
    std::vector<Property> guarantees;
    std::vector<Transition> transitions;
    SourceSpan span;

    bool operator==(const ComponentSpec& o) const;

    bool is_input(std::string_view channel) const;
    bool is_output(std::string_view channel) const;
    const StateVar* find_state(std::string_view var) const;
    std::map<std::string, Value> initial_state() const;
};

using VarMap = std::map<std::string, Value>;
using ChannelMap = std::map<std::string, MessageList>;

struct StepOptions {
    // Reject steps where more than one guard matches.
    bool strict = false;
};

struct StepResult {
    VarMap state;
    ChannelMap outputs;  // total over declared outputs
    std::optional<std::size_t> fired;
    bool assumption_violated = false;
};

StepResult step(const ComponentSpec& c, const VarMap& state, const ChannelMap& inputs,
                StepOptions options = {});

struct RunResult {
    std::map<std::string, TimedStream> outputs;
    std::vector<VarMap> states;  // T + 1 entries, initial state first
    std::vector<std::optional<std::size_t>> fired;
    std::vector<std::size_t> violations;
};

RunResult run(const ComponentSpec& c, const std::map<std::string, TimedStream>& inputs,
              std::size_t intervals, StepOptions options = {});

// Load-time checks: duplicate or reserved names, unbound variables,
// undeclared channels, writes to inputs, type mismatches, unreachable
// transitions, empty transition lists.
std::vector<Diagnostic> validate(const ComponentSpec& c);

struct GuaranteeResult {
    Verdict verdict;
    // True when an assumption violation released the component from the
    // guarantee at the point the property failed.
    bool vacuous = false;

    bool failed() const { return !verdict.holds && !vacuous; }
};

// Checks each declared guarantee over the recorded channel streams. Failures
// located at or after the first assumption violation are reported vacuous.
std::vector<GuaranteeResult> check_guarantees(const ComponentSpec& c,
                                              const std::map<std::string, TimedStream>& streams,
                                              const std::vector<std::size_t>& violations);

}  // namespace focuse
