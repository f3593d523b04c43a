#include "focuse/components.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "focuse/error.hpp"

namespace focuse {

std::string to_string(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    return "'" + to_string(std::get<Message>(v));
}

const char* to_string(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

Expr Expr::integer(std::int64_t v) {
    Expr e;
    e.kind = Kind::Int;
    e.int_value = v;
    return e;
}

Expr Expr::msg(Message m) {
    Expr e;
    e.kind = Kind::Msg;
    e.message = std::move(m);
    return e;
}

Expr Expr::var(std::string name) {
    Expr e;
    e.kind = Kind::Var;
    e.name = std::move(name);
    return e;
}

Expr Expr::len(std::string channel) {
    Expr e;
    e.kind = Kind::Len;
    e.name = std::move(channel);
    return e;
}

Expr Expr::add(Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Kind::Add;
    e.args = {std::move(lhs), std::move(rhs)};
    return e;
}

Expr Expr::sub(Expr lhs, Expr rhs) {
    Expr e = add(std::move(lhs), std::move(rhs));
    e.kind = Kind::Sub;
    return e;
}

bool Expr::operator==(const Expr& o) const {
    return kind == o.kind && int_value == o.int_value && message == o.message && name == o.name &&
           args == o.args;
}

Condition Condition::always() { return Condition{}; }

Condition Condition::never() {
    Condition c;
    c.kind = Kind::False;
    return c;
}

Condition Condition::match(std::string channel, Pattern p) {
    Condition c;
    c.kind = Kind::Match;
    c.channel = std::move(channel);
    c.pattern = std::move(p);
    return c;
}

Condition Condition::compare(Expr lhs, CompareOp op, Expr rhs) {
    Condition c;
    c.kind = Kind::Compare;
    c.op = op;
    c.terms = {std::move(lhs), std::move(rhs)};
    return c;
}

Condition Condition::negate(Condition operand) {
    Condition c;
    c.kind = Kind::Not;
    c.operands = {std::move(operand)};
    return c;
}

Condition Condition::conj(Condition lhs, Condition rhs) {
    Condition c;
    c.kind = Kind::And;
    c.operands = {std::move(lhs), std::move(rhs)};
    return c;
}

Condition Condition::disj(Condition lhs, Condition rhs) {
    Condition c = conj(std::move(lhs), std::move(rhs));
    c.kind = Kind::Or;
    return c;
}

bool Condition::operator==(const Condition& o) const {
    return kind == o.kind && channel == o.channel && pattern == o.pattern && op == o.op &&
           terms == o.terms && operands == o.operands;
}

bool ListTerm::operator==(const ListTerm& o) const {
    return is_channel == o.is_channel && channel == o.channel && elements == o.elements;
}

bool OutputAssign::operator==(const OutputAssign& o) const {
    return channel == o.channel && terms == o.terms;
}

bool UpdateAssign::operator==(const UpdateAssign& o) const {
    return var == o.var && value == o.value;
}

bool Transition::operator==(const Transition& o) const {
    return guard == o.guard && outputs == o.outputs && updates == o.updates;
}

bool ComponentSpec::operator==(const ComponentSpec& o) const {
    return name == o.name && inputs == o.inputs && outputs == o.outputs && state == o.state &&
           assumption == o.assumption && guarantees == o.guarantees &&
           transitions == o.transitions;
}

namespace {

bool declared(const std::vector<Declared>& list, std::string_view name) {
    return std::any_of(list.begin(), list.end(), [&](const Declared& d) { return d.name == name; });
}

}  // namespace

bool ComponentSpec::is_input(std::string_view channel) const { return declared(inputs, channel); }

bool ComponentSpec::is_output(std::string_view channel) const {
    return declared(outputs, channel);
}

const StateVar* ComponentSpec::find_state(std::string_view var) const {
    for (const auto& s : state) {
        if (s.name == var) return &s;
    }
    return nullptr;
}

VarMap ComponentSpec::initial_state() const {
    VarMap m;
    for (const auto& s : state) m.emplace(s.name, s.initial);
    return m;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct EvalContext {
    const VarMap& state;
    const ChannelMap& inputs;
    std::map<std::string, Message> bindings;
};

const MessageList& channel_value(const EvalContext& ctx, const std::string& channel) {
    auto it = ctx.inputs.find(channel);
    if (it == ctx.inputs.end()) {
        throw Error(ErrorKind::Name, "no input channel '" + channel + "'");
    }
    return it->second;
}

std::int64_t as_int(const Value& v, const char* what) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw Error(ErrorKind::Type, std::string(what) + " expects an integer, got " + to_string(v));
}

Value eval(const Expr& e, const EvalContext& ctx) {
    switch (e.kind) {
    case Expr::Kind::Int: return e.int_value;
    case Expr::Kind::Msg: return *e.message;
    case Expr::Kind::Var: {
        if (auto b = ctx.bindings.find(e.name); b != ctx.bindings.end()) return b->second;
        if (auto s = ctx.state.find(e.name); s != ctx.state.end()) return s->second;
        throw Error(ErrorKind::Binding, "unbound variable '" + e.name + "'");
    }
    case Expr::Kind::Len:
        return static_cast<std::int64_t>(channel_value(ctx, e.name).size());
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
        std::int64_t l = as_int(eval(e.args.at(0), ctx), "arithmetic");
        std::int64_t r = as_int(eval(e.args.at(1), ctx), "arithmetic");
        std::int64_t out = 0;
        bool overflow = e.kind == Expr::Kind::Add ? __builtin_add_overflow(l, r, &out)
                                                  : __builtin_sub_overflow(l, r, &out);
        if (overflow) throw Error(ErrorKind::Overflow, "integer overflow");
        return out;
    }
    }
    throw Error(ErrorKind::Domain, "unknown expression kind");
}

bool compare(const Value& l, CompareOp op, const Value& r) {
    if (op == CompareOp::Eq || op == CompareOp::Ne) {
        if (l.index() != r.index()) {
            throw Error(ErrorKind::Type, "cannot compare " + to_string(l) + " with " + to_string(r));
        }
        return (l == r) == (op == CompareOp::Eq);
    }
    std::int64_t a = as_int(l, "ordering");
    std::int64_t b = as_int(r, "ordering");
    switch (op) {
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
    default: return false;
    }
}

bool matches(const Pattern& p, const MessageList& l, EvalContext& ctx) {
    switch (p.kind) {
    case Pattern::Kind::Empty: return l.empty();
    case Pattern::Kind::Any: return true;
    case Pattern::Kind::Literal: return l == p.literal;
    case Pattern::Kind::Single:
        if (l.size() != 1) return false;
        if (p.binder != "_") ctx.bindings.insert_or_assign(p.binder, l.front());
        return true;
    }
    return false;
}

bool holds(const Condition& c, EvalContext& ctx) {
    switch (c.kind) {
    case Condition::Kind::True: return true;
    case Condition::Kind::False: return false;
    case Condition::Kind::Match: return matches(c.pattern, channel_value(ctx, c.channel), ctx);
    case Condition::Kind::Compare:
        return compare(eval(c.terms.at(0), ctx), c.op, eval(c.terms.at(1), ctx));
    case Condition::Kind::Not: return !holds(c.operands.at(0), ctx);
    case Condition::Kind::And: return holds(c.operands.at(0), ctx) && holds(c.operands.at(1), ctx);
    case Condition::Kind::Or: return holds(c.operands.at(0), ctx) || holds(c.operands.at(1), ctx);
    }
    return false;
}

bool guard_holds(const Transition& t, EvalContext& ctx) {
    ctx.bindings.clear();
    for (const auto& atom : t.guard) {
        if (!holds(atom, ctx)) return false;
    }
    return true;
}

MessageList build_list(const OutputAssign& o, const EvalContext& ctx) {
    MessageList out;
    for (const auto& term : o.terms) {
        if (term.is_channel) {
            const auto& l = channel_value(ctx, term.channel);
            out.insert(out.end(), l.begin(), l.end());
            continue;
        }
        for (const auto& e : term.elements) {
            Value v = eval(e, ctx);
            const auto* m = std::get_if<Message>(&v);
            if (!m) {
                throw Error(ErrorKind::Type, "output '" + o.channel + "' expects messages, got " +
                                                 to_string(v));
            }
            out.push_back(*m);
        }
    }
    return out;
}

void require_total(const ComponentSpec& c, const VarMap& state, const ChannelMap& inputs) {
    for (const auto& in : c.inputs) {
        if (!inputs.count(in.name)) {
            throw Error(ErrorKind::Arity, "component '" + c.name + "': missing input '" +
                                              in.name + "'");
        }
    }
    for (const auto& [name, _] : inputs) {
        if (!c.is_input(name)) {
            throw Error(ErrorKind::Arity, "component '" + c.name + "': undeclared input '" +
                                              name + "'");
        }
    }
    for (const auto& s : c.state) {
        if (!state.count(s.name)) {
            throw Error(ErrorKind::Arity, "component '" + c.name + "': missing state '" +
                                              s.name + "'");
        }
    }
    if (state.size() != c.state.size()) {
        throw Error(ErrorKind::Arity, "component '" + c.name + "': undeclared state variable");
    }
}

}  // namespace

StepResult step(const ComponentSpec& c, const VarMap& state, const ChannelMap& inputs,
                StepOptions options) {
    require_total(c, state, inputs);

    StepResult result;
    result.state = state;
    for (const auto& o : c.outputs) result.outputs.emplace(o.name, MessageList{});

    EvalContext ctx{state, inputs, {}};
    result.assumption_violated = !holds(c.assumption, ctx);

    std::map<std::string, Message> bindings;
    for (std::size_t i = 0; i < c.transitions.size(); ++i) {
        if (!guard_holds(c.transitions[i], ctx)) continue;
        if (result.fired) {
            throw Error(ErrorKind::Overlap, "component '" + c.name + "': transitions " +
                                                std::to_string(*result.fired + 1) + " and " +
                                                std::to_string(i + 1) + " both match");
        }
        result.fired = i;
        bindings = ctx.bindings;
        if (!options.strict) break;
    }
    if (!result.fired) return result;

    ctx.bindings = std::move(bindings);
    const Transition& t = c.transitions[*result.fired];
    for (const auto& o : t.outputs) {
        if (!c.is_output(o.channel)) {
            throw Error(ErrorKind::Name, "component '" + c.name + "': no output channel '" +
                                             o.channel + "'");
        }
        result.outputs[o.channel] = build_list(o, ctx);
    }
    // Updates read the pre-step state.
    std::vector<std::pair<std::string, Value>> next;
    for (const auto& u : t.updates) {
        if (!c.find_state(u.var)) {
            throw Error(ErrorKind::Name, "component '" + c.name + "': no state variable '" +
                                             u.var + "'");
        }
        next.emplace_back(u.var, eval(u.value, ctx));
    }
    for (auto& [var, value] : next) result.state[var] = std::move(value);
    return result;
}

RunResult run(const ComponentSpec& c, const std::map<std::string, TimedStream>& inputs,
              std::size_t intervals, StepOptions options) {
    for (const auto& in : c.inputs) {
        auto it = inputs.find(in.name);
        if (it == inputs.end()) {
            throw Error(ErrorKind::Arity, "missing input stream '" + in.name + "'");
        }
        if (it->second.size() < intervals) {
            throw Error(ErrorKind::Length, "input stream '" + in.name + "' has " +
                                               std::to_string(it->second.size()) +
                                               " intervals, need " + std::to_string(intervals));
        }
    }

    RunResult r;
    std::map<std::string, std::vector<MessageList>> outs;
    for (const auto& o : c.outputs) outs[o.name].reserve(intervals);
    r.states.push_back(c.initial_state());
    for (std::size_t t = 0; t < intervals; ++t) {
        ChannelMap in;
        for (const auto& decl : c.inputs) in.emplace(decl.name, ti(inputs.at(decl.name), t));
        StepResult s = step(c, r.states.back(), in, options);
        for (auto& [name, l] : s.outputs) outs[name].push_back(std::move(l));
        if (s.assumption_violated) r.violations.push_back(t);
        r.fired.push_back(s.fired);
        r.states.push_back(std::move(s.state));
    }
    for (auto& [name, l] : outs) r.outputs.emplace(name, TimedStream(std::move(l)));
    return r;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

const std::set<std::string, std::less<>> kReserved = {"true", "false", "len", "empty",
                                                      "any",  "msg",   "_"};

class Validator {
public:
    explicit Validator(const ComponentSpec& c) : c_(c) {}

    std::vector<Diagnostic> run() {
        check_names();
        check_condition(c_.assumption, /*in_assumption=*/true);
        for (const auto& g : c_.guarantees) {
            for (const auto& ref : stream_refs(g)) {
                if (!c_.is_input(ref) && !c_.is_output(ref)) {
                    error(g.span, "UNDECLARED_CHANNEL",
                          "guarantee refers to undeclared channel '" + ref + "'");
                }
            }
        }
        if (c_.transitions.empty()) {
            warn(c_.span, "NO_TRANSITIONS", "component '" + c_.name + "' has no transitions");
        }
        for (std::size_t i = 0; i < c_.transitions.size(); ++i) check_transition(i);
        check_reachability();
        return std::move(diags_);
    }

private:
    void error(const SourceSpan& span, std::string code, std::string message) {
        diags_.push_back({Severity::Error, span, std::move(message), std::move(code)});
    }
    void warn(const SourceSpan& span, std::string code, std::string message) {
        diags_.push_back({Severity::Warning, span, std::move(message), std::move(code)});
    }

    bool is_channel(std::string_view n) const { return c_.is_input(n) || c_.is_output(n); }

    void check_names() {
        std::set<std::string, std::less<>> seen;
        auto visit = [&](const std::string& name, const SourceSpan& span) {
            if (kReserved.count(name)) {
                error(span, "RESERVED_NAME", "'" + name + "' is a reserved word");
            }
            if (!seen.insert(name).second) {
                error(span, "DUP_NAME", "duplicate name '" + name + "'");
            }
        };
        for (const auto& d : c_.inputs) visit(d.name, d.span);
        for (const auto& d : c_.outputs) visit(d.name, d.span);
        for (const auto& s : c_.state) visit(s.name, s.span);
    }

    std::optional<ValueType> type_of(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Int: return ValueType::Int;
        case Expr::Kind::Msg: return ValueType::Msg;
        case Expr::Kind::Var:
            if (bound_.count(e.name)) return ValueType::Msg;
            if (const StateVar* s = c_.find_state(e.name)) {
                return std::holds_alternative<std::int64_t>(s->initial) ? ValueType::Int
                                                                        : ValueType::Msg;
            }
            error(e.span, "UNBOUND_VAR", "unbound variable '" + e.name + "'");
            return std::nullopt;
        case Expr::Kind::Len:
            require_input(e.name, e.span);
            return ValueType::Int;
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            auto l = type_of(e.args.at(0));
            auto r = type_of(e.args.at(1));
            if ((l && *l != ValueType::Int) || (r && *r != ValueType::Int)) {
                error(e.span, "TYPE_MISMATCH", "arithmetic on a message value");
            }
            return ValueType::Int;
        }
        }
        return std::nullopt;
    }

    void require_input(const std::string& channel, const SourceSpan& span) {
        if (c_.is_input(channel)) return;
        if (c_.is_output(channel)) {
            error(span, "NOT_AN_INPUT", "'" + channel + "' is an output channel, not an input");
        } else {
            error(span, "UNDECLARED_CHANNEL", "undeclared input channel '" + channel + "'");
        }
    }

    void check_condition(const Condition& c, bool in_assumption) {
        switch (c.kind) {
        case Condition::Kind::True:
        case Condition::Kind::False: return;
        case Condition::Kind::Match:
            require_input(c.channel, c.span);
            if (c.pattern.kind == Pattern::Kind::Single && c.pattern.binder != "_") {
                const std::string& b = c.pattern.binder;
                if (in_assumption) {
                    error(c.span, "BINDER_IN_ASSUMPTION",
                          "assumption patterns cannot bind variables; use msg(_)");
                } else if (is_channel(b) || c_.find_state(b) || kReserved.count(b)) {
                    error(c.span, "SHADOWED_NAME",
                          "pattern variable '" + b + "' shadows a declared name");
                } else if (!bound_.insert(b).second) {
                    error(c.span, "REBOUND_VAR", "pattern variable '" + b + "' bound twice");
                }
            }
            return;
        case Condition::Kind::Compare: {
            auto l = type_of(c.terms.at(0));
            auto r = type_of(c.terms.at(1));
            if (l && r) {
                bool ordering = c.op != CompareOp::Eq && c.op != CompareOp::Ne;
                if (*l != *r || (ordering && *l != ValueType::Int)) {
                    error(c.span, "TYPE_MISMATCH", std::string("operands of '") +
                                                       to_string(c.op) + "' have incompatible types");
                }
            }
            return;
        }
        case Condition::Kind::Not:
        case Condition::Kind::And:
        case Condition::Kind::Or:
            if (!in_assumption) {
                error(c.span, "BAD_GUARD", "guards are conjunctions of patterns and comparisons");
            }
            for (const auto& o : c.operands) check_condition(o, in_assumption);
            return;
        }
    }

    void check_transition(std::size_t index) {
        const Transition& t = c_.transitions[index];
        bound_.clear();
        for (const auto& atom : t.guard) check_condition(atom, false);

        std::set<std::string, std::less<>> assigned;
        for (const auto& o : t.outputs) {
            if (c_.is_input(o.channel)) {
                error(o.span, "WRITE_TO_INPUT", "transition " + std::to_string(index + 1) +
                                                    " writes to input channel '" + o.channel + "'");
            } else if (!c_.is_output(o.channel)) {
                error(o.span, "UNDECLARED_CHANNEL",
                      "undeclared output channel '" + o.channel + "'");
            }
            if (!assigned.insert(o.channel).second) {
                error(o.span, "DUP_ASSIGN", "'" + o.channel + "' assigned twice");
            }
            for (const auto& term : o.terms) {
                if (term.is_channel) {
                    require_input(term.channel, term.span);
                    continue;
                }
                for (const auto& e : term.elements) {
                    auto ty = type_of(e);
                    if (ty && *ty != ValueType::Msg) {
                        error(e.span, "TYPE_MISMATCH", "output lists hold messages, not integers");
                    }
                }
            }
        }
        for (const auto& u : t.updates) {
            const StateVar* s = c_.find_state(u.var);
            if (!s) {
                error(u.span, is_channel(u.var) ? "NOT_A_STATE_VAR" : "UNDECLARED_VAR",
                      "'" + u.var + "' is not a state variable");
            }
            if (!assigned.insert(u.var).second) {
                error(u.span, "DUP_ASSIGN", "'" + u.var + "' assigned twice");
            }
            auto ty = type_of(u.value);
            if (s && ty) {
                auto want = std::holds_alternative<std::int64_t>(s->initial) ? ValueType::Int
                                                                             : ValueType::Msg;
                if (*ty != want) {
                    error(u.span, "TYPE_MISMATCH", "update changes the type of '" + u.var + "'");
                }
            }
        }
        bound_.clear();
    }

    static std::string expr_key(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Int: return std::to_string(e.int_value);
        case Expr::Kind::Msg: return "'" + to_string(*e.message);
        case Expr::Kind::Var: return e.name;
        case Expr::Kind::Len: return "len(" + e.name + ")";
        case Expr::Kind::Add: return "(" + expr_key(e.args[0]) + "+" + expr_key(e.args[1]) + ")";
        case Expr::Kind::Sub: return "(" + expr_key(e.args[0]) + "-" + expr_key(e.args[1]) + ")";
        }
        return "?";
    }

    // Atom keys of a guard with trivially true atoms dropped and binders
    // erased; nullopt when the guard can never hold.
    static std::optional<std::set<std::string>> guard_key(const Transition& t) {
        std::set<std::string> keys;
        for (const auto& a : t.guard) {
            switch (a.kind) {
            case Condition::Kind::True: break;
            case Condition::Kind::False: return std::nullopt;
            case Condition::Kind::Match: {
                const Pattern& p = a.pattern;
                if (p.kind == Pattern::Kind::Any) break;
                std::string k = a.channel + "=";
                if (p.kind == Pattern::Kind::Empty) k += "empty";
                if (p.kind == Pattern::Kind::Single) k += "msg";
                if (p.kind == Pattern::Kind::Literal) {
                    k += "<";
                    for (const auto& m : p.literal) k += to_string(m) + ",";
                    k += ">";
                }
                keys.insert(k);
                break;
            }
            case Condition::Kind::Compare:
                keys.insert(expr_key(a.terms[0]) + to_string(a.op) + expr_key(a.terms[1]));
                break;
            default:
                keys.insert("#" + std::to_string(keys.size()));  // opaque, never subsumes
                break;
            }
        }
        return keys;
    }

    void check_reachability() {
        std::vector<std::optional<std::set<std::string>>> keys;
        for (const auto& t : c_.transitions) keys.push_back(guard_key(t));
        for (std::size_t j = 0; j < keys.size(); ++j) {
            bool dead = !keys[j];
            for (std::size_t i = 0; i < j && !dead; ++i) {
                dead = keys[i] && std::includes(keys[j]->begin(), keys[j]->end(),
                                                keys[i]->begin(), keys[i]->end());
            }
            if (dead) {
                warn(c_.transitions[j].span, "UNREACHABLE_TRANSITION",
                     "unreachable transition " + std::to_string(j + 1));
            }
        }
    }

    const ComponentSpec& c_;
    std::set<std::string, std::less<>> bound_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const ComponentSpec& c) { return Validator(c).run(); }

std::vector<GuaranteeResult> check_guarantees(const ComponentSpec& c,
                                              const std::map<std::string, TimedStream>& streams,
                                              const std::vector<std::size_t>& violations) {
    StreamEnv env;
    for (const auto& [name, s] : streams) env.emplace(name, s);

    std::vector<GuaranteeResult> out;
    for (const auto& g : c.guarantees) {
        GuaranteeResult r{check(g, env), false};
        if (!r.verdict.holds && !violations.empty()) {
            // Only failures already witnessed before the first violation count.
            StreamEnv prefix;
            for (const auto& [name, s] : streams) {
                auto n = std::min(s.size(), violations.front());
                prefix.emplace(name, TimedStream({s.intervals().begin(),
                                                  s.intervals().begin() + static_cast<long>(n)}));
            }
            try {
                Verdict early = check(g, prefix);
                r.vacuous = early.holds || early.witnesses.empty();
            } catch (const Error&) {
                r.vacuous = true;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace focuse
