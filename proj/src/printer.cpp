#include <set>
#include <sstream>

#include "focuse/speclang.hpp"

namespace focuse {

std::string print(const Message& m) { return to_string(m); }

std::string print(const MessageList& l) {
    std::string out = "<";
    for (std::size_t k = 0; k < l.size(); ++k) {
        if (k) out += ",";
        out += print(l[k]);
    }
    return out + ">";
}

namespace {

std::string print_intervals(const std::vector<MessageList>& intervals) {
    if (intervals.empty()) return "empty";
    std::string out;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        if (k) out += " ";
        out += print(intervals[k]);
    }
    return out;
}

// Binding strength: 1 for '|', 2 for '&', 3 for unary and atoms.
int strength(Property::Kind k) {
    return k == Property::Kind::Or ? 1 : k == Property::Kind::And ? 2 : 3;
}

int strength(Condition::Kind k) {
    return k == Condition::Kind::Or ? 1 : k == Condition::Kind::And ? 2 : 3;
}

std::string wrap(std::string s, bool parens) { return parens ? "(" + s + ")" : s; }

std::string print_property(const Property& p, int context) {
    using K = Property::Kind;
    switch (p.kind) {
    case K::Occurs: return "occurs(" + p.sort_a + ") in " + p.stream;
    case K::FirstBefore: return "first " + p.sort_a + " before " + p.sort_b + " in " + p.stream;
    case K::EachBefore: return "each " + p.sort_b + " after " + p.sort_a + " in " + p.stream;
    case K::OccursBefore:
        return "ci(" + p.stream + "," + std::to_string(p.index) + ") before ci(" + p.stream2 +
               "," + std::to_string(p.index2) + ")";
    case K::Not: return "!" + print_property(p.operands.at(0), 3);
    case K::And:
    case K::Or: {
        int s = strength(p.kind);
        std::string op = p.kind == K::And ? " & " : " | ";
        return wrap(print_property(p.operands.at(0), s) + op + print_property(p.operands.at(1), s + 1),
                    s < context);
    }
    }
    return "?";
}

std::string print_condition(const Condition& c, int context) {
    using K = Condition::Kind;
    switch (c.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Match: {
        std::string out = c.channel + " = ";
        switch (c.pattern.kind) {
        case Pattern::Kind::Empty: return out + "empty";
        case Pattern::Kind::Any: return out + "any";
        case Pattern::Kind::Single: return out + "msg(" + c.pattern.binder + ")";
        case Pattern::Kind::Literal: return out + print(c.pattern.literal);
        }
        return out;
    }
    case K::Compare:
        return print(c.terms.at(0)) + " " + to_string(c.op) + " " + print(c.terms.at(1));
    case K::Not: return "!" + print_condition(c.operands.at(0), 3);
    case K::And:
    case K::Or: {
        int s = strength(c.kind);
        std::string op = c.kind == K::And ? " & " : " | ";
        return wrap(print_condition(c.operands.at(0), s) + op +
                        print_condition(c.operands.at(1), s + 1),
                    s < context);
    }
    }
    return "?";
}

std::string print_value(const Value& v) { return to_string(v); }

std::string print_list_term(const ListTerm& t) {
    if (t.is_channel) return t.channel;
    std::string out = "<";
    for (std::size_t k = 0; k < t.elements.size(); ++k) {
        if (k) out += ", ";
        out += print(t.elements[k]);
    }
    return out + ">";
}

std::string print_transition(const Transition& t) {
    std::string out = "trans";
    for (std::size_t k = 0; k < t.guard.size(); ++k) {
        out += k ? " & " : " ";
        out += print_condition(t.guard[k], 3);
    }
    out += " ==>";
    for (std::size_t k = 0; k < t.outputs.size(); ++k) {
        out += k ? ", " : " ";
        out += t.outputs[k].channel + " :=";
        for (std::size_t j = 0; j < t.outputs[k].terms.size(); ++j) {
            out += j ? " ++ " : " ";
            out += print_list_term(t.outputs[k].terms[j]);
        }
    }
    if (!t.updates.empty()) {
        out += " ;";
        for (std::size_t k = 0; k < t.updates.size(); ++k) {
            out += k ? ", " : " ";
            out += t.updates[k].var + " := " + print(t.updates[k].value);
        }
    }
    return out;
}

std::string join_names(const std::vector<Declared>& list) {
    std::string out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        if (k) out += ", ";
        out += list[k].name;
    }
    return out;
}

}  // namespace

std::string print(const TimedStream& s) { return print_intervals(s.intervals()); }

std::string print(const EventStream& s) { return print_intervals(s.intervals()); }

std::string print(const Property& p) { return print_property(p, 0); }

std::string print(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Int: return std::to_string(e.int_value);
    case Expr::Kind::Msg: return "'" + print(*e.message);
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::Len: return "len(" + e.name + ")";
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
        const Expr& rhs = e.args.at(1);
        bool nested = rhs.kind == Expr::Kind::Add || rhs.kind == Expr::Kind::Sub;
        return print(e.args.at(0)) + (e.kind == Expr::Kind::Add ? " + " : " - ") +
               wrap(print(rhs), nested);
    }
    }
    return "?";
}

std::string print(const Condition& c) { return print_condition(c, 0); }

std::string print(const ComponentSpec& c) {
    std::ostringstream os;
    os << "component " << c.name << '\n';
    if (!c.inputs.empty()) os << "  in " << join_names(c.inputs) << '\n';
    if (!c.outputs.empty()) os << "  out " << join_names(c.outputs) << '\n';
    for (const auto& s : c.state) os << "  state " << s.name << " = " << print_value(s.initial) << '\n';
    if (c.assumption.kind != Condition::Kind::True) os << "  asm " << print(c.assumption) << '\n';
    for (const auto& g : c.guarantees) os << "  guar " << print(g) << '\n';
    for (const auto& t : c.transitions) os << "  " << print_transition(t) << '\n';
    os << "end\n";
    return os.str();
}

std::string print(const NetworkSpec& n) {
    std::ostringstream os;
    std::set<std::string> printed;
    for (const auto& inst : n.instances) {
        if (!printed.insert(inst.spec.name).second) continue;
        os << print(inst.spec) << '\n';
    }
    os << "network " << n.name << '\n';
    for (const auto& inst : n.instances) {
        os << "  instance " << inst.name << " : " << inst.spec.name << '\n';
    }
    if (!n.external_inputs.empty()) os << "  input " << join_names(n.external_inputs) << '\n';
    if (!n.external_outputs.empty()) os << "  output " << join_names(n.external_outputs) << '\n';
    for (const auto& w : n.wires) {
        os << "  wire " << w.from.full_name() << " -> " << w.to.full_name();
        if (w.delayed) {
            os << " delayed";
            if (!w.initial.empty()) os << ' ' << print(w.initial);
        }
        os << '\n';
    }
    os << "end\n";
    return os.str();
}

}  // namespace focuse
