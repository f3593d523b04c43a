#pragma once

// Random value generators for property tests. Everything is driven by a
// caller-owned std::mt19937_64 so runs are reproducible from a seed.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "focuse/causality.hpp"
#include "focuse/components.hpp"
#include "focuse/network.hpp"
#include "focuse/streams.hpp"

namespace focuse::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& v) {
    return v[pick(rng, v.size())];
}

// Identifiers that double as keywords somewhere in the grammar; the parser
// must treat them as plain names in name positions.
inline const std::vector<std::string>& tricky_names() {
    static const std::vector<std::string> names = {
        "in",    "out",  "end",   "trans",   "state", "asm",   "guar",  "first", "each",
        "occurs", "ci",  "before", "after",  "wire",  "input", "output", "instance",
        "delayed", "network", "component", "event", "a",    "b",      "x_1",  "Zz9"};
    return names;
}

inline Message random_message(Rng& rng, std::size_t alphabet, bool sorts = false) {
    std::string name(1, static_cast<char>('a' + pick(rng, alphabet)));
    if (sorts && coin(rng, 0.2)) return Message(name, coin(rng) ? "req" : "ack");
    return Message(name);
}

inline MessageList random_list(Rng& rng, std::size_t max_size, std::size_t alphabet,
                               bool sorts = false) {
    MessageList l(pick(rng, max_size + 1), Message("a"));
    for (auto& m : l) m = random_message(rng, alphabet, sorts);
    return l;
}

inline TimedStream random_timed(Rng& rng, std::size_t max_len, std::size_t alphabet,
                                std::size_t max_interval, bool sorts = false) {
    std::vector<MessageList> intervals(pick(rng, max_len + 1));
    for (auto& l : intervals) l = random_list(rng, max_interval, alphabet, sorts);
    return TimedStream(std::move(intervals));
}

inline EventStream random_event(Rng& rng, std::size_t max_len, std::size_t alphabet,
                                std::size_t max_interval, bool sorts = false) {
    std::vector<MessageList> intervals(pick(rng, max_len + 1));
    for (auto& l : intervals) {
        do {
            l = random_list(rng, max_interval, alphabet, sorts);
        } while (l.empty());
    }
    return EventStream(std::move(intervals));
}

inline DeltaSchedule random_schedule(Rng& rng, std::size_t count, std::size_t max_gap = 4) {
    std::vector<std::size_t> p;
    std::size_t t = pick(rng, max_gap);
    for (std::size_t k = 0; k < count; ++k) {
        p.push_back(t);
        t += 1 + pick(rng, max_gap);
    }
    return DeltaSchedule(std::move(p));
}

inline std::string random_sort(Rng& rng) {
    static const std::vector<std::string> sorts = {"a", "b", "c", "req", "first", "in"};
    return choose(rng, sorts);
}

inline std::string random_stream_ref(Rng& rng) {
    static const std::vector<std::string> refs = {"s", "t", "in", "out", "A.y", "B.x", "end"};
    return choose(rng, refs);
}

inline Property random_property(Rng& rng, int depth = 3) {
    std::size_t k = pick(rng, depth > 0 ? 7 : 4);
    switch (k) {
    case 0: return Property::occurs(random_sort(rng), random_stream_ref(rng));
    case 1: return Property::first_before(random_sort(rng), random_sort(rng), random_stream_ref(rng));
    case 2: return Property::each_before(random_sort(rng), random_sort(rng), random_stream_ref(rng));
    case 3:
        return Property::occurs_before(random_stream_ref(rng), pick(rng, 6), random_stream_ref(rng),
                                       pick(rng, 6));
    case 4: return Property::negate(random_property(rng, depth - 1));
    case 5: return Property::conj(random_property(rng, depth - 1), random_property(rng, depth - 1));
    default: return Property::disj(random_property(rng, depth - 1), random_property(rng, depth - 1));
    }
}

// --- components -------------------------------------------------------------

struct ComponentShape {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::string> int_vars;
    std::vector<std::string> msg_vars;
};

inline std::int64_t random_int(Rng& rng) {
    switch (pick(rng, 6)) {
    case 0: return std::numeric_limits<std::int64_t>::min();
    case 1: return std::numeric_limits<std::int64_t>::max();
    case 2: return -static_cast<std::int64_t>(pick(rng, 100));
    default: return static_cast<std::int64_t>(pick(rng, 10));
    }
}

inline Expr random_int_expr(Rng& rng, const ComponentShape& s, int depth) {
    std::size_t k = pick(rng, depth > 0 ? 5 : 3);
    switch (k) {
    case 0: return Expr::integer(random_int(rng));
    case 1: return s.int_vars.empty() ? Expr::integer(1) : Expr::var(choose(rng, s.int_vars));
    case 2: return Expr::len(choose(rng, s.inputs));
    case 3: return Expr::add(random_int_expr(rng, s, depth - 1), random_int_expr(rng, s, depth - 1));
    default: return Expr::sub(random_int_expr(rng, s, depth - 1), random_int_expr(rng, s, depth - 1));
    }
}

inline Expr random_msg_expr(Rng& rng, const ComponentShape& s,
                            const std::vector<std::string>& bound) {
    std::size_t k = pick(rng, 3);
    if (k == 0 && !bound.empty()) return Expr::var(choose(rng, bound));
    if (k == 1 && !s.msg_vars.empty()) return Expr::var(choose(rng, s.msg_vars));
    return Expr::msg(random_message(rng, 3, true));
}

inline Pattern random_pattern(Rng& rng, std::string binder) {
    Pattern p;
    switch (pick(rng, 4)) {
    case 0: p.kind = Pattern::Kind::Empty; break;
    case 1: p.kind = Pattern::Kind::Any; break;
    case 2:
        p.kind = Pattern::Kind::Single;
        p.binder = std::move(binder);
        break;
    default:
        p.kind = Pattern::Kind::Literal;
        p.literal = random_list(rng, 2, 3, true);
        break;
    }
    return p;
}

inline Condition random_assumption(Rng& rng, const ComponentShape& s, int depth) {
    std::size_t k = pick(rng, depth > 0 ? 7 : 4);
    switch (k) {
    case 0: return coin(rng) ? Condition::always() : Condition::never();
    case 1: return Condition::match(choose(rng, s.inputs), random_pattern(rng, "_"));
    case 2:
    case 3:
        return Condition::compare(random_int_expr(rng, s, 1),
                                  static_cast<CompareOp>(pick(rng, 6)), random_int_expr(rng, s, 1));
    case 4: return Condition::negate(random_assumption(rng, s, depth - 1));
    case 5:
        return Condition::conj(random_assumption(rng, s, depth - 1),
                               random_assumption(rng, s, depth - 1));
    default:
        return Condition::disj(random_assumption(rng, s, depth - 1),
                               random_assumption(rng, s, depth - 1));
    }
}

inline Transition random_transition(Rng& rng, const ComponentShape& s) {
    Transition t;
    std::vector<std::string> bound;
    std::size_t atoms = pick(rng, 4);
    for (std::size_t a = 0; a < atoms; ++a) {
        switch (pick(rng, 4)) {
        case 0:
        case 1: {
            std::string binder = coin(rng, 0.3) ? "_" : "v" + std::to_string(bound.size());
            Pattern p = random_pattern(rng, binder);
            if (p.kind == Pattern::Kind::Single && binder != "_") bound.push_back(binder);
            t.guard.push_back(Condition::match(choose(rng, s.inputs), std::move(p)));
            break;
        }
        case 2:
            t.guard.push_back(Condition::compare(random_int_expr(rng, s, 1),
                                                 static_cast<CompareOp>(pick(rng, 6)),
                                                 random_int_expr(rng, s, 1)));
            break;
        default:
            t.guard.push_back(Condition::compare(random_msg_expr(rng, s, bound),
                                                 coin(rng) ? CompareOp::Eq : CompareOp::Ne,
                                                 random_msg_expr(rng, s, bound)));
            break;
        }
    }
    for (const auto& out : s.outputs) {
        if (!coin(rng, 0.6)) continue;
        OutputAssign o;
        o.channel = out;
        std::size_t terms = 1 + pick(rng, 2);
        for (std::size_t k = 0; k < terms; ++k) {
            ListTerm term;
            if (coin(rng, 0.3)) {
                term.is_channel = true;
                term.channel = choose(rng, s.inputs);
            } else {
                std::size_t n = pick(rng, 3);
                for (std::size_t e = 0; e < n; ++e) term.elements.push_back(random_msg_expr(rng, s, bound));
            }
            o.terms.push_back(std::move(term));
        }
        t.outputs.push_back(std::move(o));
    }
    for (const auto& v : s.int_vars) {
        if (coin(rng, 0.5)) t.updates.push_back({v, random_int_expr(rng, s, 2), {}});
    }
    for (const auto& v : s.msg_vars) {
        if (coin(rng, 0.5)) t.updates.push_back({v, random_msg_expr(rng, s, bound), {}});
    }
    return t;
}

inline ComponentSpec random_component(Rng& rng, std::string name = "") {
    // Distinct names drawn from a pool that includes grammar keywords.
    std::vector<std::string> pool = tricky_names();
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t next = 0;
    auto fresh = [&] { return pool[next++]; };

    ComponentShape s;
    for (std::size_t k = 0, n = 1 + pick(rng, 3); k < n; ++k) s.inputs.push_back(fresh());
    for (std::size_t k = 0, n = pick(rng, 3); k < n; ++k) s.outputs.push_back(fresh());
    for (std::size_t k = 0, n = pick(rng, 2); k < n; ++k) s.int_vars.push_back(fresh());
    for (std::size_t k = 0, n = pick(rng, 2); k < n; ++k) s.msg_vars.push_back(fresh());

    ComponentSpec c;
    c.name = name.empty() ? "C" + std::to_string(pick(rng, 1000)) : std::move(name);
    for (const auto& n : s.inputs) c.inputs.push_back({n, {}});
    for (const auto& n : s.outputs) c.outputs.push_back({n, {}});
    for (const auto& n : s.int_vars) c.state.push_back({n, random_int(rng), {}});
    for (const auto& n : s.msg_vars) c.state.push_back({n, random_message(rng, 3, true), {}});
    if (coin(rng)) c.assumption = random_assumption(rng, s, 2);
    std::vector<std::string> channels = s.inputs;
    channels.insert(channels.end(), s.outputs.begin(), s.outputs.end());
    for (std::size_t k = 0, n = pick(rng, 3); k < n; ++k) {
        Property p = random_property(rng, 1);
        // Point every stream reference at a declared channel.
        std::vector<Property*> todo = {&p};
        while (!todo.empty()) {
            Property* q = todo.back();
            todo.pop_back();
            if (!q->stream.empty()) q->stream = choose(rng, channels);
            if (!q->stream2.empty()) q->stream2 = choose(rng, channels);
            for (auto& o : q->operands) todo.push_back(&o);
        }
        c.guarantees.push_back(std::move(p));
    }
    for (std::size_t k = 0, n = 1 + pick(rng, 4); k < n; ++k) {
        c.transitions.push_back(random_transition(rng, s));
    }
    return c;
}

// --- networks ---------------------------------------------------------------

inline NetworkSpec random_network(Rng& rng) {
    NetworkSpec n;
    n.name = "N" + std::to_string(pick(rng, 100));
    std::vector<ComponentSpec> types;
    for (std::size_t k = 0, count = 1 + pick(rng, 3); k < count; ++k) {
        types.push_back(random_component(rng, "T" + std::to_string(k)));
    }
    std::vector<std::string> names = tricky_names();
    std::shuffle(names.begin(), names.end(), rng);
    std::size_t instances = pick(rng, 5);
    for (std::size_t k = 0; k < instances; ++k) n.instances.push_back({names[k], choose(rng, types), {}});
    std::size_t ext_in = pick(rng, 3);
    std::size_t ext_out = pick(rng, 3);
    for (std::size_t k = 0; k < ext_in; ++k) n.external_inputs.push_back({"ei" + std::to_string(k), {}});
    for (std::size_t k = 0; k < ext_out; ++k) n.external_outputs.push_back({"eo" + std::to_string(k), {}});

    // Consumers: instance inputs and external outputs, each fed at most once.
    struct Consumer {
        Endpoint e;
        std::size_t owner;  // instance index, or instances for external
    };
    std::vector<Consumer> consumers;
    for (std::size_t i = 0; i < instances; ++i) {
        for (const auto& ch : n.instances[i].spec.inputs) consumers.push_back({{n.instances[i].name, ch.name}, i});
    }
    for (const auto& d : n.external_outputs) consumers.push_back({{"", d.name}, instances});
    std::shuffle(consumers.begin(), consumers.end(), rng);

    for (const auto& c : consumers) {
        if (!coin(rng, 0.7)) continue;
        struct Producer {
            Endpoint e;
            std::size_t owner;
        };
        std::vector<Producer> producers;
        for (const auto& d : n.external_inputs) producers.push_back({{"", d.name}, instances + 1});
        for (std::size_t i = 0; i < instances; ++i) {
            for (const auto& ch : n.instances[i].spec.outputs) producers.push_back({{n.instances[i].name, ch.name}, i});
        }
        if (producers.empty()) continue;
        const Producer& p = choose(rng, producers);
        Wire w;
        w.from = p.e;
        w.to = c.e;
        // Undelayed instance-to-instance wires only point forward.
        bool backward = p.owner < instances && c.owner < instances && p.owner >= c.owner;
        w.delayed = backward || coin(rng, 0.2);
        if (w.delayed && coin(rng)) w.initial = random_list(rng, 2, 3, true);
        n.wires.push_back(std::move(w));
    }
    return n;
}

}  // namespace focuse::testing
