#include "focuse/causality.hpp"

#include <algorithm>
#include <optional>

#include "focuse/error.hpp"

namespace focuse {

CombinedEvent combined_event(const TimedStream& s, std::size_t i) { return {i, ci(s, i)}; }

CombinedEvent combined_event(const EventStream& s, std::size_t i) { return {i, ci(s, i)}; }

bool occurs_before(const TimedStream& s1, std::size_t i, const TimedStream& s2, std::size_t j) {
    return time_position(s1, i) < time_position(s2, j);
}

bool occurs_before(const EventStream& s, std::size_t i, std::size_t j) {
    ci(s, i);
    ci(s, j);
    return i < j;
}

namespace {

struct Hit {
    std::size_t index;
    const Message* message;
};

// First message of the given sort in causality interval i, if any.
const Message* find_sort(const MessageList& l, std::string_view sort) {
    for (const auto& m : l) {
        if (m.has_sort(sort)) return &m;
    }
    return nullptr;
}

std::optional<Hit> first_hit(const EventStream& s, std::string_view sort) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (const Message* m = find_sort(s.intervals()[i], sort)) return Hit{i, m};
    }
    return std::nullopt;
}

Witness witness(std::string_view name, const Hit& h) {
    return Witness{std::string(name), h.index, *h.message};
}

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

Verdict occurs(std::string_view sort, const EventStream& s, std::string_view name) {
    Verdict v;
    if (auto h = first_hit(s, sort)) {
        v.holds = true;
        v.witnesses.push_back(witness(name, *h));
        v.explanation = quoted(sort) + " occurs at ci " + std::to_string(h->index);
    } else {
        v.explanation = quoted(sort) + " never occurs in " + std::string(name);
    }
    return v;
}

Verdict always_before_first(std::string_view sort_a, std::string_view sort_b, const EventStream& s,
                            std::string_view name) {
    Verdict v;
    auto hb = first_hit(s, sort_b);
    auto ha = first_hit(s, sort_a);
    if (!hb) {
        v.holds = true;
        if (ha) v.witnesses.push_back(witness(name, *ha));
        v.explanation = quoted(sort_b) + " never occurs";
        return v;
    }
    if (ha && ha->index < hb->index) {
        v.holds = true;
        v.witnesses = {witness(name, *ha), witness(name, *hb)};
        v.explanation = "first " + quoted(sort_a) + " at ci " + std::to_string(ha->index) +
                        " precedes first " + quoted(sort_b) + " at ci " + std::to_string(hb->index);
        return v;
    }
    v.witnesses.push_back(witness(name, *hb));
    if (!ha) {
        v.explanation = quoted(sort_b) + " at ci " + std::to_string(hb->index) + " but " +
                        quoted(sort_a) + " never occurs";
    } else if (ha->index == hb->index) {
        v.explanation = "first " + quoted(sort_a) + " and first " + quoted(sort_b) +
                        " are simultaneous at ci " + std::to_string(hb->index);
    } else {
        v.explanation = "first " + quoted(sort_b) + " at ci " + std::to_string(hb->index) +
                        " precedes first " + quoted(sort_a) + " at ci " +
                        std::to_string(ha->index);
    }
    return v;
}

Verdict always_before_each(std::string_view sort_a, std::string_view sort_b, const EventStream& s,
                           std::string_view name) {
    Verdict v;
    auto ha = first_hit(s, sort_a);
    // Every sortB interval must lie strictly after the first sortA interval.
    std::size_t bound = ha ? ha->index : s.size();
    std::size_t total_b = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (const Message* m = find_sort(s.intervals()[i], sort_b)) {
            ++total_b;
            if (i <= bound) v.witnesses.push_back(Witness{std::string(name), i, *m});
        }
    }
    v.holds = v.witnesses.empty();
    if (v.holds) {
        if (ha) v.witnesses.push_back(witness(name, *ha));
        v.explanation = total_b == 0 ? quoted(sort_b) + " never occurs"
                                     : "all " + std::to_string(total_b) + " " + quoted(sort_b) +
                                           " intervals follow " + quoted(sort_a) + " at ci " +
                                           std::to_string(ha->index);
    } else {
        v.explanation = quoted(sort_b) + " at ci " + std::to_string(v.witnesses.front().index) +
                        " is not preceded by " + quoted(sort_a);
    }
    return v;
}

Property Property::occurs(std::string sort, std::string stream) {
    Property p;
    p.kind = Kind::Occurs;
    p.sort_a = std::move(sort);
    p.stream = std::move(stream);
    return p;
}

Property Property::first_before(std::string a, std::string b, std::string stream) {
    Property p;
    p.kind = Kind::FirstBefore;
    p.sort_a = std::move(a);
    p.sort_b = std::move(b);
    p.stream = std::move(stream);
    return p;
}

Property Property::each_before(std::string a, std::string b, std::string stream) {
    Property p = first_before(std::move(a), std::move(b), std::move(stream));
    p.kind = Kind::EachBefore;
    return p;
}

Property Property::occurs_before(std::string s1, std::size_t i, std::string s2, std::size_t j) {
    Property p;
    p.kind = Kind::OccursBefore;
    p.stream = std::move(s1);
    p.index = i;
    p.stream2 = std::move(s2);
    p.index2 = j;
    return p;
}

Property Property::negate(Property operand) {
    Property p;
    p.kind = Kind::Not;
    p.operands.push_back(std::move(operand));
    return p;
}

Property Property::conj(Property lhs, Property rhs) {
    Property p;
    p.kind = Kind::And;
    p.operands.push_back(std::move(lhs));
    p.operands.push_back(std::move(rhs));
    return p;
}

Property Property::disj(Property lhs, Property rhs) {
    Property p = conj(std::move(lhs), std::move(rhs));
    p.kind = Kind::Or;
    return p;
}

bool Property::operator==(const Property& o) const {
    return kind == o.kind && sort_a == o.sort_a && sort_b == o.sort_b && stream == o.stream &&
           stream2 == o.stream2 && index == o.index && index2 == o.index2 &&
           operands == o.operands;
}

namespace {

void collect_refs(const Property& p, std::vector<std::string>& out) {
    auto add = [&](const std::string& r) {
        if (!r.empty() && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    };
    add(p.stream);
    add(p.stream2);
    for (const auto& q : p.operands) collect_refs(q, out);
}

const StreamValue& lookup(const StreamEnv& env, const std::string& name) {
    auto it = env.find(name);
    if (it == env.end()) throw Error(ErrorKind::Name, "unknown stream '" + name + "'");
    return it->second;
}

EventStream event_view(const StreamValue& v) {
    if (const auto* t = std::get_if<TimedStream>(&v)) return to_event(*t);
    return std::get<EventStream>(v);
}

Verdict check_occurs_before(const Property& p, const StreamEnv& env) {
    const StreamValue& lhs = lookup(env, p.stream);
    const StreamValue& rhs = lookup(env, p.stream2);
    const auto* lt = std::get_if<TimedStream>(&lhs);
    const auto* rt = std::get_if<TimedStream>(&rhs);
    Verdict v;
    if (lt && rt) {
        std::size_t tl = time_position(*lt, p.index);
        std::size_t tr = time_position(*rt, p.index2);
        v.holds = tl < tr;
        v.explanation = "ci(" + p.stream + "," + std::to_string(p.index) + ") at time " +
                        std::to_string(tl) + (v.holds ? " < " : " >= ") + "ci(" + p.stream2 +
                        "," + std::to_string(p.index2) + ") at time " + std::to_string(tr);
    } else if (p.stream == p.stream2) {
        const auto& e = std::get<EventStream>(lhs);
        v.holds = occurs_before(e, p.index, p.index2);
        v.explanation = "causality index " + std::to_string(p.index) +
                        (v.holds ? " < " : " >= ") + std::to_string(p.index2) + " in " + p.stream;
    } else {
        throw Error(ErrorKind::UnsupportedComparison,
                    "cannot order '" + p.stream + "' against '" + p.stream2 +
                        "': event streams carry no shared time base");
    }
    EventStream le = event_view(lhs);
    EventStream re = event_view(rhs);
    v.witnesses = {Witness{p.stream, p.index, first(ci(le, p.index))},
                   Witness{p.stream2, p.index2, first(ci(re, p.index2))}};
    return v;
}

}  // namespace

std::vector<std::string> stream_refs(const Property& p) {
    std::vector<std::string> out;
    collect_refs(p, out);
    return out;
}

Verdict check(const Property& p, const StreamEnv& env) {
    switch (p.kind) {
    case Property::Kind::Occurs:
        return occurs(p.sort_a, event_view(lookup(env, p.stream)), p.stream);
    case Property::Kind::FirstBefore:
        return always_before_first(p.sort_a, p.sort_b, event_view(lookup(env, p.stream)),
                                   p.stream);
    case Property::Kind::EachBefore:
        return always_before_each(p.sort_a, p.sort_b, event_view(lookup(env, p.stream)),
                                  p.stream);
    case Property::Kind::OccursBefore:
        return check_occurs_before(p, env);
    case Property::Kind::Not: {
        Verdict v = check(p.operands.at(0), env);
        v.holds = !v.holds;
        v.explanation = "not (" + v.explanation + ")";
        return v;
    }
    case Property::Kind::And:
    case Property::Kind::Or: {
        Verdict l = check(p.operands.at(0), env);
        Verdict r = check(p.operands.at(1), env);
        const bool is_and = p.kind == Property::Kind::And;
        // The operand that decides the result supplies the witnesses.
        const bool decisive = is_and ? false : true;
        Verdict v;
        v.holds = is_and ? (l.holds && r.holds) : (l.holds || r.holds);
        if (v.holds != decisive) {
            v.witnesses = l.witnesses;
            v.witnesses.insert(v.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
            v.explanation = l.explanation + (is_and ? " and " : "; ") + r.explanation;
        } else {
            const Verdict& d = l.holds == decisive ? l : r;
            v.witnesses = d.witnesses;
            v.explanation = d.explanation;
        }
        return v;
    }
    }
    throw Error(ErrorKind::Domain, "unknown property kind");
}

}  // namespace focuse
