#pragma once

// Combined events, causal ordering predicates and a small property language.
//
// "Before" is strict throughout: two messages in the same causality
// interval are simultaneous and neither precedes the other.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "focuse/diagnostic.hpp"
#include "focuse/streams.hpp"

namespace focuse {

struct CombinedEvent {
    std::size_t index = 0;
    MessageList messages;

    // Set view of the interval, dropping order and multiplicity.
    std::set<Message> distinct() const { return {messages.begin(), messages.end()}; }

    bool operator==(const CombinedEvent&) const = default;
};

CombinedEvent combined_event(const TimedStream& s, std::size_t i);
CombinedEvent combined_event(const EventStream& s, std::size_t i);

// Compares the clock positions of causality interval i of s1 and j of s2.
bool occurs_before(const TimedStream& s1, std::size_t i, const TimedStream& s2, std::size_t j);
// Within one event stream causality order is the only order available.
bool occurs_before(const EventStream& s, std::size_t i, std::size_t j);

struct Witness {
    std::string stream;
    std::size_t index = 0;  // causality index
    Message message;

    bool operator==(const Witness&) const = default;
};

struct Verdict {
    bool holds = false;
    std::vector<Witness> witnesses;
    std::string explanation;
};

Verdict occurs(std::string_view sort, const EventStream& s, std::string_view name = "s");
Verdict always_before_first(std::string_view sort_a, std::string_view sort_b, const EventStream& s,
                            std::string_view name = "s");
Verdict always_before_each(std::string_view sort_a, std::string_view sort_b, const EventStream& s,
                           std::string_view name = "s");

inline Verdict occurs(std::string_view sort, const TimedStream& s, std::string_view name = "s") {
    return occurs(sort, to_event(s), name);
}
inline Verdict always_before_first(std::string_view a, std::string_view b, const TimedStream& s,
                                   std::string_view name = "s") {
    return always_before_first(a, b, to_event(s), name);
}
inline Verdict always_before_each(std::string_view a, std::string_view b, const TimedStream& s,
                                  std::string_view name = "s") {
    return always_before_each(a, b, to_event(s), name);
}

struct Property {
    enum class Kind { Occurs, FirstBefore, EachBefore, OccursBefore, Not, And, Or };

    Kind kind = Kind::Occurs;
    // Occurs: sort_a. FirstBefore/EachBefore: sort_a must precede sort_b.
    std::string sort_a;
    std::string sort_b;
    // Stream reference; OccursBefore compares (stream, index) with (stream2, index2).
    std::string stream;
    std::string stream2;
    std::size_t index = 0;
    std::size_t index2 = 0;
    // Not: one operand. And/Or: two.
    std::vector<Property> operands;
    SourceSpan span;

    static Property occurs(std::string sort, std::string stream);
    static Property first_before(std::string a, std::string b, std::string stream);
    static Property each_before(std::string a, std::string b, std::string stream);
    static Property occurs_before(std::string s1, std::size_t i, std::string s2, std::size_t j);
    static Property negate(Property p);
    static Property conj(Property lhs, Property rhs);
    static Property disj(Property lhs, Property rhs);

    // Structural equality; spans are ignored.
    bool operator==(const Property& other) const;
};

// Stream references used by p, in first-occurrence order.
std::vector<std::string> stream_refs(const Property& p);

using StreamValue = std::variant<TimedStream, EventStream>;
using StreamEnv = std::map<std::string, StreamValue, std::less<>>;

Verdict check(const Property& p, const StreamEnv& env);

}  // namespace focuse
