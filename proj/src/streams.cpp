#include "focuse/streams.hpp"

#include <sstream>

#include "focuse/error.hpp"

namespace focuse {

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    if (!alpha(text.front())) return false;
    for (char c : text) {
        if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
    }
    return true;
}

Message::Message(std::string name, std::optional<std::string> sort)
    : name_(std::move(name)), sort_(std::move(sort)) {
    if (!is_identifier(name_)) {
        throw Error(ErrorKind::Domain, "invalid message name '" + name_ + "'");
    }
    if (sort_ && !is_identifier(*sort_)) {
        throw Error(ErrorKind::Domain, "invalid sort tag '" + *sort_ + "'");
    }
}

bool Message::has_sort(std::string_view sort) const {
    return sort_ ? *sort_ == sort : name_ == sort;
}

MessageList messages(std::initializer_list<std::string_view> names) {
    MessageList out;
    out.reserve(names.size());
    for (auto n : names) out.emplace_back(std::string(n));
    return out;
}

EventStream::EventStream(std::vector<MessageList> intervals) : intervals_(std::move(intervals)) {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (intervals_[i].empty()) {
            throw Error(ErrorKind::Invariant,
                        "event stream interval " + std::to_string(i) + " is empty");
        }
    }
}

DeltaSchedule::DeltaSchedule(std::vector<std::size_t> positions) : positions_(std::move(positions)) {
    for (std::size_t k = 1; k < positions_.size(); ++k) {
        if (positions_[k] <= positions_[k - 1]) {
            throw Error(ErrorKind::Invariant,
                        "schedule is not strictly increasing at position " + std::to_string(k));
        }
    }
}

DeltaSchedule DeltaSchedule::dense(std::size_t count) {
    std::vector<std::size_t> p(count);
    for (std::size_t k = 0; k < count; ++k) p[k] = k;
    return DeltaSchedule(std::move(p));
}

const MessageList& ti(const TimedStream& s, std::size_t t) {
    if (t >= s.size()) {
        throw Error(ErrorKind::Index, "time index " + std::to_string(t) +
                                          " out of range for stream of length " +
                                          std::to_string(s.size()));
    }
    return s.intervals()[t];
}

const MessageList& ci(const TimedStream& s, std::size_t i) {
    return ti(s, time_position(s, i));
}

const MessageList& ci(const EventStream& s, std::size_t i) {
    if (i >= s.size()) {
        throw Error(ErrorKind::Index, "causality index " + std::to_string(i) +
                                          " out of range for causality length " +
                                          std::to_string(s.size()));
    }
    return s.intervals()[i];
}

const Message& first(const MessageList& l) {
    if (l.empty()) throw Error(ErrorKind::Domain, "first of empty list");
    return l.front();
}

EventStream to_event(const TimedStream& s) {
    std::vector<MessageList> kept;
    for (const auto& l : s.intervals()) {
        if (!l.empty()) kept.push_back(l);
    }
    return EventStream(std::move(kept));
}

TimedStream embed(const EventStream& e, const DeltaSchedule& d) {
    if (d.size() != e.size()) {
        throw Error(ErrorKind::Arity, "schedule has " + std::to_string(d.size()) +
                                          " positions for " + std::to_string(e.size()) +
                                          " causality intervals");
    }
    if (e.empty()) return TimedStream{};
    std::vector<MessageList> out(d.positions().back() + 1);
    for (std::size_t k = 0; k < e.size(); ++k) out[d.positions()[k]] = e.intervals()[k];
    return TimedStream(std::move(out));
}

std::vector<std::optional<std::size_t>> causality_index_map(const TimedStream& s) {
    std::vector<std::optional<std::size_t>> out;
    out.reserve(s.size());
    std::size_t next = 0;
    for (const auto& l : s.intervals()) {
        out.push_back(l.empty() ? std::nullopt : std::optional<std::size_t>(next++));
    }
    return out;
}

std::size_t time_position(const TimedStream& s, std::size_t i) {
    std::size_t seen = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s.intervals()[t].empty()) continue;
        if (seen == i) return t;
        ++seen;
    }
    throw Error(ErrorKind::Index, "causality index " + std::to_string(i) +
                                      " out of range for causality length " +
                                      std::to_string(seen));
}

std::size_t causality_length(const TimedStream& s) {
    std::size_t n = 0;
    for (const auto& l : s.intervals()) n += !l.empty();
    return n;
}

namespace {
MessageList concat(const std::vector<MessageList>& intervals) {
    MessageList out;
    for (const auto& l : intervals) out.insert(out.end(), l.begin(), l.end());
    return out;
}
}  // namespace

MessageList flatten(const TimedStream& s) { return concat(s.intervals()); }
MessageList flatten(const EventStream& s) { return concat(s.intervals()); }

std::string to_string(const Message& m) {
    return m.sort() ? m.name() + ":" + *m.sort() : m.name();
}

std::ostream& operator<<(std::ostream& os, const Message& m) { return os << to_string(m); }

}  // namespace focuse
