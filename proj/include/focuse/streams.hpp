#pragma once

// Timed and event streams.
//
// A TimedStream holds one message list per time interval; empty intervals
// are allowed. An EventStream holds one message list per causality
// interval and never contains an empty one. Removing the empty intervals
// of a timed stream yields its event stream; embedding places an event
// stream back on the clock at strictly increasing time positions.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace focuse {

bool is_identifier(std::string_view text);

class Message {
public:
    explicit Message(std::string name, std::optional<std::string> sort = std::nullopt);

    const std::string& name() const { return name_; }
    const std::optional<std::string>& sort() const { return sort_; }

    // A message matches a sort if its tag equals it, or, when untagged, if
    // its name does.
    bool has_sort(std::string_view sort) const;

    bool operator==(const Message&) const = default;
    auto operator<=>(const Message&) const = default;

private:
    std::string name_;
    std::optional<std::string> sort_;
};

using MessageList = std::vector<Message>;

// Messages named by bare identifiers, no sort tags.
MessageList messages(std::initializer_list<std::string_view> names);

class TimedStream {
public:
    TimedStream() = default;
    explicit TimedStream(std::vector<MessageList> intervals) : intervals_(std::move(intervals)) {}

    const std::vector<MessageList>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }

    bool operator==(const TimedStream&) const = default;

private:
    std::vector<MessageList> intervals_;
};

class EventStream {
public:
    EventStream() = default;
    // Throws ErrorKind::Invariant if any interval is empty.
    explicit EventStream(std::vector<MessageList> intervals);

    const std::vector<MessageList>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }

    bool operator==(const EventStream&) const = default;

private:
    std::vector<MessageList> intervals_;
};

// Time positions of consecutive causality intervals. Gaps between
// neighbours are at least one tick.
class DeltaSchedule {
public:
    DeltaSchedule() = default;
    // Throws ErrorKind::Invariant unless strictly increasing.
    explicit DeltaSchedule(std::vector<std::size_t> positions);

    // Contiguous placement 0, 1, 2, ...
    static DeltaSchedule dense(std::size_t count);

    const std::vector<std::size_t>& positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }

    bool operator==(const DeltaSchedule&) const = default;

private:
    std::vector<std::size_t> positions_;
};

/// The t-th time interval of s.
const MessageList& ti(const TimedStream& s, std::size_t t);

/// The i-th causality interval: the i-th non-empty time interval.
const MessageList& ci(const TimedStream& s, std::size_t i);
const MessageList& ci(const EventStream& s, std::size_t i);

const Message& first(const MessageList& l);

EventStream to_event(const TimedStream& s);

TimedStream embed(const EventStream& e, const DeltaSchedule& d);

// For each time interval, its causality index, or nullopt when empty.
std::vector<std::optional<std::size_t>> causality_index_map(const TimedStream& s);

// Time index at which causality interval i of s sits.
std::size_t time_position(const TimedStream& s, std::size_t i);

// Number of non-empty intervals.
std::size_t causality_length(const TimedStream& s);

// All messages in interval order.
MessageList flatten(const TimedStream& s);
MessageList flatten(const EventStream& s);

std::string to_string(const Message& m);
std::ostream& operator<<(std::ostream& os, const Message& m);

}  // namespace focuse
