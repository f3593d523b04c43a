#pragma once

#include "focuse/streams.hpp"

namespace focuse::testing {

// <> <a> <b,c> <> <d> <a>
inline TimedStream worked() {
    return TimedStream({{}, messages({"a"}), messages({"b", "c"}), {}, messages({"d"}),
                        messages({"a"})});
}

inline TimedStream timed(std::initializer_list<std::initializer_list<std::string_view>> intervals) {
    std::vector<MessageList> out;
    for (auto l : intervals) out.push_back(messages(l));
    return TimedStream(std::move(out));
}

inline EventStream event(std::initializer_list<std::initializer_list<std::string_view>> intervals) {
    std::vector<MessageList> out;
    for (auto l : intervals) out.push_back(messages(l));
    return EventStream(std::move(out));
}

}  // namespace focuse::testing
