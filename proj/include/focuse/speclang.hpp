#pragma once

// Text formats: stream literals (.fstream), properties (.fprop), component
// specs (.fcomp) and networks (.fnet). `--` starts a comment in all of them.
//
// Parsers never throw on bad input; every failure is reported as a
// Diagnostic whose span lies inside the text. Printers emit a canonical
// form that parses back to an equal value.

#include <string>
#include <string_view>
#include <vector>

#include "focuse/causality.hpp"
#include "focuse/components.hpp"
#include "focuse/diagnostic.hpp"
#include "focuse/network.hpp"
#include "focuse/streams.hpp"

namespace focuse {

ParseResult<TimedStream> parse_stream(std::string_view text);
// Same grammar, but `<>` is rejected.
ParseResult<EventStream> parse_event_stream(std::string_view text);

ParseResult<Property> parse_property(std::string_view text);
// Zero or more properties, optionally separated by ';'.
ParseResult<std::vector<Property>> parse_properties(std::string_view text);

ParseResult<ComponentSpec> parse_component(std::string_view text);

// Any number of component blocks followed by one network block.
ParseResult<NetworkSpec> parse_network(std::string_view text);

struct StreamBinding {
    std::string name;  // empty for an unnamed literal
    StreamValue value;
    SourceSpan span;
};

// Either a single unnamed literal, or bindings `name = <...>` and
// `event name = <...>`.
ParseResult<std::vector<StreamBinding>> parse_stream_file(std::string_view text);

std::string print(const Message& m);
std::string print(const MessageList& l);
std::string print(const TimedStream& s);
std::string print(const EventStream& s);
std::string print(const Property& p);
std::string print(const Expr& e);
std::string print(const Condition& c);
std::string print(const ComponentSpec& c);
std::string print(const NetworkSpec& n);

}  // namespace focuse
