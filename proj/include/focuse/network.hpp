#pragma once

// Networks of component instances joined by named channels.
//
// Within one interval undelayed wires are instantaneous, so components step
// in topological order. A delayed wire hands the consumer what the producer
// emitted one interval earlier (its declared initial contents at t = 0);
// every feedback cycle needs one.

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "focuse/causality.hpp"
#include "focuse/components.hpp"
#include "focuse/diagnostic.hpp"
#include "focuse/streams.hpp"

namespace focuse {

// A channel endpoint: `instance.channel`, or a bare boundary channel name
// when instance is empty.
struct Endpoint {
    std::string instance;
    std::string channel;

    std::string full_name() const { return instance.empty() ? channel : instance + "." + channel; }
    bool operator==(const Endpoint&) const = default;
    auto operator<=>(const Endpoint&) const = default;
};

struct Wire {
    Endpoint from;
    Endpoint to;
    bool delayed = false;
    MessageList initial;  // buffer contents delivered at t = 0 when delayed
    SourceSpan span;

    bool operator==(const Wire& o) const {
        return from == o.from && to == o.to && delayed == o.delayed && initial == o.initial;
    }
};

struct Instance {
    std::string name;
    ComponentSpec spec;
    SourceSpan span;

    bool operator==(const Instance& o) const { return name == o.name && spec == o.spec; }
};

struct NetworkSpec {
    std::string name;
    std::vector<Instance> instances;
    std::vector<Declared> external_inputs;
    std::vector<Declared> external_outputs;
    std::vector<Wire> wires;
    SourceSpan span;

    bool operator==(const NetworkSpec& o) const {
        return name == o.name && instances == o.instances &&
               external_inputs == o.external_inputs && external_outputs == o.external_outputs &&
               wires == o.wires;
    }

    const Instance* find_instance(std::string_view name) const;
};

// Load-time wiring checks: unknown endpoints, fan-in, undelayed cycles,
// duplicate names, plus each component's own validation.
std::vector<Diagnostic> validate(const NetworkSpec& n);
// Wiring checks only.
std::vector<Diagnostic> validate_wiring(const NetworkSpec& n);

class ScheduledNetwork {
public:
    const NetworkSpec& spec() const { return spec_; }
    // Instance indices in step order.
    const std::vector<std::size_t>& order() const { return order_; }
    std::vector<std::string> order_names() const;
    // Boundary inputs: declared ones, then unconnected instance inputs
    // (named `instance.channel`).
    const std::vector<std::string>& inputs() const { return inputs_; }
    // Index into spec().wires of the wire feeding a consumer endpoint.
    std::optional<std::size_t> producer(const Endpoint& consumer) const;

private:
    friend ScheduledNetwork elaborate(NetworkSpec n);
    NetworkSpec spec_;
    std::vector<std::size_t> order_;
    std::vector<std::string> inputs_;
    std::map<Endpoint, std::size_t> producers_;
};

// Throws Error{Composition} for an undelayed cycle (naming it),
// Error{Name} for a dangling endpoint, Error{Wiring} for fan-in > 1.
ScheduledNetwork elaborate(NetworkSpec n);

struct TraceRecord {
    std::size_t t = 0;
    std::map<std::string, MessageList> channels;  // full channel name -> contents
    std::map<std::string, VarMap> states;          // instance -> state after step t
    std::vector<std::string> violations;           // instances whose assumption failed

    bool operator==(const TraceRecord&) const = default;
};

struct Trace {
    std::vector<TraceRecord> records;

    bool operator==(const Trace&) const = default;

    std::vector<std::string> channel_names() const;
    // Reconstructed stream of one channel; Error{Name} if absent.
    TimedStream stream(const std::string& channel) const;
};

Trace simulate(const ScheduledNetwork& n, const std::map<std::string, TimedStream>& inputs,
               std::size_t intervals, StepOptions options = {});

inline Trace simulate(NetworkSpec n, const std::map<std::string, TimedStream>& inputs,
                      std::size_t intervals, StepOptions options = {}) {
    return simulate(elaborate(std::move(n)), inputs, intervals, options);
}

std::vector<Verdict> check_trace(const Trace& tr, const std::vector<Property>& props);

struct InstanceGuarantee {
    std::string instance;
    std::size_t index = 0;  // into the component's guarantees
    GuaranteeResult result;
};

// Runs every instance's declared guarantees against its local view of the
// trace (channel names without the instance prefix).
std::vector<InstanceGuarantee> check_instance_guarantees(const ScheduledNetwork& n,
                                                         const Trace& tr);

// One JSON object per line:
// {"t":..,"channels":{..},"states":{..},"violations":[..]}
void write_trace(std::ostream& os, const Trace& tr);
std::string trace_to_jsonl(const Trace& tr);
// Inverse of write_trace; Error{Parse} on malformed input.
Trace read_trace(std::string_view text);

}  // namespace focuse
