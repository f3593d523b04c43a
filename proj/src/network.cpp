#include "focuse/network.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "focuse/error.hpp"

namespace focuse {

const Instance* NetworkSpec::find_instance(std::string_view name) const {
    for (const auto& i : instances) {
        if (i.name == name) return &i;
    }
    return nullptr;
}

namespace {

bool declared(const std::vector<Declared>& list, std::string_view name) {
    return std::any_of(list.begin(), list.end(), [&](const Declared& d) { return d.name == name; });
}

struct Analysis {
    std::vector<Diagnostic> diags;
    std::vector<std::size_t> order;
    std::map<Endpoint, std::size_t> producers;
    std::vector<std::string> boundary_inputs;
};

class WiringChecker {
public:
    explicit WiringChecker(const NetworkSpec& n) : n_(n) {}

    Analysis run() {
        check_names();
        for (std::size_t w = 0; w < n_.wires.size(); ++w) check_wire(w);
        for (const auto& out : n_.external_outputs) {
            if (!a_.producers.count(Endpoint{"", out.name})) {
                warn(out.span, "UNDRIVEN_OUTPUT",
                     "external output '" + out.name + "' has no producer and stays empty");
            }
        }
        for (const auto& in : n_.external_inputs) a_.boundary_inputs.push_back(in.name);
        for (const auto& inst : n_.instances) {
            for (const auto& ch : inst.spec.inputs) {
                Endpoint e{inst.name, ch.name};
                if (!a_.producers.count(e)) a_.boundary_inputs.push_back(e.full_name());
            }
        }
        schedule();
        return std::move(a_);
    }

private:
    void error(const SourceSpan& span, std::string code, std::string message) {
        a_.diags.push_back({Severity::Error, span, std::move(message), std::move(code)});
    }
    void warn(const SourceSpan& span, std::string code, std::string message) {
        a_.diags.push_back({Severity::Warning, span, std::move(message), std::move(code)});
    }

    void check_names() {
        std::set<std::string> seen;
        for (const auto& i : n_.instances) {
            if (!seen.insert(i.name).second) {
                error(i.span, "DUP_NAME", "duplicate instance '" + i.name + "'");
            }
        }
        std::set<std::string> ext;
        for (const auto* list : {&n_.external_inputs, &n_.external_outputs}) {
            for (const auto& d : *list) {
                if (!ext.insert(d.name).second) {
                    error(d.span, "DUP_NAME", "duplicate external channel '" + d.name + "'");
                }
            }
        }
    }

    bool check_source(const Wire& w) {
        const Endpoint& e = w.from;
        if (e.instance.empty()) {
            if (declared(n_.external_inputs, e.channel)) return true;
            if (declared(n_.external_outputs, e.channel)) {
                error(w.span, "BAD_ENDPOINT", "wire reads from external output '" + e.channel + "'");
            } else {
                error(w.span, "UNKNOWN_CHANNEL", "unknown external input '" + e.channel + "'");
            }
            return false;
        }
        const Instance* inst = n_.find_instance(e.instance);
        if (!inst) {
            error(w.span, "UNKNOWN_INSTANCE", "unknown instance '" + e.instance + "'");
            return false;
        }
        if (inst->spec.is_output(e.channel)) return true;
        if (inst->spec.is_input(e.channel)) {
            error(w.span, "BAD_ENDPOINT", "wire reads from input channel '" + e.full_name() + "'");
        } else {
            error(w.span, "UNKNOWN_CHANNEL", "unknown channel '" + e.full_name() + "'");
        }
        return false;
    }

    bool check_target(const Wire& w) {
        const Endpoint& e = w.to;
        if (e.instance.empty()) {
            if (declared(n_.external_outputs, e.channel)) return true;
            if (declared(n_.external_inputs, e.channel)) {
                error(w.span, "BAD_ENDPOINT", "wire writes to external input '" + e.channel + "'");
            } else {
                error(w.span, "UNKNOWN_CHANNEL", "unknown external output '" + e.channel + "'");
            }
            return false;
        }
        const Instance* inst = n_.find_instance(e.instance);
        if (!inst) {
            error(w.span, "UNKNOWN_INSTANCE", "unknown instance '" + e.instance + "'");
            return false;
        }
        if (inst->spec.is_input(e.channel)) return true;
        if (inst->spec.is_output(e.channel)) {
            error(w.span, "BAD_ENDPOINT", "wire writes to output channel '" + e.full_name() + "'");
        } else {
            error(w.span, "UNKNOWN_CHANNEL", "unknown channel '" + e.full_name() + "'");
        }
        return false;
    }

    void check_wire(std::size_t index) {
        const Wire& w = n_.wires[index];
        bool ok = check_source(w);
        ok = check_target(w) && ok;
        if (!ok) return;
        auto [it, fresh] = a_.producers.emplace(w.to, index);
        if (!fresh) {
            error(w.span, "FAN_IN", "'" + w.to.full_name() + "' already fed by '" +
                                        n_.wires[it->second].from.full_name() + "'");
        }
    }

    std::size_t instance_index(const std::string& name) const {
        for (std::size_t i = 0; i < n_.instances.size(); ++i) {
            if (n_.instances[i].name == name) return i;
        }
        return n_.instances.size();
    }

    void schedule() {
        const std::size_t count = n_.instances.size();
        std::vector<std::set<std::size_t>> succ(count);
        std::vector<std::size_t> indegree(count, 0);
        for (const auto& [to, w] : a_.producers) {
            const Wire& wire = n_.wires[w];
            if (wire.delayed || wire.from.instance.empty() || to.instance.empty()) continue;
            std::size_t a = instance_index(wire.from.instance);
            std::size_t b = instance_index(to.instance);
            if (a >= count || b >= count) continue;
            if (succ[a].insert(b).second) ++indegree[b];
        }
        // Kahn's algorithm, always taking the earliest declared ready instance.
        std::set<std::size_t> ready;
        for (std::size_t i = 0; i < count; ++i) {
            if (indegree[i] == 0) ready.insert(i);
        }
        while (!ready.empty()) {
            std::size_t i = *ready.begin();
            ready.erase(ready.begin());
            a_.order.push_back(i);
            for (std::size_t j : succ[i]) {
                if (--indegree[j] == 0) ready.insert(j);
            }
        }
        if (a_.order.size() == count) return;

        // Every leftover instance has a leftover predecessor, so walking
        // backwards must revisit a node.
        std::vector<std::vector<std::size_t>> pred(count);
        for (std::size_t a = 0; a < count; ++a) {
            for (std::size_t b : succ[a]) pred[b].push_back(a);
        }
        std::vector<bool> left(count, true);
        for (std::size_t i : a_.order) left[i] = false;
        std::size_t node = 0;
        while (!left[node]) ++node;
        std::vector<std::size_t> path;
        std::vector<std::size_t> seen_at(count, count);
        while (seen_at[node] == count) {
            seen_at[node] = path.size();
            path.push_back(node);
            for (std::size_t j : pred[node]) {
                if (left[j]) {
                    node = j;
                    break;
                }
            }
        }
        std::string cycle = n_.instances[node].name;
        for (std::size_t k = path.size(); k-- > seen_at[node];) {
            cycle += " -> " + n_.instances[path[k]].name;
        }
        error(n_.instances[node].span, "CYCLE", "undelayed cycle " + cycle);
    }

    const NetworkSpec& n_;
    Analysis a_;
};

ErrorKind kind_for(const std::string& code) {
    if (code == "CYCLE") return ErrorKind::Composition;
    if (code == "FAN_IN") return ErrorKind::Wiring;
    return ErrorKind::Name;
}

}  // namespace

std::vector<Diagnostic> validate(const NetworkSpec& n) {
    std::vector<Diagnostic> out;
    std::set<std::string> done;
    for (const auto& inst : n.instances) {
        if (!done.insert(inst.spec.name).second) continue;
        for (auto d : validate(inst.spec)) {
            d.message = "component '" + inst.spec.name + "': " + d.message;
            out.push_back(std::move(d));
        }
    }
    auto wiring = validate_wiring(n);
    out.insert(out.end(), wiring.begin(), wiring.end());
    return out;
}

std::vector<Diagnostic> validate_wiring(const NetworkSpec& n) { return WiringChecker(n).run().diags; }

std::vector<std::string> ScheduledNetwork::order_names() const {
    std::vector<std::string> out;
    for (std::size_t i : order_) out.push_back(spec_.instances[i].name);
    return out;
}

std::optional<std::size_t> ScheduledNetwork::producer(const Endpoint& consumer) const {
    auto it = producers_.find(consumer);
    if (it == producers_.end()) return std::nullopt;
    return it->second;
}

ScheduledNetwork elaborate(NetworkSpec n) {
    Analysis a = WiringChecker(n).run();
    for (const auto& d : a.diags) {
        if (d.severity == Severity::Error) throw Error(kind_for(d.code), d.message);
    }
    ScheduledNetwork s;
    s.spec_ = std::move(n);
    s.order_ = std::move(a.order);
    s.inputs_ = std::move(a.boundary_inputs);
    s.producers_ = std::move(a.producers);
    return s;
}

Trace simulate(const ScheduledNetwork& n, const std::map<std::string, TimedStream>& inputs,
               std::size_t intervals, StepOptions options) {
    const NetworkSpec& spec = n.spec();
    for (const auto& name : n.inputs()) {
        auto it = inputs.find(name);
        if (it == inputs.end()) {
            throw Error(ErrorKind::Arity, "missing stream for external input '" + name + "'");
        }
        if (it->second.size() < intervals) {
            throw Error(ErrorKind::Length, "input stream '" + name + "' has " +
                                               std::to_string(it->second.size()) +
                                               " intervals, need " + std::to_string(intervals));
        }
    }
    for (const auto& [name, _] : inputs) {
        if (std::find(n.inputs().begin(), n.inputs().end(), name) == n.inputs().end()) {
            throw Error(ErrorKind::Name, "'" + name + "' is not an external input");
        }
    }

    std::map<std::string, VarMap> state;
    for (const auto& inst : spec.instances) state.emplace(inst.name, inst.spec.initial_state());

    Trace trace;
    std::map<std::string, MessageList> previous;
    for (std::size_t t = 0; t < intervals; ++t) {
        TraceRecord rec;
        rec.t = t;
        auto& current = rec.channels;
        for (const auto& name : n.inputs()) current[name] = ti(inputs.at(name), t);

        auto delivered = [&](const Endpoint& consumer) -> MessageList {
            auto w = n.producer(consumer);
            if (!w) return current.count(consumer.full_name()) ? current[consumer.full_name()]
                                                               : MessageList{};
            const Wire& wire = spec.wires[*w];
            if (wire.delayed) return t == 0 ? wire.initial : previous.at(wire.from.full_name());
            return current.at(wire.from.full_name());
        };

        for (std::size_t idx : n.order()) {
            const Instance& inst = spec.instances[idx];
            ChannelMap in;
            for (const auto& ch : inst.spec.inputs) {
                Endpoint e{inst.name, ch.name};
                MessageList l = delivered(e);
                current[e.full_name()] = l;
                in.emplace(ch.name, std::move(l));
            }
            StepResult r = step(inst.spec, state.at(inst.name), in, options);
            for (auto& [ch, l] : r.outputs) current[inst.name + "." + ch] = std::move(l);
            if (r.assumption_violated) rec.violations.push_back(inst.name);
            state[inst.name] = std::move(r.state);
        }
        for (const auto& out : spec.external_outputs) {
            current[out.name] = delivered(Endpoint{"", out.name});
        }
        std::sort(rec.violations.begin(), rec.violations.end());
        rec.states = state;
        previous = current;
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

std::vector<std::string> Trace::channel_names() const {
    std::vector<std::string> out;
    if (records.empty()) return out;
    for (const auto& [name, _] : records.front().channels) out.push_back(name);
    return out;
}

TimedStream Trace::stream(const std::string& channel) const {
    std::vector<MessageList> intervals;
    intervals.reserve(records.size());
    for (const auto& r : records) {
        auto it = r.channels.find(channel);
        if (it == r.channels.end()) {
            throw Error(ErrorKind::Name, "trace has no channel '" + channel + "'");
        }
        intervals.push_back(it->second);
    }
    if (records.empty()) throw Error(ErrorKind::Name, "trace has no channel '" + channel + "'");
    return TimedStream(std::move(intervals));
}

std::vector<Verdict> check_trace(const Trace& tr, const std::vector<Property>& props) {
    std::vector<Verdict> out;
    for (const auto& p : props) {
        StreamEnv env;
        for (const auto& ref : stream_refs(p)) env.emplace(ref, tr.stream(ref));
        out.push_back(check(p, env));
    }
    return out;
}

std::vector<InstanceGuarantee> check_instance_guarantees(const ScheduledNetwork& n,
                                                         const Trace& tr) {
    std::vector<InstanceGuarantee> out;
    for (const auto& inst : n.spec().instances) {
        if (inst.spec.guarantees.empty()) continue;
        std::map<std::string, TimedStream> local;
        for (const auto* list : {&inst.spec.inputs, &inst.spec.outputs}) {
            for (const auto& ch : *list) {
                std::vector<MessageList> intervals;
                for (const auto& r : tr.records) {
                    auto it = r.channels.find(inst.name + "." + ch.name);
                    intervals.push_back(it == r.channels.end() ? MessageList{} : it->second);
                }
                local.emplace(ch.name, TimedStream(std::move(intervals)));
            }
        }
        std::vector<std::size_t> violations;
        for (const auto& r : tr.records) {
            if (std::find(r.violations.begin(), r.violations.end(), inst.name) !=
                r.violations.end()) {
                violations.push_back(r.t);
            }
        }
        auto results = check_guarantees(inst.spec, local, violations);
        for (std::size_t k = 0; k < results.size(); ++k) {
            out.push_back({inst.name, k, std::move(results[k])});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON lines

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const MessageList& l) {
    ordered_json a = ordered_json::array();
    for (const auto& m : l) a.push_back(to_string(m));
    return a;
}

Message message_from(const std::string& text) {
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) return Message(text);
        return Message(text.substr(0, colon), text.substr(colon + 1));
    } catch (const Error&) {
        throw Error(ErrorKind::Parse, "invalid message '" + text + "' in trace");
    }
}

MessageList list_from(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, "expected message array in trace");
    MessageList out;
    for (const auto& m : j) {
        if (!m.is_string()) throw Error(ErrorKind::Parse, "expected message string in trace");
        out.push_back(message_from(m.get<std::string>()));
    }
    return out;
}

}  // namespace

void write_trace(std::ostream& os, const Trace& tr) {
    for (const auto& r : tr.records) {
        ordered_json line;
        line["t"] = r.t;
        ordered_json channels = ordered_json::object();
        for (const auto& [name, l] : r.channels) channels[name] = to_json(l);
        line["channels"] = std::move(channels);
        ordered_json states = ordered_json::object();
        for (const auto& [inst, vars] : r.states) {
            ordered_json v = ordered_json::object();
            for (const auto& [var, value] : vars) {
                if (const auto* i = std::get_if<std::int64_t>(&value)) {
                    v[var] = *i;
                } else {
                    v[var] = to_string(std::get<Message>(value));
                }
            }
            states[inst] = std::move(v);
        }
        line["states"] = std::move(states);
        line["violations"] = r.violations;
        os << line.dump() << '\n';
    }
}

std::string trace_to_jsonl(const Trace& tr) {
    std::ostringstream os;
    write_trace(os, tr);
    return os.str();
}

Trace read_trace(std::string_view text) {
    Trace tr;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fail = [&](const std::string& why) {
            return Error(ErrorKind::Parse, "trace line " + std::to_string(lineno) + ": " + why);
        };
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw fail(e.what());
        }
        if (!j.is_object() || !j.contains("t") || !j["t"].is_number_unsigned() ||
            !j.contains("channels") || !j["channels"].is_object()) {
            throw fail("missing 't' or 'channels'");
        }
        TraceRecord r;
        r.t = j["t"].get<std::size_t>();
        if (r.t != tr.records.size()) throw fail("records out of order");
        for (const auto& [name, l] : j["channels"].items()) r.channels[name] = list_from(l);
        if (j.contains("states")) {
            if (!j["states"].is_object()) throw fail("'states' must be an object");
            for (const auto& [inst, vars] : j["states"].items()) {
                if (!vars.is_object()) throw fail("state of '" + inst + "' must be an object");
                VarMap vm;
                for (const auto& [var, value] : vars.items()) {
                    if (value.is_number_integer()) {
                        vm.emplace(var, value.get<std::int64_t>());
                    } else if (value.is_string()) {
                        vm.emplace(var, message_from(value.get<std::string>()));
                    } else {
                        throw fail("bad value for '" + var + "'");
                    }
                }
                r.states.emplace(inst, std::move(vm));
            }
        }
        if (j.contains("violations")) {
            if (!j["violations"].is_array()) throw fail("'violations' must be an array");
            for (const auto& v : j["violations"]) {
                if (!v.is_string()) throw fail("violation entries must be strings");
                r.violations.push_back(v.get<std::string>());
            }
        }
        tr.records.push_back(std::move(r));
    }
    return tr;
}

}  // namespace focuse
