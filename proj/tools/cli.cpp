#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "focuse/causality.hpp"
#include "focuse/components.hpp"
#include "focuse/error.hpp"
#include "focuse/network.hpp"
#include "focuse/speclang.hpp"
#include "focuse/streams.hpp"

namespace focuse::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raised to leave a command early with an exit code; message goes to stderr.
struct Exit {
    int code;
    std::string message;
};

struct Options {
    std::string format = "text";
    bool strict = false;
    std::string output;
    // convert
    std::string stream_file;
    bool to_event = false;
    bool to_timed = false;
    std::string schedule;
    // simulate
    std::string net_file;
    std::vector<std::string> input_files;
    std::size_t intervals = 0;
    std::string trace_path;
    // check
    std::string prop_file;
    std::vector<std::string> data_files;
    // validate
    std::string spec_file;
};

class Reporter {
public:
    Reporter(std::ostream& out, bool color) : out_(out), color_(color) {}

    std::ostream& out() { return out_; }

    std::string paint(const std::string& text, const char* code) const {
        return color_ ? std::string("\x1b[") + code + "m" + text + "\x1b[0m" : text;
    }

private:
    std::ostream& out_;
    bool color_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Exit{kExitUsage, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Exit{kExitUsage, "cannot read '" + path + "'"};
    return ss.str();
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

std::string render(const std::string& path, const std::vector<Diagnostic>& diags) {
    std::ostringstream os;
    for (const auto& d : diags) os << path << ':' << d << '\n';
    return os.str();
}

// Parse result or Exit{2} carrying the rendered diagnostics.
template <typename T>
T require(ParseResult<T> r, const std::string& path) {
    if (!r.ok()) throw Exit{kExitUsage, render(path, r.diagnostics)};
    return std::move(*r.value);
}

json stream_json(const std::vector<MessageList>& intervals) {
    json a = json::array();
    for (const auto& l : intervals) {
        json i = json::array();
        for (const auto& m : l) i.push_back(to_string(m));
        a.push_back(std::move(i));
    }
    return a;
}

const std::vector<MessageList>& intervals_of(const StreamValue& v) {
    return std::visit([](const auto& s) -> const std::vector<MessageList>& { return s.intervals(); },
                      v);
}

std::string print_value(const StreamValue& v) {
    return std::visit([](const auto& s) { return print(s); }, v);
}

std::vector<std::size_t> parse_schedule(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit) || item.size() > 18) {
            throw Exit{kExitUsage, "invalid schedule entry '" + item + "'"};
        }
        out.push_back(std::stoull(item));
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_convert(const Options& o, Reporter& rep) {
    if (o.to_event == o.to_timed) {
        throw Exit{kExitUsage, "convert needs exactly one of --to-event or --to-timed"};
    }
    if (o.to_timed && o.schedule.empty()) throw Exit{kExitUsage, "--to-timed requires --schedule"};
    auto bindings = require(parse_stream_file(read_file(o.stream_file)), o.stream_file);

    std::vector<std::pair<std::string, StreamValue>> converted;
    for (auto& b : bindings) {
        std::string name = b.name.empty() ? stem(o.stream_file) : b.name;
        if (o.to_event) {
            if (auto* t = std::get_if<TimedStream>(&b.value)) {
                converted.emplace_back(name, to_event(*t));
            } else {
                converted.emplace_back(name, b.value);
            }
            continue;
        }
        EventStream e;
        if (auto* t = std::get_if<TimedStream>(&b.value)) {
            try {
                e = EventStream(t->intervals());
            } catch (const Error&) {
                throw Exit{kExitUsage, "stream '" + name + "' has empty intervals; it is not an "
                                                           "event stream"};
            }
        } else {
            e = std::get<EventStream>(b.value);
        }
        try {
            converted.emplace_back(name, embed(e, DeltaSchedule(parse_schedule(o.schedule))));
        } catch (const Error& err) {
            throw Exit{kExitUsage, std::string(err.what())};
        }
    }

    if (o.format == "json") {
        json streams = json::object();
        for (const auto& [name, v] : converted) streams[name] = stream_json(intervals_of(v));
        rep.out() << json{{"streams", std::move(streams)}}.dump() << '\n';
    } else if (bindings.size() == 1 && bindings.front().name.empty()) {
        rep.out() << print_value(converted.front().second) << '\n';
    } else {
        for (const auto& [name, v] : converted) {
            rep.out() << (std::holds_alternative<EventStream>(v) ? "event " : "") << name << " = "
                      << print_value(v) << '\n';
        }
    }
    return kExitOk;
}

std::map<std::string, StreamValue> load_streams(const std::vector<std::string>& files) {
    std::map<std::string, StreamValue> out;
    auto add = [&](const std::string& name, StreamValue v, const std::string& file) {
        if (!out.emplace(name, std::move(v)).second) {
            throw Exit{kExitUsage, "stream '" + name + "' defined twice (" + file + ")"};
        }
    };
    for (const auto& file : files) {
        std::string text = read_file(file);
        std::string ext = extension(file);
        if (ext == ".jsonl" || ext == ".trace") {
            Trace tr;
            try {
                tr = read_trace(text);
            } catch (const Error& e) {
                throw Exit{kExitUsage, file + ": " + e.what()};
            }
            for (const auto& ch : tr.channel_names()) add(ch, tr.stream(ch), file);
            continue;
        }
        for (auto& b : require(parse_stream_file(text), file)) {
            add(b.name.empty() ? stem(file) : b.name, std::move(b.value), file);
        }
    }
    return out;
}

int cmd_simulate(const Options& o, Reporter& rep) {
    NetworkSpec spec = require(parse_network(read_file(o.net_file)), o.net_file);
    std::map<std::string, TimedStream> inputs;
    for (auto& [name, v] : load_streams(o.input_files)) {
        auto* t = std::get_if<TimedStream>(&v);
        if (!t) throw Exit{kExitUsage, "input '" + name + "' must be a timed stream"};
        inputs.emplace(name, std::move(*t));
    }

    ScheduledNetwork net;
    Trace trace;
    try {
        net = elaborate(std::move(spec));
        trace = simulate(net, inputs, o.intervals, StepOptions{o.strict});
    } catch (const Error& e) {
        throw Exit{kExitUsage, std::string(e.what())};
    }

    if (!o.trace_path.empty()) {
        std::ofstream f(o.trace_path, std::ios::binary);
        if (!f) throw Exit{kExitUsage, "cannot write '" + o.trace_path + "'"};
        write_trace(f, trace);
    }

    std::map<std::string, std::vector<std::size_t>> violations;
    for (const auto& r : trace.records) {
        for (const auto& inst : r.violations) violations[inst].push_back(r.t);
    }
    std::vector<InstanceGuarantee> guarantees;
    try {
        guarantees = check_instance_guarantees(net, trace);
    } catch (const Error& e) {
        throw Exit{kExitUsage, std::string(e.what())};
    }
    bool failed = std::any_of(guarantees.begin(), guarantees.end(),
                              [](const InstanceGuarantee& g) { return g.result.failed(); });

    if (o.format == "json") {
        json channels = json::object();
        for (const auto& ch : trace.channel_names()) {
            channels[ch] = stream_json(trace.stream(ch).intervals());
        }
        json viol = json::object();
        for (const auto& [inst, ts] : violations) viol[inst] = ts;
        json guar = json::array();
        for (const auto& g : guarantees) {
            const auto& p = net.spec().find_instance(g.instance)->spec.guarantees[g.index];
            guar.push_back({{"instance", g.instance},
                            {"property", print(p)},
                            {"holds", g.result.verdict.holds},
                            {"vacuous", g.result.vacuous}});
        }
        rep.out() << json{{"intervals", o.intervals},
                          {"order", net.order_names()},
                          {"channels", std::move(channels)},
                          {"violations", std::move(viol)},
                          {"guarantees", std::move(guar)}}
                         .dump()
                  << '\n';
        return failed ? kExitFailure : kExitOk;
    }

    rep.out() << "simulated " << o.intervals << " intervals, order:";
    for (const auto& n : net.order_names()) rep.out() << ' ' << n;
    rep.out() << '\n';
    for (const auto& ch : trace.channel_names()) {
        rep.out() << "  " << ch << ": " << print(trace.stream(ch)) << '\n';
    }
    for (const auto& [inst, ts] : violations) {
        rep.out() << rep.paint("WARN", "33") << " assumption of '" << inst
                  << "' violated at intervals";
        for (auto t : ts) rep.out() << ' ' << t;
        rep.out() << '\n';
    }
    for (const auto& g : guarantees) {
        const auto& p = net.spec().find_instance(g.instance)->spec.guarantees[g.index];
        std::string status = g.result.verdict.holds ? rep.paint("HOLDS", "32")
                             : g.result.vacuous     ? rep.paint("VACUOUS", "33")
                                                    : rep.paint("VIOLATED", "31");
        rep.out() << "guarantee " << g.instance << ": " << status << ' ' << print(p) << '\n';
    }
    return failed ? kExitFailure : kExitOk;
}

std::string witness_text(const std::vector<Witness>& ws) {
    std::string out;
    for (const auto& w : ws) {
        if (!out.empty()) out += ' ';
        out += w.stream + "@" + std::to_string(w.index) + ":" + to_string(w.message);
    }
    return out;
}

int cmd_check(const Options& o, Reporter& rep) {
    auto props = require(parse_properties(read_file(o.prop_file)), o.prop_file);
    StreamEnv env;
    for (auto& [name, v] : load_streams(o.data_files)) env.emplace(name, std::move(v));

    std::vector<Verdict> verdicts;
    for (const auto& p : props) {
        try {
            verdicts.push_back(check(p, env));
        } catch (const Error& e) {
            throw Exit{kExitUsage, o.prop_file + ":" + std::to_string(p.span.line) + ":" +
                                       std::to_string(p.span.column) + ": " + e.what()};
        }
    }
    bool all = std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.holds; });

    if (o.format == "json") {
        json results = json::array();
        for (std::size_t k = 0; k < props.size(); ++k) {
            json ws = json::array();
            for (const auto& w : verdicts[k].witnesses) {
                ws.push_back({{"stream", w.stream},
                              {"index", w.index},
                              {"message", to_string(w.message)}});
            }
            results.push_back({{"property", print(props[k])},
                               {"holds", verdicts[k].holds},
                               {"witnesses", std::move(ws)},
                               {"explanation", verdicts[k].explanation}});
        }
        rep.out() << json{{"results", std::move(results)}, {"all_hold", all}}.dump() << '\n';
    } else {
        for (std::size_t k = 0; k < props.size(); ++k) {
            const Verdict& v = verdicts[k];
            rep.out() << (v.holds ? rep.paint("HOLDS", "32") : rep.paint("VIOLATED", "31")) << ' '
                      << print(props[k]);
            if (!v.witnesses.empty()) rep.out() << " | witnesses: " << witness_text(v.witnesses);
            rep.out() << " | " << v.explanation << '\n';
        }
    }
    return all ? kExitOk : kExitFailure;
}

enum class FileKind { Stream, Property, Component, Network };

FileKind sniff(const std::string& path, const std::string& text) {
    std::string ext = extension(path);
    if (ext == ".fstream") return FileKind::Stream;
    if (ext == ".fprop") return FileKind::Property;
    if (ext == ".fcomp") return FileKind::Component;
    if (ext == ".fnet") return FileKind::Network;
    // Unknown extension: decide from the leading keyword.
    std::istringstream in(text);
    std::string word;
    while (in >> word) {
        if (word.rfind("--", 0) == 0) {
            std::getline(in, word);
            continue;
        }
        if (word == "network") return FileKind::Network;
        if (word == "component") {
            return text.find("\nnetwork") != std::string::npos ? FileKind::Network
                                                               : FileKind::Component;
        }
        if (word[0] == '<' || word == "empty" || word == "event" ||
            text.find('=') != std::string::npos) {
            return FileKind::Stream;
        }
        return FileKind::Property;
    }
    return FileKind::Stream;
}

int cmd_validate(const Options& o, Reporter& rep) {
    std::string text = read_file(o.spec_file);
    std::vector<Diagnostic> diags;
    switch (sniff(o.spec_file, text)) {
    case FileKind::Stream: diags = parse_stream_file(text).diagnostics; break;
    case FileKind::Property: diags = parse_properties(text).diagnostics; break;
    case FileKind::Component: diags = parse_component(text).diagnostics; break;
    case FileKind::Network: diags = parse_network(text).diagnostics; break;
    }
    std::size_t errors = count(diags, Severity::Error);
    std::size_t warnings = count(diags, Severity::Warning);

    if (o.format == "json") {
        json list = json::array();
        for (const auto& d : diags) {
            list.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                            {"line", d.span.line},
                            {"column", d.span.column},
                            {"length", d.span.length},
                            {"code", d.code},
                            {"message", d.message}});
        }
        rep.out() << json{{"file", o.spec_file},
                          {"errors", errors},
                          {"warnings", warnings},
                          {"diagnostics", std::move(list)}}
                         .dump()
                  << '\n';
    } else {
        for (const auto& d : diags) {
            rep.out() << o.spec_file << ':' << d.span.line << ':' << d.span.column << ": "
                      << (d.severity == Severity::Error ? rep.paint("error", "31")
                                                        : rep.paint("warning", "33"))
                      << '[' << d.code << "]: " << d.message << '\n';
        }
        rep.out() << errors << " errors, " << warnings << " warnings\n";
    }
    return errors == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
    CLI::App app{"Timed and event stream tooling: convert, simulate, check, validate", "focuse"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "Report format")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("-o,--output", o.output, "Write the report to this file");
    };

    auto* convert = app.add_subcommand("convert", "Convert between timed and event streams");
    convert->add_option("file", o.stream_file, "Stream file")->required();
    convert->add_flag("--to-event", o.to_event, "Drop empty intervals");
    convert->add_flag("--to-timed", o.to_timed, "Place causality intervals on the clock");
    convert->add_option("--schedule", o.schedule, "Comma-separated time positions, e.g. 1,2,4,5");
    add_common(convert);

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a network");
    simulate_cmd->add_option("network", o.net_file, "Network file (.fnet)")->required();
    simulate_cmd->add_option("inputs", o.input_files, "Stream files for the external inputs");
    simulate_cmd->add_option("-T", o.intervals, "Number of intervals")->required();
    simulate_cmd->add_option("--trace", o.trace_path, "Write the JSON-lines trace here");
    simulate_cmd->add_flag("--strict", o.strict, "Fail when several transitions match");
    add_common(simulate_cmd);

    auto* check_cmd = app.add_subcommand("check", "Check properties against streams or traces");
    check_cmd->add_option("properties", o.prop_file, "Property file (.fprop)")->required();
    check_cmd->add_option("data", o.data_files, "Stream files or traces (.jsonl)")->required();
    add_common(check_cmd);

    auto* validate_cmd = app.add_subcommand("validate", "Report diagnostics for a spec file");
    validate_cmd->add_option("file", o.spec_file, "File to validate")->required();
    add_common(validate_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.output.empty()) {
        file.open(o.output, std::ios::binary);
        if (!file) {
            err << "focuse: cannot write '" << o.output << "'\n";
            return kExitUsage;
        }
        sink = &file;
        color = false;
    }
    Reporter rep(*sink, color);

    try {
        if (convert->parsed()) return cmd_convert(o, rep);
        if (simulate_cmd->parsed()) return cmd_simulate(o, rep);
        if (check_cmd->parsed()) return cmd_check(o, rep);
        return cmd_validate(o, rep);
    } catch (const Exit& e) {
        err << e.message;
        if (!e.message.empty() && e.message.back() != '\n') err << '\n';
        return e.code;
    } catch (const Error& e) {
        err << "focuse: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace focuse::cli
