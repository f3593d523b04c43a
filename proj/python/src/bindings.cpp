#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "focuse/causality.hpp"
#include "focuse/components.hpp"
#include "focuse/error.hpp"
#include "focuse/network.hpp"
#include "focuse/speclang.hpp"
#include "focuse/streams.hpp"

namespace py = pybind11;
using namespace focuse;

namespace {

// "unsupported comparison" -> "unsupported_comparison", "index error" -> "index".
std::string kind_name(ErrorKind k) {
    std::string s = to_string(k);
    constexpr std::string_view suffix = " error";
    if (s.size() > suffix.size() && s.ends_with(suffix)) s.resize(s.size() - suffix.size());
    for (auto& c : s) {
        if (c == ' ') c = '_';
    }
    return s;
}

py::dict diagnostic_dict(const Diagnostic& d) {
    py::dict out;
    out["severity"] = d.severity == Severity::Error ? "error" : "warning";
    out["line"] = d.span.line;
    out["column"] = d.span.column;
    out["length"] = d.span.length;
    out["code"] = d.code;
    out["message"] = d.message;
    return out;
}

// Raises focuse.ParseError carrying the diagnostics when parsing failed.
template <typename T>
T unwrap(ParseResult<T> r) {
    if (r.ok()) return std::move(*r.value);
    py::list diags;
    std::ostringstream text;
    for (const auto& d : r.diagnostics) {
        diags.append(diagnostic_dict(d));
        if (d.severity == Severity::Error) text << d << "\n";
    }
    py::object cls = py::module_::import("focuse._errors").attr("ParseError");
    py::object exc = cls(text.str(), diags);
    PyErr_SetObject(cls.ptr(), exc.ptr());
    throw py::error_already_set();
}

std::vector<MessageList> to_lists(const py::iterable& intervals) {
    std::vector<MessageList> out;
    for (auto interval : intervals) {
        MessageList l;
        for (auto m : interval) {
            if (py::isinstance<Message>(m)) {
                l.push_back(m.cast<Message>());
            } else {
                l.emplace_back(m.cast<std::string>());
            }
        }
        out.push_back(std::move(l));
    }
    return out;
}

py::object value_to_py(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return py::int_(*i);
    return py::cast(std::get<Message>(v));
}

py::dict varmap_to_py(const VarMap& m) {
    py::dict out;
    for (const auto& [k, v] : m) out[py::str(k)] = value_to_py(v);
    return out;
}

py::dict verdict_to_py(const Verdict& v) {
    py::dict out;
    out["holds"] = v.holds;
    py::list ws;
    for (const auto& w : v.witnesses) {
        ws.append(py::make_tuple(w.stream, w.index, w.message));
    }
    out["witnesses"] = ws;
    out["explanation"] = v.explanation;
    return out;
}

StreamEnv to_env(const py::dict& streams) {
    StreamEnv env;
    for (auto [k, v] : streams) {
        auto name = k.cast<std::string>();
        if (py::isinstance<EventStream>(v)) {
            env.emplace(name, v.cast<EventStream>());
        } else {
            env.emplace(name, v.cast<TimedStream>());
        }
    }
    return env;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Timed and event streams, causality checks, components and networks.";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object cls = py::module_::import("focuse._errors").attr("FocuseError");
            py::object exc = cls(e.what(), kind_name(e.kind()));
            PyErr_SetObject(cls.ptr(), exc.ptr());
        }
    });

    py::class_<Message>(m, "Message")
        .def(py::init<std::string, std::optional<std::string>>(), py::arg("name"),
             py::arg("sort") = py::none())
        .def_property_readonly("name", &Message::name)
        .def_property_readonly("sort", &Message::sort)
        .def("has_sort", &Message::has_sort)
        .def("__eq__", [](const Message& a, const Message& b) { return a == b; })
        .def("__hash__", [](const Message& a) { return py::hash(py::str(print(a))); })
        .def("__str__", [](const Message& a) { return print(a); })
        .def("__repr__", [](const Message& a) { return "Message('" + print(a) + "')"; });

    py::class_<TimedStream>(m, "TimedStream")
        .def(py::init([](const py::iterable& iv) { return TimedStream(to_lists(iv)); }),
             py::arg("intervals"))
        .def_property_readonly("intervals", &TimedStream::intervals)
        .def("__len__", &TimedStream::size)
        .def("__eq__", [](const TimedStream& a, const TimedStream& b) { return a == b; })
        .def("__str__", [](const TimedStream& s) { return print(s); })
        .def("__repr__", [](const TimedStream& s) { return "TimedStream('" + print(s) + "')"; });

    py::class_<EventStream>(m, "EventStream")
        .def(py::init([](const py::iterable& iv) { return EventStream(to_lists(iv)); }),
             py::arg("intervals"))
        .def_property_readonly("intervals", &EventStream::intervals)
        .def("__len__", &EventStream::size)
        .def("__eq__", [](const EventStream& a, const EventStream& b) { return a == b; })
        .def("__str__", [](const EventStream& s) { return print(s); })
        .def("__repr__", [](const EventStream& s) { return "EventStream('" + print(s) + "')"; });

    m.def("ti", py::overload_cast<const TimedStream&, std::size_t>(&ti), py::arg("s"),
          py::arg("t"));
    m.def("ci", py::overload_cast<const TimedStream&, std::size_t>(&ci), py::arg("s"),
          py::arg("i"));
    m.def("ci", py::overload_cast<const EventStream&, std::size_t>(&ci), py::arg("s"),
          py::arg("i"));
    m.def("to_event", &to_event, py::arg("s"));
    m.def(
        "embed",
        [](const EventStream& e, std::vector<std::size_t> positions) {
            return embed(e, DeltaSchedule(std::move(positions)));
        },
        py::arg("e"), py::arg("positions"));
    m.def("causality_index_map", &causality_index_map, py::arg("s"));

    m.def("parse_stream", [](std::string_view t) { return unwrap(parse_stream(t)); });
    m.def("parse_event_stream", [](std::string_view t) { return unwrap(parse_event_stream(t)); });
    m.def("print_stream", py::overload_cast<const TimedStream&>(&print));
    m.def("print_stream", py::overload_cast<const EventStream&>(&print));

    py::class_<Property>(m, "Property")
        .def("__eq__", [](const Property& a, const Property& b) { return a == b; })
        .def("__str__", [](const Property& p) { return print(p); })
        .def("__repr__", [](const Property& p) { return "Property('" + print(p) + "')"; });
    m.def("parse_property", [](std::string_view t) { return unwrap(parse_property(t)); });
    m.def("parse_properties", [](std::string_view t) { return unwrap(parse_properties(t)); });
    m.def(
        "check",
        [](const Property& p, const py::dict& streams) { return verdict_to_py(check(p, to_env(streams))); },
        py::arg("property"), py::arg("streams"));

    py::class_<ComponentSpec>(m, "Component")
        .def_readonly("name", &ComponentSpec::name)
        .def_property_readonly("inputs",
                               [](const ComponentSpec& c) {
                                   std::vector<std::string> out;
                                   for (const auto& d : c.inputs) out.push_back(d.name);
                                   return out;
                               })
        .def_property_readonly("outputs",
                               [](const ComponentSpec& c) {
                                   std::vector<std::string> out;
                                   for (const auto& d : c.outputs) out.push_back(d.name);
                                   return out;
                               })
        .def("__str__", [](const ComponentSpec& c) { return print(c); });
    m.def("parse_component", [](std::string_view t) { return unwrap(parse_component(t)); });
    m.def(
        "run",
        [](const ComponentSpec& c, const std::map<std::string, TimedStream>& inputs, std::size_t T,
           bool strict) {
            auto r = run(c, inputs, T, StepOptions{strict});
            py::dict out;
            out["outputs"] = r.outputs;
            py::list states;
            for (const auto& s : r.states) states.append(varmap_to_py(s));
            out["states"] = states;
            out["fired"] = r.fired;
            out["violations"] = r.violations;
            return out;
        },
        py::arg("component"), py::arg("inputs"), py::arg("T"), py::arg("strict") = false);

    py::class_<Trace>(m, "Trace")
        .def("__len__", [](const Trace& t) { return t.records.size(); })
        .def("channel_names", &Trace::channel_names)
        .def("stream", &Trace::stream, py::arg("channel"))
        .def("to_jsonl", &trace_to_jsonl)
        .def("check", [](const Trace& t, const Property& p) {
            return verdict_to_py(check_trace(t, {p}).at(0));
        });
    m.def("read_trace", &read_trace, py::arg("text"));

    py::class_<NetworkSpec>(m, "Network")
        .def_readonly("name", &NetworkSpec::name)
        .def("order", [](const NetworkSpec& n) { return elaborate(n).order_names(); })
        .def("inputs", [](const NetworkSpec& n) { return elaborate(n).inputs(); })
        .def("__str__", [](const NetworkSpec& n) { return print(n); });
    m.def("parse_network", [](std::string_view t) { return unwrap(parse_network(t)); });
    m.def(
        "simulate",
        [](const NetworkSpec& n, const std::map<std::string, TimedStream>& inputs, std::size_t T,
           bool strict) { return simulate(n, inputs, T, StepOptions{strict}); },
        py::arg("network"), py::arg("inputs"), py::arg("T"), py::arg("strict") = false);
}
