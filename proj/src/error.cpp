#include "focuse/error.hpp"

#include <algorithm>

#include "focuse/diagnostic.hpp"

namespace focuse {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Index: return "index error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Arity: return "arity error";
    case ErrorKind::Invariant: return "invariant error";
    case ErrorKind::Name: return "name error";
    case ErrorKind::Binding: return "binding error";
    case ErrorKind::Type: return "type error";
    case ErrorKind::Length: return "length error";
    case ErrorKind::Composition: return "composition error";
    case ErrorKind::Wiring: return "wiring error";
    case ErrorKind::UnsupportedComparison: return "unsupported comparison";
    case ErrorKind::Overlap: return "overlap error";
    case ErrorKind::Overflow: return "overflow error";
    case ErrorKind::Parse: return "parse error";
    }
    return "error";
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
    os << d.span.line << ':' << d.span.column << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code << "]: "
       << d.message;
    return os;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::size_t count(const std::vector<Diagnostic>& diags, Severity severity) {
    return static_cast<std::size_t>(std::count_if(
        diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.severity == severity; }));
}

}  // namespace focuse
