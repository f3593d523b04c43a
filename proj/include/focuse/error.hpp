#pragma once

#include <stdexcept>
#include <string>

namespace focuse {

enum class ErrorKind {
    Index,
    Domain,
    Arity,
    Invariant,
    Name,
    Binding,
    Type,
    Length,
    Composition,
    Wiring,
    UnsupportedComparison,
    Overlap,
    Overflow,
    Parse,
};

const char* to_string(ErrorKind kind);

// Single exception type for all library failures; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace focuse
