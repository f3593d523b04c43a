#pragma once

#include <string_view>
#include <vector>

#include "focuse/diagnostic.hpp"

namespace focuse::detail {

struct Token {
    enum class Kind { Ident, Int, Punct, Bad, End };

    Kind kind = Kind::End;
    std::string_view text;
    SourceSpan span;

    bool is(std::string_view punct) const { return kind == Kind::Punct && text == punct; }
    bool is_word(std::string_view word) const { return kind == Kind::Ident && text == word; }
};

// Splits text into tokens, dropping whitespace and `--` comments. Always
// ends with an End token. Unrecognised bytes become Bad tokens.
std::vector<Token> lex(std::string_view text);

}  // namespace focuse::detail
