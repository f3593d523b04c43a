#include "lexer.hpp"

#include <array>

namespace focuse::detail {

namespace {

constexpr std::array<std::string_view, 23> kPuncts = {
    "==>", "==", "!=", "<=", ">=", ":=", "->", "++", "=", "<", ">", ",",
    "(",   ")",  "!",  "&",  "|",  ";",  ":",  ".",  "'", "+", "-"};

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t line_start = 0;

    auto emit = [&](Token::Kind kind, std::size_t begin, std::size_t end) {
        out.push_back({kind, text.substr(begin, end - begin),
                       SourceSpan{line, begin - line_start + 1, end - begin}});
    };

    while (pos < text.size()) {
        char c = text[pos];
        if (c == '\n') {
            ++pos;
            ++line;
            line_start = pos;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++pos;
            continue;
        }
        if (c == '-' && pos + 1 < text.size() && text[pos + 1] == '-') {
            while (pos < text.size() && text[pos] != '\n') ++pos;
            continue;
        }
        std::size_t begin = pos;
        if (ident_start(c)) {
            while (pos < text.size() && (ident_start(text[pos]) || digit(text[pos]))) ++pos;
            emit(Token::Kind::Ident, begin, pos);
            continue;
        }
        if (digit(c)) {
            while (pos < text.size() && digit(text[pos])) ++pos;
            emit(Token::Kind::Int, begin, pos);
            continue;
        }
        bool matched = false;
        for (auto p : kPuncts) {
            if (text.substr(pos, p.size()) == p) {
                pos += p.size();
                emit(Token::Kind::Punct, begin, pos);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        ++pos;
        emit(Token::Kind::Bad, begin, pos);
    }
    out.push_back({Token::Kind::End, text.substr(text.size()),
                   SourceSpan{line, text.size() - line_start + 1, 0}});
    return out;
}

}  // namespace focuse::detail
