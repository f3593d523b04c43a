#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "focuse/error.hpp"
#include "focuse/speclang.hpp"
#include "lexer.hpp"

namespace focuse {

namespace {

using detail::Token;

constexpr std::size_t kMaxDepth = 200;

// Thrown after the diagnostic has been recorded; unwinds to the entry point.
struct Abort {};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
    if (a.line != b.line || b.column < a.column) return a;
    return {a.line, a.column, b.column + b.length - a.column};
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(detail::lex(text)) {}

    std::vector<Diagnostic>& diagnostics() { return diags_; }

    // --- token helpers -----------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }

    [[noreturn]] void fail(const Token& at, std::string code, std::string message) {
        if (at.kind == Token::Kind::Bad) {
            code = "BAD_CHARACTER";
            message = "unexpected character";
        }
        diags_.push_back({Severity::Error, at.span, std::move(message), std::move(code)});
        throw Abort{};
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Token::Kind::End: return "end of input";
        case Token::Kind::Bad: return "unexpected character";
        default: return "'" + std::string(t.text) + "'";
        }
    }

    const Token& expect(std::string_view punct, std::string_view what = {}) {
        if (!peek().is(punct)) {
            std::string want = what.empty() ? "'" + std::string(punct) + "'" : std::string(what);
            fail(peek(), "UNEXPECTED_TOKEN", "expected " + want + ", found " + describe(peek()));
        }
        return advance();
    }

    const Token& expect_word(std::string_view word) {
        if (!peek().is_word(word)) {
            fail(peek(), "EXPECTED_KEYWORD",
                 "expected '" + std::string(word) + "', found " + describe(peek()));
        }
        return advance();
    }

    const Token& expect_ident(std::string_view what) {
        if (peek().kind != Token::Kind::Ident) {
            fail(peek(), "EXPECTED_IDENT",
                 "expected " + std::string(what) + ", found " + describe(peek()));
        }
        return advance();
    }

    struct DepthGuard {
        Parser& p;
        DepthGuard(Parser& parser, const Token& at) : p(parser) {
            if (++p.depth_ > kMaxDepth) p.fail(at, "NESTING_TOO_DEEP", "nesting too deep");
        }
        ~DepthGuard() { --p.depth_; }
    };

    void check_chain(std::size_t links, const Token& at) {
        if (depth_ + links > kMaxDepth) fail(at, "NESTING_TOO_DEEP", "expression too long");
    }

    std::uint64_t parse_uint(const Token& t, std::uint64_t max) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || v > max) {
            fail(t, "INT_RANGE", "integer literal out of range");
        }
        return v;
    }

    // --- streams -----------------------------------------------------------

    Message parse_message() {
        const Token& name = expect_ident("message name");
        if (peek().is(":")) {
            advance();
            const Token& sort = expect_ident("sort name");
            return Message(std::string(name.text), std::string(sort.text));
        }
        return Message(std::string(name.text));
    }

    MessageList parse_interval(bool event) {
        const Token& open = expect("<", "'<'");
        MessageList l;
        if (peek().is(">")) {
            const Token& close = advance();
            if (event) {
                diags_.push_back({Severity::Error, join(open.span, close.span),
                                  "event streams cannot contain an empty interval",
                                  "EMPTY_INTERVAL"});
                throw Abort{};
            }
            return l;
        }
        l.push_back(parse_message());
        while (!peek().is(">")) {
            if (!peek().is(",")) {
                fail(peek(), "UNEXPECTED_TOKEN", "expected ',' or '>'");
            }
            advance();
            l.push_back(parse_message());
        }
        advance();
        return l;
    }

    std::vector<MessageList> parse_intervals(bool event) {
        if (peek().is_word("empty")) {
            advance();
            return {};
        }
        if (!peek().is("<")) {
            fail(peek(), "EXPECTED_STREAM",
                 "expected stream literal ('<' or 'empty'), found " + describe(peek()));
        }
        std::vector<MessageList> out;
        while (peek().is("<")) out.push_back(parse_interval(event));
        return out;
    }

    void expect_end() {
        if (!at_end()) fail(peek(), "TRAILING_INPUT", "unexpected " + describe(peek()));
    }

    // --- properties --------------------------------------------------------

    std::string parse_stream_ref() {
        const Token& head = expect_ident("stream name");
        std::string ref(head.text);
        if (peek().is(".")) {
            advance();
            ref += "." + std::string(expect_ident("channel name").text);
        }
        return ref;
    }

    std::size_t parse_index() {
        if (peek().kind != Token::Kind::Int) {
            fail(peek(), "EXPECTED_INT", "expected causality index, found " + describe(peek()));
        }
        return static_cast<std::size_t>(
            parse_uint(advance(), std::numeric_limits<std::uint32_t>::max()));
    }

    Property parse_property() {
        const Token& start = peek();
        Property lhs = parse_prop_and();
        std::size_t links = 0;
        while (peek().is("|")) {
            check_chain(++links, peek());
            advance();
            lhs = Property::disj(std::move(lhs), parse_prop_and());
            lhs.span = start.span;
        }
        return lhs;
    }

    Property parse_prop_and() {
        const Token& start = peek();
        Property lhs = parse_prop_unary();
        std::size_t links = 0;
        while (peek().is("&")) {
            check_chain(++links, peek());
            advance();
            lhs = Property::conj(std::move(lhs), parse_prop_unary());
            lhs.span = start.span;
        }
        return lhs;
    }

    Property parse_prop_unary() {
        const Token& start = peek();
        DepthGuard guard(*this, start);
        if (start.is("!")) {
            advance();
            Property p = Property::negate(parse_prop_unary());
            p.span = start.span;
            return p;
        }
        if (start.is("(")) {
            advance();
            Property p = parse_property();
            expect(")");
            return p;
        }
        Property p = parse_prop_atom();
        p.span = start.span;
        return p;
    }

    Property parse_prop_atom() {
        const Token& kw = peek();
        if (kw.is_word("occurs")) {
            advance();
            expect("(");
            std::string sort(expect_ident("sort name").text);
            expect(")");
            expect_word("in");
            return Property::occurs(std::move(sort), parse_stream_ref());
        }
        if (kw.is_word("first")) {
            advance();
            std::string a(expect_ident("sort name").text);
            expect_word("before");
            std::string b(expect_ident("sort name").text);
            expect_word("in");
            return Property::first_before(std::move(a), std::move(b), parse_stream_ref());
        }
        if (kw.is_word("each")) {
            advance();
            std::string b(expect_ident("sort name").text);
            expect_word("after");
            std::string a(expect_ident("sort name").text);
            expect_word("in");
            return Property::each_before(std::move(a), std::move(b), parse_stream_ref());
        }
        if (kw.is_word("ci")) {
            advance();
            expect("(");
            std::string s1 = parse_stream_ref();
            expect(",");
            std::size_t i = parse_index();
            expect(")");
            expect_word("before");
            expect_word("ci");
            expect("(");
            std::string s2 = parse_stream_ref();
            expect(",");
            std::size_t j = parse_index();
            expect(")");
            return Property::occurs_before(std::move(s1), i, std::move(s2), j);
        }
        if (kw.kind == Token::Kind::Ident) {
            fail(kw, "UNKNOWN_KEYWORD",
                 "unknown property keyword '" + std::string(kw.text) +
                     "' (expected occurs, first, each or ci)");
        }
        fail(kw, "EXPECTED_PROPERTY", "expected property, found " + describe(kw));
    }

    // --- expressions and conditions ----------------------------------------

    Value parse_literal_value() {
        const Token& t = peek();
        if (t.is("'")) {
            advance();
            return parse_message();
        }
        bool negative = false;
        if (t.is("-")) {
            advance();
            negative = true;
        }
        if (peek().kind != Token::Kind::Int) {
            fail(peek(), "EXPECTED_LITERAL",
                 "expected integer or 'message literal, found " + describe(peek()));
        }
        return parse_int_literal(advance(), negative);
    }

    std::int64_t parse_int_literal(const Token& t, bool negative) {
        constexpr std::uint64_t max = std::numeric_limits<std::int64_t>::max();
        std::uint64_t v = parse_uint(t, negative ? max + 1 : max);
        if (negative) return v == max + 1 ? std::numeric_limits<std::int64_t>::min()
                                          : -static_cast<std::int64_t>(v);
        return static_cast<std::int64_t>(v);
    }

    Expr parse_expr() {
        const Token& start = peek();
        Expr lhs = parse_primary();
        std::size_t links = 0;
        while (peek().is("+") || peek().is("-")) {
            check_chain(++links, peek());
            bool add = advance().text == "+";
            Expr rhs = parse_primary();
            lhs = add ? Expr::add(std::move(lhs), std::move(rhs))
                      : Expr::sub(std::move(lhs), std::move(rhs));
            lhs.span = start.span;
        }
        return lhs;
    }

    Expr parse_primary() {
        const Token& t = peek();
        DepthGuard guard(*this, t);
        Expr e;
        if (t.is("(")) {
            advance();
            e = parse_expr();
            expect(")");
            return e;
        }
        if (t.is("'")) {
            advance();
            e = Expr::msg(parse_message());
        } else if (t.is("-") || t.kind == Token::Kind::Int) {
            bool negative = t.is("-");
            if (negative) advance();
            if (peek().kind != Token::Kind::Int) {
                fail(peek(), "EXPECTED_INT", "expected integer, found " + describe(peek()));
            }
            e = Expr::integer(parse_int_literal(advance(), negative));
        } else if (t.is_word("len") && peek(1).is("(")) {
            advance();
            advance();
            e = Expr::len(std::string(expect_ident("channel name").text));
            expect(")");
        } else if (t.kind == Token::Kind::Ident) {
            advance();
            e = Expr::var(std::string(t.text));
        } else {
            fail(t, "EXPECTED_EXPR", "expected expression, found " + describe(t));
        }
        e.span = t.span;
        return e;
    }

    std::optional<CompareOp> relop(const Token& t) {
        if (t.is("==")) return CompareOp::Eq;
        if (t.is("!=")) return CompareOp::Ne;
        if (t.is("<")) return CompareOp::Lt;
        if (t.is("<=")) return CompareOp::Le;
        if (t.is(">")) return CompareOp::Gt;
        if (t.is(">=")) return CompareOp::Ge;
        return std::nullopt;
    }

    Pattern parse_pattern() {
        const Token& t = peek();
        Pattern p;
        if (t.is_word("empty")) {
            advance();
            p.kind = Pattern::Kind::Empty;
        } else if (t.is_word("any")) {
            advance();
            p.kind = Pattern::Kind::Any;
        } else if (t.is_word("msg")) {
            advance();
            expect("(");
            p.kind = Pattern::Kind::Single;
            p.binder = std::string(expect_ident("pattern variable").text);
            expect(")");
        } else if (t.is("<")) {
            p.kind = Pattern::Kind::Literal;
            p.literal = parse_interval(false);
        } else {
            fail(t, "EXPECTED_PATTERN",
                 "expected pattern (empty, any, msg(x) or <...>), found " + describe(t));
        }
        return p;
    }

    // Pattern match, comparison, or true/false.
    Condition parse_cond_atom() {
        const Token& start = peek();
        Condition c;
        if (start.is_word("true") || start.is_word("false")) {
            advance();
            c = start.text == "true" ? Condition::always() : Condition::never();
        } else {
            Expr lhs = parse_expr();
            if (lhs.kind == Expr::Kind::Var && peek().is("=")) {
                advance();
                c = Condition::match(lhs.name, parse_pattern());
            } else {
                auto op = relop(peek());
                if (!op) {
                    fail(peek(), "UNEXPECTED_TOKEN",
                         "expected comparison operator or '=', found " + describe(peek()));
                }
                advance();
                c = Condition::compare(std::move(lhs), *op, parse_expr());
            }
        }
        c.span = start.span;
        return c;
    }

    Condition parse_cond() {
        const Token& start = peek();
        Condition lhs = parse_cond_and();
        std::size_t links = 0;
        while (peek().is("|")) {
            check_chain(++links, peek());
            advance();
            lhs = Condition::disj(std::move(lhs), parse_cond_and());
            lhs.span = start.span;
        }
        return lhs;
    }

    Condition parse_cond_and() {
        const Token& start = peek();
        Condition lhs = parse_cond_unary();
        std::size_t links = 0;
        while (peek().is("&")) {
            check_chain(++links, peek());
            advance();
            lhs = Condition::conj(std::move(lhs), parse_cond_unary());
            lhs.span = start.span;
        }
        return lhs;
    }

    Condition parse_cond_unary() {
        const Token& start = peek();
        DepthGuard guard(*this, start);
        if (start.is("!")) {
            advance();
            Condition c = Condition::negate(parse_cond_unary());
            c.span = start.span;
            return c;
        }
        if (start.is("(")) {
            advance();
            Condition c = parse_cond();
            expect(")");
            return c;
        }
        return parse_cond_atom();
    }

    // --- components --------------------------------------------------------

    bool at_assignment() const {
        return peek().kind == Token::Kind::Ident && peek(1).is(":=");
    }

    std::vector<Declared> parse_decl_list() {
        std::vector<Declared> out;
        do {
            if (!out.empty()) advance();
            const Token& t = expect_ident("channel name");
            out.push_back({std::string(t.text), t.span});
        } while (peek().is(","));
        return out;
    }

    ListTerm parse_list_term() {
        const Token& t = peek();
        ListTerm term;
        term.span = t.span;
        if (t.is("<")) {
            advance();
            if (!peek().is(">")) {
                term.elements.push_back(parse_expr());
                while (peek().is(",")) {
                    advance();
                    term.elements.push_back(parse_expr());
                }
            }
            expect(">", "',' or '>'");
            return term;
        }
        if (t.kind == Token::Kind::Ident) {
            advance();
            term.is_channel = true;
            term.channel = std::string(t.text);
            return term;
        }
        fail(t, "EXPECTED_LIST", "expected list '<...>' or input channel, found " + describe(t));
    }

    Transition parse_transition(const Token& kw) {
        Transition t;
        t.span = kw.span;
        if (!peek().is("==>")) {
            t.guard.push_back(parse_cond_atom());
            while (peek().is("&")) {
                check_chain(t.guard.size(), peek());
                advance();
                t.guard.push_back(parse_cond_atom());
            }
        }
        expect("==>", "'&' or '==>'");
        if (at_assignment()) {
            do {
                if (!t.outputs.empty()) advance();
                const Token& name = expect_ident("output channel");
                expect(":=");
                OutputAssign o;
                o.channel = std::string(name.text);
                o.span = name.span;
                o.terms.push_back(parse_list_term());
                while (peek().is("++")) {
                    check_chain(o.terms.size(), peek());
                    advance();
                    o.terms.push_back(parse_list_term());
                }
                t.outputs.push_back(std::move(o));
            } while (peek().is(",") && peek(1).kind == Token::Kind::Ident && peek(2).is(":="));
        }
        if (peek().is(";")) {
            advance();
            if (at_assignment()) {
                do {
                    if (!t.updates.empty()) advance();
                    const Token& name = expect_ident("state variable");
                    expect(":=");
                    t.updates.push_back({std::string(name.text), parse_expr(), name.span});
                } while (peek().is(","));
            }
        }
        return t;
    }

    ComponentSpec parse_component_block() {
        const Token& kw = expect_word("component");
        ComponentSpec c;
        c.span = kw.span;
        c.name = std::string(expect_ident("component name").text);
        bool has_asm = false;
        for (;;) {
            const Token& clause = peek();
            if (clause.is_word("end")) {
                advance();
                break;
            }
            if (clause.is_word("in")) {
                advance();
                auto l = parse_decl_list();
                c.inputs.insert(c.inputs.end(), l.begin(), l.end());
            } else if (clause.is_word("out")) {
                advance();
                auto l = parse_decl_list();
                c.outputs.insert(c.outputs.end(), l.begin(), l.end());
            } else if (clause.is_word("state")) {
                advance();
                const Token& name = expect_ident("state variable");
                expect("=");
                c.state.push_back({std::string(name.text), parse_literal_value(), name.span});
            } else if (clause.is_word("asm")) {
                advance();
                if (has_asm) {
                    diags_.push_back({Severity::Error, clause.span,
                                      "assumption declared twice", "DUP_ASM"});
                }
                has_asm = true;
                c.assumption = parse_cond();
            } else if (clause.is_word("guar")) {
                advance();
                c.guarantees.push_back(parse_property());
            } else if (clause.is_word("trans")) {
                advance();
                c.transitions.push_back(parse_transition(clause));
            } else {
                fail(clause, "EXPECTED_CLAUSE",
                     "expected in, out, state, asm, guar, trans or end, found " +
                         describe(clause));
            }
        }
        return c;
    }

    // --- networks ----------------------------------------------------------

    Endpoint parse_endpoint() {
        const Token& head = expect_ident("channel or instance name");
        Endpoint e;
        if (peek().is(".")) {
            advance();
            e.instance = std::string(head.text);
            e.channel = std::string(expect_ident("channel name").text);
        } else {
            e.channel = std::string(head.text);
        }
        return e;
    }

    NetworkSpec parse_network_block(const std::map<std::string, ComponentSpec>& components) {
        const Token& kw = expect_word("network");
        NetworkSpec n;
        n.span = kw.span;
        n.name = std::string(expect_ident("network name").text);
        for (;;) {
            const Token& clause = peek();
            if (clause.is_word("end")) {
                advance();
                break;
            }
            if (clause.is_word("instance")) {
                advance();
                const Token& name = expect_ident("instance name");
                expect(":");
                const Token& type = expect_ident("component name");
                auto it = components.find(std::string(type.text));
                if (it == components.end()) {
                    diags_.push_back({Severity::Error, type.span,
                                      "unknown component '" + std::string(type.text) + "'",
                                      "UNKNOWN_COMPONENT"});
                    continue;
                }
                n.instances.push_back({std::string(name.text), it->second, name.span});
            } else if (clause.is_word("input")) {
                advance();
                auto l = parse_decl_list();
                n.external_inputs.insert(n.external_inputs.end(), l.begin(), l.end());
            } else if (clause.is_word("output")) {
                advance();
                auto l = parse_decl_list();
                n.external_outputs.insert(n.external_outputs.end(), l.begin(), l.end());
            } else if (clause.is_word("wire")) {
                advance();
                Wire w;
                w.span = clause.span;
                w.from = parse_endpoint();
                expect("->");
                w.to = parse_endpoint();
                if (peek().is_word("delayed")) {
                    advance();
                    w.delayed = true;
                    if (peek().is("<")) w.initial = parse_interval(false);
                }
                n.wires.push_back(std::move(w));
            } else {
                fail(clause, "EXPECTED_CLAUSE",
                     "expected instance, input, output, wire or end, found " + describe(clause));
            }
        }
        return n;
    }

    NetworkSpec parse_network_file() {
        std::map<std::string, ComponentSpec> components;
        while (peek().is_word("component")) {
            const Token& kw = peek();
            ComponentSpec c = parse_component_block();
            for (auto d : validate(c)) {
                d.message = "component '" + c.name + "': " + d.message;
                diags_.push_back(std::move(d));
            }
            if (components.count(c.name)) {
                diags_.push_back({Severity::Error, kw.span,
                                  "duplicate component '" + c.name + "'", "DUP_NAME"});
            }
            components.emplace(c.name, std::move(c));
        }
        if (!peek().is_word("network")) {
            fail(peek(), "EXPECTED_NETWORK",
                 "expected 'component' or 'network', found " + describe(peek()));
        }
        NetworkSpec n = parse_network_block(components);
        expect_end();
        return n;
    }

    // --- stream files ------------------------------------------------------

    std::vector<StreamBinding> parse_stream_file() {
        std::vector<StreamBinding> out;
        if (peek().is("<") || (peek().is_word("empty") && !peek(1).is("="))) {
            const Token& start = peek();
            out.push_back({"", TimedStream(parse_intervals(false)), start.span});
            expect_end();
            return out;
        }
        std::set<std::string> seen;
        while (!at_end()) {
            bool event = peek().is_word("event") && peek(1).kind == Token::Kind::Ident &&
                         peek(2).is("=");
            if (event) advance();
            const Token& name = expect_ident("stream name or literal");
            expect("=");
            StreamValue value = event ? StreamValue(EventStream(parse_intervals(true)))
                                      : StreamValue(TimedStream(parse_intervals(false)));
            if (!seen.insert(std::string(name.text)).second) {
                diags_.push_back({Severity::Error, name.span,
                                  "duplicate stream '" + std::string(name.text) + "'",
                                  "DUP_NAME"});
            }
            out.push_back({std::string(name.text), std::move(value), name.span});
        }
        if (out.empty()) fail(peek(), "EXPECTED_STREAM", "expected stream literal or binding");
        return out;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
    std::vector<Diagnostic> diags_;
};

template <typename T, typename F>
ParseResult<T> run_parser(std::string_view text, F&& body) {
    Parser p(text);
    ParseResult<T> r;
    try {
        T value = body(p);
        if (!has_errors(p.diagnostics())) r.value = std::move(value);
    } catch (const Abort&) {
    } catch (const Error& e) {
        // Structural invariants rejected by a constructor.
        p.diagnostics().push_back({Severity::Error, p.peek().span, e.what(), "INVALID_VALUE"});
    }
    r.diagnostics = std::move(p.diagnostics());
    return r;
}

}  // namespace

ParseResult<TimedStream> parse_stream(std::string_view text) {
    return run_parser<TimedStream>(text, [](Parser& p) {
        TimedStream s(p.parse_intervals(false));
        p.expect_end();
        return s;
    });
}

ParseResult<EventStream> parse_event_stream(std::string_view text) {
    return run_parser<EventStream>(text, [](Parser& p) {
        EventStream s(p.parse_intervals(true));
        p.expect_end();
        return s;
    });
}

ParseResult<Property> parse_property(std::string_view text) {
    return run_parser<Property>(text, [](Parser& p) {
        Property prop = p.parse_property();
        p.expect_end();
        return prop;
    });
}

ParseResult<std::vector<Property>> parse_properties(std::string_view text) {
    return run_parser<std::vector<Property>>(text, [](Parser& p) {
        std::vector<Property> out;
        while (!p.at_end()) {
            out.push_back(p.parse_property());
            while (p.peek().is(";")) p.advance();
        }
        return out;
    });
}

ParseResult<ComponentSpec> parse_component(std::string_view text) {
    return run_parser<ComponentSpec>(text, [](Parser& p) {
        ComponentSpec c = p.parse_component_block();
        p.expect_end();
        auto diags = validate(c);
        p.diagnostics().insert(p.diagnostics().end(), diags.begin(), diags.end());
        return c;
    });
}

ParseResult<NetworkSpec> parse_network(std::string_view text) {
    return run_parser<NetworkSpec>(text, [](Parser& p) {
        NetworkSpec n = p.parse_network_file();
        // Component diagnostics were attached per block.
        auto diags = validate_wiring(n);
        p.diagnostics().insert(p.diagnostics().end(), diags.begin(), diags.end());
        return n;
    });
}

ParseResult<std::vector<StreamBinding>> parse_stream_file(std::string_view text) {
    return run_parser<std::vector<StreamBinding>>(text,
                                                   [](Parser& p) { return p.parse_stream_file(); });
}

}  // namespace focuse
