#include <doctest.h>

#include <algorithm>

#include "focuse/components.hpp"
#include "focuse/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/parse_helpers.hpp"

using namespace focuse;
using focuse::testing::component;
using focuse::testing::worked;
using focuse::testing::timed;

namespace {

constexpr std::string_view kIdentity = R"(
component Identity
  in x
  out y
  trans x = any ==> y := x
end
)";

constexpr std::string_view kForward = R"(
component Forward
  in x
  out y
  trans x = msg(v) ==> y := <v>
end
)";

// Two outputs, two state variables; the single transition touches one of each.
constexpr std::string_view kPartial = R"(
component Partial
  in x
  out y, z
  state n = 0
  state keep = 7
  trans x = msg(v) ==> y := <v> ; n := n + 1
end
)";

bool has_code(const std::vector<Diagnostic>& ds, std::string_view code) {
    return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("identity step forwards the interval") {
    auto c = component(kForward);
    auto r = step(c, c.initial_state(), {{"x", messages({"a"})}});
    CHECK(r.outputs.at("y") == messages({"a"}));
    CHECK(r.state.empty());
    CHECK(r.fired == std::size_t{0});
    CHECK_FALSE(r.assumption_violated);
}

TEST_CASE("implicit else: unmentioned state is unchanged") {
    auto c = component(kPartial);
    auto r = step(c, c.initial_state(), {{"x", messages({"a"})}});
    CHECK(r.fired == std::size_t{0});
    CHECK(r.state.at("n") == Value{std::int64_t{1}});
    CHECK(r.state.at("keep") == Value{std::int64_t{7}});
}

TEST_CASE("implicit else: unmentioned output is empty") {
    auto c = component(kPartial);
    auto r = step(c, c.initial_state(), {{"x", messages({"a"})}});
    REQUIRE(r.outputs.count("z") == 1);
    CHECK(r.outputs.at("z").empty());
    CHECK(r.outputs.at("y") == messages({"a"}));
}

TEST_CASE("implicit else: no match keeps state and empties outputs") {
    auto c = component(kPartial);
    VarMap st = {{"n", std::int64_t{4}}, {"keep", std::int64_t{9}}};
    for (auto in : {MessageList{}, messages({"a", "b"})}) {
        auto r = step(c, st, {{"x", in}});
        CHECK_FALSE(r.fired.has_value());
        CHECK(r.state == st);
        CHECK(r.outputs.at("y").empty());
        CHECK(r.outputs.at("z").empty());
    }
}

TEST_CASE("updates read the pre-step state") {
    auto c = component(R"(
component Swap
  in x
  out y
  state p = 1
  state q = 2
  trans true ==> ; p := q, q := p
end
)");
    auto r = step(c, c.initial_state(), {{"x", {}}});
    CHECK(r.state.at("p") == Value{std::int64_t{2}});
    CHECK(r.state.at("q") == Value{std::int64_t{1}});
}

TEST_CASE("first matching transition wins and strict mode rejects overlap") {
    auto c = component(R"(
component Two
  in x
  out y
  trans x = any ==> y := <'first>
  trans x = msg(v) ==> y := <v>
end
)");
    auto r = step(c, {}, {{"x", messages({"a"})}});
    CHECK(r.fired == std::size_t{0});
    CHECK(r.outputs.at("y") == messages({"first"}));
    try {
        step(c, {}, {{"x", messages({"a"})}}, StepOptions{true});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Overlap);
    }
}

TEST_CASE("patterns") {
    auto c = component(R"(
component P
  in x
  out y
  trans x = empty ==> y := <'e>
  trans x = <b,c> ==> y := <'lit>
  trans x = msg(_) ==> y := <'one>
  trans x = any ==> y := <'many>
end
)");
    auto out = [&](MessageList in) { return step(c, {}, {{"x", in}}).outputs.at("y"); };
    CHECK(out({}) == messages({"e"}));
    CHECK(out(messages({"b", "c"})) == messages({"lit"}));
    CHECK(out(messages({"c", "b"})) == messages({"many"}));
    CHECK(out(messages({"q"})) == messages({"one"}));
}

TEST_CASE("step arity errors") {
    auto c = component(kPartial);
    CHECK_THROWS_AS(step(c, c.initial_state(), {}), Error);
    CHECK_THROWS_AS(step(c, {}, {{"x", {}}}), Error);
    try {
        step(c, c.initial_state(), {});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Arity);
    }
}

TEST_CASE("integer overflow is reported") {
    auto c = component(R"(
component Big
  in x
  out y
  state n = 9223372036854775807
  trans true ==> ; n := n + 1
end
)");
    try {
        step(c, c.initial_state(), {{"x", {}}});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Overflow);
    }
}

TEST_CASE("assumption violations are recorded and execution continues") {
    auto c = component(R"(
component A
  in x
  out y
  state n = 0
  asm len(x) <= 1
  trans x = any ==> y := x ; n := n + 1
end
)");
    auto r = run(c, {{"x", worked()}}, 6);
    CHECK(r.violations == std::vector<std::size_t>{2});
    CHECK(r.outputs.at("y") == worked());
    CHECK(r.states.back().at("n") == Value{std::int64_t{6}});
}

TEST_CASE("run identity over the worked example") {
    auto c = component(kIdentity);
    auto r = run(c, {{"x", worked()}}, 6);
    CHECK(r.outputs.at("y") == worked());
    CHECK(r.states.size() == 7);
    CHECK(r.violations.empty());
}

TEST_CASE("run with single-message pattern drops the multi-message interval") {
    auto c = component(R"(
component Counter
  in x
  out y
  state n = 0
  trans x = msg(v) ==> y := <v> ; n := n + 1
end
)");
    auto r = run(c, {{"x", worked()}}, 6);
    CHECK(r.outputs.at("y") == timed({{}, {"a"}, {}, {}, {"d"}, {"a"}}));
    CHECK(r.states.back().at("n") == Value{std::int64_t{3}});
}

TEST_CASE("run over all-empty input with no empty-matching rule") {
    auto c = component(kPartial);
    auto r = run(c, {{"x", timed({{}, {}, {}})}}, 3);
    for (const auto& st : r.states) CHECK(st == c.initial_state());
    CHECK(r.outputs.at("y") == timed({{}, {}, {}}));
    CHECK(r.outputs.at("z") == timed({{}, {}, {}}));
}

TEST_CASE("run errors") {
    auto c = component(kIdentity);
    try {
        run(c, {{"x", timed({{"a"}})}}, 3);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Length);
    }
    CHECK_THROWS_AS(run(c, {}, 1), Error);
    CHECK(run(c, {{"x", TimedStream{}}}, 0).outputs.at("y").empty());
}

TEST_CASE("validate") {
    CHECK(validate(component(kIdentity)).empty());

    auto dup = parse_component(R"(
component D
  in x
  out y
  trans x = msg(v) ==> y := <v>
  trans x = msg(v) ==> y := <v>
end
)");
    REQUIRE(dup.value);
    bool found = false;
    for (const auto& d : dup.diagnostics) {
        if (d.message.find("unreachable transition 2") != std::string::npos) {
            found = true;
            CHECK(d.severity == Severity::Warning);
        }
    }
    CHECK(found);

    auto write_in = parse_component(R"(
component W
  in x
  out y
  trans true ==> x := <a>
end
)");
    CHECK(has_errors(write_in.diagnostics));
    CHECK(has_code(write_in.diagnostics, "WRITE_TO_INPUT"));

    auto dup_chan = parse_component(R"(
component C
  in x, x
  out y
  trans true ==>
end
)");
    CHECK(has_code(dup_chan.diagnostics, "DUP_NAME"));
}

TEST_CASE("validate catches type and binding errors") {
    auto type = parse_component(R"(
component T
  in x
  out y
  state n = 0
  trans x = msg(v) ==> ; n := v
end
)");
    CHECK(has_code(type.diagnostics, "TYPE_MISMATCH"));

    auto unbound = parse_component(R"(
component U
  in x
  out y
  trans true ==> y := <w>
end
)");
    CHECK(has_code(unbound.diagnostics, "UNBOUND_VAR"));

    auto unbound_var = parse_component(R"(
component U
  in x
  out y
  state n = 0
  trans true ==> ; n := m + 1
end
)");
    CHECK(has_errors(unbound_var.diagnostics));
}

TEST_CASE("guarantees are vacuous after an assumption violation") {
    auto c = component(R"(
component G
  in x
  out y
  asm len(x) <= 1
  guar first a before d in y
  trans x = any ==> y := x
end
)");
    auto late = timed({{"a"}, {"d"}, {"b", "c"}, {"d"}});
    auto r = run(c, {{"x", late}}, 4);
    std::map<std::string, TimedStream> streams = {{"x", late}, {"y", r.outputs.at("y")}};
    auto g = check_guarantees(c, streams, r.violations);
    REQUIRE(g.size() == 1);
    CHECK(g[0].verdict.holds);

    auto early = timed({{"d", "e"}, {"a"}, {"d"}});
    r = run(c, {{"x", early}}, 3);
    streams = {{"x", early}, {"y", r.outputs.at("y")}};
    g = check_guarantees(c, streams, r.violations);
    CHECK_FALSE(g[0].verdict.holds);
    CHECK(g[0].vacuous);
    CHECK_FALSE(g[0].failed());

    auto clean = timed({{"d"}, {"a"}});
    r = run(c, {{"x", clean}}, 2);
    streams = {{"x", clean}, {"y", r.outputs.at("y")}};
    g = check_guarantees(c, streams, r.violations);
    CHECK(g[0].failed());
}

TEST_CASE("generated components are valid and run deterministically") {
    focuse::testing::Rng rng(3);
    for (int n = 0; n < 300; ++n) {
        auto c = focuse::testing::random_component(rng);
        CHECK_FALSE(has_errors(validate(c)));
        std::map<std::string, TimedStream> in;
        for (const auto& d : c.inputs) {
            std::vector<MessageList> iv;
            for (int t = 0; t < 5; ++t) iv.push_back(focuse::testing::random_list(rng, 2, 3));
            in.emplace(d.name, TimedStream(iv));
        }
        try {
            auto a = run(c, in, 5);
            auto b = run(c, in, 5);
            CHECK(a.outputs == b.outputs);
            CHECK(a.states == b.states);
            for (const auto& [ch, s] : a.outputs) CHECK(s.size() == 5);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Overflow);
        }
    }
}
