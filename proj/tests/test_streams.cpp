#include <doctest.h>

#include "focuse/error.hpp"
#include "focuse/streams.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace focuse;
using focuse::testing::event;
using focuse::testing::worked;
using focuse::testing::timed;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Domain;
}

}  // namespace

TEST_CASE("message names and sorts") {
    Message a("a");
    CHECK(a.has_sort("a"));
    CHECK_FALSE(a.has_sort("b"));
    Message tagged("m1", "req");
    CHECK(tagged.has_sort("req"));
    CHECK_FALSE(tagged.has_sort("m1"));
    CHECK(kind_of([] { Message(""); }) == ErrorKind::Domain);
    CHECK(kind_of([] { Message("9x"); }) == ErrorKind::Domain);
    CHECK(kind_of([] { Message("a", "b c"); }) == ErrorKind::Domain);
}

TEST_CASE("ti on the worked example") {
    auto s = worked();
    CHECK(ti(s, 0).empty());
    CHECK(ti(s, 1) == messages({"a"}));
    CHECK(ti(s, 2) == messages({"b", "c"}));
    CHECK(ti(s, 3).empty());
    CHECK(ti(s, 4) == messages({"d"}));
    CHECK(ti(s, 5) == messages({"a"}));
    CHECK(ti(timed({{"x"}}), 0) == messages({"x"}));
}

TEST_CASE("ti out of range names the stream length") {
    try {
        ti(worked(), 6);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Index);
        CHECK(std::string(e.what()).find("length 6") != std::string::npos);
    }
}

TEST_CASE("ci on timed and event streams") {
    auto s = worked();
    CHECK(ci(s, 0) == messages({"a"}));
    CHECK(ci(s, 1) == messages({"b", "c"}));
    CHECK(ci(s, 2) == messages({"d"}));
    CHECK(ci(s, 3) == messages({"a"}));
    try {
        ci(s, 4);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Index);
        CHECK(std::string(e.what()).find("causality length 4") != std::string::npos);
    }
    auto e = to_event(s);
    CHECK(ci(e, 1) == messages({"b", "c"}));
    CHECK(kind_of([&] { ci(e, 4); }) == ErrorKind::Index);
}

TEST_CASE("first") {
    CHECK(first(messages({"b", "c"})) == Message("b"));
    CHECK(first(messages({"a"})) == Message("a"));
    try {
        first(MessageList{});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
        CHECK(std::string(e.what()) == "first of empty list");
    }
}

TEST_CASE("to_event") {
    CHECK(to_event(worked()) == event({{"a"}, {"b", "c"}, {"d"}, {"a"}}));
    CHECK(to_event(timed({{}, {}, {}})).empty());
    CHECK(to_event(TimedStream{}).empty());
    CHECK(to_event(timed({{"a"}, {"b"}})) == event({{"a"}, {"b"}}));
}

TEST_CASE("event streams reject empty intervals") {
    CHECK(kind_of([] { EventStream({messages({"a"}), {}}); }) == ErrorKind::Invariant);
    CHECK(EventStream{}.empty());
}

TEST_CASE("embed") {
    auto e = event({{"a"}, {"b", "c"}, {"d"}, {"a"}});
    CHECK(embed(e, DeltaSchedule({1, 2, 4, 5})) == worked());
    CHECK(embed(EventStream{}, DeltaSchedule{}) == TimedStream{});

    auto placed = embed(event({{"a"}}), DeltaSchedule({3}));
    CHECK(placed == timed({{}, {}, {}, {"a"}}));
    CHECK(to_event(placed) == event({{"a"}}));

    CHECK(kind_of([&] { embed(e, DeltaSchedule({1, 2})); }) == ErrorKind::Arity);
    CHECK(kind_of([] { DeltaSchedule({1, 1}); }) == ErrorKind::Invariant);
    CHECK(kind_of([] { DeltaSchedule({3, 2}); }) == ErrorKind::Invariant);
    CHECK(DeltaSchedule::dense(3).positions() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("causality_index_map") {
    using Map = std::vector<std::optional<std::size_t>>;
    CHECK(causality_index_map(worked()) == Map{std::nullopt, 0, 1, std::nullopt, 2, 3});
    CHECK(causality_index_map(timed({{"a"}, {"b"}})) == Map{0, 1});
    CHECK(causality_index_map(timed({{}, {}})) == Map{std::nullopt, std::nullopt});
    CHECK(time_position(worked(), 2) == 4);
    CHECK(causality_length(worked()) == 4);
}

TEST_CASE("stream laws on generated streams") {
    focuse::testing::Rng rng(7);
    for (int n = 0; n < 2000; ++n) {
        auto s = focuse::testing::random_timed(rng, 10, 4, 3, true);
        auto e = to_event(s);
        CHECK(flatten(e) == flatten(s));
        for (const auto& l : e.intervals()) CHECK_FALSE(l.empty());

        auto map = causality_index_map(s);
        std::optional<std::size_t> last;
        for (std::size_t t = 0; t < map.size(); ++t) {
            if (!map[t]) continue;
            CHECK(ti(s, t) == ci(s, *map[t]));
            if (last) CHECK(*map[t] > *last);
            last = map[t];
        }

        bool event_shaped = std::none_of(s.intervals().begin(), s.intervals().end(),
                                         [](const MessageList& l) { return l.empty(); });
        if (event_shaped) CHECK(e.intervals() == s.intervals());

        auto d1 = focuse::testing::random_schedule(rng, e.size());
        auto d2 = focuse::testing::random_schedule(rng, e.size());
        CHECK(to_event(embed(e, d1)) == e);
        CHECK(to_event(embed(e, d1)) == to_event(embed(e, d2)));
    }
}
