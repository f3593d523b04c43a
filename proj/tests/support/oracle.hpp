#pragma once

// Brute-force reference semantics over raw nested vectors. Nothing here
// touches the library's stream types or index helpers; the quantifiers are
// written out over time positions directly.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace focuse::oracle {

using RawInterval = std::vector<std::string>;
using RawStream = std::vector<RawInterval>;

inline bool contains(const RawInterval& l, const std::string& sort) {
    for (const auto& m : l) {
        if (m == sort) return true;
    }
    return false;
}

// Time positions of the non-empty intervals, in order.
inline std::vector<std::size_t> occupied(const RawStream& s) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (!s[t].empty()) out.push_back(t);
    }
    return out;
}

// Some interval holding `a` lies strictly before every interval holding `b`
// (vacuous when `b` never occurs).
inline bool first_before(const std::string& a, const std::string& b, const RawStream& s) {
    bool any_b = false;
    for (const auto& l : s) any_b = any_b || contains(l, b);
    if (!any_b) return true;
    for (std::size_t ta = 0; ta < s.size(); ++ta) {
        if (!contains(s[ta], a)) continue;
        bool all_later = true;
        for (std::size_t tb = 0; tb < s.size(); ++tb) {
            if (contains(s[tb], b) && !(ta < tb)) all_later = false;
        }
        if (all_later) return true;
    }
    return false;
}

// Every interval holding `b` has some interval holding `a` strictly before it.
inline bool each_before(const std::string& a, const std::string& b, const RawStream& s) {
    for (std::size_t tb = 0; tb < s.size(); ++tb) {
        if (!contains(s[tb], b)) continue;
        bool found = false;
        for (std::size_t ta = 0; ta < tb; ++ta) found = found || contains(s[ta], a);
        if (!found) return false;
    }
    return true;
}

inline bool occurs(const std::string& a, const RawStream& s) {
    for (const auto& l : s) {
        if (contains(l, a)) return true;
    }
    return false;
}

// nullopt when either index is out of range.
inline std::optional<bool> occurs_before(const RawStream& s1, std::size_t i, const RawStream& s2,
                                         std::size_t j) {
    auto p1 = occupied(s1);
    auto p2 = occupied(s2);
    if (i >= p1.size() || j >= p2.size()) return std::nullopt;
    return p1[i] < p2[j];
}

// Causality index of the earliest interval holding `b`.
inline std::optional<std::size_t> first_index_of(const std::string& b, const RawStream& s) {
    std::size_t idx = 0;
    for (const auto& l : s) {
        if (l.empty()) continue;
        if (contains(l, b)) return idx;
        ++idx;
    }
    return std::nullopt;
}

// Every timed stream with up to max_len intervals, each interval an ordered
// list of at most max_size letters from the alphabet.
inline std::vector<RawStream> enumerate(const std::vector<std::string>& alphabet,
                                        std::size_t max_len, std::size_t max_size) {
    std::vector<RawInterval> lists = {{}};
    std::vector<RawInterval> frontier = {{}};
    for (std::size_t size = 1; size <= max_size; ++size) {
        std::vector<RawInterval> next;
        for (const auto& l : frontier) {
            for (const auto& a : alphabet) {
                auto m = l;
                m.push_back(a);
                next.push_back(std::move(m));
            }
        }
        lists.insert(lists.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::vector<RawStream> out = {{}};
    std::vector<RawStream> layer = {{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<RawStream> next;
        for (const auto& s : layer) {
            for (const auto& l : lists) {
                auto t = s;
                t.push_back(l);
                next.push_back(std::move(t));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace focuse::oracle
