#pragma once

#include <doctest.h>

#include <string>
#include <vector>

#include "possdom/domain.hpp"
#include "possdom/witness.hpp"

namespace testutil {

/// Builds a validated domain from integer-spelled rows.
inline possdom::Domain make_domain(const std::vector<std::vector<int>>& rows) {
    std::vector<std::vector<possdom::Token>> raw;
    raw.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<possdom::Token> toks;
        toks.reserve(r.size());
        for (int v : r) toks.push_back(std::to_string(v));
        raw.push_back(std::move(toks));
    }
    return possdom::validate_domain(raw);
}

/// Interns a row of integer-spelled tokens against dom. Value ids follow
/// first occurrence in the input, so they need not equal the integers.
inline possdom::Row irow(const possdom::Domain& dom, const std::vector<int>& toks) {
    possdom::Row r;
    r.reserve(toks.size());
    for (std::size_t j = 0; j < toks.size(); ++j) {
        auto v = dom.intern(static_cast<int>(j), std::to_string(toks[j]));
        REQUIRE(v.has_value());
        r.push_back(*v);
    }
    return r;
}

// The recurring small domains. Intern ids track first occurrence, so e.g.
// one_in_three maps token "1" to id 0 in every column.

inline possdom::Domain implication() {
    return make_domain({{0, 0}, {0, 1}, {1, 1}});
}

inline possdom::Domain full_cube2() {
    return make_domain({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

inline possdom::Domain one_in_three() {
    return make_domain({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
}

/// Even-weight triples, the affine Boolean showcase.
inline possdom::Domain affine3() {
    return make_domain({{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

/// Ternary diagonal over tokens a, b, c.
inline possdom::Domain diagonal3() {
    using possdom::Token;
    std::vector<std::vector<Token>> raw = {{"a", "a"}, {"b", "b"}, {"c", "c"}};
    return possdom::validate_domain(raw);
}

/// Cartesian product of one_in_three with a free Boolean issue.
inline possdom::Domain one_in_three_times_cube() {
    std::vector<std::vector<int>> rows;
    for (const auto& base : {std::vector<int>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
        for (int b : {0, 1}) {
            auto r = base;
            r.push_back(b);
            rows.push_back(std::move(r));
        }
    }
    return make_domain(rows);
}

/// Componentwise binary witness from f(issue, x, y).
template <class F>
possdom::AggregatorWitness binary_witness(const possdom::Domain& dom, F f) {
    auto w = possdom::AggregatorWitness::blank(dom, 2, possdom::WitnessKind::generic);
    for (int j = 0; j < dom.issue_count(); ++j) {
        for (int x = 0; x < dom.alphabet_size(j); ++x) {
            for (int y = 0; y < dom.alphabet_size(j); ++y) {
                w.slot2(j, x, y) = f(j, x, y);
            }
        }
    }
    return w;
}

/// Componentwise ternary witness from f(issue, x, y, z).
template <class F>
possdom::AggregatorWitness ternary_witness(const possdom::Domain& dom, F f) {
    auto w = possdom::AggregatorWitness::blank(dom, 3, possdom::WitnessKind::generic);
    for (int j = 0; j < dom.issue_count(); ++j) {
        for (int x = 0; x < dom.alphabet_size(j); ++x) {
            for (int y = 0; y < dom.alphabet_size(j); ++y) {
                for (int z = 0; z < dom.alphabet_size(j); ++z) {
                    w.slot3(j, x, y, z) = f(j, x, y, z);
                }
            }
        }
    }
    return w;
}

inline int maj3(int x, int y, int z) { return (x == y || x == z) ? x : y; }

}  // namespace testutil
