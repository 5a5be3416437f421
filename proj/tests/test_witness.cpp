#include <doctest.h>

#include "possdom/witness.hpp"
#include "testutil.hpp"

using possdom::AggregatorWitness;
using possdom::check_kind;
using possdom::Domain;
using possdom::Errc;
using possdom::Error;
using possdom::is_dictatorial;
using possdom::projection_witness;
using possdom::Row;
using possdom::verify_aggregator;
using possdom::Violation;
using possdom::WitnessKind;
using possdom::xor_witness;

TEST_CASE("full cube accepts mixed projections") {
    Domain dom = testutil::full_cube2();
    auto w = testutil::binary_witness(dom, [](int j, int x, int y) {
        return j == 0 ? x : y;
    });
    auto res = verify_aggregator(dom, w);
    CHECK(res.ok);
    CHECK(!is_dictatorial(dom, w).has_value());
}

TEST_CASE("implication closes under (and, first projection)") {
    Domain dom = testutil::implication();
    auto w = testutil::binary_witness(dom, [](int j, int x, int y) {
        return j == 0 ? (x & y) : x;
    });
    CHECK(verify_aggregator(dom, w).ok);
    CHECK(!is_dictatorial(dom, w).has_value());
    CHECK(check_kind(dom, w, WitnessKind::binary).ok);
}

TEST_CASE("one-in-three rejects componentwise majority") {
    Domain dom = testutil::one_in_three();
    auto w = testutil::ternary_witness(dom, [](int, int x, int y, int z) {
        return testutil::maj3(x, y, z);
    });
    auto res = verify_aggregator(dom, w);
    REQUIRE(!res.ok);
    REQUIRE(res.violation.has_value());
    CHECK(res.violation->kind == Violation::Kind::closure);
    CHECK(res.violation->row_tuple == std::vector<int>{0, 1, 2});
    // The image is all-zero in token spelling.
    for (int j = 0; j < 3; ++j) {
        CHECK(dom.token(j, res.violation->image[static_cast<std::size_t>(j)]) == "0");
    }
    CHECK(res.violation->describe(dom) ==
          "rows (1, 2, 3) map to (0, 0, 0), which is not a feasible evaluation");
}

TEST_CASE("a non-conservative entry is caught before closure") {
    Domain dom = testutil::diagonal3();
    auto w = testutil::binary_witness(dom, [](int, int x, int y) {
        return x == y ? x : (x + y) % 3;
    });
    // f(0, 1) = 1 is fine but f(0, 2) = 2 is fine too; f(1, 2) = 0 escapes.
    auto res = verify_aggregator(dom, w);
    REQUIRE(!res.ok);
    REQUIRE(res.violation.has_value());
    CHECK(res.violation->kind == Violation::Kind::conservativeness);
    CHECK(res.violation->args == std::vector<int>{1, 2});
    CHECK(res.violation->value == 0);
}

TEST_CASE("projections are dictatorial by construction") {
    Domain dom = testutil::one_in_three();
    for (int arity : {2, 3}) {
        for (int d = 1; d <= arity; ++d) {
            auto w = projection_witness(dom, arity, d);
            CHECK(verify_aggregator(dom, w).ok);
            CHECK(is_dictatorial(dom, w) == d);
        }
    }
    CHECK_THROWS_AS(projection_witness(dom, 2, 3), Error);
}

TEST_CASE("and-tables on the boolean diagonal favor no dictator") {
    Domain dom = testutil::make_domain({{0, 0}, {1, 1}});
    auto w = testutil::binary_witness(dom, [](int, int x, int y) { return x & y; });
    CHECK(verify_aggregator(dom, w).ok);
    CHECK(!is_dictatorial(dom, w).has_value());
}

TEST_CASE("xor witness is a minority aggregator on the affine domain") {
    Domain dom = testutil::affine3();
    auto w = xor_witness(dom);
    CHECK(w.kind == WitnessKind::minority);
    CHECK(verify_aggregator(dom, w).ok);
    CHECK(check_kind(dom, w, WitnessKind::minority).ok);
    CHECK(check_kind(dom, w, WitnessKind::wnu).ok);
    CHECK(!check_kind(dom, w, WitnessKind::majority).ok);
    CHECK(!is_dictatorial(dom, w).has_value());
}

TEST_CASE("xor witness demands a boolean framework") {
    try {
        xor_witness(testutil::diagonal3());
        FAIL("expected not_boolean_framework");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_boolean_framework);
    }
}

TEST_CASE("majority tables pass the majority check on the cube") {
    Domain dom = testutil::full_cube2();
    auto w = testutil::ternary_witness(dom, [](int, int x, int y, int z) {
        return testutil::maj3(x, y, z);
    });
    CHECK(verify_aggregator(dom, w).ok);
    CHECK(check_kind(dom, w, WitnessKind::majority).ok);
    CHECK(check_kind(dom, w, WitnessKind::wnu).ok);
    CHECK(!check_kind(dom, w, WitnessKind::minority).ok);
    CHECK(!is_dictatorial(dom, w).has_value());
}

TEST_CASE("a broken near-unanimity chain is reported") {
    Domain dom = testutil::diagonal3();
    // f(x, x, y) = x but f(x, y, x) = y breaks the chain at any pair.
    auto w = testutil::ternary_witness(dom, [](int, int x, int y, int z) {
        if (x == y) return x;
        if (x == z) return y;
        if (y == z) return y;
        return x;
    });
    auto kc = check_kind(dom, w, WitnessKind::wnu);
    CHECK(!kc.ok);
    CHECK(!kc.detail.empty());
}

TEST_CASE("pair-collapsing tables on the diagonal make a wnu witness") {
    Domain dom = testutil::diagonal3();
    // On pairs return the repeated value; on distinct triples the first.
    auto w = testutil::ternary_witness(dom, [](int, int x, int y, int z) {
        if (x == y || x == z) return x;
        if (y == z) return y;
        return x;
    });
    w.kind = WitnessKind::wnu;
    CHECK(verify_aggregator(dom, w).ok);
    CHECK(check_kind(dom, w, WitnessKind::wnu).ok);
}

TEST_CASE("kind checks police arity and kind") {
    Domain dom = testutil::implication();
    auto w2 = projection_witness(dom, 2, 1);
    auto w3 = projection_witness(dom, 3, 1);
    CHECK_THROWS_AS(check_kind(dom, w2, WitnessKind::majority), Error);
    CHECK_THROWS_AS(check_kind(dom, w3, WitnessKind::binary), Error);
    CHECK_THROWS_AS(check_kind(dom, w2, WitnessKind::generic), Error);
    auto kc = check_kind(dom, w2, WitnessKind::binary);
    CHECK(!kc.ok);
    CHECK(kc.detail == "dictatorial with dictator 1");
}

TEST_CASE("shape mismatches are errors, not verdicts") {
    Domain dom = testutil::implication();
    auto w = projection_witness(dom, 2, 1);

    auto short_tables = w;
    short_tables.tables.pop_back();
    short_tables.sizes.pop_back();
    CHECK_THROWS_AS(verify_aggregator(dom, short_tables), Error);

    auto bad_size = w;
    bad_size.tables[0].push_back(0);
    CHECK_THROWS_AS(verify_aggregator(dom, bad_size), Error);

    auto bad_arity = w;
    bad_arity.arity = 4;
    CHECK_THROWS_AS(verify_aggregator(dom, bad_arity), Error);

    Domain other = testutil::diagonal3();
    CHECK_THROWS_AS(verify_aggregator(other, w), Error);
}

TEST_CASE("majority check pins all eight entries of each two-element block") {
    Domain dom = testutil::diagonal3();
    auto w = testutil::ternary_witness(dom, [](int, int x, int y, int z) {
        return testutil::maj3(x, y, z);
    });
    REQUIRE(check_kind(dom, w, WitnessKind::majority).ok);
    for (int j = 0; j < dom.issue_count(); ++j) {
        for (int a = 0; a < dom.alphabet_size(j); ++a) {
            for (int b = a + 1; b < dom.alphabet_size(j); ++b) {
                const int bits[2] = {a, b};
                for (int mask = 0; mask < 8; ++mask) {
                    const int x = bits[mask & 1];
                    const int y = bits[(mask >> 1) & 1];
                    const int z = bits[(mask >> 2) & 1];
                    CHECK(w.value3(j, x, y, z) == testutil::maj3(x, y, z));
                }
            }
        }
    }
}

TEST_CASE("flipping one pair entry defeats the majority check") {
    Domain dom = testutil::full_cube2();
    auto w = testutil::ternary_witness(dom, [](int, int x, int y, int z) {
        return testutil::maj3(x, y, z);
    });
    w.slot3(1, 0, 1, 0) = 1;
    auto kc = check_kind(dom, w, WitnessKind::majority);
    CHECK(!kc.ok);
    CHECK(kc.detail.find("issue 2") != std::string::npos);
}
