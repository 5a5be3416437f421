#include <doctest.h>

#include <algorithm>
#include <vector>

#include "possdom/oracle.hpp"
#include "possdom/polysearch.hpp"
#include "testutil.hpp"

using possdom::AggregatorWitness;
using possdom::check_kind;
using possdom::diamond;
using possdom::Domain;
using possdom::encode_disjoint_union;
using possdom::Errc;
using possdom::Error;
using possdom::find_majority_aggregator;
using possdom::find_minority_aggregator;
using possdom::find_pair_polymorphism;
using possdom::find_wnu_aggregator;
using possdom::GenParams;
using possdom::GenStructure;
using possdom::is_affine_boolean;
using possdom::is_dictatorial;
using possdom::PairBehavior;
using possdom::polymorphism_to_aggregator;
using possdom::Row;
using possdom::SearchStats;
using possdom::SortedRelation;
using possdom::TernaryTable;
using possdom::verify_aggregator;
using possdom::WitnessKind;

namespace {

/// Total ternary table family from f(issue, x, y, z).
template <class F>
TernaryTable make_table(const Domain& dom, F f) {
    TernaryTable t = TernaryTable::blank(dom);
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                for (int z = 0; z < s; ++z) t.slot(j, x, y, z) = f(j, x, y, z);
            }
        }
    }
    return t;
}

bool decodes(const Domain& dom, const TernaryTable& t, WitnessKind kind) {
    try {
        polymorphism_to_aggregator(dom, t, kind);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

TEST_CASE("encode_disjoint_union tags issues into disjoint blocks") {
    Domain dom = testutil::implication();
    SortedRelation sr = encode_disjoint_union(dom);
    CHECK(sr.offsets == std::vector<int>{0, 2, 4});
    CHECK(sr.issue_count() == 2);
    CHECK(sr.universe_size() == 4);
    CHECK(sr.rows == std::vector<Row>{{0, 2}, {0, 3}, {1, 3}});

    SortedRelation sr3 = encode_disjoint_union(testutil::affine3());
    CHECK(sr3.universe_size() == 6);
    CHECK(sr3.rows.size() == 4);

    Domain single = possdom::validate_domain({{"a"}, {"b"}});
    SortedRelation sr1 = encode_disjoint_union(single);
    CHECK(sr1.offsets == std::vector<int>{0, 2});
    CHECK(sr1.rows == std::vector<Row>{{0}, {1}});

    for (int e = 0; e < sr.universe_size(); ++e) {
        const int j = sr.sort_of(e);
        CHECK(sr.tag(j, sr.untag(e)) == e);
    }
    CHECK_THROWS_AS(sr.sort_of(-1), Error);
    try {
        sr.sort_of(sr.universe_size());
        FAIL("expected invalid_params");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_params);
    }
}

TEST_CASE("polymorphism_to_aggregator decodes xor tables into a minority witness") {
    Domain dom = testutil::affine3();
    TernaryTable t = make_table(dom, [](int, int x, int y, int z) { return x ^ y ^ z; });
    AggregatorWitness w = polymorphism_to_aggregator(dom, t, WitnessKind::minority);
    CHECK(w == possdom::xor_witness(dom));

    AggregatorWitness g = polymorphism_to_aggregator(dom, t, WitnessKind::generic);
    CHECK(g.kind == WitnessKind::generic);
    CHECK(g.tables == w.tables);
}

TEST_CASE("polymorphism_to_aggregator flags projections as dictatorial") {
    Domain dom = testutil::implication();
    TernaryTable t = make_table(dom, [](int, int x, int, int) { return x; });
    AggregatorWitness w = polymorphism_to_aggregator(dom, t, WitnessKind::generic);
    CHECK(verify_aggregator(dom, w).ok);
    CHECK(is_dictatorial(dom, w) == 1);
}

TEST_CASE("polymorphism_to_aggregator rejects non-polymorphisms by triple") {
    Domain dom = testutil::one_in_three();
    TernaryTable t =
        make_table(dom, [](int, int x, int y, int z) { return testutil::maj3(x, y, z); });
    try {
        polymorphism_to_aggregator(dom, t, WitnessKind::generic);
        FAIL("expected not_polymorphism");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_polymorphism);
        CHECK(std::string(e.what()) ==
              "rows (1, 2, 3) map to (0, 0, 0), which is not a feasible evaluation");
    }
}

TEST_CASE("polymorphism_to_aggregator rejects bad tables up front") {
    Domain dom = testutil::diagonal3();
    TernaryTable t = make_table(dom, [](int, int x, int, int) { return x; });
    t.slot(0, 0, 1, 1) = 2;
    try {
        polymorphism_to_aggregator(dom, t, WitnessKind::generic);
        FAIL("expected not_conservative");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_conservative);
        CHECK(std::string(e.what()) ==
              "issue 1: f(a, b, b) = c, which is not among its arguments");
        CHECK(e.index() == 1);
    }

    try {
        polymorphism_to_aggregator(dom, TernaryTable::blank(dom), WitnessKind::generic);
        FAIL("expected invalid_params");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_params);
    }

    try {
        polymorphism_to_aggregator(testutil::implication(), t, WitnessKind::generic);
        FAIL("expected alphabet_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::alphabet_mismatch);
    }
}

TEST_CASE("aggregator round trip preserves the tables") {
    Domain dom = testutil::implication();
    AggregatorWitness w = find_majority_aggregator(dom).value();
    possdom::SortedOperation op = possdom::aggregator_to_polymorphism(dom, w);
    CHECK(op.local.tables == w.tables);
    CHECK(op.cross_rule == WitnessKind::majority);
    CHECK(polymorphism_to_aggregator(dom, op.local, WitnessKind::majority) == w);

    auto binary = possdom::oracle_binary_nondictatorial(dom);
    REQUIRE(binary.has_value());
    try {
        possdom::aggregator_to_polymorphism(dom, *binary);
        FAIL("expected wrong_kind");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::wrong_kind);
    }

    auto generic = testutil::ternary_witness(
        dom, [](int, int x, int y, int z) { return testutil::maj3(x, y, z); });
    CHECK_THROWS_AS(possdom::aggregator_to_polymorphism(dom, generic), Error);

    auto stub = AggregatorWitness::blank(dom, 2, WitnessKind::majority);
    try {
        possdom::aggregator_to_polymorphism(dom, stub);
        FAIL("expected wrong_arity");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::wrong_arity);
    }
}

TEST_CASE("sorted operations fall back to the cross-sort rule") {
    Domain dom = testutil::affine3();
    SortedRelation sr = encode_disjoint_union(dom);
    AggregatorWitness w = find_minority_aggregator(dom).value();
    possdom::SortedOperation op = possdom::aggregator_to_polymorphism(dom, w);

    CHECK(op.apply(sr, sr.tag(1, 0), sr.tag(1, 1), sr.tag(1, 1)) == sr.tag(1, 0));
    CHECK(op.apply(sr, 0, 0, 2) == 2);
    CHECK(op.apply(sr, 0, 2, 0) == 2);
    CHECK(op.apply(sr, 2, 0, 0) == 2);
    CHECK(op.apply(sr, 0, 2, 4) == 0);

    Domain imp = testutil::implication();
    SortedRelation sri = encode_disjoint_union(imp);
    possdom::SortedOperation maj =
        possdom::aggregator_to_polymorphism(imp, find_majority_aggregator(imp).value());
    CHECK(maj.apply(sri, 0, 0, 2) == 0);
    CHECK(maj.apply(sri, 0, 2, 0) == 0);
    CHECK(maj.apply(sri, 2, 0, 0) == 0);
    CHECK(maj.apply(sri, 0, 2, 3) == 0);
    CHECK_THROWS_AS(maj.apply(sri, 0, 1, 99), Error);
}

TEST_CASE("find_majority_aggregator settles the named domains") {
    SearchStats st;
    Domain imp = testutil::implication();
    auto w = find_majority_aggregator(imp, possdom::kDefaultSearchBudget, &st);
    REQUIRE(w.has_value());
    CHECK(w->kind == WitnessKind::majority);
    auto maj = testutil::ternary_witness(
        imp, [](int, int x, int y, int z) { return testutil::maj3(x, y, z); });
    CHECK(w->tables == maj.tables);
    CHECK(st.nodes == 0);

    st.nodes = 0;
    CHECK(find_majority_aggregator(testutil::full_cube2(), possdom::kDefaultSearchBudget,
                                   &st)
              .has_value());
    CHECK(st.nodes == 0);

    st.nodes = 0;
    CHECK(!find_majority_aggregator(testutil::one_in_three(),
                                    possdom::kDefaultSearchBudget, &st)
               .has_value());
    CHECK(st.nodes == 0);

    CHECK(!find_majority_aggregator(testutil::affine3()).has_value());

    auto diag = find_majority_aggregator(testutil::diagonal3());
    REQUIRE(diag.has_value());
    CHECK(check_kind(testutil::diagonal3(), *diag, WitnessKind::majority).ok);
}

TEST_CASE("find_minority_aggregator settles the named domains") {
    SearchStats st;
    Domain par = testutil::affine3();
    auto w = find_minority_aggregator(par, possdom::kDefaultSearchBudget, &st);
    REQUIRE(w.has_value());
    CHECK(*w == possdom::xor_witness(par));
    CHECK(st.nodes == 0);

    CHECK(!find_minority_aggregator(testutil::implication()).has_value());
    CHECK(!find_minority_aggregator(testutil::one_in_three()).has_value());

    auto cube = find_minority_aggregator(testutil::full_cube2());
    REQUIRE(cube.has_value());
    CHECK(cube->tables == possdom::xor_witness(testutil::full_cube2()).tables);
}

TEST_CASE("the search budget counts branching nodes exactly") {
    Domain diag = testutil::diagonal3();
    SearchStats st;
    auto w = find_majority_aggregator(diag, possdom::kDefaultSearchBudget, &st);
    REQUIRE(w.has_value());
    REQUIRE(st.nodes > 0);
    const long long need = st.nodes;

    SearchStats exact;
    CHECK(find_majority_aggregator(diag, need, &exact).has_value());
    CHECK(exact.nodes == need);

    SearchStats starved;
    try {
        find_majority_aggregator(diag, need - 1, &starved);
        FAIL("expected budget_exhausted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::budget_exhausted);
    }
    CHECK(starved.nodes == need - 1);

    SearchStats zero;
    try {
        find_majority_aggregator(diag, 0, &zero);
        FAIL("expected budget_exhausted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::budget_exhausted);
    }
    CHECK(zero.nodes == 0);

    // Instances whose entries are all forced never branch, so a zero budget
    // still settles them in both directions.
    CHECK(find_majority_aggregator(testutil::implication(), 0).has_value());
    CHECK(!find_majority_aggregator(testutil::one_in_three(), 0).has_value());
}

TEST_CASE("is_affine_boolean matches the xor closure") {
    CHECK(is_affine_boolean(testutil::affine3()));
    CHECK(is_affine_boolean(testutil::full_cube2()));
    CHECK(!is_affine_boolean(testutil::implication()));
    CHECK(!is_affine_boolean(testutil::one_in_three()));
    try {
        is_affine_boolean(testutil::diagonal3());
        FAIL("expected not_boolean_framework");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_boolean_framework);
    }

    // On boolean frameworks affineness and a minority witness coincide.
    for (const Domain& dom :
         {testutil::implication(), testutil::full_cube2(), testutil::affine3(),
          testutil::one_in_three(), testutil::one_in_three_times_cube()}) {
        CHECK(is_affine_boolean(dom) == find_minority_aggregator(dom).has_value());
    }
}

TEST_CASE("find_pair_polymorphism finds the chain meet") {
    Domain dom = testutil::implication();
    SortedRelation sr = encode_disjoint_union(dom);
    TernaryTable and3 =
        make_table(dom, [](int, int x, int y, int z) { return x & y & z; });

    for (int sort : {0, 1}) {
        auto hit = find_pair_polymorphism(sr, sort, {0, 1});
        REQUIRE(hit.has_value());
        CHECK(hit->behavior == PairBehavior::meet);
        CHECK(hit->table == and3);
        CHECK(decodes(dom, hit->table, WitnessKind::generic));
    }
}

TEST_CASE("find_pair_polymorphism reports blocked pairs as misses") {
    Domain dom = testutil::one_in_three();
    SortedRelation sr = encode_disjoint_union(dom);
    for (int sort : {0, 1, 2}) {
        CHECK(!find_pair_polymorphism(sr, sort, {0, 1}).has_value());
    }

    // The product with a free issue keeps the blocked pairs blocked while
    // the free issue still has a meet of its own.
    Domain prod = testutil::one_in_three_times_cube();
    SortedRelation srp = encode_disjoint_union(prod);
    CHECK(!find_pair_polymorphism(srp, 0, {0, 1}).has_value());
    auto free_issue = find_pair_polymorphism(srp, 3, {0, 1});
    REQUIRE(free_issue.has_value());
    CHECK(free_issue->behavior == PairBehavior::meet);
}

TEST_CASE("find_pair_polymorphism falls through to minority on parity") {
    Domain dom = testutil::affine3();
    SortedRelation sr = encode_disjoint_union(dom);
    TernaryTable xor3 =
        make_table(dom, [](int, int x, int y, int z) { return x ^ y ^ z; });
    for (int sort : {0, 1, 2}) {
        auto hit = find_pair_polymorphism(sr, sort, {0, 1});
        REQUIRE(hit.has_value());
        CHECK(hit->behavior == PairBehavior::minority);
        CHECK(hit->table == xor3);
    }
}

TEST_CASE("find_pair_polymorphism validates its arguments") {
    SortedRelation sr = encode_disjoint_union(testutil::implication());
    for (auto bad : {std::pair{-1, std::array{0, 1}}, {2, {0, 1}}, {0, {0, 0}},
                     {0, {0, 5}}}) {
        try {
            find_pair_polymorphism(sr, bad.first, bad.second);
            FAIL("expected invalid_params");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::invalid_params);
        }
    }
}

TEST_CASE("diamond composes tables per issue") {
    Domain imp = testutil::implication();
    TernaryTable maj = make_table(
        imp, [](int, int x, int y, int z) { return testutil::maj3(x, y, z); });
    CHECK(diamond(maj, maj) == maj);

    Domain par = testutil::affine3();
    TernaryTable x3 = make_table(par, [](int, int x, int y, int z) { return x ^ y ^ z; });
    TernaryTable pr1 = make_table(par, [](int, int x, int, int) { return x; });
    CHECK(diamond(x3, pr1) == x3);
    CHECK(diamond(pr1, x3) == x3);

    try {
        diamond(maj, x3);
        FAIL("expected domain_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::domain_mismatch);
    }
    try {
        diamond(maj, TernaryTable::blank(imp));
        FAIL("expected invalid_params");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_params);
    }
}

TEST_CASE("diamond preserves polymorphisms and spreads near-unanimity") {
    Domain dom = testutil::implication();

    // All conservative ternary table pairs on two boolean issues: the six
    // off-diagonal entries of each issue are free bits.
    const int free[6][3] = {{0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                            {1, 0, 0}, {1, 0, 1}, {1, 1, 0}};
    auto fill = [&](int bits) {
        std::vector<int> table(8, 0);
        table[7] = 1;
        for (int k = 0; k < 6; ++k) {
            const auto [x, y, z] = std::tuple{free[k][0], free[k][1], free[k][2]};
            table[static_cast<std::size_t>((x * 2 + y) * 2 + z)] = (bits >> k) & 1;
        }
        return table;
    };
    std::vector<TernaryTable> polys;
    for (int b0 = 0; b0 < 64; ++b0) {
        for (int b1 = 0; b1 < 64; ++b1) {
            TernaryTable t = TernaryTable::blank(dom);
            t.tables[0] = fill(b0);
            t.tables[1] = fill(b1);
            if (decodes(dom, t, WitnessKind::generic)) polys.push_back(std::move(t));
        }
    }
    TernaryTable pr1 = make_table(dom, [](int, int x, int, int) { return x; });
    CHECK(std::find(polys.begin(), polys.end(), pr1) != polys.end());
    REQUIRE(polys.size() >= 3);

    const std::size_t cap = std::min<std::size_t>(polys.size(), 40);
    for (std::size_t a = 0; a < cap; ++a) {
        for (std::size_t b = 0; b < cap; ++b) {
            CHECK(decodes(dom, diamond(polys[a], polys[b]), WitnessKind::generic));
        }
    }

    // Folding against a near-unanimity operand keeps its equalities no
    // matter what the other operand does.
    TernaryTable and3 =
        make_table(dom, [](int, int x, int y, int z) { return x & y & z; });
    for (const TernaryTable& f : polys) {
        CHECK(decodes(dom, diamond(f, and3), WitnessKind::wnu));
        CHECK(decodes(dom, diamond(and3, f), WitnessKind::wnu));
    }
}

TEST_CASE("find_wnu_aggregator decodes the parity and chain domains") {
    Domain par = testutil::affine3();
    auto w = find_wnu_aggregator(par);
    REQUIRE(w.has_value());
    CHECK(w->kind == WitnessKind::wnu);
    CHECK(w->tables == possdom::xor_witness(par).tables);
    CHECK(verify_aggregator(par, *w).ok);

    Domain imp = testutil::implication();
    auto v = find_wnu_aggregator(imp);
    REQUIRE(v.has_value());
    auto and3 = testutil::ternary_witness(
        imp, [](int, int x, int y, int z) { return x & y & z; });
    CHECK(v->tables == and3.tables);
    CHECK(check_kind(imp, *v, WitnessKind::wnu).ok);

    CHECK(!find_wnu_aggregator(testutil::one_in_three()).has_value());
    CHECK(!find_wnu_aggregator(testutil::one_in_three_times_cube()).has_value());

    auto diag = find_wnu_aggregator(testutil::diagonal3());
    REQUIRE(diag.has_value());
    CHECK(check_kind(testutil::diagonal3(), *diag, WitnessKind::wnu).ok);
}

TEST_CASE("searches agree with the oracle on small domains") {
    std::vector<Domain> pool = {testutil::implication(),
                                testutil::full_cube2(),
                                testutil::one_in_three(),
                                testutil::affine3(),
                                testutil::diagonal3(),
                                testutil::one_in_three_times_cube()};
    struct Shape {
        int m;
        std::vector<int> sizes;
        int rows;
    };
    for (const Shape& shape : {Shape{2, {2, 3}, 4}, Shape{3, {2, 2, 2}, 4},
                               Shape{3, {2, 2, 3}, 5}}) {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            GenParams params;
            params.m = shape.m;
            params.sizes = shape.sizes;
            params.target_rows = shape.rows;
            params.structure = GenStructure::uniform_random;
            params.seed = seed;
            pool.push_back(possdom::generate(params));
        }
    }
    for (const Domain& dom : pool) {
        CAPTURE(dom.row_count());
        CHECK(find_majority_aggregator(dom).has_value() ==
              possdom::oracle_majority(dom).has_value());
        CHECK(find_minority_aggregator(dom).has_value() ==
              possdom::oracle_minority(dom).has_value());
        CHECK(find_wnu_aggregator(dom).has_value() ==
              possdom::oracle_wnu(dom).has_value());
    }
}
