#pragma once

#include <array>
#include <optional>
#include <vector>

#include "possdom/domain.hpp"
#include "possdom/witness.hpp"

namespace possdom {

/// The domain's rows over a tagged universe: value u of issue j becomes
/// element offsets[j] + u, so issues contribute disjoint blocks and a
/// family of per-issue tables reads as one operation on the whole universe
/// restricted to same-sort inputs.
struct SortedRelation {
    std::vector<int> offsets;  // m + 1 entries, block j is [offsets[j], offsets[j+1])
    std::vector<Row> rows;     // the domain's rows with tagged coordinates

    int issue_count() const { return static_cast<int>(offsets.size()) - 1; }
    int universe_size() const { return offsets.back(); }

    int tag(int issue, int value) const {
        return offsets[static_cast<std::size_t>(issue)] + value;
    }
    int sort_of(int element) const;
    int untag(int element) const {
        return element - offsets[static_cast<std::size_t>(sort_of(element))];
    }
};

SortedRelation encode_disjoint_union(const Domain& dom);

/// A candidate sort-local ternary operation: one total table per issue,
/// laid out like an arity-3 witness table. Entries are value ids with -1
/// for unset; cross-sort values are never materialized because closure
/// constraints only ever read same-sort entries.
struct TernaryTable {
    std::vector<int> sizes;
    std::vector<std::vector<int>> tables;  // tables[j].size() == sizes[j]^3

    static TernaryTable blank(std::vector<int> sizes);
    static TernaryTable blank(const Domain& dom);

    int value(int issue, int x, int y, int z) const {
        const auto j = static_cast<std::size_t>(issue);
        return tables[j][static_cast<std::size_t>((x * sizes[j] + y) * sizes[j] + z)];
    }
    int& slot(int issue, int x, int y, int z) {
        const auto j = static_cast<std::size_t>(issue);
        return tables[j][static_cast<std::size_t>((x * sizes[j] + y) * sizes[j] + z)];
    }

    bool operator==(const TernaryTable&) const = default;
};

/// Repackages sort-local tables as a witness tagged `kind` after checking
/// that every entry is set and conservative (NotConservative) and that the
/// componentwise image of every row triple is again a row (NotPolymorphism,
/// naming the violating triple). A kind other than generic must survive its
/// check_kind, else WrongKind.
AggregatorWitness polymorphism_to_aggregator(const Domain& dom, const TernaryTable& f,
                                             WitnessKind kind);

/// A ternary operation on the tagged universe: sort-local tables plus the
/// rule applied to cross-sort inputs (the repeated element for a majority
/// witness, the lone one for a minority witness, the first argument when
/// all three differ). Exists for round trips; nothing downstream consumes
/// cross-sort values.
struct SortedOperation {
    TernaryTable local;
    WitnessKind cross_rule = WitnessKind::majority;

    /// Value on tagged elements.
    int apply(const SortedRelation& sr, int a, int b, int c) const;
};

/// Inverse direction, for round-trip testing. Requires arity 3 (WrongArity)
/// and kind majority or minority (WrongKind).
SortedOperation aggregator_to_polymorphism(const Domain& dom, const AggregatorWitness& w);

/// Node budget for the backtracking searches. A node is one branching
/// assignment, so instances whose entries are all forced finish at zero
/// nodes; each find_* call spends at most its budget in total and raises
/// BudgetExhausted beyond it, which reports the question as undecided at
/// this budget, never as a no.
inline constexpr long long kDefaultSearchBudget = 10'000'000;

struct SearchStats {
    long long nodes = 0;  // branching assignments, accumulated across runs
};

/// Exact search for a majority aggregator: entries with a repeated argument
/// are forced to the repeated value, pairwise-distinct triples range over
/// their three arguments, and every ordered row triple must map into the
/// domain. Backtracking branches on the cell with the fewest remaining
/// candidates (ties by issue, then table position) and tries values in
/// interned order, pruning candidates no feasible image row supports.
std::optional<AggregatorWitness> find_majority_aggregator(
    const Domain& dom, long long budget = kDefaultSearchBudget,
    SearchStats* stats = nullptr);

/// Same search with repeated-argument entries forced to the lone value.
std::optional<AggregatorWitness> find_minority_aggregator(
    const Domain& dom, long long budget = kDefaultSearchBudget,
    SearchStats* stats = nullptr);

/// True iff the componentwise xor of every row triple stays feasible.
/// Throws NotBooleanFramework unless every alphabet has two elements.
bool is_affine_boolean(const Domain& dom);

/// How a found operation acts on the requested two-element set: both mixed
/// binary entries to the pair's lower value (meet) or higher value (join),
/// or the ternary majority / minority behavior.
enum class PairBehavior { meet, join, majority, minority };

const char* to_string(PairBehavior behavior) noexcept;

struct PairPolymorphism {
    PairBehavior behavior = PairBehavior::meet;
    TernaryTable table;
};

/// Searches for a conservative operation preserving the rows whose
/// restriction to the two-element set `pair` of `sort` is one of the four
/// named behaviors, in the order meet, join, majority, minority. The binary
/// candidates come first because their tables are quadratically smaller; a
/// hit g is lifted to the ternary g(g(x, y), z), which keeps the behavior
/// on the pair. Entries away from the pair are free apart from
/// conservativeness.
std::optional<PairPolymorphism> find_pair_polymorphism(
    const SortedRelation& sr, int sort, std::array<int, 2> pair,
    long long budget = kDefaultSearchBudget, SearchStats* stats = nullptr);

/// diamond(f, g)(x, y, z) = f(g(x,y,z), g(y,z,x), g(z,x,y)) per issue.
/// Conservative whenever f and g are, preserves the rows whenever both do,
/// and on any two-element set keeps the weak near-unanimity equalities of
/// either operand. Throws DomainMismatch on shape differences and
/// InvalidParams on unset entries.
TernaryTable diamond(const TernaryTable& f, const TernaryTable& g);

/// Decides uniform possibility. Runs find_pair_polymorphism for every issue
/// and every two-element subset of its alphabet; one miss settles the
/// answer as none. Otherwise the collected operations f1, ..., fN fold into
/// diamond(f1, diamond(f2, ... fN)), which is weak near-unanimity on every
/// pair at once, and the result is decoded and kind-checked.
std::optional<AggregatorWitness> find_wnu_aggregator(
    const Domain& dom, long long budget = kDefaultSearchBudget,
    SearchStats* stats = nullptr);

}  // namespace possdom
