#pragma once

#include <optional>
#include <string>
#include <vector>

#include "possdom/domain.hpp"

namespace possdom {

enum class WitnessKind {
    binary,    // arity 2, non-dictatorial on the domain
    majority,  // arity 3, acts as maj on every two-element subset of every X_j
    minority,  // arity 3, acts as xor on every two-element subset of every X_j
    wnu,       // arity 3, f_j(y,x,x) = f_j(x,y,x) = f_j(x,x,y) for all x, y
    generic,   // verified aggregator with no further claim
};

const char* to_string(WitnessKind kind) noexcept;

/// A candidate aggregator (f_1, ..., f_m): one total table per issue over
/// that issue's value ids.
///
/// Tables are flat and row-major in argument order: a binary table holds
/// f(x, y) at x*s + y, a ternary one holds f(x, y, z) at (x*s + y)*s + z,
/// with s the issue's alphabet size. Entries are value ids; -1 marks an
/// unset slot in a witness under construction.
struct AggregatorWitness {
    int arity = 2;  // 2 or 3
    WitnessKind kind = WitnessKind::generic;
    std::vector<int> sizes;                // per-issue alphabet size
    std::vector<std::vector<int>> tables;  // tables[j].size() == sizes[j]^arity

    /// Witness shaped for dom with every entry unset.
    static AggregatorWitness blank(const Domain& dom, int arity, WitnessKind kind);

    int value2(int issue, int x, int y) const {
        const auto j = static_cast<std::size_t>(issue);
        return tables[j][static_cast<std::size_t>(x * sizes[j] + y)];
    }
    int& slot2(int issue, int x, int y) {
        const auto j = static_cast<std::size_t>(issue);
        return tables[j][static_cast<std::size_t>(x * sizes[j] + y)];
    }
    int value3(int issue, int x, int y, int z) const {
        const auto j = static_cast<std::size_t>(issue);
        return tables[j][static_cast<std::size_t>((x * sizes[j] + y) * sizes[j] + z)];
    }
    int& slot3(int issue, int x, int y, int z) {
        const auto j = static_cast<std::size_t>(issue);
        return tables[j][static_cast<std::size_t>((x * sizes[j] + y) * sizes[j] + z)];
    }

    /// Componentwise image of a pair / triple of rows.
    Row image2(const Row& a, const Row& b) const;
    Row image3(const Row& a, const Row& b, const Row& c) const;

    bool operator==(const AggregatorWitness&) const = default;
};

/// Why verify_aggregator said no: either a table entry escapes its argument
/// set, or some tuple of rows maps outside the domain.
struct Violation {
    enum class Kind { conservativeness, closure };

    Kind kind;
    int issue = -1;             // offending issue (0-based), conservativeness only
    std::vector<int> args;      // table arguments (value ids), conservativeness only
    int value = -1;             // table output (value id), conservativeness only
    std::vector<int> row_tuple;  // offending row indices (0-based), closure only
    Row image;                  // the infeasible image row, closure only

    /// Human-readable account, 1-based indices and original token spelling.
    std::string describe(const Domain& dom) const;
};

struct VerifyResult {
    bool ok = false;
    std::optional<Violation> violation;
};

/// The trusted check: every table entry is conservative and the
/// componentwise image of every arity-tuple of rows is again a row.
/// Shape problems (wrong arity, tables not matching dom's alphabets) throw
/// ArityMismatch / AlphabetMismatch; a failed check is a verdict, not an
/// error.
VerifyResult verify_aggregator(const Domain& dom, const AggregatorWitness& w);

/// 1-based dictator index d when the image of every tuple of rows equals
/// the tuple's d-th row, none otherwise. Only the restriction to the domain
/// counts. Requires verify_aggregator(dom, w).ok.
std::optional<int> is_dictatorial(const Domain& dom, const AggregatorWitness& w);

struct KindCheck {
    bool ok = false;
    std::string detail;  // reason when not ok, empty otherwise
};

/// Kind-specific obligations on a verified witness. majority / minority
/// require every f_j to act as maj / xor on each two-element subset of X_j,
/// wnu requires f_j(y,x,x) = f_j(x,y,x) = f_j(x,x,y), binary requires
/// is_dictatorial to come up empty. Throws WrongArity when the kind demands
/// a different arity and WrongKind for generic.
KindCheck check_kind(const Domain& dom, const AggregatorWitness& w, WitnessKind kind);

/// Projection onto coordinate d (1-based, d <= arity).
AggregatorWitness projection_witness(const Domain& dom, int arity, int d);

/// Componentwise ternary xor, the minority witness of a Boolean framework.
/// Throws NotBooleanFramework otherwise.
AggregatorWitness xor_witness(const Domain& dom);

}  // namespace possdom
