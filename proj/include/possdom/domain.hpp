#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace possdom {

enum class Errc {
    empty_input,
    ragged_row,
    degenerate_issue,
    all_issues_degenerate,
    arity_mismatch,
    alphabet_mismatch,
    wrong_arity,
    wrong_kind,
    same_issue,
    not_conservative,
    not_polymorphism,
    domain_mismatch,
    not_boolean_framework,
    too_large,
    budget_exhausted,
    generation_failed,
    invalid_params,
    parse_error,
};

/// Library error. `index()` carries the user-facing (1-based) issue, row or
/// line number the error refers to, or -1 when not applicable.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, long index = -1)
        : std::runtime_error(std::move(message)), code_(code), index_(index) {}

    Errc code() const noexcept { return code_; }
    long index() const noexcept { return index_; }

private:
    Errc code_;
    long index_;
};

/// Position identifiers as they appear in input; compared by equality only.
using Token = std::string;

/// One feasible evaluation, with each coordinate interned to a dense value
/// id local to its issue.
using Row = std::vector<int>;

/// A set of feasible evaluations over m issues.
///
/// Rows are distinct and kept in first-occurrence order. Per-issue alphabets
/// are exactly the column projections, with value ids assigned by first
/// occurrence (so for binary columns the first token seen maps to 0).
/// Immutable after construction; issues are 0-based internally and reported
/// 1-based in messages and serialized output.
class Domain {
public:
    Domain(std::vector<std::vector<Token>> alphabets, std::vector<Row> rows);

    int issue_count() const noexcept { return static_cast<int>(alphabets_.size()); }
    int row_count() const noexcept { return static_cast<int>(rows_.size()); }

    const std::vector<Row>& rows() const noexcept { return rows_; }
    const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

    int alphabet_size(int issue) const {
        return static_cast<int>(alphabets_[static_cast<std::size_t>(issue)].size());
    }
    const std::vector<Token>& alphabet(int issue) const {
        return alphabets_[static_cast<std::size_t>(issue)];
    }
    const Token& token(int issue, int value) const {
        return alphabets_[static_cast<std::size_t>(issue)][static_cast<std::size_t>(value)];
    }
    std::optional<int> intern(int issue, const Token& tok) const;

    /// Index of `r` in row order, or nullopt if infeasible.
    std::optional<int> row_index(const Row& r) const;
    bool contains(const Row& r) const { return row_index(r).has_value(); }

    /// True when every alphabet has exactly two elements.
    bool boolean_framework() const noexcept { return boolean_; }

    /// Rows rendered back to original token spelling.
    std::vector<std::vector<Token>> token_rows() const;

    bool operator==(const Domain& other) const {
        return alphabets_ == other.alphabets_ && rows_ == other.rows_;
    }

private:
    std::vector<std::vector<Token>> alphabets_;
    std::vector<Row> rows_;
    // Rows pack into 64-bit keys whenever the per-issue bit widths fit, so
    // membership tests avoid string building; wide frameworks fall back to
    // a string-keyed map.
    std::vector<int> shifts_;
    bool packable_ = false;
    std::unordered_map<std::uint64_t, int> packed_lookup_;
    std::unordered_map<std::string, int> string_lookup_;
    bool boolean_ = false;
};

struct ValidationReport {
    std::vector<int> dropped_issues;  // 1-based positions in the raw input
};

/// Builds a Domain from raw token rows: checks shape, interns columns,
/// deduplicates rows in first-occurrence order.
///
/// A column whose projection is a single value violates the non-degeneracy
/// requirement: by default this raises degenerate_issue; with
/// repair_degenerate the column is dropped and recorded in `report`.
Domain validate_domain(const std::vector<std::vector<Token>>& raw_rows,
                       bool repair_degenerate = false,
                       ValidationReport* report = nullptr);

}  // namespace possdom
