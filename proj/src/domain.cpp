#include "possdom/domain.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace possdom {

namespace {

std::string row_key(const Row& r) {
    std::string key;
    key.reserve(r.size() * 4);
    for (int v : r) {
        key.append(std::to_string(v));
        key.push_back(',');
    }
    return key;
}

}  // namespace

Domain::Domain(std::vector<std::vector<Token>> alphabets, std::vector<Row> rows)
    : alphabets_(std::move(alphabets)), rows_(std::move(rows)) {
    shifts_.reserve(alphabets_.size());
    int total_bits = 0;
    for (const auto& a : alphabets_) {
        shifts_.push_back(total_bits);
        total_bits += std::bit_width(a.size() - 1);
    }
    packable_ = !alphabets_.empty() && total_bits <= 64;
    if (packable_) {
        packed_lookup_.reserve(rows_.size() * 2);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::uint64_t key = 0;
            for (std::size_t j = 0; j < rows_[i].size(); ++j) {
                key |= static_cast<std::uint64_t>(rows_[i][j]) << shifts_[j];
            }
            packed_lookup_.emplace(key, static_cast<int>(i));
        }
    } else {
        string_lookup_.reserve(rows_.size() * 2);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            string_lookup_.emplace(row_key(rows_[i]), static_cast<int>(i));
        }
    }
    boolean_ = !alphabets_.empty() &&
               std::all_of(alphabets_.begin(), alphabets_.end(),
                           [](const auto& a) { return a.size() == 2; });
}

std::optional<int> Domain::intern(int issue, const Token& tok) const {
    const auto& alpha = alphabets_[static_cast<std::size_t>(issue)];
    for (std::size_t v = 0; v < alpha.size(); ++v) {
        if (alpha[v] == tok) return static_cast<int>(v);
    }
    return std::nullopt;
}

std::optional<int> Domain::row_index(const Row& r) const {
    if (r.size() != alphabets_.size()) return std::nullopt;
    for (std::size_t j = 0; j < r.size(); ++j) {
        if (r[j] < 0 || r[j] >= static_cast<int>(alphabets_[j].size())) {
            return std::nullopt;
        }
    }
    if (packable_) {
        std::uint64_t key = 0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            key |= static_cast<std::uint64_t>(r[j]) << shifts_[j];
        }
        auto it = packed_lookup_.find(key);
        if (it == packed_lookup_.end()) return std::nullopt;
        return it->second;
    }
    auto it = string_lookup_.find(row_key(r));
    if (it == string_lookup_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::vector<Token>> Domain::token_rows() const {
    std::vector<std::vector<Token>> out;
    out.reserve(rows_.size());
    for (const Row& r : rows_) {
        std::vector<Token> toks;
        toks.reserve(r.size());
        for (int j = 0; j < issue_count(); ++j) {
            toks.push_back(token(j, r[static_cast<std::size_t>(j)]));
        }
        out.push_back(std::move(toks));
    }
    return out;
}

Domain validate_domain(const std::vector<std::vector<Token>>& raw_rows,
                       bool repair_degenerate, ValidationReport* report) {
    if (raw_rows.empty()) {
        throw Error(Errc::empty_input, "no evaluations given");
    }
    const std::size_t m = raw_rows.front().size();
    if (m == 0) {
        throw Error(Errc::ragged_row, "row 1 has no coordinates", 1);
    }
    for (std::size_t i = 0; i < raw_rows.size(); ++i) {
        if (raw_rows[i].size() != m) {
            throw Error(Errc::ragged_row,
                        "row " + std::to_string(i + 1) + " has " +
                            std::to_string(raw_rows[i].size()) + " coordinates, expected " +
                            std::to_string(m),
                        static_cast<long>(i + 1));
        }
    }

    // Intern each column by first occurrence.
    std::vector<std::vector<Token>> alphabets(m);
    std::vector<std::unordered_map<std::string, int>> lut(m);
    std::vector<Row> interned;
    interned.reserve(raw_rows.size());
    for (const auto& raw : raw_rows) {
        Row r(m);
        for (std::size_t j = 0; j < m; ++j) {
            auto [it, inserted] =
                lut[j].emplace(raw[j], static_cast<int>(alphabets[j].size()));
            if (inserted) alphabets[j].push_back(raw[j]);
            r[j] = it->second;
        }
        interned.push_back(std::move(r));
    }

    // Degenerate columns: hard error unless repair is requested.
    std::vector<bool> keep(m, true);
    std::size_t kept = m;
    for (std::size_t j = 0; j < m; ++j) {
        if (alphabets[j].size() >= 2) continue;
        if (!repair_degenerate) {
            throw Error(Errc::degenerate_issue,
                        "issue " + std::to_string(j + 1) +
                            " has a single position value (" + alphabets[j][0] + ")",
                        static_cast<long>(j + 1));
        }
        keep[j] = false;
        --kept;
        if (report) report->dropped_issues.push_back(static_cast<int>(j + 1));
    }
    if (kept == 0) {
        throw Error(Errc::all_issues_degenerate,
                    "every issue has a single position value; nothing to aggregate");
    }
    if (kept != m) {
        std::vector<std::vector<Token>> a2;
        a2.reserve(kept);
        for (std::size_t j = 0; j < m; ++j) {
            if (keep[j]) a2.push_back(std::move(alphabets[j]));
        }
        for (Row& r : interned) {
            Row r2;
            r2.reserve(kept);
            for (std::size_t j = 0; j < m; ++j) {
                if (keep[j]) r2.push_back(r[j]);
            }
            r = std::move(r2);
        }
        alphabets = std::move(a2);
    }

    // Deduplicate, first occurrence wins. Rows can only collide after a
    // repair if they differed solely on dropped columns, which is impossible
    // (a dropped column holds one value), but the pass is cheap and keeps
    // the constructor's distinctness invariant unconditional.
    std::vector<Row> rows;
    rows.reserve(interned.size());
    std::unordered_set<std::string> seen;
    for (Row& r : interned) {
        if (seen.insert(row_key(r)).second) rows.push_back(std::move(r));
    }

    return Domain(std::move(alphabets), std::move(rows));
}

}  // namespace possdom
