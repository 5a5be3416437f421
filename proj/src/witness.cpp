#include "possdom/witness.hpp"

#include <array>

namespace possdom {

namespace {

/// Throws unless w's shape matches dom (arity in {2,3}, one table per issue,
/// sized by that issue's alphabet).
void check_shape(const Domain& dom, const AggregatorWitness& w) {
    if (w.arity != 2 && w.arity != 3) {
        throw Error(Errc::arity_mismatch,
                    "witness arity " + std::to_string(w.arity) + " is not 2 or 3");
    }
    const auto m = static_cast<std::size_t>(dom.issue_count());
    if (w.sizes.size() != m || w.tables.size() != m) {
        throw Error(Errc::alphabet_mismatch,
                    "witness has " + std::to_string(w.tables.size()) + " tables for " +
                        std::to_string(m) + " issues");
    }
    for (std::size_t j = 0; j < m; ++j) {
        const int s = dom.alphabet_size(static_cast<int>(j));
        if (w.sizes[j] != s) {
            throw Error(Errc::alphabet_mismatch,
                        "issue " + std::to_string(j + 1) + ": witness table keyed by " +
                            std::to_string(w.sizes[j]) + " values, domain has " +
                            std::to_string(s),
                        static_cast<long>(j + 1));
        }
        std::size_t expect = static_cast<std::size_t>(s) * static_cast<std::size_t>(s);
        if (w.arity == 3) expect *= static_cast<std::size_t>(s);
        if (w.tables[j].size() != expect) {
            throw Error(Errc::alphabet_mismatch,
                        "issue " + std::to_string(j + 1) + ": table has " +
                            std::to_string(w.tables[j].size()) + " entries, expected " +
                            std::to_string(expect),
                        static_cast<long>(j + 1));
        }
    }
}

std::string token_list(const Domain& dom, int issue, const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += dom.token(issue, values[i]);
    }
    return out;
}

}  // namespace

const char* to_string(WitnessKind kind) noexcept {
    switch (kind) {
        case WitnessKind::binary: return "binary";
        case WitnessKind::majority: return "majority";
        case WitnessKind::minority: return "minority";
        case WitnessKind::wnu: return "wnu";
        case WitnessKind::generic: return "generic";
    }
    return "generic";
}

AggregatorWitness AggregatorWitness::blank(const Domain& dom, int arity,
                                           WitnessKind kind) {
    if (arity != 2 && arity != 3) {
        throw Error(Errc::arity_mismatch,
                    "witness arity " + std::to_string(arity) + " is not 2 or 3");
    }
    AggregatorWitness w;
    w.arity = arity;
    w.kind = kind;
    w.sizes.reserve(static_cast<std::size_t>(dom.issue_count()));
    w.tables.reserve(static_cast<std::size_t>(dom.issue_count()));
    for (int j = 0; j < dom.issue_count(); ++j) {
        const auto s = static_cast<std::size_t>(dom.alphabet_size(j));
        w.sizes.push_back(static_cast<int>(s));
        w.tables.emplace_back(arity == 2 ? s * s : s * s * s, -1);
    }
    return w;
}

Row AggregatorWitness::image2(const Row& a, const Row& b) const {
    Row out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out[j] = value2(static_cast<int>(j), a[j], b[j]);
    }
    return out;
}

Row AggregatorWitness::image3(const Row& a, const Row& b, const Row& c) const {
    Row out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out[j] = value3(static_cast<int>(j), a[j], b[j], c[j]);
    }
    return out;
}

std::string Violation::describe(const Domain& dom) const {
    if (kind == Kind::conservativeness) {
        return "issue " + std::to_string(issue + 1) + ": f(" +
               token_list(dom, issue, args) + ") = " + dom.token(issue, value) +
               ", which is not among its arguments";
    }
    std::string rows;
    for (std::size_t i = 0; i < row_tuple.size(); ++i) {
        if (i > 0) rows += ", ";
        rows += std::to_string(row_tuple[i] + 1);
    }
    std::string img;
    for (std::size_t j = 0; j < image.size(); ++j) {
        if (j > 0) img += ", ";
        img += dom.token(static_cast<int>(j), image[j]);
    }
    return "rows (" + rows + ") map to (" + img + "), which is not a feasible evaluation";
}

VerifyResult verify_aggregator(const Domain& dom, const AggregatorWitness& w) {
    check_shape(dom, w);

    // Conservativeness: every table entry stays inside its argument set.
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                if (w.arity == 2) {
                    const int v = w.value2(j, x, y);
                    if (v != x && v != y) {
                        Violation viol;
                        viol.kind = Violation::Kind::conservativeness;
                        viol.issue = j;
                        viol.args = {x, y};
                        viol.value = v;
                        return {false, std::move(viol)};
                    }
                    continue;
                }
                for (int z = 0; z < s; ++z) {
                    const int v = w.value3(j, x, y, z);
                    if (v != x && v != y && v != z) {
                        Violation viol;
                        viol.kind = Violation::Kind::conservativeness;
                        viol.issue = j;
                        viol.args = {x, y, z};
                        viol.value = v;
                        return {false, std::move(viol)};
                    }
                }
            }
        }
    }

    // Closure: the image of every tuple of rows is itself a row.
    const int n = dom.row_count();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            if (w.arity == 2) {
                Row img = w.image2(dom.row(i), dom.row(k));
                if (!dom.contains(img)) {
                    Violation viol;
                    viol.kind = Violation::Kind::closure;
                    viol.row_tuple = {i, k};
                    viol.image = std::move(img);
                    return {false, std::move(viol)};
                }
                continue;
            }
            for (int l = 0; l < n; ++l) {
                Row img = w.image3(dom.row(i), dom.row(k), dom.row(l));
                if (!dom.contains(img)) {
                    Violation viol;
                    viol.kind = Violation::Kind::closure;
                    viol.row_tuple = {i, k, l};
                    viol.image = std::move(img);
                    return {false, std::move(viol)};
                }
            }
        }
    }
    return {true, std::nullopt};
}

std::optional<int> is_dictatorial(const Domain& dom, const AggregatorWitness& w) {
    check_shape(dom, w);
    std::array<bool, 3> alive = {true, true, w.arity == 3};
    int alive_count = w.arity;
    const int n = dom.row_count();
    for (int i = 0; i < n && alive_count > 0; ++i) {
        for (int k = 0; k < n && alive_count > 0; ++k) {
            if (w.arity == 2) {
                const Row img = w.image2(dom.row(i), dom.row(k));
                if (alive[0] && img != dom.row(i)) { alive[0] = false; --alive_count; }
                if (alive[1] && img != dom.row(k)) { alive[1] = false; --alive_count; }
                continue;
            }
            for (int l = 0; l < n && alive_count > 0; ++l) {
                const Row img = w.image3(dom.row(i), dom.row(k), dom.row(l));
                if (alive[0] && img != dom.row(i)) { alive[0] = false; --alive_count; }
                if (alive[1] && img != dom.row(k)) { alive[1] = false; --alive_count; }
                if (alive[2] && img != dom.row(l)) { alive[2] = false; --alive_count; }
            }
        }
    }
    for (int d = 0; d < w.arity; ++d) {
        if (alive[static_cast<std::size_t>(d)]) return d + 1;
    }
    return std::nullopt;
}

KindCheck check_kind(const Domain& dom, const AggregatorWitness& w, WitnessKind kind) {
    check_shape(dom, w);
    const int want_arity = kind == WitnessKind::binary ? 2 : 3;
    if (kind == WitnessKind::generic) {
        throw Error(Errc::wrong_kind, "generic carries no checkable obligation");
    }
    if (w.arity != want_arity) {
        throw Error(Errc::wrong_arity,
                    std::string(to_string(kind)) + " requires arity " +
                        std::to_string(want_arity) + ", witness has " +
                        std::to_string(w.arity));
    }

    if (kind == WitnessKind::binary) {
        if (auto d = is_dictatorial(dom, w)) {
            return {false, "dictatorial with dictator " + std::to_string(*d)};
        }
        return {true, {}};
    }

    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        if (kind == WitnessKind::wnu) {
            for (int x = 0; x < s; ++x) {
                for (int y = 0; y < s; ++y) {
                    if (x == y) continue;
                    const int v1 = w.value3(j, y, x, x);
                    const int v2 = w.value3(j, x, y, x);
                    const int v3 = w.value3(j, x, x, y);
                    if (v1 != v2 || v2 != v3) {
                        return {false,
                                "issue " + std::to_string(j + 1) + ": f(" +
                                    token_list(dom, j, {y, x, x}) + "), f(" +
                                    token_list(dom, j, {x, y, x}) + "), f(" +
                                    token_list(dom, j, {x, x, y}) + ") give " +
                                    token_list(dom, j, {v1, v2, v3})};
                    }
                }
            }
            continue;
        }
        // majority / minority constrain exactly the triples drawn from a
        // two-element subset; triples with three distinct values are free.
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                for (int z = 0; z < s; ++z) {
                    int expect;
                    if (kind == WitnessKind::majority) {
                        if (x == y || x == z) expect = x;
                        else if (y == z) expect = y;
                        else continue;
                    } else {
                        if (x == y) expect = z;
                        else if (x == z) expect = y;
                        else if (y == z) expect = x;
                        else continue;
                    }
                    const int got = w.value3(j, x, y, z);
                    if (got != expect) {
                        return {false, "issue " + std::to_string(j + 1) + ": f(" +
                                           token_list(dom, j, {x, y, z}) + ") = " +
                                           dom.token(j, got) + ", expected " +
                                           dom.token(j, expect)};
                    }
                }
            }
        }
    }
    return {true, {}};
}

AggregatorWitness projection_witness(const Domain& dom, int arity, int d) {
    if (d < 1 || d > arity) {
        throw Error(Errc::invalid_params,
                    "dictator " + std::to_string(d) + " out of range for arity " +
                        std::to_string(arity));
    }
    AggregatorWitness w = AggregatorWitness::blank(dom, arity, WitnessKind::generic);
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                if (arity == 2) {
                    w.slot2(j, x, y) = d == 1 ? x : y;
                    continue;
                }
                for (int z = 0; z < s; ++z) {
                    w.slot3(j, x, y, z) = d == 1 ? x : (d == 2 ? y : z);
                }
            }
        }
    }
    return w;
}

AggregatorWitness xor_witness(const Domain& dom) {
    if (!dom.boolean_framework()) {
        throw Error(Errc::not_boolean_framework,
                    "xor witness needs two values per issue");
    }
    AggregatorWitness w = AggregatorWitness::blank(dom, 3, WitnessKind::minority);
    for (int j = 0; j < dom.issue_count(); ++j) {
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                for (int z = 0; z < 2; ++z) {
                    w.slot3(j, x, y, z) = x ^ y ^ z;
                }
            }
        }
    }
    return w;
}

}  // namespace possdom
