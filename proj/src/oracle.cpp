#include "possdom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "possdom/hx.hpp"

namespace possdom {

namespace {

constexpr std::uint64_t kSaturated = std::uint64_t{1} << 63;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a >= kSaturated / b) return kSaturated;
    return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) out = sat_mul(out, base);
    return out;
}

/// One free choice: a value written to one or more table cells (the wnu
/// equality chain shares one choice across its three cells).
struct Slot {
    int issue = 0;
    int flats[3] = {0, 0, 0};
    int n_flats = 0;
    int choices[3] = {0, 0, 0};
    int n_choices = 0;
};

struct Enumeration {
    AggregatorWitness base;  // forced entries filled, free cells overwritten
    std::vector<Slot> slots;
};

int flat2(int s, int x, int y) { return x * s + y; }
int flat3(int s, int x, int y, int z) { return (x * s + y) * s + z; }

void write_slot(AggregatorWitness& w, const Slot& sl, int pos) {
    auto& table = w.tables[static_cast<std::size_t>(sl.issue)];
    for (int i = 0; i < sl.n_flats; ++i) {
        table[static_cast<std::size_t>(sl.flats[i])] = sl.choices[pos];
    }
}

/// Slots run issue by issue; within an issue binary pairs come in (x, y)
/// lexicographic order, wnu pair chains before the pairwise-distinct
/// triples. Choice lists follow argument order, so the first candidate of
/// every enumeration picks first arguments throughout.
Enumeration build_enumeration(const Domain& dom, WitnessKind kind) {
    const int arity = kind == WitnessKind::binary ? 2 : 3;
    Enumeration e{AggregatorWitness::blank(dom, arity, kind), {}};
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        if (kind == WitnessKind::binary) {
            for (int x = 0; x < s; ++x) e.base.slot2(j, x, x) = x;
            for (int x = 0; x < s; ++x) {
                for (int y = 0; y < s; ++y) {
                    if (x == y) continue;
                    Slot sl;
                    sl.issue = j;
                    sl.flats[0] = flat2(s, x, y);
                    sl.n_flats = 1;
                    sl.choices[0] = x;
                    sl.choices[1] = y;
                    sl.n_choices = 2;
                    e.slots.push_back(sl);
                }
            }
            continue;
        }
        for (int x = 0; x < s; ++x) e.base.slot3(j, x, x, x) = x;
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                if (x == y) continue;
                // The three cells seeing x twice and y once.
                const int f1 = flat3(s, y, x, x);
                const int f2 = flat3(s, x, y, x);
                const int f3 = flat3(s, x, x, y);
                if (kind == WitnessKind::majority) {
                    auto& table = e.base.tables[static_cast<std::size_t>(j)];
                    table[static_cast<std::size_t>(f1)] = x;
                    table[static_cast<std::size_t>(f2)] = x;
                    table[static_cast<std::size_t>(f3)] = x;
                } else if (kind == WitnessKind::minority) {
                    auto& table = e.base.tables[static_cast<std::size_t>(j)];
                    table[static_cast<std::size_t>(f1)] = y;
                    table[static_cast<std::size_t>(f2)] = y;
                    table[static_cast<std::size_t>(f3)] = y;
                } else {
                    Slot sl;
                    sl.issue = j;
                    sl.flats[0] = f1;
                    sl.flats[1] = f2;
                    sl.flats[2] = f3;
                    sl.n_flats = 3;
                    sl.choices[0] = x;
                    sl.choices[1] = y;
                    sl.n_choices = 2;
                    e.slots.push_back(sl);
                }
            }
        }
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                for (int z = 0; z < s; ++z) {
                    if (x == y || x == z || y == z) continue;
                    Slot sl;
                    sl.issue = j;
                    sl.flats[0] = flat3(s, x, y, z);
                    sl.n_flats = 1;
                    sl.choices[0] = x;
                    sl.choices[1] = y;
                    sl.choices[2] = z;
                    sl.n_choices = 3;
                    e.slots.push_back(sl);
                }
            }
        }
    }
    return e;
}

[[noreturn]] void refuse(const Domain& dom, WitnessKind kind) {
    const std::uint64_t space = oracle_space(dom, kind);
    throw Error(Errc::too_large,
                "oracle space for " + std::string(to_string(kind)) + " has " +
                    (space >= kSaturated ? std::string("more than 2^63")
                                         : std::to_string(space)) +
                    " candidates, budget is " + std::to_string(kOracleSpaceLimit));
}

/// The per-issue table sizes must stay sane before we even build slots.
void guard_tables(const Domain& dom, WitnessKind kind) {
    std::uint64_t cells = 0;
    for (int j = 0; j < dom.issue_count(); ++j) {
        const auto s = static_cast<std::uint64_t>(dom.alphabet_size(j));
        cells += kind == WitnessKind::binary ? s * s : s * s * s;
        if (cells > 10'000'000) refuse(dom, kind);
    }
}

bool closed(const Domain& dom, const AggregatorWitness& w, Row& buf) {
    const auto& rows = dom.rows();
    const int n = dom.row_count();
    const int m = dom.issue_count();
    for (int i = 0; i < n; ++i) {
        const Row& a = rows[static_cast<std::size_t>(i)];
        for (int k = 0; k < n; ++k) {
            const Row& b = rows[static_cast<std::size_t>(k)];
            if (w.arity == 2) {
                for (int j = 0; j < m; ++j) {
                    buf[static_cast<std::size_t>(j)] =
                        w.value2(j, a[static_cast<std::size_t>(j)],
                                 b[static_cast<std::size_t>(j)]);
                }
                if (!dom.contains(buf)) return false;
                continue;
            }
            for (int l = 0; l < n; ++l) {
                const Row& c = rows[static_cast<std::size_t>(l)];
                for (int j = 0; j < m; ++j) {
                    buf[static_cast<std::size_t>(j)] =
                        w.value3(j, a[static_cast<std::size_t>(j)],
                                 b[static_cast<std::size_t>(j)],
                                 c[static_cast<std::size_t>(j)]);
                }
                if (!dom.contains(buf)) return false;
            }
        }
    }
    return true;
}

/// Runs `candidate` on every assignment until it returns false or the space
/// wraps; returns true when the whole space was covered.
template <class Fn>
bool enumerate(Enumeration& e, Fn&& candidate) {
    std::vector<int> pos(e.slots.size(), 0);
    for (const Slot& sl : e.slots) write_slot(e.base, sl, 0);
    for (;;) {
        if (!candidate(e.base)) return false;
        std::size_t i = e.slots.size();
        while (i > 0) {
            --i;
            if (++pos[i] < e.slots[i].n_choices) {
                write_slot(e.base, e.slots[i], pos[i]);
                break;
            }
            pos[i] = 0;
            write_slot(e.base, e.slots[i], 0);
            if (i == 0) return true;
        }
        if (e.slots.empty()) return true;
    }
}

/// First closure-passing candidate within the budget. A positive answer is
/// exact at any space size; "none" needs full coverage, so oversized spaces
/// refuse instead once the budget runs out.
std::optional<AggregatorWitness> first_closed(const Domain& dom, WitnessKind kind,
                                              std::uint64_t budget) {
    guard_tables(dom, kind);
    Enumeration e = build_enumeration(dom, kind);
    std::optional<AggregatorWitness> found;
    Row buf(static_cast<std::size_t>(dom.issue_count()));
    std::uint64_t visited = 0;
    const bool covered = enumerate(e, [&](const AggregatorWitness& w) {
        if (++visited > budget) return false;
        if (!closed(dom, w, buf)) return true;
        found = w;
        return false;
    });
    if (!found && !covered) refuse(dom, kind);
    return found;
}

std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t rem = (max % n + 1) % n;
    for (;;) {
        const std::uint64_t x = rng();
        if (rem == 0 || x <= max - rem) return x % n;
    }
}

std::uint64_t capacity(const std::vector<int>& sizes) {
    std::uint64_t cap = 1;
    for (int s : sizes) cap = sat_mul(cap, static_cast<std::uint64_t>(s));
    return cap;
}

Domain to_domain(const std::vector<Row>& int_rows) {
    std::vector<std::vector<Token>> raw;
    raw.reserve(int_rows.size());
    for (const Row& r : int_rows) {
        std::vector<Token> toks;
        toks.reserve(r.size());
        for (int v : r) toks.push_back(std::to_string(v));
        raw.push_back(std::move(toks));
    }
    return validate_domain(raw);
}

/// One attempt at target-many distinct uniform rows with non-degenerate
/// columns; nullopt when the draw budget or a degenerate column spoils it.
std::optional<std::vector<Row>> draw_rows(std::mt19937_64& rng,
                                          const std::vector<int>& sizes, int target) {
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(target));
    std::set<Row> seen;
    const long budget = 200L * target + 1000;
    for (long it = 0; it < budget && static_cast<int>(rows.size()) < target; ++it) {
        Row r(sizes.size());
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            r[j] = static_cast<int>(
                rand_below(rng, static_cast<std::uint64_t>(sizes[j])));
        }
        if (seen.insert(r).second) rows.push_back(std::move(r));
    }
    if (static_cast<int>(rows.size()) < target) return std::nullopt;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        const int first = rows.front()[j];
        bool varied = false;
        for (const Row& r : rows) {
            if (r[j] != first) {
                varied = true;
                break;
            }
        }
        if (!varied) return std::nullopt;
    }
    return rows;
}

std::optional<std::vector<Row>> draw_affine(std::mt19937_64& rng, int m, int dim) {
    std::vector<Row> basis;
    std::vector<Row> reduced;  // echelon copies, one pivot each
    for (long draws = 0; draws < 2000 && static_cast<int>(basis.size()) < dim;
         ++draws) {
        Row v(static_cast<std::size_t>(m));
        for (auto& c : v) c = static_cast<int>(rand_below(rng, 2));
        Row red = v;
        for (const Row& r : reduced) {
            std::size_t pivot = 0;
            while (r[pivot] == 0) ++pivot;
            if (red[pivot]) {
                for (std::size_t j = 0; j < red.size(); ++j) red[j] ^= r[j];
            }
        }
        if (std::all_of(red.begin(), red.end(), [](int c) { return c == 0; })) {
            continue;
        }
        basis.push_back(std::move(v));
        reduced.push_back(std::move(red));
    }
    if (static_cast<int>(basis.size()) < dim) return std::nullopt;
    for (int j = 0; j < m; ++j) {
        bool varied = false;
        for (const Row& b : basis) varied = varied || b[static_cast<std::size_t>(j)];
        if (!varied) return std::nullopt;
    }
    std::vector<Row> rows;
    rows.reserve(std::size_t{1} << dim);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim); ++mask) {
        Row r(static_cast<std::size_t>(m), 0);
        for (int b = 0; b < dim; ++b) {
            if (!(mask >> b & 1)) continue;
            for (std::size_t j = 0; j < r.size(); ++j) {
                r[j] ^= basis[static_cast<std::size_t>(b)][j];
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

std::uint64_t oracle_space(const Domain& dom, WitnessKind kind) {
    std::uint64_t space = 1;
    for (int j = 0; j < dom.issue_count(); ++j) {
        const auto s = static_cast<std::uint64_t>(dom.alphabet_size(j));
        const std::uint64_t pairs = s * (s - 1);
        const std::uint64_t triples = s * (s - 1) * (s - 2);
        switch (kind) {
            case WitnessKind::binary:
                space = sat_mul(space, sat_pow(2, pairs));
                break;
            case WitnessKind::majority:
            case WitnessKind::minority:
                space = sat_mul(space, sat_pow(3, triples));
                break;
            case WitnessKind::wnu:
                space = sat_mul(space, sat_pow(2, pairs));
                space = sat_mul(space, sat_pow(3, triples));
                break;
            case WitnessKind::generic:
                throw Error(Errc::invalid_params, "no oracle for generic witnesses");
        }
    }
    return space;
}

void for_each_binary_aggregator(
    const Domain& dom, const std::function<bool(const AggregatorWitness&)>& visit) {
    if (oracle_space(dom, WitnessKind::binary) > kOracleSpaceLimit) {
        refuse(dom, WitnessKind::binary);
    }
    Enumeration e = build_enumeration(dom, WitnessKind::binary);
    Row buf(static_cast<std::size_t>(dom.issue_count()));
    enumerate(e, [&](const AggregatorWitness& w) {
        if (!closed(dom, w, buf)) return true;
        return visit(w);
    });
}

std::optional<AggregatorWitness> oracle_binary_nondictatorial(const Domain& dom,
                                                              std::uint64_t budget) {
    guard_tables(dom, WitnessKind::binary);
    Enumeration e = build_enumeration(dom, WitnessKind::binary);
    std::optional<AggregatorWitness> found;
    Row buf(static_cast<std::size_t>(dom.issue_count()));
    std::uint64_t visited = 0;
    const bool covered = enumerate(e, [&](const AggregatorWitness& w) {
        if (++visited > budget) return false;
        if (!closed(dom, w, buf)) return true;
        if (is_dictatorial(dom, w)) return true;
        found = w;
        return false;
    });
    if (!found && !covered) refuse(dom, WitnessKind::binary);
    return found;
}

std::optional<AggregatorWitness> oracle_majority(const Domain& dom,
                                                 std::uint64_t budget) {
    return first_closed(dom, WitnessKind::majority, budget);
}

std::optional<AggregatorWitness> oracle_minority(const Domain& dom,
                                                 std::uint64_t budget) {
    return first_closed(dom, WitnessKind::minority, budget);
}

std::optional<AggregatorWitness> oracle_wnu(const Domain& dom, std::uint64_t budget) {
    return first_closed(dom, WitnessKind::wnu, budget);
}

Domain generate(const GenParams& params) {
    if (params.m < 1) throw Error(Errc::invalid_params, "m must be at least 1");
    if (static_cast<int>(params.sizes.size()) != params.m) {
        throw Error(Errc::invalid_params, "sizes must list one alphabet per issue");
    }
    for (int s : params.sizes) {
        if (s < 2) throw Error(Errc::invalid_params, "alphabet sizes must be at least 2");
    }
    if (params.target_rows < 2) {
        throw Error(Errc::invalid_params, "target_rows must be at least 2");
    }
    if (static_cast<std::uint64_t>(params.target_rows) > capacity(params.sizes)) {
        throw Error(Errc::invalid_params, "target_rows exceeds the product capacity");
    }
    if (params.max_attempts < 1) {
        throw Error(Errc::invalid_params, "max_attempts must be positive");
    }
    if (params.structure == GenStructure::product && params.m < 2) {
        throw Error(Errc::invalid_params, "product needs at least two issues");
    }
    if (params.structure == GenStructure::affine_subspace) {
        for (int s : params.sizes) {
            if (s != 2) {
                throw Error(Errc::invalid_params,
                            "affine subspace needs a boolean frame");
            }
        }
    }

    std::mt19937_64 rng(params.seed);
    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        switch (params.structure) {
            case GenStructure::uniform_random: {
                auto rows = draw_rows(rng, params.sizes, params.target_rows);
                if (rows) return to_domain(*rows);
                break;
            }
            case GenStructure::product: {
                const auto mid = static_cast<std::size_t>(params.m / 2);
                std::vector<int> left(params.sizes.begin(),
                                      params.sizes.begin() + static_cast<long>(mid));
                std::vector<int> right(params.sizes.begin() + static_cast<long>(mid),
                                       params.sizes.end());
                int y_target = std::max(
                    2, static_cast<int>(std::llround(
                           std::sqrt(static_cast<double>(params.target_rows)))));
                y_target = static_cast<int>(std::min<std::uint64_t>(
                    static_cast<std::uint64_t>(y_target), capacity(left)));
                int z_target =
                    std::max(2, (params.target_rows + y_target - 1) / y_target);
                z_target = static_cast<int>(std::min<std::uint64_t>(
                    static_cast<std::uint64_t>(z_target), capacity(right)));
                auto ys = draw_rows(rng, left, y_target);
                if (!ys) break;
                auto zs = draw_rows(rng, right, z_target);
                if (!zs) break;
                std::vector<Row> rows;
                rows.reserve(ys->size() * zs->size());
                for (const Row& y : *ys) {
                    for (const Row& z : *zs) {
                        Row r = y;
                        r.insert(r.end(), z.begin(), z.end());
                        rows.push_back(std::move(r));
                    }
                }
                return to_domain(rows);
            }
            case GenStructure::affine_subspace: {
                const int dim = std::clamp(
                    static_cast<int>(std::llround(
                        std::log2(static_cast<double>(params.target_rows)))),
                    1, params.m);
                auto rows = draw_affine(rng, params.m, dim);
                if (rows) return to_domain(*rows);
                break;
            }
            case GenStructure::blocked_seeking: {
                auto rows = draw_rows(rng, params.sizes, params.target_rows);
                if (!rows) break;
                Domain dom = to_domain(*rows);
                if (is_totally_blocked(dom)) return dom;
                break;
            }
        }
    }
    throw Error(Errc::generation_failed,
                "no instance found after " + std::to_string(params.max_attempts) +
                    " attempts");
}

}  // namespace possdom
