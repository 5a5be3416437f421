#include "possdom/polysearch.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace possdom {

namespace {

int flat2(int s, int x, int y) { return x * s + y; }
int flat3(int s, int x, int y, int z) { return (x * s + y) * s + z; }

std::string token_args(const Domain& dom, int issue, const int* vals, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i > 0) out += ", ";
        out += dom.token(issue, vals[i]);
    }
    return out;
}

/// Refuses instances whose tables or single propagation pass would dwarf
/// the desk scale this exact engine is meant for.
void guard_search(const std::vector<int>& sizes, std::size_t row_count, int arity) {
    long long cells = 0;
    for (int s : sizes) {
        long long per = 1;
        for (int a = 0; a < arity; ++a) per *= s;
        cells += per;
        if (cells > 2'000'000) {
            throw Error(Errc::too_large,
                        "exact search would allocate more than 2000000 table cells");
        }
    }
    double work = static_cast<double>(row_count) * static_cast<double>(sizes.size());
    for (int a = 0; a < arity; ++a) work *= static_cast<double>(row_count);
    if (work > 4e9) {
        throw Error(Errc::too_large,
                    "exact search would scan more than 4e9 cell reads per "
                    "propagation pass");
    }
}

enum class Outcome { found, none, budget };

/// Backtracking over table cells. A cell is one argument tuple of one
/// issue; its candidates are the tuple's distinct values. Every ordered
/// row tuple is a constraint: the componentwise image must be a row, so a
/// candidate survives only while some row compatible with all of the
/// constraint's cells carries it. Branching takes the cell with the fewest
/// candidates (ties by issue, then table position) and tries values in
/// interned order; one branching assignment costs one node.
class TableSearch {
public:
    TableSearch(std::vector<int> sizes, const std::vector<Row>& rows, int arity)
        : sizes_(std::move(sizes)), rows_(rows), arity_(arity) {
        const auto m = sizes_.size();
        cell_off_.assign(m + 1, 0);
        for (std::size_t j = 0; j < m; ++j) {
            int per = 1;
            for (int a = 0; a < arity_; ++a) per *= sizes_[j];
            cell_off_[j + 1] = cell_off_[j] + per;
        }
        total_cells_ = cell_off_[m];
        cand_.assign(static_cast<std::size_t>(total_cells_), {});
        n_cand_.assign(static_cast<std::size_t>(total_cells_), 0);
        for (std::size_t j = 0; j < m; ++j) seed_cells(static_cast<int>(j));
        rows_by_value_.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            rows_by_value_[j].assign(static_cast<std::size_t>(sizes_[j]), {});
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                rows_by_value_[j][static_cast<std::size_t>(rows_[i][j])].push_back(
                    static_cast<int>(i));
            }
        }
        seen_stamp_.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            seen_stamp_[j].assign(static_cast<std::size_t>(sizes_[j]), 0);
        }
        in_queue_.assign(static_cast<std::size_t>(total_cells_), 0);
        ccell_.assign(m, 0);
    }

    /// Pins a cell before solving; the value must be one of its candidates.
    void force(int issue, int flat, int value) {
        const auto c = static_cast<std::size_t>(cell_off_[static_cast<std::size_t>(issue)] + flat);
        for (int i = 0; i < n_cand_[c]; ++i) {
            if (cand_[c][i] == value) {
                cand_[c][0] = value;
                n_cand_[c] = 1;
                return;
            }
        }
        throw std::logic_error("forced value is not a candidate of its cell");
    }

    Outcome solve(long long budget, long long& used) {
        used = 0;
        if (!initial_pass()) return Outcome::none;
        struct Frame {
            int cell = -1;
            std::array<int, 3> order{};
            int order_n = 0;
            int next = 0;
            std::size_t mark = 0;
        };
        auto open_frame = [&](int cell) {
            Frame f;
            f.cell = cell;
            const auto c = static_cast<std::size_t>(cell);
            f.order_n = n_cand_[c];
            for (int i = 0; i < f.order_n; ++i) f.order[static_cast<std::size_t>(i)] = cand_[c][i];
            std::sort(f.order.begin(), f.order.begin() + f.order_n);
            f.mark = trail_.size();
            return f;
        };
        std::vector<Frame> stack;
        {
            const int first = pick_cell();
            if (first < 0) return Outcome::found;
            stack.push_back(open_frame(first));
        }
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next == f.order_n) {
                stack.pop_back();
                if (!stack.empty()) undo_to(stack.back().mark);
                continue;
            }
            const int cell = f.cell;
            const int v = f.order[static_cast<std::size_t>(f.next++)];
            if (used == budget) return Outcome::budget;
            ++used;
            if (assign(cell, v)) {
                const int next_cell = pick_cell();
                if (next_cell < 0) return Outcome::found;
                stack.push_back(open_frame(next_cell));
            } else {
                undo_to(f.mark);
            }
        }
        return Outcome::none;
    }

    int value_at(int issue, int flat) const {
        const auto c = static_cast<std::size_t>(cell_off_[static_cast<std::size_t>(issue)] + flat);
        if (n_cand_[c] != 1) throw std::logic_error("reading an unassigned cell");
        return cand_[c][0];
    }

private:
    void seed_cells(int j) {
        const int s = sizes_[static_cast<std::size_t>(j)];
        const int base = cell_off_[static_cast<std::size_t>(j)];
        const int per = arity_ == 2 ? s * s : s * s * s;
        for (int flat = 0; flat < per; ++flat) {
            int vals[3];
            decode(j, flat, vals);
            auto& arr = cand_[static_cast<std::size_t>(base + flat)];
            int n = 0;
            for (int i = 0; i < arity_; ++i) {
                bool fresh = true;
                for (int k = 0; k < n; ++k) fresh = fresh && arr[static_cast<std::size_t>(k)] != vals[i];
                if (fresh) arr[static_cast<std::size_t>(n++)] = vals[i];
            }
            std::sort(arr.begin(), arr.begin() + n);
            n_cand_[static_cast<std::size_t>(base + flat)] = n;
        }
    }

    void decode(int j, int flat, int* vals) const {
        const int s = sizes_[static_cast<std::size_t>(j)];
        if (arity_ == 2) {
            vals[0] = flat / s;
            vals[1] = flat % s;
            return;
        }
        vals[2] = flat % s;
        vals[1] = (flat / s) % s;
        vals[0] = flat / (s * s);
    }

    bool alive(std::size_t c, int v) const {
        for (int i = 0; i < n_cand_[c]; ++i) {
            if (cand_[c][i] == v) return true;
        }
        return false;
    }

    void enqueue(int cell) {
        if (in_queue_[static_cast<std::size_t>(cell)]) return;
        in_queue_[static_cast<std::size_t>(cell)] = 1;
        queue_.push_back(cell);
    }

    bool remove_at(int cell, int idx) {
        auto& arr = cand_[static_cast<std::size_t>(cell)];
        auto& n = n_cand_[static_cast<std::size_t>(cell)];
        std::swap(arr[static_cast<std::size_t>(idx)], arr[static_cast<std::size_t>(n - 1)]);
        --n;
        trail_.push_back(cell);
        enqueue(cell);
        return n > 0;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            ++n_cand_[static_cast<std::size_t>(trail_.back())];
            trail_.pop_back();
        }
    }

    void clear_queue() {
        for (std::size_t k = qhead_; k < queue_.size(); ++k) {
            in_queue_[static_cast<std::size_t>(queue_[k])] = 0;
        }
        queue_.clear();
        qhead_ = 0;
    }

    /// Re-establishes support for one row-tuple constraint; false on a cell
    /// losing its last candidate or the constraint losing every row.
    bool recheck(const int* tuple) {
        const auto m = sizes_.size();
        for (std::size_t j = 0; j < m; ++j) {
            const int s = sizes_[j];
            int flat = rows_[static_cast<std::size_t>(tuple[0])][j];
            for (int a = 1; a < arity_; ++a) {
                flat = flat * s + rows_[static_cast<std::size_t>(tuple[a])][j];
            }
            ccell_[j] = cell_off_[j] + flat;
        }
        ++stamp_;
        bool any = false;
        for (const Row& r : rows_) {
            bool ok = true;
            for (std::size_t j = 0; j < m && ok; ++j) {
                ok = alive(static_cast<std::size_t>(ccell_[j]), r[j]);
            }
            if (!ok) continue;
            any = true;
            for (std::size_t j = 0; j < m; ++j) {
                seen_stamp_[j][static_cast<std::size_t>(r[j])] = stamp_;
            }
        }
        if (!any) return false;
        for (std::size_t j = 0; j < m; ++j) {
            const int c = ccell_[j];
            for (int idx = n_cand_[static_cast<std::size_t>(c)] - 1; idx >= 0; --idx) {
                const int v = cand_[static_cast<std::size_t>(c)][idx];
                if (seen_stamp_[j][static_cast<std::size_t>(v)] == stamp_) continue;
                if (!remove_at(c, idx)) return false;
            }
        }
        return true;
    }

    /// Processes queued cells until the fixpoint: every constraint touching
    /// a changed cell is rechecked, and rechecks may queue further cells.
    bool drain() {
        while (qhead_ < queue_.size()) {
            const int cell = queue_[qhead_++];
            in_queue_[static_cast<std::size_t>(cell)] = 0;
            const auto j = static_cast<std::size_t>(
                std::upper_bound(cell_off_.begin(), cell_off_.end(), cell) -
                cell_off_.begin() - 1);
            int vals[3] = {0, 0, 0};
            decode(static_cast<int>(j), cell - cell_off_[j], vals);
            int tuple[3];
            for (int i0 : rows_by_value_[j][static_cast<std::size_t>(vals[0])]) {
                tuple[0] = i0;
                for (int i1 : rows_by_value_[j][static_cast<std::size_t>(vals[1])]) {
                    tuple[1] = i1;
                    if (arity_ == 2) {
                        if (!recheck(tuple)) {
                            clear_queue();
                            return false;
                        }
                        continue;
                    }
                    for (int i2 : rows_by_value_[j][static_cast<std::size_t>(vals[2])]) {
                        tuple[2] = i2;
                        if (!recheck(tuple)) {
                            clear_queue();
                            return false;
                        }
                    }
                }
            }
        }
        queue_.clear();
        qhead_ = 0;
        return true;
    }

    bool initial_pass() {
        const int n = static_cast<int>(rows_.size());
        int tuple[3];
        for (int i0 = 0; i0 < n; ++i0) {
            tuple[0] = i0;
            for (int i1 = 0; i1 < n; ++i1) {
                tuple[1] = i1;
                if (arity_ == 2) {
                    if (!recheck(tuple)) {
                        clear_queue();
                        return false;
                    }
                    continue;
                }
                for (int i2 = 0; i2 < n; ++i2) {
                    tuple[2] = i2;
                    if (!recheck(tuple)) {
                        clear_queue();
                        return false;
                    }
                }
            }
        }
        return drain();
    }

    bool assign(int cell, int v) {
        const auto c = static_cast<std::size_t>(cell);
        for (int idx = n_cand_[c] - 1; idx >= 0; --idx) {
            if (cand_[c][idx] == v) continue;
            if (!remove_at(cell, idx)) return false;
        }
        return drain();
    }

    int pick_cell() const {
        int best = -1;
        int best_n = 4;
        for (int c = 0; c < total_cells_; ++c) {
            const int n = n_cand_[static_cast<std::size_t>(c)];
            if (n < 2 || n >= best_n) continue;
            best = c;
            best_n = n;
            if (best_n == 2) break;
        }
        return best;
    }

    std::vector<int> sizes_;
    const std::vector<Row>& rows_;
    int arity_;
    std::vector<int> cell_off_;
    int total_cells_ = 0;
    std::vector<std::array<int, 3>> cand_;
    std::vector<int> n_cand_;
    std::vector<std::vector<std::vector<int>>> rows_by_value_;
    std::vector<std::vector<long long>> seen_stamp_;
    long long stamp_ = 0;
    std::vector<int> trail_;
    std::vector<int> queue_;
    std::size_t qhead_ = 0;
    std::vector<char> in_queue_;
    std::vector<int> ccell_;
};

/// Shared body of the majority and minority searches: repeated-argument
/// entries are forced, pairwise-distinct triples branch.
std::optional<AggregatorWitness> find_forced_kind(const Domain& dom, WitnessKind kind,
                                                  long long budget, SearchStats* stats) {
    std::vector<int> sizes(static_cast<std::size_t>(dom.issue_count()));
    for (int j = 0; j < dom.issue_count(); ++j) {
        sizes[static_cast<std::size_t>(j)] = dom.alphabet_size(j);
    }
    guard_search(sizes, dom.rows().size(), 3);
    TableSearch ts(sizes, dom.rows(), 3);
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                if (x == y) continue;
                const int v = kind == WitnessKind::majority ? x : y;
                ts.force(j, flat3(s, y, x, x), v);
                ts.force(j, flat3(s, x, y, x), v);
                ts.force(j, flat3(s, x, x, y), v);
            }
        }
    }
    long long used = 0;
    const Outcome out = ts.solve(budget, used);
    if (stats) stats->nodes += used;
    if (out == Outcome::budget) {
        throw Error(Errc::budget_exhausted,
                    std::string(to_string(kind)) + " search ran past " +
                        std::to_string(budget) + " nodes");
    }
    if (out == Outcome::none) return std::nullopt;
    TernaryTable t = TernaryTable::blank(dom);
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int flat = 0; flat < s * s * s; ++flat) {
            t.tables[static_cast<std::size_t>(j)][static_cast<std::size_t>(flat)] =
                ts.value_at(j, flat);
        }
    }
    try {
        return polymorphism_to_aggregator(dom, t, kind);
    } catch (const Error&) {
        throw std::logic_error("table search returned a non-aggregator");
    }
}

void check_table_shape(const TernaryTable& t) {
    if (t.tables.size() != t.sizes.size()) {
        throw Error(Errc::invalid_params, "ternary table count does not match its sizes");
    }
    for (std::size_t j = 0; j < t.sizes.size(); ++j) {
        const auto s = static_cast<std::size_t>(t.sizes[j]);
        if (t.tables[j].size() != s * s * s) {
            throw Error(Errc::invalid_params,
                        "issue " + std::to_string(j + 1) + ": ternary table has " +
                            std::to_string(t.tables[j].size()) + " entries, expected " +
                            std::to_string(s * s * s),
                        static_cast<long>(j) + 1);
        }
    }
}

}  // namespace

int SortedRelation::sort_of(int element) const {
    if (element < 0 || element >= universe_size()) {
        throw Error(Errc::invalid_params,
                    "element " + std::to_string(element) + " is outside the universe");
    }
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), element);
    return static_cast<int>(it - offsets.begin()) - 1;
}

SortedRelation encode_disjoint_union(const Domain& dom) {
    SortedRelation sr;
    sr.offsets.assign(static_cast<std::size_t>(dom.issue_count()) + 1, 0);
    for (int j = 0; j < dom.issue_count(); ++j) {
        const auto js = static_cast<std::size_t>(j);
        sr.offsets[js + 1] = sr.offsets[js] + dom.alphabet_size(j);
    }
    sr.rows.reserve(dom.rows().size());
    for (const Row& r : dom.rows()) {
        Row tagged(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) tagged[j] = sr.offsets[j] + r[j];
        sr.rows.push_back(std::move(tagged));
    }
    return sr;
}

TernaryTable TernaryTable::blank(std::vector<int> sizes) {
    TernaryTable t;
    t.sizes = std::move(sizes);
    t.tables.resize(t.sizes.size());
    for (std::size_t j = 0; j < t.sizes.size(); ++j) {
        const auto s = static_cast<std::size_t>(t.sizes[j]);
        t.tables[j].assign(s * s * s, -1);
    }
    return t;
}

TernaryTable TernaryTable::blank(const Domain& dom) {
    std::vector<int> sizes(static_cast<std::size_t>(dom.issue_count()));
    for (int j = 0; j < dom.issue_count(); ++j) {
        sizes[static_cast<std::size_t>(j)] = dom.alphabet_size(j);
    }
    return blank(std::move(sizes));
}

AggregatorWitness polymorphism_to_aggregator(const Domain& dom, const TernaryTable& f,
                                             WitnessKind kind) {
    if (static_cast<int>(f.sizes.size()) != dom.issue_count() ||
        f.tables.size() != f.sizes.size()) {
        throw Error(Errc::alphabet_mismatch,
                    "table family has " + std::to_string(f.tables.size()) +
                        " tables over " + std::to_string(f.sizes.size()) +
                        " issues, domain has " + std::to_string(dom.issue_count()));
    }
    for (int j = 0; j < dom.issue_count(); ++j) {
        const auto js = static_cast<std::size_t>(j);
        const auto s = static_cast<std::size_t>(dom.alphabet_size(j));
        if (f.sizes[js] != dom.alphabet_size(j) || f.tables[js].size() != s * s * s) {
            throw Error(Errc::alphabet_mismatch,
                        "issue " + std::to_string(j + 1) + ": table keyed by " +
                            std::to_string(f.sizes[js]) + " values, domain has " +
                            std::to_string(dom.alphabet_size(j)),
                        j + 1);
        }
    }
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                for (int z = 0; z < s; ++z) {
                    const int v = f.value(j, x, y, z);
                    const int args[3] = {x, y, z};
                    if (v < 0) {
                        throw Error(Errc::invalid_params,
                                    "issue " + std::to_string(j + 1) + ": entry (" +
                                        token_args(dom, j, args, 3) + ") is unset",
                                    j + 1);
                    }
                    if (v != x && v != y && v != z) {
                        throw Error(Errc::not_conservative,
                                    "issue " + std::to_string(j + 1) + ": f(" +
                                        token_args(dom, j, args, 3) + ") = " +
                                        dom.token(j, v) +
                                        ", which is not among its arguments",
                                    j + 1);
                    }
                }
            }
        }
    }
    const auto& rows = dom.rows();
    const int n = dom.row_count();
    const int m = dom.issue_count();
    Row buf(static_cast<std::size_t>(m));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int j = 0; j < m; ++j) {
                    const auto js = static_cast<std::size_t>(j);
                    buf[js] = f.value(j, rows[static_cast<std::size_t>(a)][js],
                                      rows[static_cast<std::size_t>(b)][js],
                                      rows[static_cast<std::size_t>(c)][js]);
                }
                if (dom.contains(buf)) continue;
                std::string img;
                for (std::size_t j = 0; j < buf.size(); ++j) {
                    if (j > 0) img += ", ";
                    img += dom.token(static_cast<int>(j), buf[j]);
                }
                throw Error(Errc::not_polymorphism,
                            "rows (" + std::to_string(a + 1) + ", " +
                                std::to_string(b + 1) + ", " + std::to_string(c + 1) +
                                ") map to (" + img +
                                "), which is not a feasible evaluation");
            }
        }
    }
    AggregatorWitness w = AggregatorWitness::blank(dom, 3, kind);
    w.tables = f.tables;
    if (kind != WitnessKind::generic) {
        const KindCheck kc = check_kind(dom, w, kind);
        if (!kc.ok) throw Error(Errc::wrong_kind, kc.detail);
    }
    return w;
}

int SortedOperation::apply(const SortedRelation& sr, int a, int b, int c) const {
    const int ja = sr.sort_of(a);
    const int jb = sr.sort_of(b);
    const int jc = sr.sort_of(c);
    if (ja == jb && jb == jc) {
        const int off = sr.offsets[static_cast<std::size_t>(ja)];
        return off + local.value(ja, a - off, b - off, c - off);
    }
    if (cross_rule == WitnessKind::majority) {
        if (a == b || a == c) return a;
        if (b == c) return b;
        return a;
    }
    if (a == b) return c;
    if (a == c) return b;
    if (b == c) return a;
    return a;
}

SortedOperation aggregator_to_polymorphism(const Domain& dom, const AggregatorWitness& w) {
    if (w.kind != WitnessKind::majority && w.kind != WitnessKind::minority) {
        throw Error(Errc::wrong_kind,
                    "only majority and minority witnesses extend to the universe");
    }
    if (w.arity != 3) {
        throw Error(Errc::wrong_arity, "a " + std::string(to_string(w.kind)) +
                                           " witness must have arity 3, got " +
                                           std::to_string(w.arity));
    }
    if (static_cast<int>(w.sizes.size()) != dom.issue_count()) {
        throw Error(Errc::alphabet_mismatch,
                    "witness covers " + std::to_string(w.sizes.size()) +
                        " issues, domain has " + std::to_string(dom.issue_count()));
    }
    for (int j = 0; j < dom.issue_count(); ++j) {
        if (w.sizes[static_cast<std::size_t>(j)] != dom.alphabet_size(j)) {
            throw Error(Errc::alphabet_mismatch,
                        "issue " + std::to_string(j + 1) + ": witness alphabet size " +
                            std::to_string(w.sizes[static_cast<std::size_t>(j)]) +
                            " does not match the domain's " +
                            std::to_string(dom.alphabet_size(j)),
                        j + 1);
        }
    }
    SortedOperation op;
    op.local.sizes = w.sizes;
    op.local.tables = w.tables;
    op.cross_rule = w.kind;
    return op;
}

std::optional<AggregatorWitness> find_majority_aggregator(const Domain& dom,
                                                          long long budget,
                                                          SearchStats* stats) {
    return find_forced_kind(dom, WitnessKind::majority, budget, stats);
}

std::optional<AggregatorWitness> find_minority_aggregator(const Domain& dom,
                                                          long long budget,
                                                          SearchStats* stats) {
    return find_forced_kind(dom, WitnessKind::minority, budget, stats);
}

bool is_affine_boolean(const Domain& dom) {
    if (!dom.boolean_framework()) {
        throw Error(Errc::not_boolean_framework,
                    "the xor criterion needs two values per issue");
    }
    const auto& rows = dom.rows();
    const int n = dom.row_count();
    const auto m = static_cast<std::size_t>(dom.issue_count());
    Row buf(m);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (std::size_t j = 0; j < m; ++j) {
                    buf[j] = rows[static_cast<std::size_t>(a)][j] ^
                             rows[static_cast<std::size_t>(b)][j] ^
                             rows[static_cast<std::size_t>(c)][j];
                }
                if (!dom.contains(buf)) return false;
            }
        }
    }
    return true;
}

const char* to_string(PairBehavior behavior) noexcept {
    switch (behavior) {
        case PairBehavior::meet: return "meet";
        case PairBehavior::join: return "join";
        case PairBehavior::majority: return "majority";
        case PairBehavior::minority: return "minority";
    }
    return "?";
}

std::optional<PairPolymorphism> find_pair_polymorphism(const SortedRelation& sr, int sort,
                                                       std::array<int, 2> pair,
                                                       long long budget,
                                                       SearchStats* stats) {
    const int m = sr.issue_count();
    if (sort < 0 || sort >= m) {
        throw Error(Errc::invalid_params, "sort " + std::to_string(sort + 1) +
                                              " is outside the issue range",
                    sort + 1);
    }
    std::vector<int> sizes(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const auto js = static_cast<std::size_t>(j);
        sizes[js] = sr.offsets[js + 1] - sr.offsets[js];
    }
    const int lo = std::min(pair[0], pair[1]);
    const int hi = std::max(pair[0], pair[1]);
    if (lo < 0 || hi >= sizes[static_cast<std::size_t>(sort)] || lo == hi) {
        throw Error(Errc::invalid_params,
                    "pair must name two distinct values of issue " +
                        std::to_string(sort + 1),
                    sort + 1);
    }
    std::vector<Row> rows;
    rows.reserve(sr.rows.size());
    for (const Row& r : sr.rows) {
        Row u(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) u[j] = r[j] - sr.offsets[j];
        rows.push_back(std::move(u));
    }
    guard_search(sizes, rows.size(), 3);

    long long remaining = budget;
    auto run = [&](TableSearch& ts) {
        long long used = 0;
        const Outcome out = ts.solve(remaining, used);
        remaining -= used;
        if (stats) stats->nodes += used;
        if (out == Outcome::budget) {
            throw Error(Errc::budget_exhausted,
                        "pair search at issue " + std::to_string(sort + 1) +
                            " over values " + std::to_string(lo) + " and " +
                            std::to_string(hi) + " ran past " + std::to_string(budget) +
                            " nodes",
                        sort + 1);
        }
        return out == Outcome::found;
    };

    const int s = sizes[static_cast<std::size_t>(sort)];
    for (const PairBehavior behavior : {PairBehavior::meet, PairBehavior::join}) {
        TableSearch ts(sizes, rows, 2);
        const int c = behavior == PairBehavior::meet ? lo : hi;
        ts.force(sort, flat2(s, lo, hi), c);
        ts.force(sort, flat2(s, hi, lo), c);
        if (!run(ts)) continue;
        TernaryTable t = TernaryTable::blank(sizes);
        for (int j = 0; j < m; ++j) {
            const int sj = sizes[static_cast<std::size_t>(j)];
            auto g = [&](int x, int y) { return ts.value_at(j, flat2(sj, x, y)); };
            for (int x = 0; x < sj; ++x) {
                for (int y = 0; y < sj; ++y) {
                    for (int z = 0; z < sj; ++z) {
                        t.slot(j, x, y, z) = g(g(x, y), z);
                    }
                }
            }
        }
        return PairPolymorphism{behavior, std::move(t)};
    }
    for (const PairBehavior behavior : {PairBehavior::majority, PairBehavior::minority}) {
        TableSearch ts(sizes, rows, 3);
        for (const auto& [x, y] : {std::pair{lo, hi}, std::pair{hi, lo}}) {
            const int v = behavior == PairBehavior::majority ? x : y;
            ts.force(sort, flat3(s, y, x, x), v);
            ts.force(sort, flat3(s, x, y, x), v);
            ts.force(sort, flat3(s, x, x, y), v);
        }
        if (!run(ts)) continue;
        TernaryTable t = TernaryTable::blank(sizes);
        for (int j = 0; j < m; ++j) {
            const int sj = sizes[static_cast<std::size_t>(j)];
            for (int flat = 0; flat < sj * sj * sj; ++flat) {
                t.tables[static_cast<std::size_t>(j)][static_cast<std::size_t>(flat)] =
                    ts.value_at(j, flat);
            }
        }
        return PairPolymorphism{behavior, std::move(t)};
    }
    return std::nullopt;
}

TernaryTable diamond(const TernaryTable& f, const TernaryTable& g) {
    check_table_shape(f);
    check_table_shape(g);
    if (f.sizes != g.sizes) {
        throw Error(Errc::domain_mismatch, "diamond operands have different shapes");
    }
    TernaryTable out = TernaryTable::blank(f.sizes);
    for (std::size_t j = 0; j < f.sizes.size(); ++j) {
        const int s = f.sizes[j];
        const int issue = static_cast<int>(j);
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                for (int z = 0; z < s; ++z) {
                    const int a = g.value(issue, x, y, z);
                    const int b = g.value(issue, y, z, x);
                    const int c = g.value(issue, z, x, y);
                    if (a < 0 || b < 0 || c < 0) {
                        throw Error(Errc::invalid_params, "diamond needs total tables");
                    }
                    const int v = f.value(issue, a, b, c);
                    if (v < 0) {
                        throw Error(Errc::invalid_params, "diamond needs total tables");
                    }
                    out.slot(issue, x, y, z) = v;
                }
            }
        }
    }
    return out;
}

std::optional<AggregatorWitness> find_wnu_aggregator(const Domain& dom, long long budget,
                                                     SearchStats* stats) {
    const SortedRelation sr = encode_disjoint_union(dom);
    SearchStats scratch;
    SearchStats* acc = stats ? stats : &scratch;
    long long remaining = budget;
    std::vector<TernaryTable> parts;
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        for (int lo = 0; lo < s; ++lo) {
            for (int hi = lo + 1; hi < s; ++hi) {
                const long long before = acc->nodes;
                auto part = find_pair_polymorphism(sr, j, {lo, hi}, remaining, acc);
                remaining -= acc->nodes - before;
                if (!part) return std::nullopt;
                parts.push_back(std::move(part->table));
            }
        }
    }
    TernaryTable h = std::move(parts.back());
    for (auto it = std::next(parts.rbegin()); it != parts.rend(); ++it) {
        h = diamond(*it, h);
    }
    try {
        return polymorphism_to_aggregator(dom, h, WitnessKind::wnu);
    } catch (const Error&) {
        throw std::logic_error("the diamond fold lost the aggregator property");
    }
}

}  // namespace possdom
