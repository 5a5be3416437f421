#include "possdom/hx.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace possdom {

namespace {

void check_vertex(const Domain& dom, const HxVertex& v) {
    if (v.issue < 0 || v.issue >= dom.issue_count()) {
        throw Error(Errc::invalid_params,
                    "vertex issue " + std::to_string(v.issue + 1) + " out of range");
    }
    const int s = dom.alphabet_size(v.issue);
    if (v.u < 0 || v.u >= s || v.u_prime < 0 || v.u_prime >= s || v.u == v.u_prime) {
        throw Error(Errc::invalid_params,
                    "vertex pair (" + std::to_string(v.u) + ", " +
                        std::to_string(v.u_prime) + ") invalid for issue " +
                        std::to_string(v.issue + 1));
    }
}

/// A row y blocks (z, z') at (k, l) when y_k = z_k, y_l = z'_l, and y agrees
/// with z or z' on every issue.
bool blocked(const Domain& dom, int k, int l, const Row& z, const Row& zp) {
    const auto uk = static_cast<std::size_t>(k);
    const auto ul = static_cast<std::size_t>(l);
    for (const Row& y : dom.rows()) {
        if (y[uk] != z[uk] || y[ul] != zp[ul]) continue;
        bool inside = true;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] != z[i] && y[i] != zp[i]) {
                inside = false;
                break;
            }
        }
        if (inside) return true;
    }
    return false;
}

}  // namespace

int HxGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& out : adj) total += out.size();
    return static_cast<int>(total);
}

int HxGraph::vertex_index(const HxVertex& v) const {
    const auto j = static_cast<std::size_t>(v.issue);
    const int s = sizes_[j];
    return offsets_[j] + v.u * (s - 1) + (v.u_prime < v.u ? v.u_prime : v.u_prime - 1);
}

std::vector<std::pair<int, int>> HxGraph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (int src = 0; src < vertex_count(); ++src) {
        for (int dst : adj[static_cast<std::size_t>(src)]) out.emplace_back(src, dst);
    }
    return out;
}

bool has_edge(const Domain& dom, const HxVertex& a, const HxVertex& b) {
    check_vertex(dom, a);
    check_vertex(dom, b);
    if (a.issue == b.issue) {
        throw Error(Errc::same_issue,
                    "both vertices lie on issue " + std::to_string(a.issue + 1),
                    a.issue + 1);
    }
    const auto k = static_cast<std::size_t>(a.issue);
    const auto l = static_cast<std::size_t>(b.issue);
    for (const Row& z : dom.rows()) {
        if (z[k] != a.u || z[l] != b.u) continue;
        for (const Row& zp : dom.rows()) {
            if (zp[k] != a.u_prime || zp[l] != b.u_prime) continue;
            if (!blocked(dom, a.issue, b.issue, z, zp)) return true;
        }
    }
    return false;
}

HxGraph build_hx(const Domain& dom) {
    HxGraph g;
    const int m = dom.issue_count();
    g.offsets_.resize(static_cast<std::size_t>(m));
    g.sizes_.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        g.offsets_[static_cast<std::size_t>(j)] = g.vertex_count();
        const int s = dom.alphabet_size(j);
        g.sizes_[static_cast<std::size_t>(j)] = s;
        for (int u = 0; u < s; ++u) {
            for (int up = 0; up < s; ++up) {
                if (u != up) g.vertices.push_back({j, u, up});
            }
        }
    }
    const int V = g.vertex_count();
    std::vector<std::unordered_set<int>> present(static_cast<std::size_t>(V));

    // One pass over ordered row pairs; each pair (z, z') proposes the edge
    // (k,(z_k,z'_k)) -> (l,(z_l,z'_l)) for every k != l where both differ,
    // and one scan for rows inside the pair's box settles all blockers.
    const auto& rows = dom.rows();
    const int n = dom.row_count();
    std::vector<int> diff;
    diff.reserve(static_cast<std::size_t>(m));
    std::vector<int> vidx(static_cast<std::size_t>(m), 0);
    std::vector<char> blocked_pair(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);

    for (int zi = 0; zi < n; ++zi) {
        for (int ki = 0; ki < n; ++ki) {
            if (zi == ki) continue;
            const Row& z = rows[static_cast<std::size_t>(zi)];
            const Row& zp = rows[static_cast<std::size_t>(ki)];
            diff.clear();
            for (int i = 0; i < m; ++i) {
                if (z[static_cast<std::size_t>(i)] != zp[static_cast<std::size_t>(i)]) {
                    diff.push_back(i);
                }
            }
            if (diff.size() < 2) continue;
            for (int i : diff) {
                vidx[static_cast<std::size_t>(i)] = g.vertex_index(
                    {i, z[static_cast<std::size_t>(i)], zp[static_cast<std::size_t>(i)]});
            }
            bool all_present = true;
            for (std::size_t a = 0; a < diff.size() && all_present; ++a) {
                for (std::size_t b = 0; b < diff.size(); ++b) {
                    if (a == b) continue;
                    const auto& out = present[static_cast<std::size_t>(
                        vidx[static_cast<std::size_t>(diff[a])])];
                    if (!out.contains(vidx[static_cast<std::size_t>(diff[b])])) {
                        all_present = false;
                        break;
                    }
                }
            }
            if (all_present) continue;

            for (int k : diff) {
                for (int l : diff) {
                    blocked_pair[static_cast<std::size_t>(k * m + l)] = 0;
                }
            }
            for (const Row& y : rows) {
                bool inside = true;
                for (std::size_t i = 0; i < y.size(); ++i) {
                    if (y[i] != z[i] && y[i] != zp[i]) {
                        inside = false;
                        break;
                    }
                }
                if (!inside) continue;
                // y blocks (k, l) exactly when it sides with z at k and
                // with z' at l.
                for (int k : diff) {
                    if (y[static_cast<std::size_t>(k)] != z[static_cast<std::size_t>(k)]) {
                        continue;
                    }
                    for (int l : diff) {
                        if (y[static_cast<std::size_t>(l)] ==
                            zp[static_cast<std::size_t>(l)]) {
                            blocked_pair[static_cast<std::size_t>(k * m + l)] = 1;
                        }
                    }
                }
            }
            for (int k : diff) {
                for (int l : diff) {
                    if (k == l) continue;
                    if (!blocked_pair[static_cast<std::size_t>(k * m + l)]) {
                        present[static_cast<std::size_t>(vidx[static_cast<std::size_t>(k)])]
                            .insert(vidx[static_cast<std::size_t>(l)]);
                    }
                }
            }
        }
    }

    g.adj.assign(static_cast<std::size_t>(V), {});
    for (int v = 0; v < V; ++v) {
        auto& out = g.adj[static_cast<std::size_t>(v)];
        out.assign(present[static_cast<std::size_t>(v)].begin(),
                   present[static_cast<std::size_t>(v)].end());
        std::sort(out.begin(), out.end());
    }
    return g;
}

SccResult strongly_connected_components(const HxGraph& g) {
    const int V = g.vertex_count();
    SccResult res;
    res.component.assign(static_cast<std::size_t>(V), -1);
    std::vector<int> index(static_cast<std::size_t>(V), -1);
    std::vector<int> low(static_cast<std::size_t>(V), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(V), 0);
    std::vector<int> stack;
    std::vector<std::pair<int, int>> frames;  // vertex, next child position
    int next_index = 0;

    for (int start = 0; start < V; ++start) {
        if (index[static_cast<std::size_t>(start)] != -1) continue;
        frames.emplace_back(start, 0);
        while (!frames.empty()) {
            const int v = frames.back().first;
            const auto uv = static_cast<std::size_t>(v);
            if (frames.back().second == 0) {
                index[uv] = low[uv] = next_index++;
                stack.push_back(v);
                on_stack[uv] = 1;
            }
            const auto& out = g.adj[uv];
            if (frames.back().second < static_cast<int>(out.size())) {
                const int w = out[static_cast<std::size_t>(frames.back().second)];
                ++frames.back().second;
                const auto uw = static_cast<std::size_t>(w);
                if (index[uw] == -1) {
                    frames.emplace_back(w, 0);
                } else if (on_stack[uw]) {
                    low[uv] = std::min(low[uv], index[uw]);
                }
                continue;
            }
            if (low[uv] == index[uv]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    res.component[static_cast<std::size_t>(w)] = res.count;
                    if (w == v) break;
                }
                ++res.count;
            }
            frames.pop_back();
            if (!frames.empty()) {
                const auto up = static_cast<std::size_t>(frames.back().first);
                low[up] = std::min(low[up], low[uv]);
            }
        }
    }

    // Tarjan finishes components sinks first; flip so the ids run in
    // topological order (component[src] <= component[dst] along edges).
    for (int& c : res.component) c = res.count - 1 - c;
    return res;
}

HxAnalysis analyze_hx(const Domain& dom) {
    HxAnalysis out{build_hx(dom), {}, std::nullopt};
    out.scc = strongly_connected_components(out.graph);
    if (out.scc.count <= 1) return out;

    const HxGraph& g = out.graph;
    const int V = g.vertex_count();

    // First pair (a, b) in vertex order with no path a ->> b; a stays in V1,
    // V2 collects everything with a path to b.
    int target = -1;
    std::vector<char> seen(static_cast<std::size_t>(V), 0);
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(V));
    for (int a = 0; a < V && target < 0; ++a) {
        std::fill(seen.begin(), seen.end(), 0);
        queue.clear();
        queue.push_back(a);
        seen[static_cast<std::size_t>(a)] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (int w : g.adj[static_cast<std::size_t>(queue[head])]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    queue.push_back(w);
                }
            }
        }
        for (int b = 0; b < V; ++b) {
            if (!seen[static_cast<std::size_t>(b)]) {
                target = b;
                break;
            }
        }
    }
    if (target < 0) {
        throw std::logic_error("hx: several components yet every vertex reaches all");
    }

    std::vector<std::vector<int>> radj(static_cast<std::size_t>(V));
    for (int src = 0; src < V; ++src) {
        for (int dst : g.adj[static_cast<std::size_t>(src)]) {
            radj[static_cast<std::size_t>(dst)].push_back(src);
        }
    }
    std::vector<char> in_v2(static_cast<std::size_t>(V), 0);
    queue.clear();
    queue.push_back(target);
    in_v2[static_cast<std::size_t>(target)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (int w : radj[static_cast<std::size_t>(queue[head])]) {
            if (!in_v2[static_cast<std::size_t>(w)]) {
                in_v2[static_cast<std::size_t>(w)] = 1;
                queue.push_back(w);
            }
        }
    }

    // V2 is ancestor-closed, so no edge may leave V1 into it.
    for (int src = 0; src < V; ++src) {
        if (in_v2[static_cast<std::size_t>(src)]) continue;
        for (int dst : g.adj[static_cast<std::size_t>(src)]) {
            if (in_v2[static_cast<std::size_t>(dst)]) {
                throw std::logic_error("hx: partition admits a forward edge");
            }
        }
    }

    AggregatorWitness w = AggregatorWitness::blank(dom, 2, WitnessKind::binary);
    for (int j = 0; j < dom.issue_count(); ++j) {
        for (int x = 0; x < dom.alphabet_size(j); ++x) w.slot2(j, x, x) = x;
    }
    for (int vi = 0; vi < V; ++vi) {
        const HxVertex& v = g.vertices[static_cast<std::size_t>(vi)];
        w.slot2(v.issue, v.u, v.u_prime) =
            in_v2[static_cast<std::size_t>(vi)] ? v.u_prime : v.u;
    }

    auto res = verify_aggregator(dom, w);
    if (!res.ok) {
        throw std::logic_error("hx: synthesized witness fails verification: " +
                               res.violation->describe(dom));
    }
    if (is_dictatorial(dom, w)) {
        throw std::logic_error("hx: synthesized witness is dictatorial");
    }
    out.witness = std::move(w);
    return out;
}

std::optional<AggregatorWitness> find_binary_nondictatorial(const Domain& dom) {
    return analyze_hx(dom).witness;
}

bool is_totally_blocked(const Domain& dom) {
    return !find_binary_nondictatorial(dom).has_value();
}

}  // namespace possdom
