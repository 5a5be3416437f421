#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "possdom/domain.hpp"
#include "possdom/witness.hpp"

namespace possdom {

/// Ordered pair (u, u_prime) of distinct value ids of one issue. Order
/// matters: (u, u_prime) and (u_prime, u) are different vertices, because
/// the edge relation and the partition construction read the two slots
/// asymmetrically.
struct HxVertex {
    int issue = 0;
    int u = 0;
    int u_prime = 0;

    bool operator==(const HxVertex&) const = default;
};

/// The implication graph over value pairs. Vertices are grouped by issue
/// and ordered lexicographically by (u, u_prime) within each issue; edges
/// always connect vertices of distinct issues.
struct HxGraph {
    std::vector<HxVertex> vertices;
    std::vector<std::vector<int>> adj;  // out-neighbors, ascending per vertex

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const;

    /// Index in the deterministic vertex order.
    int vertex_index(const HxVertex& v) const;

    /// All edges as (source, target) index pairs, ascending.
    std::vector<std::pair<int, int>> edge_list() const;

private:
    friend HxGraph build_hx(const Domain& dom);
    std::vector<int> offsets_;  // first vertex index per issue
    std::vector<int> sizes_;    // alphabet size per issue
};

/// Literal reading of the edge definition: true iff some ordered pair of
/// rows (z, z') extends ((u at k, v at l), (u' at k, v' at l)) and no row y
/// with y_k = u, y_l = v' agrees with z or z' on every issue. Throws
/// SameIssue when both vertices live on one issue.
bool has_edge(const Domain& dom, const HxVertex& a, const HxVertex& b);

/// Builds the full graph; agrees with has_edge pointwise but enumerates row
/// pairs once, reusing the blocker scan across all vertex pairs the row
/// pair can serve.
HxGraph build_hx(const Domain& dom);

struct SccResult {
    /// Component id per vertex; ids are a topological order of the
    /// condensation, so component[src] <= component[dst] for every edge.
    std::vector<int> component;
    int count = 0;
};

SccResult strongly_connected_components(const HxGraph& g);

/// Graph, its components, and the synthesized witness when one exists.
struct HxAnalysis {
    HxGraph graph;
    SccResult scc;
    std::optional<AggregatorWitness> witness;
};

/// Runs the whole pipeline: build, decompose, and if the graph is not
/// strongly connected, synthesize a verified binary non-dictatorial
/// aggregator from the first (in vertex order) unreachable pair: V2 is the
/// ancestor set of the target, f_j(z_j, z'_j) picks z_j on V1 and z'_j on
/// V2, diagonals are forced.
HxAnalysis analyze_hx(const Domain& dom);

/// The witness from analyze_hx, none iff H_X is strongly connected.
std::optional<AggregatorWitness> find_binary_nondictatorial(const Domain& dom);

/// True iff H_X is strongly connected.
bool is_totally_blocked(const Domain& dom);

}  // namespace possdom
