#pragma once

#include <stdexcept>
#include <vector>

#include "possdom/domain.hpp"
#include "possdom/polysearch.hpp"
#include "possdom/witness.hpp"

namespace possdom {

/// Tri-state answer. unknown marks a question the configured budget or the
/// instance-size guards could not settle; it is never a polite no.
enum class Verdict { yes, no, unknown };

const char* to_string(Verdict v) noexcept;

/// A cross-consistency assertion between sub-verdicts failed. This signals
/// a bug in the library, not a property of the input.
class InconsistentVerdict : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct ClassifyStats {
    long long hx_vertices = 0;
    long long hx_edges = 0;
    long long scc_count = 0;
    long long search_nodes = 0;  // branching nodes across all table searches
};

struct Classification {
    bool boolean_framework = false;
    Verdict possibility = Verdict::unknown;
    Verdict uniform = Verdict::unknown;
    Verdict totally_blocked = Verdict::unknown;
    /// Verified witnesses in audit order: binary first (cheapest to check),
    /// then majority, minority and weak near-unanimity. Every witness the
    /// searches found is kept, not just the first.
    std::vector<AggregatorWitness> witnesses;
    ClassifyStats stats;
};

struct ClassifyOptions {
    long long budget = kDefaultSearchBudget;  // nodes per individual search
    /// Run the ternary searches even on a boolean framework instead of
    /// settling possibility by the affine-or-binary shortcut. The verdict
    /// must not change; the flag exists to test exactly that.
    bool force_general_path = false;
};

/// Decides whether dom is a possibility domain. On a boolean framework the
/// answer is the affine check or the graph-synthesized binary witness; in
/// general the binary, majority and minority searches all run and any hit
/// settles the verdict as yes. A search stopped by its budget or by the
/// size guards downgrades a would-be no to unknown. The blockage verdict
/// and the graph statistics come along for free.
Classification classify_possibility(const Domain& dom, const ClassifyOptions& opts = {});

/// Decides whether dom is a uniform possibility domain: yes exactly when
/// the weak near-unanimity search succeeds. Leaves the possibility and
/// blockage verdicts unknown; full_report merges.
Classification classify_uniform(const Domain& dom, const ClassifyOptions& opts = {});

/// Runs both classifications and merges them, settling what the implication
/// lattice settles (uniform possibility implies possibility; a blocked
/// non-affine boolean framework is impossible) and asserting that the
/// verdicts stayed mutually consistent.
Classification full_report(const Domain& dom, const ClassifyOptions& opts = {});

}  // namespace possdom
