#include "possdom/classify.hpp"

#include <algorithm>
#include <utility>

#include "possdom/hx.hpp"

namespace possdom {

namespace {

/// Re-verifies a witness from scratch before it enters a report. The
/// searches are supposed to emit only sound witnesses, so any failure here
/// is a bug worth a loud stop.
void attach(const Domain& dom, Classification& out, AggregatorWitness w) {
    const VerifyResult res = verify_aggregator(dom, w);
    if (!res.ok) {
        throw InconsistentVerdict("a reported witness fails verification: " +
                                  res.violation->describe(dom));
    }
    if (auto d = is_dictatorial(dom, w)) {
        throw InconsistentVerdict("a reported witness is dictatorial with dictator " +
                                  std::to_string(*d));
    }
    if (w.kind != WitnessKind::generic) {
        const KindCheck kc = check_kind(dom, w, w.kind);
        if (!kc.ok) {
            throw InconsistentVerdict("a reported witness fails its kind check: " +
                                      kc.detail);
        }
    }
    out.witnesses.push_back(std::move(w));
}

/// Runs one budgeted search. An exhausted budget or a size-guard refusal
/// folds into unknown; a hit is re-verified and attached.
template <class F>
Verdict run_search(const Domain& dom, Classification& out, F&& search) {
    SearchStats st;
    try {
        auto w = search(&st);
        out.stats.search_nodes += st.nodes;
        if (!w) return Verdict::no;
        attach(dom, out, std::move(*w));
        return Verdict::yes;
    } catch (const Error& e) {
        out.stats.search_nodes += st.nodes;
        if (e.code() == Errc::budget_exhausted || e.code() == Errc::too_large) {
            return Verdict::unknown;
        }
        throw;
    }
}

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::unknown: return "unknown";
    }
    return "?";
}

Classification classify_possibility(const Domain& dom, const ClassifyOptions& opts) {
    Classification out;
    out.boolean_framework = dom.boolean_framework();

    const HxAnalysis hx = analyze_hx(dom);
    out.stats.hx_vertices = hx.graph.vertex_count();
    out.stats.hx_edges = hx.graph.edge_count();
    out.stats.scc_count = hx.scc.count;
    out.totally_blocked = hx.witness ? Verdict::no : Verdict::yes;

    Verdict binary = Verdict::no;
    if (hx.witness) {
        attach(dom, out, *hx.witness);
        binary = Verdict::yes;
    }

    if (out.boolean_framework && !opts.force_general_path) {
        if (is_affine_boolean(dom)) {
            attach(dom, out, xor_witness(dom));
            out.possibility = Verdict::yes;
        } else {
            out.possibility = binary;
        }
        return out;
    }

    const Verdict maj = run_search(dom, out, [&](SearchStats* st) {
        return find_majority_aggregator(dom, opts.budget, st);
    });
    const Verdict min = run_search(dom, out, [&](SearchStats* st) {
        return find_minority_aggregator(dom, opts.budget, st);
    });

    if (binary == Verdict::yes || maj == Verdict::yes || min == Verdict::yes) {
        out.possibility = Verdict::yes;
    } else if (maj == Verdict::unknown || min == Verdict::unknown) {
        out.possibility = Verdict::unknown;
    } else {
        out.possibility = Verdict::no;
    }
    return out;
}

Classification classify_uniform(const Domain& dom, const ClassifyOptions& opts) {
    Classification out;
    out.boolean_framework = dom.boolean_framework();
    out.uniform = run_search(dom, out, [&](SearchStats* st) {
        return find_wnu_aggregator(dom, opts.budget, st);
    });
    return out;
}

Classification full_report(const Domain& dom, const ClassifyOptions& opts) {
    Classification out = classify_possibility(dom, opts);
    Classification uni = classify_uniform(dom, opts);
    out.uniform = uni.uniform;
    out.stats.search_nodes += uni.stats.search_nodes;
    for (auto& w : uni.witnesses) out.witnesses.push_back(std::move(w));

    // A weak near-unanimity witness settles possibility; the reverse
    // implication settles a missing uniform verdict only downward.
    if (out.uniform == Verdict::yes && out.possibility == Verdict::unknown) {
        out.possibility = Verdict::yes;
    }
    if (out.possibility == Verdict::no && out.uniform == Verdict::unknown) {
        out.uniform = Verdict::no;
    }
    if (out.uniform == Verdict::yes && out.possibility == Verdict::no) {
        throw InconsistentVerdict("uniform possibility without possibility");
    }

    const bool has_binary =
        std::any_of(out.witnesses.begin(), out.witnesses.end(),
                    [](const AggregatorWitness& w) { return w.kind == WitnessKind::binary; });
    if ((out.totally_blocked == Verdict::no) != has_binary) {
        throw InconsistentVerdict("blockage verdict disagrees with the binary witness");
    }

    if (out.boolean_framework && out.totally_blocked == Verdict::yes &&
        !is_affine_boolean(dom)) {
        if (out.possibility == Verdict::yes) {
            throw InconsistentVerdict(
                "a blocked non-affine boolean framework produced a possibility witness");
        }
        out.possibility = Verdict::no;
        out.uniform = Verdict::no;
    }
    return out;
}

}  // namespace possdom
