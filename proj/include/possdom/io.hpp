#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "possdom/classify.hpp"
#include "possdom/domain.hpp"
#include "possdom/hx.hpp"
#include "possdom/witness.hpp"

namespace possdom {

/// Domain text format: an optional `issues: m` header, then one evaluation
/// per line as m whitespace-separated tokens. `#` starts a comment, blank
/// lines are skipped. Width mismatches raise ParseError carrying the
/// offending 1-based line number; the parsed rows then go through
/// validate_domain with the given repair flag.
Domain read_domain_text(std::istream& in, bool repair_degenerate = false,
                        ValidationReport* report = nullptr);

/// Same, from a file path. ParseError when the file cannot be opened.
Domain read_domain_file(const std::string& path, bool repair_degenerate = false,
                        ValidationReport* report = nullptr);

/// Canonical emission: the header line plus one row per line in stored
/// order and original token spelling. Parsing the output reproduces the
/// domain exactly.
void write_domain_text(std::ostream& out, const Domain& dom);

/// Witness as JSON: kind, arity, and per-issue tables listing every entry
/// as argument tokens and a value token, entries in odometer order.
nlohmann::json witness_to_json(const Domain& dom, const AggregatorWitness& w);

/// Inverse of witness_to_json, tolerant of entry order and of consistent
/// duplicates. Unknown kinds or tokens, conflicting duplicates and missing
/// entries raise ParseError.
AggregatorWitness witness_from_json(const Domain& dom, const nlohmann::json& j);

/// Classification report as JSON: framework, the three verdicts (true,
/// false, or "unknown"), the witnesses, and the graph/search statistics.
nlohmann::json report_to_json(const Domain& dom, const Classification& c);

/// The same report as compact human-readable lines.
std::string report_to_text(const Classification& c);

/// Graph as JSON: vertices with 1-based issue and token spellings, edges
/// as index pairs into the vertex list.
nlohmann::json graph_to_json(const Domain& dom, const HxGraph& g);

/// Graph in DOT syntax, nodes labeled "issue:(u,u_prime)".
std::string graph_to_dot(const Domain& dom, const HxGraph& g);

}  // namespace possdom
