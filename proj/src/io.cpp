#include "possdom/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace possdom {

namespace {

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<Token> split_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<Token> toks;
    Token tok;
    while (in >> tok) toks.push_back(tok);
    return toks;
}

WitnessKind kind_from_name(const std::string& name) {
    if (name == "binary") return WitnessKind::binary;
    if (name == "majority") return WitnessKind::majority;
    if (name == "minority") return WitnessKind::minority;
    if (name == "wnu") return WitnessKind::wnu;
    if (name == "generic") return WitnessKind::generic;
    throw Error(Errc::parse_error, "unknown witness kind \"" + name + "\"");
}

nlohmann::json verdict_to_json(Verdict v) {
    switch (v) {
        case Verdict::yes: return true;
        case Verdict::no: return false;
        case Verdict::unknown: return "unknown";
    }
    return "unknown";
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

Domain read_domain_text(std::istream& in, bool repair_degenerate,
                        ValidationReport* report) {
    std::vector<std::vector<Token>> raw;
    std::string line;
    long line_no = 0;
    long width = -1;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<Token> toks = split_tokens(strip_comment(line));
        if (toks.empty()) continue;
        if (raw.empty() && !saw_header && toks[0] == "issues:") {
            if (toks.size() != 2) {
                throw Error(Errc::parse_error,
                            "line " + std::to_string(line_no) +
                                ": header must read `issues: m`",
                            line_no);
            }
            std::size_t pos = 0;
            int m = 0;
            try {
                m = std::stoi(toks[1], &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != toks[1].size() || m < 1) {
                throw Error(Errc::parse_error,
                            "line " + std::to_string(line_no) + ": issue count \"" +
                                toks[1] + "\" is not a positive integer",
                            line_no);
            }
            width = m;
            saw_header = true;
            continue;
        }
        if (width == -1) width = static_cast<long>(toks.size());
        if (static_cast<long>(toks.size()) != width) {
            throw Error(Errc::parse_error,
                        "line " + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " tokens, got " +
                            std::to_string(toks.size()),
                        line_no);
        }
        raw.push_back(std::move(toks));
    }
    return validate_domain(raw, repair_degenerate, report);
}

Domain read_domain_file(const std::string& path, bool repair_degenerate,
                        ValidationReport* report) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::parse_error, "cannot open \"" + path + "\"");
    }
    return read_domain_text(in, repair_degenerate, report);
}

void write_domain_text(std::ostream& out, const Domain& dom) {
    out << "issues: " << dom.issue_count() << "\n";
    for (const auto& row : dom.token_rows()) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) out << ' ';
            out << row[j];
        }
        out << "\n";
    }
}

nlohmann::json witness_to_json(const Domain& dom, const AggregatorWitness& w) {
    nlohmann::json tables = nlohmann::json::array();
    for (int j = 0; j < dom.issue_count(); ++j) {
        const int s = dom.alphabet_size(j);
        nlohmann::json entries = nlohmann::json::array();
        const int flats = w.arity == 2 ? s * s : s * s * s;
        for (int flat = 0; flat < flats; ++flat) {
            nlohmann::json args = nlohmann::json::array();
            int value = 0;
            if (w.arity == 2) {
                args.push_back(dom.token(j, flat / s));
                args.push_back(dom.token(j, flat % s));
                value = w.tables[static_cast<std::size_t>(j)][static_cast<std::size_t>(flat)];
            } else {
                args.push_back(dom.token(j, flat / (s * s)));
                args.push_back(dom.token(j, (flat / s) % s));
                args.push_back(dom.token(j, flat % s));
                value = w.tables[static_cast<std::size_t>(j)][static_cast<std::size_t>(flat)];
            }
            entries.push_back({{"args", std::move(args)}, {"value", dom.token(j, value)}});
        }
        tables.push_back({{"issue", j + 1}, {"entries", std::move(entries)}});
    }
    return {{"schema", 1},
            {"kind", to_string(w.kind)},
            {"arity", w.arity},
            {"tables", std::move(tables)}};
}

AggregatorWitness witness_from_json(const Domain& dom, const nlohmann::json& j) {
    try {
        const auto kind = kind_from_name(j.at("kind").get<std::string>());
        const int arity = j.at("arity").get<int>();
        if (arity != 2 && arity != 3) {
            throw Error(Errc::parse_error,
                        "witness arity " + std::to_string(arity) + " is not 2 or 3");
        }
        AggregatorWitness w = AggregatorWitness::blank(dom, arity, kind);
        for (const auto& table : j.at("tables")) {
            const int issue = table.at("issue").get<int>();
            if (issue < 1 || issue > dom.issue_count()) {
                throw Error(Errc::parse_error,
                            "issue " + std::to_string(issue) + " is out of range",
                            issue);
            }
            const int jj = issue - 1;
            const int s = dom.alphabet_size(jj);
            for (const auto& entry : table.at("entries")) {
                const auto& args = entry.at("args");
                if (static_cast<int>(args.size()) != arity) {
                    throw Error(Errc::parse_error,
                                "issue " + std::to_string(issue) + ": entry has " +
                                    std::to_string(args.size()) + " arguments, expected " +
                                    std::to_string(arity),
                                issue);
                }
                int flat = 0;
                for (const auto& arg : args) {
                    const auto tok = arg.get<std::string>();
                    const auto v = dom.intern(jj, tok);
                    if (!v) {
                        throw Error(Errc::parse_error,
                                    "issue " + std::to_string(issue) + ": unknown token \"" +
                                        tok + "\"",
                                    issue);
                    }
                    flat = flat * s + *v;
                }
                const auto tok = entry.at("value").get<std::string>();
                const auto v = dom.intern(jj, tok);
                if (!v) {
                    throw Error(Errc::parse_error,
                                "issue " + std::to_string(issue) + ": unknown token \"" +
                                    tok + "\"",
                                issue);
                }
                int& slot = w.tables[static_cast<std::size_t>(jj)][static_cast<std::size_t>(flat)];
                if (slot != -1 && slot != *v) {
                    throw Error(Errc::parse_error,
                                "issue " + std::to_string(issue) +
                                    ": conflicting duplicate entry",
                                issue);
                }
                slot = *v;
            }
        }
        for (int jj = 0; jj < dom.issue_count(); ++jj) {
            const auto& table = w.tables[static_cast<std::size_t>(jj)];
            for (int v : table) {
                if (v == -1) {
                    throw Error(Errc::parse_error,
                                "issue " + std::to_string(jj + 1) +
                                    ": table is missing entries",
                                jj + 1);
                }
            }
        }
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("malformed witness JSON: ") + e.what());
    }
}

nlohmann::json report_to_json(const Domain& dom, const Classification& c) {
    nlohmann::json witnesses = nlohmann::json::array();
    for (const auto& w : c.witnesses) witnesses.push_back(witness_to_json(dom, w));
    return {{"schema", 1},
            {"framework", c.boolean_framework ? "boolean" : "general"},
            {"possibility", verdict_to_json(c.possibility)},
            {"uniform", verdict_to_json(c.uniform)},
            {"totally_blocked", verdict_to_json(c.totally_blocked)},
            {"witnesses", std::move(witnesses)},
            {"stats",
             {{"hx_vertices", c.stats.hx_vertices},
              {"hx_edges", c.stats.hx_edges},
              {"scc_count", c.stats.scc_count},
              {"search_nodes", c.stats.search_nodes}}}};
}

std::string report_to_text(const Classification& c) {
    std::string kinds;
    for (const auto& w : c.witnesses) {
        if (!kinds.empty()) kinds += ", ";
        kinds += to_string(w.kind);
    }
    std::string out;
    out += "framework: " + std::string(c.boolean_framework ? "boolean" : "general") + "\n";
    out += "possibility: " + std::string(to_string(c.possibility)) + "\n";
    out += "uniform: " + std::string(to_string(c.uniform)) + "\n";
    out += "totally blocked: " + std::string(to_string(c.totally_blocked)) + "\n";
    out += "witnesses: " + (kinds.empty() ? "none" : kinds) + "\n";
    out += "stats: hx_vertices=" + std::to_string(c.stats.hx_vertices) +
           " hx_edges=" + std::to_string(c.stats.hx_edges) +
           " scc_count=" + std::to_string(c.stats.scc_count) +
           " search_nodes=" + std::to_string(c.stats.search_nodes) + "\n";
    return out;
}

nlohmann::json graph_to_json(const Domain& dom, const HxGraph& g) {
    nlohmann::json vertices = nlohmann::json::array();
    for (const HxVertex& v : g.vertices) {
        vertices.push_back({{"issue", v.issue + 1},
                            {"u", dom.token(v.issue, v.u)},
                            {"u_prime", dom.token(v.issue, v.u_prime)}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [src, dst] : g.edge_list()) edges.push_back({src, dst});
    return {{"schema", 1}, {"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

std::string graph_to_dot(const Domain& dom, const HxGraph& g) {
    std::string out = "digraph hx {\n";
    for (int i = 0; i < g.vertex_count(); ++i) {
        const HxVertex& v = g.vertices[static_cast<std::size_t>(i)];
        out += "  v" + std::to_string(i) + " [label=\"" + std::to_string(v.issue + 1) +
               ":(" + dot_escape(dom.token(v.issue, v.u)) + "," +
               dot_escape(dom.token(v.issue, v.u_prime)) + ")\"];\n";
    }
    for (const auto& [src, dst] : g.edge_list()) {
        out += "  v" + std::to_string(src) + " -> v" + std::to_string(dst) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace possdom
