// possdom: decide whether a set of feasible evaluations admits
// non-dictatorial aggregation, and produce checkable witnesses.
//
// Every subcommand speaks the same exit-code protocol so shell pipelines
// can branch on verdicts:
//   0  yes (possibility / uniform / blocked / witness ok / oracle found)
//   1  no
//   2  indeterminate: the node budget ran out before a verdict
//   3  bad input (parse or validation failure, bad flags)
//   4  refused (instance too large, generation failed) or internal error

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "possdom/classify.hpp"
#include "possdom/domain.hpp"
#include "possdom/hx.hpp"
#include "possdom/io.hpp"
#include "possdom/oracle.hpp"
#include "possdom/polysearch.hpp"
#include "possdom/witness.hpp"

namespace {

using possdom::AggregatorWitness;
using possdom::Classification;
using possdom::Domain;
using possdom::Errc;
using possdom::Error;
using possdom::Verdict;

Domain load_domain(const std::string& path, bool repair) {
    possdom::ValidationReport report;
    Domain dom = path == "-" ? possdom::read_domain_text(std::cin, repair, &report)
                             : possdom::read_domain_file(path, repair, &report);
    for (int issue : report.dropped_issues) {
        std::cerr << "note: dropped degenerate issue " << issue << "\n";
    }
    return dom;
}

nlohmann::json load_witness_json(const std::string& path) {
    try {
        if (path == "-") {
            return nlohmann::json::parse(std::cin);
        }
        std::ifstream in(path);
        if (!in) {
            throw Error(Errc::parse_error, "cannot open \"" + path + "\"");
        }
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("malformed witness JSON: ") + e.what());
    }
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::yes: return 0;
        case Verdict::no: return 1;
        case Verdict::unknown: return 2;
    }
    return 4;
}

struct ReportArgs {
    std::string path;
    long long budget = possdom::kDefaultSearchBudget;
    bool repair = false;
    bool text = false;
};

int run_report(const ReportArgs& args, bool uniform_verdict) {
    Domain dom = load_domain(args.path, args.repair);
    possdom::ClassifyOptions opts;
    opts.budget = args.budget;
    Classification c = possdom::full_report(dom, opts);
    if (args.text) {
        std::cout << possdom::report_to_text(c);
    } else {
        emit(possdom::report_to_json(dom, c));
    }
    return verdict_exit(uniform_verdict ? c.uniform : c.possibility);
}

int run_blocked(const std::string& path, bool repair, bool text) {
    Domain dom = load_domain(path, repair);
    possdom::HxAnalysis hx = possdom::analyze_hx(dom);
    bool blocked = !hx.witness.has_value();
    if (text) {
        std::cout << (blocked ? "blocked\n" : "not blocked\n");
    } else {
        emit({{"schema", 1},
              {"totally_blocked", blocked},
              {"stats",
               {{"hx_vertices", hx.graph.vertex_count()},
                {"hx_edges", hx.graph.edge_count()},
                {"scc_count", hx.scc.count}}}});
    }
    return blocked ? 0 : 1;
}

int run_graph(const std::string& path, bool repair, bool dot) {
    Domain dom = load_domain(path, repair);
    possdom::HxGraph g = possdom::build_hx(dom);
    if (dot) {
        std::cout << possdom::graph_to_dot(dom, g);
    } else {
        emit(possdom::graph_to_json(dom, g));
    }
    return 0;
}

int run_verify(const std::string& domain_path, const std::string& witness_path,
               bool repair, bool text) {
    Domain dom = load_domain(domain_path, repair);
    AggregatorWitness w = possdom::witness_from_json(dom, load_witness_json(witness_path));
    possdom::VerifyResult res = possdom::verify_aggregator(dom, w);
    bool ok = res.ok;
    std::string detail;
    if (!ok) {
        detail = res.violation->describe(dom);
    } else if (w.kind != possdom::WitnessKind::generic) {
        possdom::KindCheck kc = possdom::check_kind(dom, w, w.kind);
        if (!kc.ok) {
            ok = false;
            detail = kc.detail;
        }
    }
    if (text) {
        std::cout << (ok ? "ok" : detail) << '\n';
    } else {
        emit({{"schema", 1}, {"ok", ok}, {"detail", detail}});
    }
    return ok ? 0 : 1;
}

int run_oracle(const std::string& path, bool repair, const std::string& kind,
               std::uint64_t budget, bool text) {
    Domain dom = load_domain(path, repair);
    std::optional<AggregatorWitness> w;
    if (kind == "binary") {
        w = possdom::oracle_binary_nondictatorial(dom, budget);
    } else if (kind == "majority") {
        w = possdom::oracle_majority(dom, budget);
    } else if (kind == "minority") {
        w = possdom::oracle_minority(dom, budget);
    } else {
        w = possdom::oracle_wnu(dom, budget);
    }
    if (text) {
        std::cout << (w ? "found\n" : "none\n");
    } else if (w) {
        emit(possdom::witness_to_json(dom, *w));
    } else {
        emit({{"schema", 1}, {"found", false}});
    }
    return w ? 0 : 1;
}

struct GenArgs {
    int issues = 0;
    std::vector<int> sizes;
    int rows = 0;
    std::string structure = "uniform";
    std::uint64_t seed = 0;
    int max_attempts = 1000;
};

int run_gen(const GenArgs& args) {
    possdom::GenParams params;
    params.m = args.issues;
    params.sizes = args.sizes.empty() ? std::vector<int>(
                                            static_cast<std::size_t>(std::max(args.issues, 0)), 2)
                                      : args.sizes;
    params.target_rows = args.rows;
    if (args.structure == "product") {
        params.structure = possdom::GenStructure::product;
    } else if (args.structure == "affine") {
        params.structure = possdom::GenStructure::affine_subspace;
    } else if (args.structure == "blocked") {
        params.structure = possdom::GenStructure::blocked_seeking;
    }
    params.seed = args.seed;
    params.max_attempts = args.max_attempts;
    possdom::write_domain_text(std::cout, possdom::generate(params));
    return 0;
}

void add_format_flags(CLI::App* cmd, bool& text) {
    auto* t = cmd->add_flag("--text", text, "emit plain text instead of JSON");
    auto* j = cmd->add_flag("--json", "emit JSON (the default)");
    t->excludes(j);
    j->excludes(t);
}

CLI::Option* add_domain_arg(CLI::App* cmd, std::string& path) {
    return cmd->add_option("domain", path, "domain file, or - for stdin")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"possibility-domain classifier and witness toolkit"};
    app.require_subcommand(1);

    ReportArgs report_args;
    for (const auto& [name, help] :
         {std::pair{"classify", "full report; exit code follows the possibility verdict"},
          std::pair{"uniform", "full report; exit code follows the uniform verdict"}}) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_domain_arg(cmd, report_args.path);
        cmd->add_option("--budget", report_args.budget, "search node budget");
        cmd->add_flag("--repair-degenerate", report_args.repair,
                      "drop single-valued issues instead of rejecting the file");
        add_format_flags(cmd, report_args.text);
    }

    std::string blocked_path;
    bool blocked_repair = false;
    bool blocked_text = false;
    CLI::App* blocked = app.add_subcommand("blocked", "is the domain totally blocked?");
    add_domain_arg(blocked, blocked_path);
    blocked->add_flag("--repair-degenerate", blocked_repair,
                      "drop single-valued issues instead of rejecting the file");
    add_format_flags(blocked, blocked_text);

    std::string graph_path;
    bool graph_repair = false;
    bool graph_dot = false;
    CLI::App* graph = app.add_subcommand("graph", "dump the implication graph");
    add_domain_arg(graph, graph_path);
    graph->add_flag("--repair-degenerate", graph_repair,
                    "drop single-valued issues instead of rejecting the file");
    graph->add_flag("--dot", graph_dot, "emit DOT instead of JSON");

    std::string verify_domain;
    std::string verify_witness;
    bool verify_repair = false;
    bool verify_text = false;
    CLI::App* verify = app.add_subcommand("verify", "check a witness JSON against a domain");
    add_domain_arg(verify, verify_domain);
    verify->add_option("witness", verify_witness, "witness JSON file, or - for stdin")
        ->required();
    verify->add_flag("--repair-degenerate", verify_repair,
                     "drop single-valued issues instead of rejecting the file");
    add_format_flags(verify, verify_text);

    std::string oracle_path;
    std::string oracle_kind;
    bool oracle_repair = false;
    bool oracle_text = false;
    std::uint64_t oracle_budget = possdom::kOracleSpaceLimit;
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force witness enumeration");
    add_domain_arg(oracle, oracle_path);
    oracle->add_option("--kind", oracle_kind, "witness kind to enumerate")
        ->required()
        ->check(CLI::IsMember({"binary", "majority", "minority", "wnu"}));
    oracle->add_option("--budget", oracle_budget, "candidate table budget");
    oracle->add_flag("--repair-degenerate", oracle_repair,
                     "drop single-valued issues instead of rejecting the file");
    add_format_flags(oracle, oracle_text);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a random domain file");
    gen->add_option("--issues", gen_args.issues, "number of issues")->required();
    gen->add_option("--sizes", gen_args.sizes,
                    "per-issue alphabet sizes (default: all 2)");
    gen->add_option("--rows", gen_args.rows, "target number of evaluations")->required();
    gen->add_option("--structure", gen_args.structure, "instance shape")
        ->check(CLI::IsMember({"uniform", "product", "affine", "blocked"}));
    gen->add_option("--seed", gen_args.seed, "generator seed");
    gen->add_option("--max-attempts", gen_args.max_attempts, "retry cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (app.got_subcommand("classify")) {
            return run_report(report_args, false);
        }
        if (app.got_subcommand("uniform")) {
            return run_report(report_args, true);
        }
        if (app.got_subcommand("blocked")) {
            return run_blocked(blocked_path, blocked_repair, blocked_text);
        }
        if (app.got_subcommand("graph")) {
            return run_graph(graph_path, graph_repair, graph_dot);
        }
        if (app.got_subcommand("verify")) {
            return run_verify(verify_domain, verify_witness, verify_repair, verify_text);
        }
        if (app.got_subcommand("oracle")) {
            return run_oracle(oracle_path, oracle_repair, oracle_kind, oracle_budget,
                              oracle_text);
        }
        if (app.got_subcommand("gen")) {
            return run_gen(gen_args);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.code()) {
            case Errc::budget_exhausted:
                return 2;
            case Errc::too_large:
            case Errc::generation_failed:
                return 4;
            default:
                return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 3;
}
