#pragma once

// The commgraph command-line front end. `run` takes the argument vector
// (without the program name) and writes to the given streams so the commands
// can be driven in-process.
//
// Exit codes: 0 success, 1 hunt budget exhausted, 2 usage or parse error,
// 3 resource guard, 4 unexpected failure.

#include <commgraph/er_baseline.hpp>
#include <commgraph/graph.hpp>
#include <commgraph/group_model.hpp>
#include <commgraph/harness.hpp>
#include <commgraph/io.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace commgraph::cli {

enum ExitCode : int {
    kOk = 0,
    kBudgetExhausted = 1,
    kUsage = 2,
    kResource = 3,
    kFailure = 4,
};

/// Resource guard on m, overridable through COMMGRAPH_MAX_M.
inline unsigned max_m_from_env() {
    if (const char* v = std::getenv("COMMGRAPH_MAX_M")) {
        unsigned parsed = 0;
        if (commgraph::detail::parse_uint(v, parsed) && parsed >= 1) return parsed;
        throw std::invalid_argument("COMMGRAPH_MAX_M must be a positive integer");
    }
    return kDefaultMaxM;
}

namespace detail {

inline void write_output(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + *path + "' for writing");
    f << text;
}

inline std::string render_batch(const TrialBatchResult& res, const std::string& format, bool timing,
                                const std::optional<Json>& extra = std::nullopt) {
    if (format == "csv") return histogram_csv(res);
    Json j = batch_json(res, timing);
    if (extra) {
        // keep keys sorted: rebuild with the extra block inserted in order
        Json merged = Json::object();
        bool placed = false;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!placed && it.key() > "diagnostics") {
                merged["diagnostics"] = *extra;
                placed = true;
            }
            merged[it.key()] = it.value();
        }
        if (!placed) merged["diagnostics"] = *extra;
        j = std::move(merged);
    }
    return j.dump(2) + "\n";
}

inline void print_report(const CommutatorTable& table, const StructuralReport& st, const CommutingGraph& g,
                         const DiameterReport& rep, std::ostream& out) {
    out << "table: m=" << table.m() << " r=" << table.r() << " (" << g.vertex_count() << " vertices, p=2^-"
        << table.r() << ")\n";
    out << "derived subgroup: rank " << st.derived_rank << " of " << table.r()
        << (st.derived_spans ? " (spans H)" : " (does not span H)") << "\n";
    if (st.center_trivial) {
        out << "center: trivial\n";
    } else {
        out << "center: nontrivial, radical basis";
        for (const auto& v : st.radical_basis) out << ' ' << v.to_string();
        out << "\n";
    }
    if (st.claimed_orders) {
        out << "orders: |G'|=2^" << st.claimed_orders->derived << " |Z(G)|=2^" << st.claimed_orders->center
            << " |G/Z(G)|=2^" << st.claimed_orders->quotient << "\n";
    }
    out << "edges: " << g.edge_count() << "\n";
    if (rep.connected) {
        out << "connected, diameter " << rep.diameter.to_string() << "\n";
    } else {
        out << "disconnected, " << rep.component_sizes.size() << " components\n";
    }
    out << "component sizes:";
    for (auto s : rep.component_sizes) out << ' ' << s;
    out << "\ndegree sequence:";
    for (auto d : degree_sequence(g)) out << ' ' << d;
    out << "\neccentricities:";
    for (const auto& e : rep.eccentricities) out << ' ' << e.to_string();
    out << "\n";
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random class-2 group commuting graphs: simulation, inspection and witness hunting"};
    app.name("commgraph");
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Diameter distribution of random group commuting graphs");
    unsigned sim_m = 0, sim_r = 0, sim_workers = 0;
    std::uint64_t sim_trials = 100, sim_seed = 1;
    std::optional<std::string> sim_out;
    std::string sim_format = "json";
    bool sim_records = false, sim_timing = false;
    simulate->add_option("--m", sim_m, "Number of generators")->required();
    simulate->add_option("--r", sim_r, "Commutator dimension")->required();
    simulate->add_option("--trials", sim_trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
    simulate->add_option("--out", sim_out, "Output file (default stdout)");
    simulate->add_option("--format", sim_format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--workers", sim_workers, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_flag("--records", sim_records, "Include per-trial records in JSON");
    simulate->add_flag("--timing", sim_timing, "Include wall time in JSON");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Report on a saved commutator table");
    std::string ins_table;
    std::optional<std::string> ins_dot, ins_edges;
    bool ins_json = false;
    inspect->add_option("--table", ins_table, "commtable v1 file")->required();
    inspect->add_option("--export-dot", ins_dot, "Write the graph in DOT format");
    inspect->add_option("--export-edges", ins_edges, "Write the graph as an edge list");
    inspect->add_flag("--json", ins_json, "Print the report as JSON");

    // hunt
    auto* huntc = app.add_subcommand("hunt", "Search for a connected graph of at least a given diameter");
    unsigned hunt_m = 0, hunt_r = 0, hunt_min = 0, hunt_workers = 0;
    std::uint64_t hunt_budget = 1000, hunt_seed = 1;
    std::optional<std::string> hunt_out;
    huntc->add_option("--m", hunt_m, "Number of generators")->required();
    huntc->add_option("--r", hunt_r, "Commutator dimension")->required();
    huntc->add_option("--min-diameter", hunt_min, "Target diameter")->required()->check(CLI::PositiveNumber);
    huntc->add_option("--budget", hunt_budget, "Maximum trials")->capture_default_str()->check(CLI::PositiveNumber);
    huntc->add_option("--seed", hunt_seed, "Master seed")->capture_default_str();
    huntc->add_option("--out", hunt_out, "Witness table path; the JSON sidecar goes to <out>.json");
    huntc->add_option("--workers", hunt_workers, "Worker threads (0 = all cores)")->capture_default_str();

    // gnp
    auto* gnp = app.add_subcommand("gnp", "Erdos-Renyi G(n, p) baseline");
    std::uint32_t gnp_n = 0;
    std::optional<double> gnp_p, gnp_eps;
    std::uint64_t gnp_trials = 100, gnp_seed = 1;
    unsigned gnp_workers = 0;
    std::optional<std::string> gnp_out;
    std::string gnp_format = "json";
    gnp->add_option("--n", gnp_n, "Vertex count")->required()->check(CLI::PositiveNumber);
    auto* popt = gnp->add_option("--p", gnp_p, "Edge probability");
    auto* eopt = gnp->add_option("--epsilon", gnp_eps, "Set p = n^(-1 + epsilon)");
    popt->excludes(eopt);
    gnp->add_option("--trials", gnp_trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
    gnp->add_option("--seed", gnp_seed, "Master seed")->capture_default_str();
    gnp->add_option("--out", gnp_out, "Output file (default stdout)");
    gnp->add_option("--format", gnp_format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    gnp->add_option("--workers", gnp_workers, "Worker threads (0 = all cores)")->capture_default_str();

    // plan
    auto* plan = app.add_subcommand("plan", "Choose r for a target diameter k");
    unsigned plan_k = 2, plan_m = 0;
    double plan_delta = 0;
    std::optional<unsigned> plan_r;
    plan->add_option("--k", plan_k, "Target diameter")->required();
    plan->add_option("--delta", plan_delta, "Window margin, in (0, 1/(2k(k-1)))")->required();
    plan->add_option("--m", plan_m, "Number of generators")->required();
    plan->add_option("--r", plan_r, "Evaluate this r instead of searching");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const CLI::App* which = &app;
        for (const auto* sub : app.get_subcommands()) which = sub;
        err << which->help();
        return kUsage;
    }

    try {
        const unsigned max_m = max_m_from_env();

        if (*simulate) {
            auto cfg = make_config(GroupFamily{sim_m, sim_r}, sim_trials, sim_seed, max_m);
            cfg.worker_count = sim_workers;
            cfg.keep_records = sim_records;
            const auto res = run_trials(cfg);
            detail::write_output(sim_out, detail::render_batch(res, sim_format, sim_timing), out);
            return kOk;
        }

        if (*inspect) {
            std::ifstream f(ins_table, std::ios::binary);
            if (!f) {
                err << "error: cannot open '" << ins_table << "'\n";
                return kUsage;
            }
            const auto table = parse_table(f);
            const auto st = structural_report(table);
            const auto g = build_graph(table, max_m);
            const auto rep = diameter(g, 0);
            if (ins_json) {
                Json j = Json::object();
                j["component_sizes"] = rep.component_sizes;
                j["connected"] = rep.connected;
                j["degree_sequence"] = degree_sequence(g);
                j["diameter"] = distance_json(rep.diameter);
                Json ecc = Json::array();
                for (const auto& e : rep.eccentricities) ecc.push_back(distance_json(e));
                j["eccentricities"] = ecc;
                j["edges"] = g.edge_count();
                j["m"] = table.m();
                j["r"] = table.r();
                j["structural"] = structural_json(st);
                out << j.dump(2) << "\n";
            } else {
                detail::print_report(table, st, g, rep, out);
            }
            if (ins_dot) {
                std::ostringstream os;
                write_dot(g, os);
                detail::write_output(ins_dot, os.str(), out);
            }
            if (ins_edges) {
                std::ostringstream os;
                write_edge_list(g, os);
                detail::write_output(ins_edges, os.str(), out);
            }
            return kOk;
        }

        if (*huntc) {
            auto cfg = make_config(GroupFamily{hunt_m, hunt_r}, hunt_budget, hunt_seed, max_m);
            cfg.hunt_target = hunt_min;
            cfg.worker_count = hunt_workers;
            const auto res = hunt(cfg);
            if (!res.witness) {
                out << "no graph of diameter >= " << hunt_min << " in " << res.trials_consumed << " trials\n";
                return kBudgetExhausted;
            }
            const auto& w = *res.witness;
            out << "found diameter " << w.report.diameter.to_string() << " at trial " << w.record.index << " ("
                << res.trials_consumed << " trials)\n";
            const std::string sidecar = witness_json(w, hunt_seed).dump(2) + "\n";
            if (hunt_out) {
                detail::write_output(hunt_out, serialize_table(w.table), out);
                detail::write_output(*hunt_out + ".json", sidecar, out);
            } else {
                out << serialize_table(w.table) << sidecar;
            }
            return kOk;
        }

        if (*gnp) {
            if (!gnp_p && !gnp_eps) {
                err << "error: exactly one of --p and --epsilon is required\n" << gnp->help();
                return kUsage;
            }
            if (gnp_n < 2 && gnp_eps) {
                err << "error: --epsilon needs n >= 2\n";
                return kUsage;
            }
            const double n = gnp_n;
            const double p = gnp_p ? *gnp_p : std::pow(n, -1.0 + *gnp_eps);
            auto cfg = make_config(ErFamily{gnp_n, p}, gnp_trials, gnp_seed, max_m);
            cfg.worker_count = gnp_workers;
            const auto res = run_trials(cfg);

            Json diag = Json::object();
            const double eps = gnp_eps ? *gnp_eps : (gnp_n >= 2 && p > 0 ? epsilon_for(n, p) : 0.0);
            const auto k = predicted_diameter(eps);
            diag["epsilon"] = eps;
            if (k && gnp_n >= 2) {
                diag["moments"] = moments_json(path_moments(n, p, *k), *k);
            } else {
                diag["moments"] = nullptr;
            }
            diag["predicted_diameter"] = k ? Json(*k) : Json(nullptr);
            detail::write_output(gnp_out, detail::render_batch(res, gnp_format, false, diag), out);
            return kOk;
        }

        if (*plan) {
            const auto result = plan_r ? evaluate_plan(plan_k, plan_delta, plan_m, *plan_r)
                                       : plan_parameters(plan_k, plan_delta, plan_m);
            out << plan_json(result).dump(2) << "\n";
            return kOk;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << " (the m limit can be raised with COMMGRAPH_MAX_M)\n";
        return kResource;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace commgraph::cli
