#pragma once

// File formats: the "commtable v1" text format for commutator tables, JSON and
// CSV renderings of batch results and reports, and DOT / edge-list exports.
//
// commtable v1:
//   commtable v1
//   m=<int> r=<int>
//   i,j: <r binary digits>        one line per pair, 1-based, lexicographic
// The leftmost digit is the z_1 component. With r = 0 a pair line is "i,j:".

#include <commgraph/er_baseline.hpp>
#include <commgraph/graph.hpp>
#include <commgraph/group_model.hpp>
#include <commgraph/harness.hpp>

#include <json.hpp>

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace commgraph {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_{line} {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline std::string serialize_table(const CommutatorTable& table) {
    std::ostringstream os;
    os << "commtable v1\n";
    os << "m=" << table.m() << " r=" << table.r() << "\n";
    for (unsigned i = 0; i < table.m(); ++i) {
        for (unsigned j = i + 1; j < table.m(); ++j) {
            os << (i + 1) << ',' << (j + 1) << ':';
            if (table.r() > 0) os << ' ' << table.at(i, j).to_string();
            os << '\n';
        }
    }
    return os.str();
}

namespace detail {
inline bool parse_uint(std::string_view s, unsigned& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}
}  // namespace detail

inline CommutatorTable parse_table(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        return true;
    };

    if (!next()) throw ParseError(1, "empty file, expected header 'commtable v1'");
    if (line != "commtable v1") throw ParseError(lineno, "expected header 'commtable v1'");

    if (!next()) throw ParseError(2, "missing 'm=<int> r=<int>' line");
    unsigned m = 0, r = 0;
    {
        const auto sp = line.find(' ');
        const std::string_view lv(line);
        if (sp == std::string::npos || !lv.starts_with("m=") || lv.substr(sp + 1, 2) != "r=" ||
            !detail::parse_uint(lv.substr(2, sp - 2), m) || !detail::parse_uint(lv.substr(sp + 3), r)) {
            throw ParseError(lineno, "expected 'm=<int> r=<int>'");
        }
        if (m < 1 || m > kMaxDimension) throw ParseError(lineno, "m must be in 1..64");
        if (r > kMaxDimension) throw ParseError(lineno, "r must be <= 64");
    }

    CommutatorTable table(m, r);
    for (unsigned i = 0; i < m; ++i) {
        for (unsigned j = i + 1; j < m; ++j) {
            const std::string expected = std::to_string(i + 1) + "," + std::to_string(j + 1) + ":";
            if (!next()) throw ParseError(lineno + 1, "missing pair " + std::to_string(i + 1) + "," + std::to_string(j + 1));
            if (!std::string_view(line).starts_with(expected)) {
                throw ParseError(lineno, "expected pair " + std::to_string(i + 1) + "," + std::to_string(j + 1));
            }
            std::string digits = line.substr(expected.size());
            if (r > 0) {
                if (digits.empty() || digits.front() != ' ') throw ParseError(lineno, "expected ' ' after ':'");
                digits.erase(0, 1);
            }
            if (digits.size() != r) {
                throw ParseError(lineno, "expected " + std::to_string(r) + " binary digits, got " + std::to_string(digits.size()));
            }
            try {
                table.set(i, j, GF2Vector::from_string(digits));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
        }
    }
    while (next()) {
        if (!line.empty()) throw ParseError(lineno, "unexpected content after the last pair");
    }
    return table;
}

inline CommutatorTable parse_table(const std::string& text) {
    std::istringstream is(text);
    return parse_table(is);
}

// JSON renderings. Object keys are emitted in sorted order; histogram keys run
// ascending by diameter with "inf" last.

inline Json distance_json(Distance d) {
    if (d.is_finite()) return d.value();
    return "inf";
}

inline Json histogram_json(const std::map<std::uint32_t, std::uint64_t>& histogram, std::uint64_t disconnected) {
    Json h = Json::object();
    for (const auto& [d, c] : histogram) h[std::to_string(d)] = c;
    if (disconnected > 0) h["inf"] = disconnected;
    return h;
}

inline Json family_json(const Family& f) {
    Json j = Json::object();
    if (const auto* g = std::get_if<GroupFamily>(&f)) {
        j["kind"] = "group";
        j["m"] = g->m;
        j["r"] = g->r;
    } else {
        const auto& e = std::get<ErFamily>(f);
        j["kind"] = "gnp";
        j["n"] = e.n;
        j["p"] = e.p;
    }
    return j;
}

inline Json record_json(const TrialRecord& rec) {
    Json j = Json::object();
    j["center_trivial"] = rec.center_trivial;
    j["derived_spans"] = rec.derived_spans;
    j["diameter"] = distance_json(rec.diameter);
    j["index"] = rec.index;
    j["largest_component"] = rec.largest_component;
    j["stream_key"] = rec.stream_key;
    return j;
}

/// Batch result as JSON. Wall time is included only on request so that equal
/// runs serialize identically.
inline Json batch_json(const TrialBatchResult& res, bool include_timing = false) {
    Json j = Json::object();
    j["disconnected_count"] = res.disconnected_count;
    j["family"] = family_json(res.family);
    j["histogram"] = histogram_json(res.histogram, res.disconnected_count);
    Json lc = Json::object();
    lc["max"] = res.largest_component_fraction.max;
    lc["mean"] = res.largest_component_fraction.mean;
    lc["min"] = res.largest_component_fraction.min;
    j["largest_component_fraction"] = lc;
    j["master_seed"] = res.master_seed;
    if (!res.records.empty()) {
        Json recs = Json::array();
        for (const auto& rec : res.records) recs.push_back(record_json(rec));
        j["records"] = recs;
    }
    j["structural_fail_count"] = res.structural_fail_count;
    j["trials"] = res.trials;
    if (include_timing) j["wall_time_seconds"] = res.wall_time_seconds;
    return j;
}

/// "diameter,count" rows ascending, then "inf,<k>" when any trial was disconnected.
inline std::string histogram_csv(const TrialBatchResult& res) {
    std::ostringstream os;
    os << "diameter,count\n";
    for (const auto& [d, c] : res.histogram) os << d << ',' << c << '\n';
    if (res.disconnected_count > 0) os << "inf," << res.disconnected_count << '\n';
    return os.str();
}

inline Json structural_json(const StructuralReport& rep) {
    Json j = Json::object();
    j["center_trivial"] = rep.center_trivial;
    if (rep.claimed_orders) {
        Json o = Json::object();
        o["center_log2"] = rep.claimed_orders->center;
        o["derived_log2"] = rep.claimed_orders->derived;
        o["quotient_log2"] = rep.claimed_orders->quotient;
        j["claimed_orders"] = o;
    } else {
        j["claimed_orders"] = nullptr;
    }
    j["derived_rank"] = rep.derived_rank;
    j["derived_spans"] = rep.derived_spans;
    Json basis = Json::array();
    for (const auto& v : rep.radical_basis) basis.push_back(v.to_string());
    j["radical_basis"] = basis;
    return j;
}

inline Json plan_json(const ErPlan& plan) {
    Json j = Json::object();
    j["delta"] = plan.delta;
    j["delta1"] = plan.delta1 ? Json(*plan.delta1) : Json(nullptr);
    j["epsilon_n"] = plan.epsilon_n;
    j["k"] = plan.k;
    j["m"] = plan.m;
    j["n"] = plan.n;
    j["p"] = plan.p;
    j["predicted_diameter"] = plan.predicted_diameter ? Json(*plan.predicted_diameter) : Json(nullptr);
    j["r"] = plan.r;
    j["valid"] = plan.valid;
    j["window"] = Json::array({plan.window_low, plan.window_high});
    return j;
}

inline Json moments_json(const PathMoments& pm, unsigned length) {
    Json j = Json::object();
    j["delta_main_heuristic"] = pm.delta_main;
    j["janson_bound"] = pm.janson_bound;
    j["length"] = length;
    j["mu_exact"] = pm.mu_exact;
    return j;
}

/// Witness sidecar: everything needed to reproduce and check a hunted graph.
inline Json witness_json(const HuntWitness& w, std::uint64_t master_seed) {
    Json j = Json::object();
    j["degree_sequence"] = w.degrees;
    j["diameter"] = distance_json(w.report.diameter);
    Json ecc = Json::array();
    for (const auto& e : w.report.eccentricities) ecc.push_back(distance_json(e));
    j["eccentricities"] = ecc;
    j["m"] = w.table.m();
    j["master_seed"] = master_seed;
    j["r"] = w.table.r();
    j["stream_key"] = w.record.stream_key;
    j["structural"] = structural_json(structural_report(w.table));
    j["trial_index"] = w.record.index;
    return j;
}

/// Vertex name used in exports: the subset label for group graphs, else the index.
inline std::uint64_t export_name(const CommutingGraph& g, std::uint32_t v) {
    return std::holds_alternative<GroupOrigin>(g.origin()) ? std::uint64_t{v} + 1 : v;
}

inline void write_edge_list(const CommutingGraph& g, std::ostream& os) {
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
        for (std::uint32_t v = u + 1; v < g.vertex_count(); ++v) {
            if (g.adjacent(u, v)) os << export_name(g, u) << ' ' << export_name(g, v) << '\n';
        }
    }
}

inline void write_dot(const CommutingGraph& g, std::ostream& os) {
    os << "graph commuting {\n";
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) os << "  " << export_name(g, u) << ";\n";
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
        for (std::uint32_t v = u + 1; v < g.vertex_count(); ++v) {
            if (g.adjacent(u, v)) os << "  " << export_name(g, u) << " -- " << export_name(g, v) << ";\n";
        }
    }
    os << "}\n";
}

}  // namespace commgraph
