#pragma once

// Reproducible Monte Carlo batches over the group model and the G(n, p)
// baseline. Trial t always uses the stream derived from (master_seed, t), so
// results are independent of how trials are scheduled across workers.

#include <commgraph/er_baseline.hpp>
#include <commgraph/graph.hpp>
#include <commgraph/group_model.hpp>
#include <commgraph/rng.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

namespace commgraph {

struct GroupFamily {
    unsigned m;
    unsigned r;
};
struct ErFamily {
    std::uint32_t n;
    double p;
};
using Family = std::variant<GroupFamily, ErFamily>;

struct SimulationConfig {
    Family family = GroupFamily{7, 4};
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    unsigned max_m = kDefaultMaxM;
    std::optional<unsigned> hunt_target;
    /// 0 or empty means hardware concurrency.
    std::optional<unsigned> worker_count;
    bool keep_records = false;
};

inline SimulationConfig make_config(Family family, std::uint64_t trials, std::uint64_t master_seed,
                                    unsigned max_m = kDefaultMaxM) {
    SimulationConfig c;
    c.family = family;
    c.trials = trials;
    c.master_seed = master_seed;
    c.max_m = max_m;
    return c;
}

struct TrialRecord {
    std::uint64_t index = 0;
    std::uint64_t stream_key = 0;
    Distance diameter;
    /// Structural flags; always true for the G(n, p) family.
    bool derived_spans = true;
    bool center_trivial = true;
    std::uint32_t largest_component = 0;
};

struct FractionStats {
    double min = 0;
    double mean = 0;
    double max = 0;
};

struct TrialBatchResult {
    Family family;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::map<std::uint32_t, std::uint64_t> histogram;  // finite diameter -> count
    std::uint64_t disconnected_count = 0;
    std::uint64_t structural_fail_count = 0;
    FractionStats largest_component_fraction;
    std::vector<TrialRecord> records;  // filled when keep_records
    double wall_time_seconds = 0;

    [[nodiscard]] std::uint64_t count(std::uint32_t d) const {
        auto it = histogram.find(d);
        return it == histogram.end() ? 0 : it->second;
    }
    [[nodiscard]] double fraction(std::uint32_t d) const { return static_cast<double>(count(d)) / trials; }
    [[nodiscard]] double disconnected_fraction() const { return static_cast<double>(disconnected_count) / trials; }
};

namespace detail {

inline unsigned resolve_workers(std::optional<unsigned> requested) {
    unsigned w = requested.value_or(0);
    if (w == 0) w = std::max(1U, std::thread::hardware_concurrency());
    return w;
}

/// Calls fn(i) for i in [begin, end) across `workers` threads.
template <class Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned workers, Fn&& fn) {
    if (end <= begin) return;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, end - begin));
    std::atomic<std::uint64_t> next{begin};
    auto loop = [&] {
        for (std::uint64_t i = next++; i < end; i = next++) fn(i);
    };
    if (workers <= 1) {
        loop();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
}

inline void validate(const SimulationConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("simulation: trials must be >= 1");
    if (const auto* g = std::get_if<GroupFamily>(&config.family)) {
        if (g->m < 1) throw std::invalid_argument("simulation: m must be >= 1");
        const unsigned limit = std::min(config.max_m, kHardMaxM);
        if (g->m > limit) {
            throw ResourceLimit("simulation: m = " + std::to_string(g->m) + " exceeds the limit " + std::to_string(limit));
        }
        if (g->r > kMaxDimension) throw std::invalid_argument("simulation: r must be <= 64");
    } else {
        const auto& e = std::get<ErFamily>(config.family);
        if (e.n < 1) throw std::invalid_argument("simulation: n must be >= 1");
        if (!(e.p >= 0.0 && e.p <= 1.0)) throw std::invalid_argument("simulation: p must lie in [0, 1]");
        const unsigned limit = std::min(config.max_m, kHardMaxM);
        if (static_cast<std::uint64_t>(e.n) > (std::uint64_t{1} << limit)) {
            throw ResourceLimit("simulation: n = " + std::to_string(e.n) + " exceeds 2^" + std::to_string(limit));
        }
    }
}

struct TrialOutcome {
    TrialRecord record;
    std::optional<CommutatorTable> table;
    std::optional<DiameterReport> report;
};

inline TrialOutcome run_one(const SimulationConfig& config, std::uint64_t index, bool keep_artifacts) {
    TrialOutcome out;
    out.record.index = index;
    out.record.stream_key = derive_stream_key(config.master_seed, index);
    CounterRng rng(out.record.stream_key);
    std::optional<CommutingGraph> graph;
    if (const auto* g = std::get_if<GroupFamily>(&config.family)) {
        auto table = sample_table(g->m, g->r, rng);
        const auto structure = structural_report(table);
        out.record.derived_spans = structure.derived_spans;
        out.record.center_trivial = structure.center_trivial;
        graph.emplace(build_graph(table, config.max_m));
        if (keep_artifacts) out.table = std::move(table);
    } else {
        const auto& e = std::get<ErFamily>(config.family);
        graph.emplace(sample_gnp(e.n, e.p, rng));
    }
    auto rep = diameter(*graph);
    out.record.diameter = rep.diameter;
    out.record.largest_component = rep.largest_component;
    if (keep_artifacts) out.report = std::move(rep);
    return out;
}

inline std::uint32_t family_vertex_count(const Family& f) {
    if (const auto* g = std::get_if<GroupFamily>(&f)) return static_cast<std::uint32_t>((std::uint64_t{1} << g->m) - 1);
    return std::get<ErFamily>(f).n;
}

}  // namespace detail

/// Runs every trial and aggregates in trial-index order.
inline TrialBatchResult run_trials(const SimulationConfig& config) {
    detail::validate(config);
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialRecord> records(config.trials);
    detail::parallel_for(0, config.trials, detail::resolve_workers(config.worker_count),
                         [&](std::uint64_t t) { records[t] = detail::run_one(config, t, false).record; });

    TrialBatchResult res;
    res.family = config.family;
    res.trials = config.trials;
    res.master_seed = config.master_seed;
    const double n = detail::family_vertex_count(config.family);
    double sum = 0;
    res.largest_component_fraction.min = std::numeric_limits<double>::infinity();
    res.largest_component_fraction.max = 0;
    for (const auto& rec : records) {
        if (rec.diameter.is_finite()) {
            ++res.histogram[rec.diameter.value()];
        } else {
            ++res.disconnected_count;
        }
        if (!(rec.derived_spans && rec.center_trivial)) ++res.structural_fail_count;
        const double frac = rec.largest_component / n;
        sum += frac;
        res.largest_component_fraction.min = std::min(res.largest_component_fraction.min, frac);
        res.largest_component_fraction.max = std::max(res.largest_component_fraction.max, frac);
    }
    res.largest_component_fraction.mean = sum / static_cast<double>(config.trials);
    if (config.keep_records) res.records = std::move(records);
    res.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

struct HuntWitness {
    CommutatorTable table;
    DiameterReport report;
    std::vector<std::uint32_t> degrees;
    TrialRecord record;
};

struct HuntResult {
    std::optional<HuntWitness> witness;
    /// Trials examined: witness index + 1 on success, the whole budget otherwise.
    std::uint64_t trials_consumed = 0;
};

/**
 * First trial index (in order) whose graph is connected with diameter at
 * least config.hunt_target; config.trials is the budget. Trials are examined
 * in parallel blocks, and the smallest successful index wins, so the witness
 * does not depend on the worker count.
 */
inline HuntResult hunt(const SimulationConfig& config) {
    detail::validate(config);
    if (!std::holds_alternative<GroupFamily>(config.family)) throw std::invalid_argument("hunt: requires the group family");
    if (!config.hunt_target || *config.hunt_target < 1) throw std::invalid_argument("hunt: target diameter must be >= 1");
    const Distance target(*config.hunt_target);
    const unsigned workers = detail::resolve_workers(config.worker_count);
    const std::uint64_t block = std::max<std::uint64_t>(1, 4ULL * workers);

    HuntResult res;
    for (std::uint64_t begin = 0; begin < config.trials; begin += block) {
        const std::uint64_t end = std::min(config.trials, begin + block);
        std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
        detail::parallel_for(begin, end, workers, [&](std::uint64_t t) {
            const auto rec = detail::run_one(config, t, false).record;
            if (rec.diameter.is_finite() && rec.diameter >= target) {
                std::uint64_t cur = best.load();
                while (t < cur && !best.compare_exchange_weak(cur, t)) {
                }
            }
        });
        if (best.load() != std::numeric_limits<std::uint64_t>::max()) {
            auto out = detail::run_one(config, best.load(), true);
            CommutingGraph g = build_graph(*out.table, config.max_m);
            res.witness = HuntWitness{*out.table, *out.report, degree_sequence(g), out.record};
            res.trials_consumed = best.load() + 1;
            return res;
        }
    }
    res.trials_consumed = config.trials;
    return res;
}

struct CoupledTrial {
    std::vector<Distance> diameters;  // one per r, ascending r
    bool nested = true;               // edges(r_{i+1}) subset of edges(r_i) for all i
};

/**
 * Coupled samples across several r: each trial draws one table at the
 * largest r and truncates it to every smaller r, so the r-bit values are
 * prefixes of the (r+1)-bit values.
 */
inline std::vector<CoupledTrial> coupled_trials(unsigned m, std::vector<unsigned> rs, std::uint64_t trials,
                                                std::uint64_t master_seed, std::optional<unsigned> workers = {}) {
    if (rs.empty()) throw std::invalid_argument("coupled_trials: no r values");
    std::sort(rs.begin(), rs.end());
    const auto probe = make_config(GroupFamily{m, rs.back()}, trials, master_seed);
    detail::validate(probe);
    std::vector<CoupledTrial> out(trials);
    detail::parallel_for(0, trials, detail::resolve_workers(workers), [&](std::uint64_t t) {
        CounterRng rng = CounterRng::for_trial(master_seed, t);
        const auto full = sample_table(m, rs.back(), rng);
        std::optional<CommutingGraph> prev;
        CoupledTrial ct;
        for (unsigned r : rs) {
            CommutingGraph g = build_graph(full.truncated(r));
            ct.diameters.push_back(diameter(g).diameter);
            if (prev && !g.is_subgraph_of(*prev)) ct.nested = false;
            prev = std::move(g);
        }
        out[t] = std::move(ct);
    });
    return out;
}

struct PathStats {
    unsigned m = 0;
    unsigned r = 0;
    unsigned length = 0;
    std::uint64_t trials = 0;
    double mean = 0;
    double stddev = 0;
    double standard_error = 0;
    /// Exact G(n, 2^-r) expectation for the same n and length.
    double er_expected = 0;
    double ratio = 0;
    /// Mean over trials where the endpoints are not adjacent (exploratory).
    std::optional<double> mean_given_nonadjacent;
};

/// Counts simple paths of the given length between e_1 and e_2 over fresh tables.
template <class Rng>
PathStats path_stats_probe(unsigned m, unsigned r, unsigned length, std::uint64_t trials, Rng& rng) {
    if (m < 2 || m > 6) throw std::invalid_argument("path_stats_probe: m must be in 2..6");
    if (length < 1 || length > 4) throw ResourceLimit("path_stats_probe: length must be in 1..4");
    if (trials < 1) throw std::invalid_argument("path_stats_probe: trials must be >= 1");
    PathStats st;
    st.m = m;
    st.r = r;
    st.length = length;
    st.trials = trials;
    double sum = 0, sumsq = 0, cond_sum = 0;
    std::uint64_t cond_n = 0;
    // e_1 has label 1 (index 0), e_2 has label 2 (index 1)
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto g = build_graph(sample_table(m, r, rng));
        const double c = static_cast<double>(count_simple_paths(g, 0, 1, length));
        sum += c;
        sumsq += c * c;
        if (!g.adjacent(0, 1)) {
            cond_sum += c;
            ++cond_n;
        }
    }
    const double n = static_cast<double>((1U << m) - 1);
    st.mean = sum / trials;
    st.stddev = trials > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1))) : 0.0;
    st.standard_error = st.stddev / std::sqrt(static_cast<double>(trials));
    st.er_expected = expected_simple_paths(n, std::ldexp(1.0, -static_cast<int>(r)), length);
    st.ratio = st.er_expected > 0 ? st.mean / st.er_expected : 0.0;
    if (cond_n > 0) st.mean_given_nonadjacent = cond_sum / static_cast<double>(cond_n);
    return st;
}

}  // namespace commgraph
