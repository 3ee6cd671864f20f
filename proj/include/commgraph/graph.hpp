#pragma once

// Bit-row adjacency graphs and the distance computations run on them:
// components, eccentricities and diameter via word-parallel BFS, degree
// sequences and short simple-path counts.

#include <commgraph/gf2.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace commgraph {

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Default upper bound on m for materialized group graphs.
inline constexpr unsigned kDefaultMaxM = 16;
/// Hard upper bound regardless of configuration (vertex ids are 32-bit).
inline constexpr unsigned kHardMaxM = 30;

/// A graph distance or eccentricity; `infinite()` orders above every finite value.
class Distance {
public:
    constexpr Distance() = default;
    constexpr explicit Distance(std::uint32_t value) : value_{value} {
        if (value == kInf) throw std::invalid_argument("Distance: value reserved for infinity");
    }
    static constexpr Distance infinite() noexcept {
        Distance d;
        d.value_ = kInf;
        return d;
    }

    [[nodiscard]] constexpr bool is_finite() const noexcept { return value_ != kInf; }
    [[nodiscard]] constexpr std::uint32_t value() const {
        if (!is_finite()) throw std::logic_error("Distance: infinite distance has no value");
        return value_;
    }
    [[nodiscard]] std::string to_string() const { return is_finite() ? std::to_string(value_) : "inf"; }

    friend constexpr auto operator<=>(const Distance&, const Distance&) = default;

private:
    static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
    std::uint32_t value_ = 0;
};

struct GroupOrigin {
    unsigned m;
    unsigned r;
};
struct ErOrigin {
    std::uint32_t n;
    double p;
};
struct ExplicitOrigin {};
using GraphOrigin = std::variant<ExplicitOrigin, GroupOrigin, ErOrigin>;

/**
 * Undirected simple graph on vertices 0..n-1 stored as n bit-rows.
 * For group-derived graphs vertex index k carries the subset label k + 1.
 */
class CommutingGraph {
public:
    explicit CommutingGraph(std::uint32_t n, GraphOrigin origin = ExplicitOrigin{})
        : n_{n}, words_{(static_cast<std::size_t>(n) + 63) / 64}, bits_(words_ * n, 0), origin_{origin} {}

    [[nodiscard]] std::uint32_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] std::size_t words_per_row() const noexcept { return words_; }
    [[nodiscard]] const GraphOrigin& origin() const noexcept { return origin_; }

    [[nodiscard]] std::span<const std::uint64_t> row(std::uint32_t u) const {
        return {bits_.data() + static_cast<std::size_t>(u) * words_, words_};
    }

    [[nodiscard]] bool adjacent(std::uint32_t u, std::uint32_t v) const {
        check(u);
        check(v);
        return (bits_[static_cast<std::size_t>(u) * words_ + v / 64] >> (v % 64)) & 1U;
    }

    void add_edge(std::uint32_t u, std::uint32_t v) {
        check(u);
        check(v);
        if (u == v) throw std::invalid_argument("CommutingGraph: self-loop");
        set_bit(u, v);
        set_bit(v, u);
    }

    [[nodiscard]] std::uint32_t degree(std::uint32_t u) const {
        std::uint32_t d = 0;
        for (auto w : row(u)) d += static_cast<std::uint32_t>(std::popcount(w));
        return d;
    }

    [[nodiscard]] std::uint64_t edge_count() const {
        std::uint64_t total = 0;
        for (auto w : bits_) total += static_cast<std::uint64_t>(std::popcount(w));
        return total / 2;
    }

    /// Every edge of this graph is also an edge of `other` (same vertex count).
    [[nodiscard]] bool is_subgraph_of(const CommutingGraph& other) const {
        if (other.n_ != n_) return false;
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if ((bits_[k] & ~other.bits_[k]) != 0) return false;
        }
        return true;
    }

    friend bool operator==(const CommutingGraph& a, const CommutingGraph& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

    // Unchecked one-directional write for builders that fill symmetric rows.
    void set_bit(std::uint32_t u, std::uint32_t v) noexcept {
        bits_[static_cast<std::size_t>(u) * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    }
    [[nodiscard]] std::span<std::uint64_t> mutable_row(std::uint32_t u) {
        return {bits_.data() + static_cast<std::size_t>(u) * words_, words_};
    }

private:
    void check(std::uint32_t u) const {
        if (u >= n_) throw std::out_of_range("CommutingGraph: vertex " + std::to_string(u) + " out of range");
    }

    std::uint32_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
    GraphOrigin origin_;
};

namespace detail {
inline void check_buildable(const CommutatorTable& table, unsigned max_m) {
    if (table.m() < 1) throw std::invalid_argument("build_graph: m must be >= 1");
    const unsigned limit = std::min(max_m, kHardMaxM);
    if (table.m() > limit) {
        throw ResourceLimit("build_graph: m = " + std::to_string(table.m()) + " exceeds the limit " +
                            std::to_string(limit));
    }
}
}  // namespace detail

/**
 * Commuting graph of the table: vertex labels 1..2^m-1, {u, v} an edge iff
 * B(u, v) = 0. Each row evaluates B(u, .) at all labels from u's row map by
 * peeling off the lowest set bit, so one row costs O(2^m).
 */
inline CommutingGraph build_graph(const CommutatorTable& table, unsigned max_m = kDefaultMaxM) {
    detail::check_buildable(table, max_m);
    const unsigned m = table.m();
    const auto n = static_cast<std::uint32_t>(table.vertex_count());
    CommutingGraph g(n, GroupOrigin{m, table.r()});
    std::vector<std::uint64_t> value(static_cast<std::size_t>(n) + 1);
    std::vector<std::uint64_t> words(m);
    for (std::uint32_t u = 1; u <= n; ++u) {
        const auto row = row_map(table, GF2Vector(m, u));
        for (unsigned j = 0; j < m; ++j) words[j] = row[j].bits();
        value[0] = 0;
        auto out = g.mutable_row(u - 1);
        for (std::uint32_t v = 1; v <= n; ++v) {
            value[v] = value[v & (v - 1)] ^ words[static_cast<unsigned>(std::countr_zero(v))];
            if (value[v] == 0 && v != u) out[(v - 1) / 64] |= std::uint64_t{1} << ((v - 1) % 64);
        }
    }
    return g;
}

/// Same graph as build_graph, evaluating bilinear_eval on every pair.
inline CommutingGraph build_graph_naive(const CommutatorTable& table, unsigned max_m = kDefaultMaxM) {
    detail::check_buildable(table, max_m);
    const unsigned m = table.m();
    const auto n = static_cast<std::uint32_t>(table.vertex_count());
    CommutingGraph g(n, GroupOrigin{m, table.r()});
    for (std::uint32_t u = 1; u <= n; ++u) {
        for (std::uint32_t v = u + 1; v <= n; ++v) {
            if (bilinear_eval(table, GF2Vector(m, u), GF2Vector(m, v)).is_zero()) g.add_edge(u - 1, v - 1);
        }
    }
    return g;
}

namespace detail {

/// Scratch state for repeated bitset BFS over one graph.
class Bfs {
public:
    explicit Bfs(const CommutingGraph& g) : g_{g}, visited_(g.words_per_row()), frontier_(g.words_per_row()), next_(g.words_per_row()) {}

    /// Levels from `source`; returns (vertices reached, last level reached).
    std::pair<std::uint32_t, std::uint32_t> run(std::uint32_t source) {
        std::fill(visited_.begin(), visited_.end(), 0);
        std::fill(frontier_.begin(), frontier_.end(), 0);
        visited_[source / 64] |= std::uint64_t{1} << (source % 64);
        frontier_[source / 64] |= std::uint64_t{1} << (source % 64);
        const std::uint32_t n = g_.vertex_count();
        std::uint32_t reached = 1;
        std::uint32_t level = 0;
        while (reached < n) {
            std::fill(next_.begin(), next_.end(), 0);
            for (std::size_t w = 0; w < frontier_.size(); ++w) {
                for (std::uint64_t bits = frontier_[w]; bits != 0; bits &= bits - 1) {
                    const auto u = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                    const auto row = g_.row(u);
                    for (std::size_t k = 0; k < next_.size(); ++k) next_[k] |= row[k];
                }
            }
            std::uint32_t added = 0;
            for (std::size_t k = 0; k < next_.size(); ++k) {
                next_[k] &= ~visited_[k];
                visited_[k] |= next_[k];
                added += static_cast<std::uint32_t>(std::popcount(next_[k]));
            }
            if (added == 0) break;
            reached += added;
            ++level;
            frontier_.swap(next_);
        }
        return {reached, level};
    }

    [[nodiscard]] std::span<const std::uint64_t> visited() const noexcept { return visited_; }

private:
    const CommutingGraph& g_;
    std::vector<std::uint64_t> visited_;
    std::vector<std::uint64_t> frontier_;
    std::vector<std::uint64_t> next_;
};

}  // namespace detail

/// Component sizes in non-increasing order; they sum to n.
inline std::vector<std::uint32_t> components(const CommutingGraph& g) {
    const std::uint32_t n = g.vertex_count();
    std::vector<std::uint64_t> seen(g.words_per_row(), 0);
    std::vector<std::uint32_t> sizes;
    detail::Bfs bfs(g);
    for (std::uint32_t v = 0; v < n; ++v) {
        if ((seen[v / 64] >> (v % 64)) & 1U) continue;
        sizes.push_back(bfs.run(v).first);
        const auto vis = bfs.visited();
        for (std::size_t k = 0; k < seen.size(); ++k) seen[k] |= vis[k];
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

inline Distance eccentricity(const CommutingGraph& g, std::uint32_t v) {
    if (v >= g.vertex_count()) throw std::out_of_range("eccentricity: vertex " + std::to_string(v) + " out of range");
    detail::Bfs bfs(g);
    const auto [reached, level] = bfs.run(v);
    return reached == g.vertex_count() ? Distance(level) : Distance::infinite();
}

struct DiameterReport {
    bool connected = false;
    Distance diameter = Distance::infinite();
    std::vector<Distance> eccentricities;
    std::vector<std::uint32_t> component_sizes;  // non-increasing
    std::uint32_t largest_component = 0;
};

/**
 * Components first; a disconnected graph short-circuits to infinite
 * eccentricities and diameter. Otherwise one BFS per source, fanned out over
 * `workers` threads (0 = hardware concurrency). The result does not depend on
 * the worker count.
 */
inline DiameterReport diameter(const CommutingGraph& g, unsigned workers = 1) {
    DiameterReport rep;
    const std::uint32_t n = g.vertex_count();
    rep.component_sizes = components(g);
    rep.largest_component = rep.component_sizes.empty() ? 0 : rep.component_sizes.front();
    rep.connected = rep.component_sizes.size() == 1;
    if (!rep.connected) {
        rep.eccentricities.assign(n, Distance::infinite());
        rep.diameter = Distance::infinite();
        return rep;
    }
    rep.eccentricities.assign(n, Distance(0));
    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, std::max<std::uint32_t>(1, n / 64));

    auto sweep = [&](std::atomic<std::uint32_t>& next) {
        detail::Bfs bfs(g);
        for (std::uint32_t v = next++; v < n; v = next++) rep.eccentricities[v] = Distance(bfs.run(v).second);
    };
    std::atomic<std::uint32_t> next{0};
    if (workers <= 1) {
        sweep(next);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back([&] { sweep(next); });
    }
    rep.diameter = *std::max_element(rep.eccentricities.begin(), rep.eccentricities.end());
    return rep;
}

/// Degrees in non-increasing order.
inline std::vector<std::uint32_t> degree_sequence(const CommutingGraph& g) {
    std::vector<std::uint32_t> deg(g.vertex_count());
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) deg[u] = g.degree(u);
    std::sort(deg.begin(), deg.end(), std::greater<>());
    return deg;
}

inline constexpr unsigned kMaxPathLength = 6;

/// Simple paths a -> b with exactly `length` edges, by pruned depth-first enumeration.
inline std::uint64_t count_simple_paths(const CommutingGraph& g, std::uint32_t a, std::uint32_t b, unsigned length) {
    if (length < 1 || length > kMaxPathLength) {
        throw ResourceLimit("count_simple_paths: length must be in 1.." + std::to_string(kMaxPathLength));
    }
    if (a >= g.vertex_count() || b >= g.vertex_count()) throw std::out_of_range("count_simple_paths: vertex out of range");
    if (a == b) throw std::invalid_argument("count_simple_paths: endpoints must differ");

    std::vector<std::uint64_t> on_path(g.words_per_row(), 0);
    auto mark = [&](std::uint32_t v) { on_path[v / 64] ^= std::uint64_t{1} << (v % 64); };
    mark(a);
    mark(b);

    std::uint64_t count = 0;
    auto extend = [&](auto&& self, std::uint32_t u, unsigned remaining) -> void {
        if (remaining == 1) {
            count += g.adjacent(u, b) ? 1 : 0;
            return;
        }
        const auto row = g.row(u);
        for (std::size_t w = 0; w < row.size(); ++w) {
            for (std::uint64_t bits = row[w] & ~on_path[w]; bits != 0; bits &= bits - 1) {
                const auto v = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                mark(v);
                self(self, v, remaining - 1);
                mark(v);
            }
        }
    };
    extend(extend, a, length);
    return count;
}

}  // namespace commgraph
