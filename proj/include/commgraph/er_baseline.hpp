#pragma once

// Erdos-Renyi G(n, p) baseline, the path-count calculators used in the
// diameter concentration argument, and the (k, delta, m) -> r planner.

#include <commgraph/graph.hpp>
#include <commgraph/rng.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace commgraph {

struct ErPlan {
    unsigned k = 2;
    double delta = 0;
    unsigned m = 0;
    /// Grid value of delta1 that produced r; empty for a directly evaluated r
    /// that no grid point reaches.
    std::optional<double> delta1;
    unsigned r = 0;
    double p = 1;
    std::uint64_t n = 0;
    double epsilon_n = 1;
    double window_low = 0;
    double window_high = 1;
    bool valid = false;
    /// The k' with 1/k' < epsilon_n < 1/(k'-1), if epsilon_n is not a reciprocal.
    std::optional<unsigned> predicted_diameter;
};

/// epsilon with p = n^(-1 + epsilon).
inline double epsilon_for(double n, double p) { return 1.0 + std::log(p) / std::log(n); }

/// Integer k >= 2 with k - 1 < 1/epsilon < k, if any (epsilon in (0, 1)).
inline std::optional<unsigned> predicted_diameter(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) return std::nullopt;
    const double inv = 1.0 / epsilon;
    const double k = std::ceil(inv);
    if (k == inv) return std::nullopt;
    return static_cast<unsigned>(k);
}

namespace detail {
inline void check_plan_inputs(unsigned k, double delta, unsigned m) {
    if (k < 2) throw std::invalid_argument("plan: k must be >= 2");
    const double limit = 1.0 / (2.0 * k * (k - 1));
    if (!(delta > 0.0 && delta < limit)) {
        throw std::invalid_argument("plan: delta must lie in (0, " + std::to_string(limit) + ")");
    }
    if (m < 2 || m > kMaxDimension) throw std::invalid_argument("plan: m must be in 2..64");
}

// r = floor((1 - delta1) m) for delta1 = step / 100, in exact integer arithmetic.
inline unsigned r_for_grid_step(unsigned m, unsigned step) { return (100 - step) * m / 100; }
}  // namespace detail

/// Plan for a given r (no grid search): epsilon_n and the window test.
inline ErPlan evaluate_plan(unsigned k, double delta, unsigned m, unsigned r) {
    detail::check_plan_inputs(k, delta, m);
    ErPlan plan;
    plan.k = k;
    plan.delta = delta;
    plan.m = m;
    plan.r = r;
    plan.p = std::ldexp(1.0, -static_cast<int>(r));
    plan.n = (std::uint64_t{1} << m) - 1;
    plan.epsilon_n = 1.0 - static_cast<double>(r) / std::log2(static_cast<double>(plan.n));
    plan.window_low = 1.0 / k + delta;
    plan.window_high = 1.0 / (k - 1) - delta;
    plan.valid = plan.epsilon_n > plan.window_low && plan.epsilon_n < plan.window_high;
    plan.predicted_diameter = predicted_diameter(plan.epsilon_n);
    for (unsigned step = 1; step < 100; ++step) {
        if (detail::r_for_grid_step(m, step) == r) {
            plan.delta1 = step / 100.0;
            break;
        }
    }
    return plan;
}

/**
 * Searches delta1 over 0.01, 0.02, ..., 0.99 and keeps the r whose epsilon_n
 * lies closest to the window midpoint. Ties keep the smaller delta1. `valid`
 * is false when no grid point lands inside the window.
 */
inline ErPlan plan_parameters(unsigned k, double delta, unsigned m) {
    detail::check_plan_inputs(k, delta, m);
    std::optional<ErPlan> best;
    double best_gap = 0;
    const double mid = 0.5 * (1.0 / k + 1.0 / (k - 1));
    for (unsigned step = 1; step < 100; ++step) {
        ErPlan cand = evaluate_plan(k, delta, m, detail::r_for_grid_step(m, step));
        cand.delta1 = step / 100.0;
        const double gap = std::abs(cand.epsilon_n - mid);
        if (!best || gap < best_gap) {
            best = cand;
            best_gap = gap;
        }
    }
    return *best;
}

/// G(n, p): pairs (i, j), i < j, visited in lexicographic order, one uniform draw each.
template <class Rng>
CommutingGraph sample_gnp(std::uint32_t n, double p, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_gnp: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_gnp: p must lie in [0, 1]");
    CommutingGraph g(n, ErOrigin{n, p});
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < p) {
                g.set_bit(i, j);
                g.set_bit(j, i);
            }
        }
    }
    return g;
}

/// Exact expected number of simple a-b paths of length l in G(n, p):
/// p^l (n-2)(n-3)...(n-l).
inline double expected_simple_paths(double n, double p, unsigned l) {
    if (n < 2) throw std::invalid_argument("expected_simple_paths: n must be >= 2");
    if (l < 1) throw std::invalid_argument("expected_simple_paths: l must be >= 1");
    double value = std::pow(p, l);
    for (unsigned i = 2; i <= l; ++i) value *= (n - i);
    return value;
}

/**
 * Leading-order sum over pairs of dependent length-k paths sharing l edges,
 * sum_{l=1}^{k-1} n^(2k-2-l) p^(2k-l), with the unknown constant set to 1.
 * A heuristic magnitude, not a bound.
 */
inline double delta_main_term(double n, double p, unsigned k) {
    if (k < 2) throw std::invalid_argument("delta_main_term: k must be >= 2");
    double sum = 0;
    for (unsigned l = 1; l <= k - 1; ++l) {
        sum += std::pow(n, 2.0 * k - 2 - l) * std::pow(p, 2.0 * k - l);
    }
    return sum;
}

/// Janson upper bound on P(no a-b path): exp(-mu + delta/2) if delta <= mu,
/// else exp(-mu^2 / (2 delta)); clamped to [0, 1].
inline double janson_bound(double mu, double delta) {
    if (mu < 0 || delta < 0) throw std::invalid_argument("janson_bound: mu and delta must be >= 0");
    if (mu == 0 && delta == 0) return 1.0;
    const double bound = delta <= mu ? std::exp(-mu + delta / 2.0) : std::exp(-mu * mu / (2.0 * delta));
    return std::clamp(bound, 0.0, 1.0);
}

struct PathMoments {
    double mu_exact = 0;
    double delta_main = 0;
    double janson_bound = 1;
};

inline PathMoments path_moments(double n, double p, unsigned k) {
    PathMoments pm;
    pm.mu_exact = expected_simple_paths(n, p, k);
    pm.delta_main = delta_main_term(n, p, k);
    pm.janson_bound = janson_bound(pm.mu_exact, pm.delta_main);
    return pm;
}

}  // namespace commgraph
