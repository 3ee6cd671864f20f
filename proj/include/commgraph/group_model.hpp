#pragma once

// The random class-2 group model: sampling structure constants and checking
// the structural properties that hold with high probability (commutators
// span H, the center is exactly <z, w>).

#include <commgraph/gf2.hpp>
#include <commgraph/rng.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace commgraph {

/**
 * Draws one uniform element of F2^r per pair, pairs in lexicographic order,
 * exactly r bits per pair taken from `rng` as a contiguous bit stream.
 */
template <class Rng>
CommutatorTable sample_table(unsigned m, unsigned r, Rng& rng) {
    if (m > kMaxDimension || r > kMaxDimension) throw std::invalid_argument("sample_table: m and r must be <= 64");
    std::vector<GF2Vector> values;
    values.reserve(CommutatorTable::pair_count(m));
    BitStream<Rng> bits(rng);
    for (std::size_t k = 0; k < CommutatorTable::pair_count(m); ++k) {
        values.emplace_back(r, r == 0 ? 0 : bits.take(r));
    }
    return CommutatorTable(m, r, std::move(values));
}

struct DerivedSpan {
    bool spans = false;
    std::size_t rank = 0;
};

/// Whether the commutator values span all of F2^r (G' = H).
inline DerivedSpan check_derived_span(const CommutatorTable& table) {
    const std::size_t rank = vec_rank(table.values());
    return {rank == table.r(), rank};
}

struct CenterCheck {
    bool trivial = true;
    /// Basis of the radical {u : B(u, v) = 0 for all v}; empty iff trivial.
    std::vector<GF2Vector> radical_basis;
};

/**
 * Radical of the commutator form: null space of v -> (B(e_1, v), ..., B(e_m, v)).
 * The image of e_j is its row map, so elimination runs over m-word rows.
 */
inline CenterCheck check_center_trivial(const CommutatorTable& table) {
    const unsigned m = table.m();
    struct Row {
        std::vector<std::uint64_t> image;
        std::uint64_t combination;
    };
    std::vector<Row> pivots;  // reduced rows, each with a distinct pivot
    std::vector<std::pair<std::size_t, int>> pivot_pos;
    CenterCheck out;

    auto leading = [](const std::vector<std::uint64_t>& image) -> std::optional<std::pair<std::size_t, int>> {
        for (std::size_t w = 0; w < image.size(); ++w) {
            if (image[w] != 0) return std::pair{w, 63 - std::countl_zero(image[w])};
        }
        return std::nullopt;
    };

    for (unsigned j = 0; j < m; ++j) {
        Row row{{}, std::uint64_t{1} << j};
        row.image.reserve(m);
        for (const auto& w : row_map(table, GF2Vector::unit(j, m))) row.image.push_back(w.bits());

        for (std::size_t k = 0; k < pivots.size(); ++k) {
            const auto [w, b] = pivot_pos[k];
            if ((row.image[w] >> b) & 1U) {
                for (std::size_t t = 0; t < m; ++t) row.image[t] ^= pivots[k].image[t];
                row.combination ^= pivots[k].combination;
            }
        }
        if (auto lead = leading(row.image)) {
            pivot_pos.push_back(*lead);
            pivots.push_back(std::move(row));
        } else {
            out.radical_basis.emplace_back(m, row.combination);
        }
    }
    out.trivial = out.radical_basis.empty();
    return out;
}

struct GroupOrders {
    /// Exponents: |G'| = 2^derived, |Z(G)| = 2^center, |G/Z(G)| = 2^quotient.
    unsigned derived = 0;
    unsigned center = 0;
    unsigned quotient = 0;
};

struct StructuralReport {
    std::size_t derived_rank = 0;
    bool derived_spans = false;
    bool center_trivial = false;
    std::vector<GF2Vector> radical_basis;
    /// Present only when both checks pass.
    std::optional<GroupOrders> claimed_orders;

    [[nodiscard]] bool passed() const noexcept { return derived_spans && center_trivial; }
};

inline StructuralReport structural_report(const CommutatorTable& table) {
    StructuralReport rep;
    const auto span = check_derived_span(table);
    rep.derived_rank = span.rank;
    rep.derived_spans = span.spans;
    auto center = check_center_trivial(table);
    rep.center_trivial = center.trivial;
    rep.radical_basis = std::move(center.radical_basis);
    if (rep.passed()) rep.claimed_orders = GroupOrders{table.r(), table.m() + table.r(), table.m()};
    return rep;
}

}  // namespace commgraph
