#pragma once

// Vectors over F2 packed into a single machine word, rank by elimination, and
// the alternating bilinear form defined by a table of commutator values.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace commgraph {

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest supported dimension for a single GF2Vector.
inline constexpr unsigned kMaxDimension = 64;

/// Bit mask selecting the low `dim` bits.
constexpr std::uint64_t low_mask(unsigned dim) noexcept {
    return dim >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim) - 1;
}

/**
 * A vector in F2^d, d <= 64. Coordinate i (0-based) is bit i of the word,
 * least significant first, so generator x_{i+1} corresponds to bit i.
 */
class GF2Vector {
public:
    GF2Vector() = default;

    explicit GF2Vector(unsigned dimension, std::uint64_t bits = 0) : bits_{bits}, dim_{dimension} {
        if (dimension > kMaxDimension) {
            throw std::invalid_argument("GF2Vector: dimension " + std::to_string(dimension) +
                                        " exceeds " + std::to_string(kMaxDimension));
        }
        if ((bits & ~low_mask(dimension)) != 0) {
            throw std::invalid_argument("GF2Vector: bits set beyond dimension " +
                                        std::to_string(dimension));
        }
    }

    static GF2Vector zero(unsigned dimension) { return GF2Vector(dimension); }

    static GF2Vector unit(unsigned index, unsigned dimension) {
        if (index >= dimension) throw std::out_of_range("GF2Vector::unit: index out of range");
        return GF2Vector(dimension, std::uint64_t{1} << index);
    }

    [[nodiscard]] unsigned dimension() const noexcept { return dim_; }
    [[nodiscard]] std::uint64_t bits() const noexcept { return bits_; }
    [[nodiscard]] bool is_zero() const noexcept { return bits_ == 0; }
    [[nodiscard]] bool test(unsigned i) const noexcept { return i < dim_ && ((bits_ >> i) & 1U) != 0; }
    [[nodiscard]] unsigned weight() const noexcept { return static_cast<unsigned>(std::popcount(bits_)); }

    GF2Vector& operator^=(const GF2Vector& other) {
        require_same_dimension(other);
        bits_ ^= other.bits_;
        return *this;
    }

    friend GF2Vector operator^(GF2Vector a, const GF2Vector& b) { return a ^= b; }
    friend bool operator==(const GF2Vector&, const GF2Vector&) = default;

    /// Coordinates as '0'/'1' characters, coordinate 0 leftmost.
    [[nodiscard]] std::string to_string() const {
        std::string s(dim_, '0');
        for (unsigned i = 0; i < dim_; ++i) {
            if (test(i)) s[i] = '1';
        }
        return s;
    }

    static GF2Vector from_string(const std::string& digits) {
        if (digits.size() > kMaxDimension) throw std::invalid_argument("GF2Vector: bit string too long");
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (digits[i] == '1') {
                bits |= std::uint64_t{1} << i;
            } else if (digits[i] != '0') {
                throw std::invalid_argument("GF2Vector: invalid binary digit '" + std::string(1, digits[i]) + "'");
            }
        }
        return GF2Vector(static_cast<unsigned>(digits.size()), bits);
    }

    void require_same_dimension(const GF2Vector& other) const {
        if (other.dim_ != dim_) {
            throw DimensionMismatch("GF2Vector: dimension " + std::to_string(dim_) + " vs " +
                                    std::to_string(other.dim_));
        }
    }

private:
    std::uint64_t bits_ = 0;
    unsigned dim_ = 0;
};

/// Dimension of the F2-span of `vectors`. All vectors must share one dimension.
inline std::size_t vec_rank(std::span<const GF2Vector> vectors) {
    if (vectors.empty()) return 0;
    const unsigned dim = vectors.front().dimension();
    // basis[b] holds a reduced vector whose highest set bit is b, or 0.
    std::uint64_t basis[kMaxDimension] = {};
    std::size_t rank = 0;
    for (const auto& v : vectors) {
        if (v.dimension() != dim) {
            throw DimensionMismatch("vec_rank: mixed dimensions " + std::to_string(dim) + " and " +
                                    std::to_string(v.dimension()));
        }
        std::uint64_t x = v.bits();
        while (x != 0) {
            const int top = 63 - std::countl_zero(x);
            if (basis[top] == 0) {
                basis[top] = x;
                ++rank;
                break;
            }
            x ^= basis[top];
        }
    }
    return rank;
}

/**
 * Structure constants of a class-2 group: one r-bit commutator value
 * c_{ij} = [x_i, x_j] per generator pair i < j, stored in lexicographic pair
 * order. Generator indices in this API are 0-based.
 */
class CommutatorTable {
public:
    CommutatorTable(unsigned m, unsigned r) : m_{m}, r_{r}, values_(pair_count(m), GF2Vector::zero(r)) {
        if (m > kMaxDimension) throw std::invalid_argument("CommutatorTable: m exceeds 64");
    }

    CommutatorTable(unsigned m, unsigned r, std::vector<GF2Vector> values)
        : m_{m}, r_{r}, values_(std::move(values)) {
        if (m > kMaxDimension) throw std::invalid_argument("CommutatorTable: m exceeds 64");
        if (values_.size() != pair_count(m)) {
            throw std::invalid_argument("CommutatorTable: expected " + std::to_string(pair_count(m)) +
                                        " values, got " + std::to_string(values_.size()));
        }
        for (const auto& v : values_) {
            if (v.dimension() != r) throw DimensionMismatch("CommutatorTable: value dimension differs from r");
        }
    }

    static constexpr std::size_t pair_count(unsigned m) noexcept {
        return static_cast<std::size_t>(m) * (m == 0 ? 0 : m - 1) / 2;
    }

    /// Slot of pair (i, j), 0 <= i < j < m, in lexicographic order.
    static constexpr std::size_t pair_slot(unsigned m, unsigned i, unsigned j) noexcept {
        return static_cast<std::size_t>(i) * (2 * m - i - 1) / 2 + (j - i - 1);
    }

    [[nodiscard]] unsigned m() const noexcept { return m_; }
    [[nodiscard]] unsigned r() const noexcept { return r_; }
    /// Number of vertices of the commuting graph, 2^m - 1.
    [[nodiscard]] std::uint64_t vertex_count() const noexcept { return (std::uint64_t{1} << m_) - 1; }
    /// Edge probability 2^-r of the model.
    [[nodiscard]] double edge_probability() const noexcept { return std::ldexp(1.0, -static_cast<int>(r_)); }

    [[nodiscard]] std::span<const GF2Vector> values() const noexcept { return values_; }

    /// c_{ij} for i != j (either order); zero on the diagonal.
    [[nodiscard]] GF2Vector at(unsigned i, unsigned j) const {
        check_index(i);
        check_index(j);
        if (i == j) return GF2Vector::zero(r_);
        if (i > j) std::swap(i, j);
        return values_[pair_slot(m_, i, j)];
    }

    void set(unsigned i, unsigned j, const GF2Vector& value) {
        check_index(i);
        check_index(j);
        if (i == j) throw std::invalid_argument("CommutatorTable::set: diagonal pair");
        if (value.dimension() != r_) throw DimensionMismatch("CommutatorTable::set: value dimension differs from r");
        if (i > j) std::swap(i, j);
        values_[pair_slot(m_, i, j)] = value;
    }

    /// Keeps only the first `r` coordinates of every value.
    [[nodiscard]] CommutatorTable truncated(unsigned r) const {
        if (r > r_) throw std::invalid_argument("CommutatorTable::truncated: r exceeds table r");
        std::vector<GF2Vector> out;
        out.reserve(values_.size());
        for (const auto& v : values_) out.emplace_back(r, v.bits() & low_mask(r));
        return CommutatorTable(m_, r, std::move(out));
    }

    friend bool operator==(const CommutatorTable&, const CommutatorTable&) = default;

private:
    void check_index(unsigned i) const {
        if (i >= m_) throw std::out_of_range("CommutatorTable: generator index out of range");
    }

    unsigned m_;
    unsigned r_;
    std::vector<GF2Vector> values_;
};

namespace detail {
inline void require_label(const CommutatorTable& table, const GF2Vector& u, const char* what) {
    if (u.dimension() != table.m()) {
        throw DimensionMismatch(std::string(what) + ": vector dimension " + std::to_string(u.dimension()) +
                                " differs from m = " + std::to_string(table.m()));
    }
}
}  // namespace detail

/**
 * B(u, v): XOR of c_{ij} over pairs i < j with u_i v_j != u_j v_i. This is
 * the commutator of the products of generators indexed by the supports of u
 * and v.
 */
inline GF2Vector bilinear_eval(const CommutatorTable& table, const GF2Vector& u, const GF2Vector& v) {
    detail::require_label(table, u, "bilinear_eval");
    detail::require_label(table, v, "bilinear_eval");
    const unsigned m = table.m();
    const auto values = table.values();
    std::uint64_t acc = 0;
    for (unsigned i = 0; i + 1 < m; ++i) {
        const std::uint64_t ui = (u.bits() >> i) & 1U;
        const std::uint64_t vi = (v.bits() >> i) & 1U;
        // bit j (j > i) set iff u_i v_j + u_j v_i = 1
        std::uint64_t mask = ((ui ? v.bits() : 0) ^ (vi ? u.bits() : 0)) & ~low_mask(i + 1);
        const std::size_t base = CommutatorTable::pair_slot(m, i, i + 1) - (i + 1);
        while (mask != 0) {
            const unsigned j = static_cast<unsigned>(std::countr_zero(mask));
            acc ^= values[base + j].bits();
            mask &= mask - 1;
        }
    }
    return GF2Vector(table.r(), acc);
}

/**
 * The linear functional B(u, .) as m words: w_j = XOR of c_{ij} over i != j
 * with u_i = 1, so that B(u, v) = XOR of w_j over j with v_j = 1.
 */
inline std::vector<GF2Vector> row_map(const CommutatorTable& table, const GF2Vector& u) {
    detail::require_label(table, u, "row_map");
    const unsigned m = table.m();
    std::vector<std::uint64_t> words(m, 0);
    for (std::uint64_t su = u.bits(); su != 0; su &= su - 1) {
        const unsigned i = static_cast<unsigned>(std::countr_zero(su));
        for (unsigned j = 0; j < m; ++j) {
            if (j != i) words[j] ^= table.at(i, j).bits();
        }
    }
    std::vector<GF2Vector> out;
    out.reserve(m);
    for (auto w : words) out.emplace_back(table.r(), w);
    return out;
}

/// Contracts a row map against v: XOR of w_j over the support of v.
inline GF2Vector contract(std::span<const GF2Vector> row, const GF2Vector& v, unsigned r) {
    if (row.size() != v.dimension()) throw DimensionMismatch("contract: row map length differs from vector dimension");
    std::uint64_t acc = 0;
    for (std::uint64_t sv = v.bits(); sv != 0; sv &= sv - 1) {
        acc ^= row[static_cast<std::size_t>(std::countr_zero(sv))].bits();
    }
    return GF2Vector(r, acc);
}

}  // namespace commgraph
