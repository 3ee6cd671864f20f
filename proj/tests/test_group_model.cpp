#include "oracles.hpp"

#include <commgraph/graph.hpp>
#include <commgraph/group_model.hpp>
#include <commgraph/rng.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <set>

using namespace commgraph;
using commgraph::testing::random_table;

TEST(SampleTable, SingleGeneratorHasNoPairs) {
    CounterRng rng(1);
    const auto t = sample_table(1, 5, rng);
    EXPECT_EQ(t.values().size(), 0U);
    EXPECT_EQ(t.vertex_count(), 1U);
}

TEST(SampleTable, ZeroWidthIsAllZero) {
    CounterRng rng(1);
    const auto t = sample_table(6, 0, rng);
    for (const auto& v : t.values()) EXPECT_EQ(v.dimension(), 0U);
}

TEST(SampleTable, DrawsRBitsPerPairInPairOrder) {
    CounterRng rng(42);
    CounterRng copy = rng;
    const auto t = sample_table(4, 5, rng);
    // 6 pairs x 5 bits = 30 bits, all from the first output word
    const std::uint64_t word = copy();
    for (std::size_t k = 0; k < t.values().size(); ++k) {
        EXPECT_EQ(t.values()[k].bits(), (word >> (5 * k)) & 0x1F) << "pair slot " << k;
    }
    EXPECT_EQ(rng.counter(), 1U);
}

TEST(SampleTable, BitStreamCrossesWordBoundaries) {
    CounterRng a(9), b(9);
    const auto t = sample_table(3, 40, a);  // 3 pairs x 40 bits = 120 bits
    const std::uint64_t w0 = b(), w1 = b();
    EXPECT_EQ(t.at(0, 1).bits(), w0 & low_mask(40));
    EXPECT_EQ(t.at(0, 2).bits(), ((w0 >> 40) | (w1 << 24)) & low_mask(40));
    EXPECT_EQ(t.at(1, 2).bits(), (w1 >> 16) & low_mask(40));
}

TEST(SampleTable, DeterministicPerStream) {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        auto a = CounterRng::for_trial(2024, trial);
        auto b = CounterRng::for_trial(2024, trial);
        EXPECT_EQ(sample_table(8, 6, a), sample_table(8, 6, b));
    }
    auto a = CounterRng::for_trial(2024, 0);
    auto b = CounterRng::for_trial(2024, 1);
    EXPECT_NE(sample_table(8, 6, a), sample_table(8, 6, b));
}

TEST(SampleTable, TwoGeneratorsOneBitIsFair) {
    constexpr int draws = 20000;
    int ones = 0;
    for (int t = 0; t < draws; ++t) {
        auto rng = CounterRng::for_trial(5, static_cast<std::uint64_t>(t));
        ones += sample_table(2, 1, rng).at(0, 1).bits() == 1 ? 1 : 0;
    }
    const double sigma = std::sqrt(draws * 0.25);
    EXPECT_LT(std::abs(ones - draws / 2.0), 3 * sigma);
}

TEST(SampleTable, TwoGeneratorsTwoBitsChiSquare) {
    // four equally likely tables; chi-square with 3 degrees of freedom
    constexpr int draws = 20000;
    std::array<int, 4> counts{};
    for (int t = 0; t < draws; ++t) {
        auto rng = CounterRng::for_trial(17, static_cast<std::uint64_t>(t));
        ++counts[sample_table(2, 2, rng).at(0, 1).bits()];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - draws / 4.0) * (c - draws / 4.0) / (draws / 4.0);
    EXPECT_LT(chi2, 3.0 + 3.0 * std::sqrt(6.0));
}

TEST(SampleTable, EdgeDensityMatchesTwoToMinusR) {
    // m = 7, r = 4: mean per-table density within 3 standard errors of 1/16
    constexpr int tables = 100;
    std::vector<double> density;
    for (int t = 0; t < tables; ++t) {
        auto rng = CounterRng::for_trial(77, static_cast<std::uint64_t>(t));
        const auto g = build_graph(sample_table(7, 4, rng));
        density.push_back(static_cast<double>(g.edge_count()) / (127.0 * 126.0 / 2.0));
    }
    double mean = 0, var = 0;
    for (double d : density) mean += d / tables;
    for (double d : density) var += (d - mean) * (d - mean) / (tables - 1);
    EXPECT_LT(std::abs(mean - 1.0 / 16), 3 * std::sqrt(var / tables)) << "mean density " << mean;
}

TEST(DerivedSpan, ZeroTableSpansNothing) {
    const auto res = check_derived_span(CommutatorTable(4, 3));
    EXPECT_FALSE(res.spans);
    EXPECT_EQ(res.rank, 0U);
}

TEST(DerivedSpan, WorkedExample) {
    CommutatorTable t(3, 2);
    t.set(0, 1, GF2Vector::from_string("01"));
    t.set(0, 2, GF2Vector::from_string("10"));
    t.set(1, 2, GF2Vector::from_string("11"));
    const auto res = check_derived_span(t);
    EXPECT_TRUE(res.spans);
    EXPECT_EQ(res.rank, 2U);
}

TEST(DerivedSpan, RandomTablesAlmostAlwaysSpan) {
    int failures = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        auto rng = CounterRng::for_trial(31, t);
        failures += check_derived_span(sample_table(7, 4, rng)).spans ? 0 : 1;
    }
    EXPECT_LT(failures, 10);
}

TEST(CenterCheck, NonzeroCommutatorOnTwoGenerators) {
    CommutatorTable t(2, 1);
    t.set(0, 1, GF2Vector(1, 1));
    const auto res = check_center_trivial(t);
    EXPECT_TRUE(res.trivial);
    EXPECT_TRUE(res.radical_basis.empty());
}

TEST(CenterCheck, AbelianTwoGenerators) {
    const auto res = check_center_trivial(CommutatorTable(2, 1));
    EXPECT_FALSE(res.trivial);
    EXPECT_EQ(res.radical_basis.size(), 2U);
}

TEST(CenterCheck, RadicalBasisPairsToZeroWithEverything) {
    std::mt19937_64 gen(13);
    int nontrivial = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const unsigned m = 2 + static_cast<unsigned>(gen() % 5);
        const auto t = random_table(m, static_cast<unsigned>(gen() % 3), gen);
        const auto res = check_center_trivial(t);
        EXPECT_EQ(res.trivial, res.radical_basis.empty());
        nontrivial += res.trivial ? 0 : 1;
        EXPECT_EQ(vec_rank(res.radical_basis), res.radical_basis.size());
        for (const auto& u : res.radical_basis) {
            EXPECT_FALSE(u.is_zero());
            for (std::uint64_t v = 1; v < (1ULL << m); ++v) {
                EXPECT_TRUE(bilinear_eval(t, u, GF2Vector(m, v)).is_zero());
            }
        }
    }
    EXPECT_GT(nontrivial, 0);
}

TEST(CenterCheck, RadicalIsExactlyTheVanishingRowMaps) {
    std::mt19937_64 gen(21);
    for (int rep = 0; rep < 200; ++rep) {
        const unsigned m = 1 + static_cast<unsigned>(gen() % 6);
        const auto t = random_table(m, static_cast<unsigned>(gen() % 3), gen);
        const auto res = check_center_trivial(t);
        // span of the basis, nonzero part
        std::set<std::uint64_t> span{0};
        for (const auto& b : res.radical_basis) {
            std::set<std::uint64_t> next = span;
            for (auto x : span) next.insert(x ^ b.bits());
            span = std::move(next);
        }
        span.erase(0);
        std::set<std::uint64_t> vanishing;
        for (std::uint64_t u = 1; u < (1ULL << m); ++u) {
            bool all_zero = true;
            for (const auto& w : row_map(t, GF2Vector(m, u))) all_zero = all_zero && w.is_zero();
            if (all_zero) vanishing.insert(u);
        }
        EXPECT_EQ(span, vanishing);
    }
}

TEST(StructuralReport, ZeroTableFailsBoth) {
    const auto rep = structural_report(CommutatorTable(3, 2));
    EXPECT_FALSE(rep.derived_spans);
    EXPECT_FALSE(rep.center_trivial);
    EXPECT_FALSE(rep.claimed_orders.has_value());
}

TEST(StructuralReport, SmallestNonabelianCase) {
    CommutatorTable t(2, 1);
    t.set(0, 1, GF2Vector(1, 1));
    const auto rep = structural_report(t);
    EXPECT_TRUE(rep.derived_spans);
    EXPECT_TRUE(rep.center_trivial);
    ASSERT_TRUE(rep.claimed_orders.has_value());
    // |G'| = 2, |Z(G)| = 8, |G/Z(G)| = 4
    EXPECT_EQ(1U << rep.claimed_orders->derived, 2U);
    EXPECT_EQ(1U << rep.claimed_orders->center, 8U);
    EXPECT_EQ(1U << rep.claimed_orders->quotient, 4U);
}

TEST(StructuralReport, FlagsConsistentWithChecks) {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 100; ++rep) {
        const auto t = random_table(2 + static_cast<unsigned>(gen() % 6), static_cast<unsigned>(gen() % 4), gen);
        const auto s = structural_report(t);
        if (s.derived_spans) {
            EXPECT_EQ(s.derived_rank, t.r());
        }
        EXPECT_EQ(s.center_trivial, s.radical_basis.empty());
        EXPECT_EQ(s.claimed_orders.has_value(), s.derived_spans && s.center_trivial);
    }
}

TEST(StructuralReport, MEightRSixPassAlmostAlways) {
    int pass = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        auto rng = CounterRng::for_trial(99, t);
        pass += structural_report(sample_table(8, 6, rng)).passed() ? 1 : 0;
    }
    EXPECT_GE(pass, 198);
}

TEST(Coupling, TruncatedTableGraphContainsFullGraph) {
    for (std::uint64_t t = 0; t < 200; ++t) {
        auto rng = CounterRng::for_trial(3, t);
        const auto fine = sample_table(6, 5, rng);
        auto previous = build_graph(fine);
        for (unsigned r = 5; r-- > 0;) {
            const auto coarse = build_graph(fine.truncated(r));
            EXPECT_TRUE(previous.is_subgraph_of(coarse));
            previous = coarse;
        }
    }
}

TEST(CounterRng, SplitStreamsDiffer) {
    CounterRng a(5);
    CounterRng child = a.split();
    CounterRng b(5);
    b();
    EXPECT_NE(child(), b());
    EXPECT_EQ(derive_stream_key(1, 2), derive_stream_key(1, 2));
    EXPECT_NE(derive_stream_key(1, 2), derive_stream_key(2, 1));
}
