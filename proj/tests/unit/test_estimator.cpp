#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "uzone/estimator.hpp"

using namespace uzone;

namespace {

// Counts straight from the definition: adjacent pairs of one-tick jumps.
TransitionCounts brute_force(const std::vector<std::int32_t>& jumps) {
    TransitionCounts c;
    for (std::size_t i = 1; i < jumps.size(); ++i) {
        const auto a = jumps[i - 1];
        const auto b = jumps[i];
        if ((a == 1 || a == -1) && (b == 1 || b == -1)) {
            if (a == b) ++c.continuations;
            else ++c.alternations;
        }
    }
    return c;
}

std::vector<std::int32_t> random_jumps(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> pick(0, 9);
    std::vector<std::int32_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        const int k = pick(rng);
        out.push_back(k < 4 ? 1 : k < 8 ? -1 : k == 8 ? 2 : -3);
    }
    return out;
}

DayStats day_with_eta(std::optional<double> eta) {
    DayStats d;
    d.eta = eta;
    return d;
}

}  // namespace

TEST(ExtractJumps, CollapsesRepeatedPrices) {
    const std::vector<double> p = {100, 100, 101, 100};
    EXPECT_EQ(extract_jumps(p, 1.0), (JumpSequence{+1, -1}));
}

TEST(ExtractJumps, KeepsMultiTickJumps) {
    const std::vector<double> p = {100, 102};
    EXPECT_EQ(extract_jumps(p, 1.0), (JumpSequence{+2}));
}

TEST(ExtractJumps, DecimalTicks) {
    const std::vector<double> p = {999.9, 1000.0, 999.9, 999.8, 999.8};
    EXPECT_EQ(extract_jumps(p, 0.1), (JumpSequence{+1, -1, -1}));
}

TEST(ExtractJumps, RejectsOffGridChange) {
    const std::vector<double> p = {100, 100.5};
    EXPECT_THROW(extract_jumps(p, 1.0), DataError);
    EXPECT_THROW(extract_jumps(p, 0.0), std::invalid_argument);
}

TEST(ExtractJumps, EmptyAndConstantInput) {
    EXPECT_TRUE(extract_jumps(std::vector<double>{}, 1.0).empty());
    EXPECT_TRUE(extract_jumps(std::vector<double>{5, 5, 5}, 1.0).empty());
}

TEST(CountTransitions, PureAlternation) {
    const JumpSequence j = {+1, -1, +1, -1};
    EXPECT_EQ(count_transitions(j), (TransitionCounts{0, 3}));
}

TEST(CountTransitions, Mixed) {
    const JumpSequence j = {+1, +1, -1, -1};
    EXPECT_EQ(count_transitions(j), (TransitionCounts{2, 1}));
}

TEST(CountTransitions, MultiTickJumpBreaksPairs) {
    const JumpSequence j = {+1, +2, +1, +1};
    EXPECT_EQ(count_transitions(j), (TransitionCounts{1, 0}));
}

TEST(CountTransitions, MatchesAdjacentPairOracle) {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 200; ++rep) {
        const auto j = random_jumps(rng, rng() % 60);
        EXPECT_EQ(count_transitions(j), brute_force(j));
    }
}

TEST(CountTransitions, AllUnitJumpsGiveNMinusOnePairs) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng() % 100;
        JumpSequence j;
        for (std::size_t i = 0; i < n; ++i) j.push_back(rng() % 2 ? 1 : -1);
        const auto c = count_transitions(j);
        EXPECT_EQ(c.continuations + c.alternations, n - 1);
    }
}

TEST(CountTransitions, InvariantUnderReversalAndSignFlip) {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        auto j = random_jumps(rng, 80);
        const auto base = count_transitions(j);
        auto flipped = j;
        for (auto& x : flipped) x = -x;
        EXPECT_EQ(count_transitions(flipped), base);
        std::reverse(j.begin(), j.end());
        EXPECT_EQ(count_transitions(j), base);
    }
}

TEST(ExtractJumps, InvariantUnderPriceScaling) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> ticks_level = {1000};
        for (int i = 0; i < 200; ++i) ticks_level.push_back(ticks_level.back() + static_cast<int>(rng() % 5) - 2);
        std::vector<double> a;
        std::vector<double> b;
        for (double l : ticks_level) {
            a.push_back(l * 1.0);
            b.push_back(l * 5.0);
        }
        EXPECT_EQ(count_transitions(extract_jumps(a, 1.0)), count_transitions(extract_jumps(b, 5.0)));
    }
}

TEST(EtaDay, Values) {
    EXPECT_DOUBLE_EQ(*eta_day({0, 5}), 0.0);
    EXPECT_DOUBLE_EQ(*eta_day({10, 10}), 0.5);
    EXPECT_DOUBLE_EQ(*eta_day({6, 4}), 0.75);
    EXPECT_FALSE(eta_day({3, 0}));
    EXPECT_FALSE(eta_day({0, 0}));
}

TEST(Quantile, Type7) {
    EXPECT_DOUBLE_EQ(quantile({0.1, 0.2, 0.3, 0.4}, 0.25), 0.175);
    EXPECT_DOUBLE_EQ(quantile({0.4, 0.1, 0.3, 0.2}, 0.75), 0.325);
    EXPECT_DOUBLE_EQ(quantile({7.0}, 0.25), 7.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3}, 1.0), 3.0);
}

TEST(EtaPeriod, ConstantSample) {
    const std::vector<DayStats> d = {day_with_eta(0.2), day_with_eta(0.2), day_with_eta(0.2)};
    const auto e = eta_period(d);
    ASSERT_TRUE(e);
    EXPECT_DOUBLE_EQ(e->mean, 0.2);
    EXPECT_DOUBLE_EQ(e->q25, 0.2);
    EXPECT_DOUBLE_EQ(e->q75, 0.2);
    EXPECT_EQ(e->n_days, 3u);
}

TEST(EtaPeriod, MeanAndQuartiles) {
    const std::vector<DayStats> d = {day_with_eta(0.1), day_with_eta(0.2), day_with_eta(std::nullopt),
                                     day_with_eta(0.3), day_with_eta(0.4)};
    const auto e = eta_period(d);
    ASSERT_TRUE(e);
    EXPECT_NEAR(e->mean, 0.25, 1e-15);
    EXPECT_NEAR(e->q25, 0.175, 1e-15);
    EXPECT_NEAR(e->q75, 0.325, 1e-15);
    EXPECT_EQ(e->n_days, 4u);
}

TEST(EtaPeriod, UndefinedWhenNoDailyEta) {
    const std::vector<DayStats> d = {day_with_eta(std::nullopt)};
    EXPECT_FALSE(eta_period(d));
    EXPECT_FALSE(eta_period(std::vector<DayStats>{}));
}

TEST(EtaPeriod, QuartilesBracketMedian) {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<DayStats> d;
        for (int i = 0; i < 15; ++i) d.push_back(day_with_eta(u(rng)));
        const auto e = *eta_period(d);
        EXPECT_LE(e.q25, e.q75);
        EXPECT_GE(e.q25, 0.0);
        EXPECT_LE(e.q75, 1.0);
    }
}

TEST(EstimateDay, CombinesSteps) {
    const std::vector<double> p = {100, 101, 102, 101, 101, 100, 101};
    const auto d = estimate_day(Date{}, p, 1.0);
    EXPECT_EQ(d.counts, (TransitionCounts{2, 2}));
    ASSERT_TRUE(d.eta);
    EXPECT_DOUBLE_EQ(*d.eta, 0.5);
    EXPECT_EQ(d.trade_count, p.size());
}
