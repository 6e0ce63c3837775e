#include <gtest/gtest.h>

#include <random>

#include "uzone/classification.hpp"
#include "uzone/simulator.hpp"

using namespace uzone;
using namespace std::chrono;

namespace {

const Date kDay{year{2014}, month{3}, day{3}};

TradeRecord quote(TimeOfDay tod, double bid, double ask, Date d = kDay) {
    return {at(d, tod), ask, bid, ask};
}

}  // namespace

TEST(AvgSpread, OneTickQuotes) {
    const std::vector<TradeRecord> t = {quote(hours{10}, 99, 100), quote(hours{11}, 100, 101)};
    EXPECT_DOUBLE_EQ(*avg_spread_ticks(t, 1.0), 1.0);
}

TEST(AvgSpread, HalfOneHalfTwoTicks) {
    const std::vector<TradeRecord> t = {quote(hours{10}, 99, 100), quote(hours{11}, 98, 100),
                                        quote(hours{12}, 99, 100), quote(hours{13}, 98, 100)};
    EXPECT_DOUBLE_EQ(*avg_spread_ticks(t, 1.0), 1.5);
}

TEST(AvgSpread, AveragesDailyMeans) {
    const Date next{sys_days{kDay} + days{1}};
    const std::vector<TradeRecord> t = {quote(hours{10}, 99, 100), quote(hours{11}, 99, 100),
                                        quote(hours{12}, 99, 100), quote(hours{10}, 97, 100, next)};
    EXPECT_DOUBLE_EQ(*avg_spread_ticks(t, 1.0), 2.0);
    EXPECT_FALSE(avg_spread_ticks(std::vector<TradeRecord>{}, 1.0));
}

TEST(AvgSpread, SimulatorKeepsOneTickSpread) {
    SimConfig cfg;
    cfg.alpha = 0.5;
    cfg.n_changes = 5000;
    const auto path = simulate(cfg);
    EXPECT_DOUBLE_EQ(*avg_spread_ticks(path.trades, 0.5), 1.0);
}

TEST(ClassifyRegime, Examples) {
    EXPECT_EQ(classify_regime(1.07), Regime::LargeTick);
    EXPECT_EQ(classify_regime(1.70), Regime::SmallTick);
    EXPECT_EQ(classify_regime(1.55), Regime::Ambiguous);
}

TEST(ClassifyRegime, Boundaries) {
    EXPECT_EQ(classify_regime(1.5), Regime::LargeTick);
    EXPECT_EQ(classify_regime(std::nextafter(1.5, 2.0)), Regime::Ambiguous);
    EXPECT_EQ(classify_regime(1.6), Regime::Ambiguous);
    EXPECT_EQ(classify_regime(std::nextafter(1.6, 2.0)), Regime::SmallTick);
}

TEST(ClassifyRegime, MonotoneInSpread) {
    auto rank = [](Regime r) { return r == Regime::LargeTick ? 0 : r == Regime::Ambiguous ? 1 : 2; };
    int prev = 0;
    for (double s = 1.0; s < 3.0; s += 0.001) {
        const int k = rank(classify_regime(s));
        EXPECT_GE(k, prev) << s;
        prev = k;
    }
}

TEST(ClassifyRegime, CustomThresholds) {
    ClassificationThresholds t;
    t.large_tick_max_spread = 1.2;
    t.small_tick_min_spread = 1.3;
    EXPECT_EQ(classify_regime(1.25, t), Regime::Ambiguous);
    EXPECT_EQ(classify_regime(1.4, t), Regime::SmallTick);
}

TEST(ClassifyBalance, Examples) {
    EXPECT_EQ(classify_balance(0.49, Regime::LargeTick), Balance::Balanced);
    EXPECT_EQ(classify_balance(0.18, Regime::LargeTick), Balance::MarketMakerFavorable);
    EXPECT_EQ(classify_balance(0.60, Regime::SmallTick), Balance::Balanced);
    EXPECT_EQ(classify_balance(0.10, Regime::SmallTick), Balance::Balanced);
    EXPECT_EQ(classify_balance(0.40, Regime::Ambiguous), Balance::Balanced);
    EXPECT_EQ(classify_balance(0.39, Regime::Ambiguous), Balance::MarketMakerFavorable);
}

TEST(SuitableTick, Examples) {
    EXPECT_TRUE(suitable_tick(Regime::LargeTick, 0.43));
    EXPECT_FALSE(suitable_tick(Regime::SmallTick, 0.66));
    EXPECT_FALSE(suitable_tick(Regime::LargeTick, 0.39));
    EXPECT_FALSE(suitable_tick(Regime::Ambiguous, 0.45));
}

TEST(ClassifyBalance, MonotoneInEta) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        if (classify_balance(lo, Regime::LargeTick) == Balance::Balanced) {
            EXPECT_EQ(classify_balance(hi, Regime::LargeTick), Balance::Balanced);
        }
    }
}

TEST(AvgSpread, InvariantUnderJointRescaling) {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<TradeRecord> a;
        std::vector<TradeRecord> b;
        for (int i = 0; i < 40; ++i) {
            const double bid = 1000 + static_cast<int>(rng() % 20);
            const double w = 1 + static_cast<int>(rng() % 3);
            a.push_back(quote(hours{9} + minutes{i}, bid, bid + w));
            b.push_back(quote(hours{9} + minutes{i}, bid * 5, (bid + w) * 5));
        }
        EXPECT_NEAR(*avg_spread_ticks(a, 1.0), *avg_spread_ticks(b, 5.0), 1e-12);
    }
}

TEST(Labels, RoundTrip) {
    for (auto r : {Regime::LargeTick, Regime::SmallTick, Regime::Ambiguous}) {
        EXPECT_EQ(parse_large_tick_label(large_tick_label(r)), r);
    }
    for (auto b : {Balance::Balanced, Balance::MarketMakerFavorable}) {
        EXPECT_EQ(parse_balanced_label(balanced_label(b)), b);
    }
    EXPECT_FALSE(parse_large_tick_label("maybe"));
}
