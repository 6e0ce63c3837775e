#include <gtest/gtest.h>

#include <sstream>

#include "uzone/report.hpp"
#include "uzone/simulator.hpp"

using namespace uzone;
using namespace std::chrono;

namespace {

Prediction prediction(double eta, double lo, double hi) {
    Prediction p;
    p.eta = p.eta_unclamped = eta;
    p.ci_low = lo;
    p.ci_high = hi;
    return p;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Two phases of one month each, single-band tick tables 5 -> 1, one 6h session.
StudyConfig small_study(double tick_b = 1.0) {
    StudyConfig c;
    c.sessions = SessionSpec{};
    c.sessions.sessions = {{hours{9}, hours{15}}};
    c.phases = {{"A", parse_date("2013-06-03"), parse_date("2013-06-30")},
                {"B", parse_date("2013-07-01"), parse_date("2013-07-31")}};
    c.tick_tables = {{"A", uniform_tick_table(5.0)}, {"B", uniform_tick_table(tick_b)}};
    return c;
}

std::vector<TradeRecord> simulate_phase(double eta, double alpha, std::size_t days, const char* start,
                                        std::uint64_t seed) {
    SimConfig cfg;
    cfg.eta = eta;
    cfg.alpha = alpha;
    cfg.initial_price = 3000.0;
    cfg.start_date = parse_date(start);
    cfg.seed = seed;
    cfg.n_changes = static_cast<std::size_t>(static_cast<double>(days) * cfg.sigma * cfg.sigma /
                                             (2.0 * eta * alpha * alpha)) - 10;
    return simulate(cfg).trades;
}

StockData stock(std::string id, std::size_t days_a, std::size_t days_b, std::uint64_t seed,
                double tick_b = 1.0) {
    StockData s{std::move(id), simulate_phase(0.06, 5.0, days_a, "2013-06-03", seed)};
    auto b = simulate_phase(predict_eta(0.06, {5.0, tick_b}), tick_b, days_b, "2013-07-01", seed + 1);
    s.trades.insert(s.trades.end(), b.begin(), b.end());
    return s;
}

}  // namespace

TEST(Scoring, CanonRowTwoStars) {
    // realized large tick / not balanced at 0.23, forecast 0.26 large tick / not balanced
    const auto card = score_prediction(Regime::LargeTick, Balance::MarketMakerFavorable, Regime::LargeTick,
                                       Balance::MarketMakerFavorable);
    EXPECT_EQ(card.stars, 2);
    EXPECT_EQ(card.ambiguous_stars, 0);
    EXPECT_NEAR(*relative_error(0.26, 0.23), 0.1304, 5e-5);
    EXPECT_EQ(stars_text(card), "**");
}

TEST(Scoring, SoftbankRowOneStar) {
    const auto card =
        score_prediction(Regime::SmallTick, Balance::Balanced, Regime::LargeTick, Balance::Balanced);
    EXPECT_EQ(card.stars, 1);
    EXPECT_EQ(stars_text(card), "*");
}

TEST(Scoring, AmbiguousStar) {
    const auto card =
        score_prediction(Regime::SmallTick, Balance::Balanced, Regime::Ambiguous, Balance::Balanced);
    EXPECT_EQ(card.ambiguous_stars, 1);
    EXPECT_EQ(card.stars, 1);
    EXPECT_EQ(stars_text(card), "(*)*");
    EXPECT_EQ(stars_text(ScoreCard{}), "");
}

TEST(Scoring, RelativeErrorUndefinedAtZero) {
    EXPECT_FALSE(relative_error(0.1, 0.0));
    EXPECT_DOUBLE_EQ(*relative_error(0.5, 0.5), 0.0);
}

TEST(Scoring, AggregateError) {
    const std::vector<ScoreCard> cards = {{0, 0, 0.1}, {0, 0, 0.2}, {0, 0, std::nullopt}, {0, 0, 0.3}};
    EXPECT_NEAR(*aggregate_error(cards), 0.2, 1e-15);
    const std::vector<ScoreCard> one = {{2, 0, 0.13}};
    EXPECT_DOUBLE_EQ(*aggregate_error(one), 0.13);
    EXPECT_FALSE(aggregate_error(std::vector<ScoreCard>{}));
}

TEST(Formatting, FixedTwoDecimals) {
    EXPECT_EQ(format_fixed2(0.2578), "0.26");
    EXPECT_EQ(format_fixed2(0.125), "0.13");
    EXPECT_EQ(format_fixed2(0.5), "0.50");
    EXPECT_EQ(format_fixed2(-0.005), "-0.01");
}

TEST(Formatting, PredictionCell) {
    EXPECT_EQ(format_prediction_cell(prediction(0.26, 0.19, 0.27)), "0.26 [0.19,0.27]");
}

TEST(Formatting, OutputFormatNames) {
    EXPECT_EQ(parse_output_format("csv"), OutputFormat::Csv);
    EXPECT_THROW(parse_output_format("xml"), ConfigError);
}

TEST(Render, EmptyEvaluationIsHeaderOnly) {
    PairEvaluation eval;
    eval.phase_a = "0";
    eval.phase_b = "1";
    std::ostringstream out;
    render_evaluation(out, eval, OutputFormat::Csv);
    EXPECT_EQ(count_lines(out.str()), 1u);
    EXPECT_EQ(out.str().rfind("stars,stock,S_0,eta_0,S_1,eta_1", 0), 0u);
}

TEST(Render, EvaluationRowShowsForecastCell) {
    PairEvaluation eval;
    eval.phase_a = "0";
    eval.phase_b = "1";
    EvaluatedStock s;
    s.row.stock = "Canon";
    s.row.change = {5, 1};
    s.row.before = {"0", 5, EtaEstimate{0.06, 0.04, 0.08, 30}, 1.04, Regime::LargeTick,
                    Balance::MarketMakerFavorable, 30};
    s.row.after = {"1", 1, EtaEstimate{0.23, 0.2, 0.26, 30}, 1.13, Regime::LargeTick,
                   Balance::MarketMakerFavorable, 30};
    s.row.prediction = prediction(0.26, 0.19, 0.27);
    s.score = {2, 0, 0.13};
    eval.stocks.push_back(s);
    eval.mean_relative_error = 0.13;

    std::ostringstream table;
    render_evaluation(table, eval, OutputFormat::Table);
    EXPECT_NE(table.str().find("0.26 [0.19,0.27]"), std::string::npos) << table.str();
    EXPECT_NE(table.str().find("Canon"), std::string::npos);

    std::ostringstream csv;
    render_evaluation(csv, eval, OutputFormat::Csv);
    EXPECT_EQ(count_lines(csv.str()), 2u);

    std::ostringstream json;
    render_evaluation(json, eval, OutputFormat::Json);
    EXPECT_NE(json.str().find("\"mean_relative_error\""), std::string::npos);
}

TEST(PlotData, SeriesAndHeader) {
    std::vector<DayStats> before(3);
    std::vector<DayStats> after(2);
    for (int i = 0; i < 3; ++i) {
        before[i].date = Date{sys_days{parse_date("2014-01-06")} + days{i}};
        before[i].eta = 0.1 * (i + 1);
    }
    for (int i = 0; i < 2; ++i) {
        after[i].date = Date{sys_days{parse_date("2014-02-03")} + days{i}};
        after[i].eta = 0.3;
    }
    const auto pts = daily_eta_plot(before, "0", after, "1", 0.35);
    auto count = [&](std::string_view series) {
        return std::count_if(pts.begin(), pts.end(), [&](const PlotPoint& p) { return p.series == series; });
    };
    EXPECT_EQ(count("daily_eta"), 5);
    EXPECT_GE(count("mean_0"), 2);
    EXPECT_GE(count("forecast_1"), 2);
    std::ostringstream out;
    render_plot_data(out, pts);
    EXPECT_EQ(out.str().rfind("date,value,series\n", 0), 0u);
    EXPECT_EQ(count_lines(out.str()), pts.size() + 1);
}

TEST(Config, DefaultsAreTheTseStudy) {
    const auto c = parse_study_config("{}");
    EXPECT_EQ(c.sessions.sessions.size(), 2u);
    EXPECT_EQ(c.sessions.trim_head, hours{1});
    EXPECT_EQ(c.phases.size(), 3u);
    EXPECT_DOUBLE_EQ(c.table("1").tick_value(4000), 1.0);
    EXPECT_EQ(c.min_days, 10u);
}

TEST(Config, OverridesFromJson) {
    const auto c = parse_study_config(R"({
        "csv": {"delimiter": "\t", "price_column": "px"},
        "sessions": [{"open": "08:00", "close": "16:00"}],
        "trim_head_minutes": 30, "trim_tail_minutes": 0,
        "phases": [{"label": "pre", "start": "2020-01-01", "end": "2020-06-30"},
                   {"label": "post", "start": "2020-07-01", "end": "2020-12-31"}],
        "tick_tables": {"pre": [{"below": 100, "tick": 0.01}, {"tick": 0.05}],
                        "post": [{"tick": 0.01}]},
        "thresholds": {"balanced_min_eta": 0.35},
        "min_days": 5,
        "vol_grid_seconds": 60
    })");
    EXPECT_EQ(c.csv.delimiter, '\t');
    EXPECT_EQ(c.csv.price_column, "px");
    EXPECT_EQ(c.sessions.trim_head, minutes{30});
    EXPECT_DOUBLE_EQ(c.table("pre").tick_value(150), 0.05);
    EXPECT_DOUBLE_EQ(c.classification.balanced_min_eta, 0.35);
    EXPECT_EQ(c.min_days, 5u);
    EXPECT_EQ(c.vol_grid, seconds{60});
    EXPECT_EQ(c.phase("post").start, parse_date("2020-07-01"));
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_study_config("{"), ConfigError);
    EXPECT_THROW(parse_study_config(R"({"sessions": [{"open": "10:00", "close": "09:00"}]})"), ConfigError);
    EXPECT_THROW(parse_study_config(R"({"tick_tables": "nyse"})"), ConfigError);
    EXPECT_THROW(parse_study_config(R"({"phases": [{"label": "x", "start": "2020-13-01", "end": "2020-12-01"}]})"),
                 ConfigError);
    EXPECT_THROW(tse_study_config().phase("9"), ConfigError);
}

TEST(PhasePair, ForecastAndDisqualification) {
    const std::vector<StockData> stocks = {stock("good", 18, 18, 1), stock("short", 6, 18, 3)};
    const auto eval = evaluate_phase_pair(stocks, "A", "B", small_study());
    ASSERT_EQ(eval.stocks.size(), 1u);
    const auto& row = eval.stocks[0].row;
    EXPECT_EQ(row.stock, "good");
    EXPECT_DOUBLE_EQ(row.change.from, 5.0);
    EXPECT_DOUBLE_EQ(row.change.to, 1.0);
    EXPECT_EQ(row.before.regime, Regime::LargeTick);
    EXPECT_NEAR(row.before.eta->mean, 0.06, 0.02);
    EXPECT_NEAR(row.prediction.eta_unclamped, predict_eta(row.before.eta->mean, {5.0, 1.0}), 1e-12);
    ASSERT_TRUE(eval.mean_relative_error);
    EXPECT_LT(*eval.mean_relative_error, 0.1);
    EXPECT_EQ(eval.stocks[0].score.stars, 2);

    ASSERT_EQ(eval.disqualified.size(), 1u);
    EXPECT_EQ(eval.disqualified[0].stock, "short");
    EXPECT_NE(eval.disqualified[0].reason.find("period A count"), std::string::npos)
        << eval.disqualified[0].reason;
}

TEST(PhasePair, UnchangedTickIsSkipped) {
    const std::vector<StockData> stocks = {stock("same", 12, 12, 5, 5.0)};
    const auto eval = evaluate_phase_pair(stocks, "A", "B", small_study(5.0));
    EXPECT_TRUE(eval.stocks.empty());
    ASSERT_EQ(eval.disqualified.size(), 1u);
    EXPECT_EQ(eval.disqualified[0].reason, "tick value unchanged");
}

TEST(PhasePair, Deterministic) {
    const std::vector<StockData> stocks = {stock("x", 12, 12, 7)};
    std::ostringstream a;
    std::ostringstream b;
    render_evaluation(a, evaluate_phase_pair(stocks, "A", "B", small_study()), OutputFormat::Json);
    render_evaluation(b, evaluate_phase_pair(stocks, "A", "B", small_study()), OutputFormat::Json);
    EXPECT_EQ(a.str(), b.str());
}
