#include "uzone/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <variant>

#include <json.hpp>

namespace uzone {

namespace {

using json = nlohmann::json;
using namespace std::chrono;

bool same_tick(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

const PhaseWindow& StudyConfig::phase(std::string_view label) const {
    for (const auto& p : phases) {
        if (p.label == label) return p;
    }
    throw ConfigError("unknown phase '" + std::string(label) + "'");
}

const TickTable& StudyConfig::table(std::string_view label) const {
    const auto it = tick_tables.find(std::string(label));
    if (it == tick_tables.end()) throw ConfigError("no tick table for phase '" + std::string(label) + "'");
    return it->second;
}

void StudyConfig::validate() const {
    sessions.validate();
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const auto& p = phases[i];
        if (!p.start.ok() || !p.end.ok() || p.end < p.start) {
            throw ConfigError("phase '" + p.label + "': start must not be after end");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (phases[j].label == p.label) throw ConfigError("duplicate phase label '" + p.label + "'");
            if (!(p.end < phases[j].start || phases[j].end < p.start)) {
                throw ConfigError("phases '" + phases[j].label + "' and '" + p.label + "' overlap");
            }
        }
        table(p.label);
    }
    if (classification.small_tick_min_spread < classification.large_tick_max_spread) {
        throw ConfigError("thresholds: small tick spread cut-off below large tick cut-off");
    }
    if (prediction.small_tick_from < prediction.large_tick_below) {
        throw ConfigError("thresholds: predicted small tick cut-off below large tick cut-off");
    }
    if (!(csv.max_error_rate >= 0.0)) throw ConfigError("csv: max_error_rate must be >= 0");
    if (vol_grid <= microseconds{0}) throw ConfigError("vol_grid_seconds must be positive");
}

StudyConfig tse_study_config() {
    StudyConfig c;
    c.sessions.sessions = {{hours{9}, hours{11} + minutes{30}}, {hours{12} + minutes{30}, hours{15}}};
    c.sessions.trim_head = hours{1};
    c.sessions.trim_tail = hours{1};
    c.phases = tse_pilot_phases();
    c.tick_tables = tse_pilot_tick_tables();
    return c;
}

namespace {

TickTable parse_tick_table(const json& bands) {
    if (!bands.is_array()) throw ConfigError("tick table must be an array of bands");
    std::vector<TickBand> out;
    for (const auto& b : bands) {
        TickBand band;
        band.tick = b.at("tick").get<double>();
        if (b.contains("below") && !b.at("below").is_null()) band.upper = b.at("below").get<double>();
        out.push_back(band);
    }
    return TickTable(std::move(out));
}

void apply_config(StudyConfig& c, const json& j) {
    if (j.contains("csv")) {
        const auto& f = j.at("csv");
        if (f.contains("delimiter")) {
            const auto d = f.at("delimiter").get<std::string>();
            if (d == "\\t") {
                c.csv.delimiter = '\t';
            } else if (d.size() == 1) {
                c.csv.delimiter = d[0];
            } else {
                throw ConfigError("csv.delimiter must be a single character");
            }
        }
        c.csv.timestamp_format = f.value("timestamp_format", c.csv.timestamp_format);
        c.csv.timestamp_column = f.value("timestamp_column", c.csv.timestamp_column);
        c.csv.price_column = f.value("price_column", c.csv.price_column);
        c.csv.bid_column = f.value("bid_column", c.csv.bid_column);
        c.csv.ask_column = f.value("ask_column", c.csv.ask_column);
        c.csv.max_error_rate = f.value("max_error_rate", c.csv.max_error_rate);
    }
    if (j.contains("sessions")) {
        c.sessions.sessions.clear();
        for (const auto& s : j.at("sessions")) {
            c.sessions.sessions.push_back({parse_time_of_day(s.at("open").get<std::string>()),
                                           parse_time_of_day(s.at("close").get<std::string>())});
        }
    }
    if (j.contains("trim_head_minutes")) {
        c.sessions.trim_head = duration_cast<microseconds>(
            duration<double, std::ratio<60>>{j.at("trim_head_minutes").get<double>()});
    }
    if (j.contains("trim_tail_minutes")) {
        c.sessions.trim_tail = duration_cast<microseconds>(
            duration<double, std::ratio<60>>{j.at("trim_tail_minutes").get<double>()});
    }
    if (j.contains("phases")) {
        c.phases.clear();
        for (const auto& p : j.at("phases")) {
            c.phases.push_back({p.at("label").get<std::string>(), parse_date(p.at("start").get<std::string>()),
                                parse_date(p.at("end").get<std::string>())});
        }
    }
    if (j.contains("tick_tables")) {
        const auto& t = j.at("tick_tables");
        if (t.is_string()) {
            if (t.get<std::string>() != "tse") {
                throw ConfigError("unknown tick table preset '" + t.get<std::string>() + "'");
            }
            c.tick_tables = tse_pilot_tick_tables();
        } else {
            c.tick_tables.clear();
            for (const auto& [label, bands] : t.items()) c.tick_tables.emplace(label, parse_tick_table(bands));
        }
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        c.classification.large_tick_max_spread = t.value("large_tick_max_spread", c.classification.large_tick_max_spread);
        c.classification.small_tick_min_spread = t.value("small_tick_min_spread", c.classification.small_tick_min_spread);
        c.classification.balanced_min_eta = t.value("balanced_min_eta", c.classification.balanced_min_eta);
        c.prediction.balanced_min_eta = c.classification.balanced_min_eta;
        c.prediction.large_tick_below = t.value("predicted_large_tick_below", c.prediction.large_tick_below);
        c.prediction.small_tick_from = t.value("predicted_small_tick_from", c.prediction.small_tick_from);
    }
    c.min_days = j.value("min_days", c.min_days);
    if (j.contains("vol_grid_seconds")) {
        c.vol_grid = duration_cast<microseconds>(duration<double>{j.at("vol_grid_seconds").get<double>()});
    }
}

}  // namespace

StudyConfig parse_study_config(std::string_view json_text) {
    StudyConfig c = tse_study_config();
    try {
        const auto j = json::parse(json_text);
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        apply_config(c, j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_study_config(buf.str());
}

// ---------------------------------------------------------------------------
// Per-day and per-phase statistics
// ---------------------------------------------------------------------------

DayStats compute_day_stats(const TradingDay& day, const TickTable& table, microseconds vol_grid) {
    DayStats stats;
    stats.date = day.date;
    stats.trade_count = day.trades.size();
    for (const auto& t : day.trades) stats.observed_ticks.insert(table.tick_value(t.price));
    if (auto vol = realized_vol(day.trades, vol_grid)) stats.sigma = vol->sigma;

    if (stats.observed_ticks.size() != 1) return stats;
    const double tick = *stats.observed_ticks.begin();

    std::vector<double> prices;
    prices.reserve(day.trades.size());
    for (const auto& t : day.trades) prices.push_back(t.price);
    try {
        stats.counts = count_transitions(extract_jumps(prices, tick));
    } catch (const DataError& e) {
        throw DataError(format_date(day.date) + ": " + e.what());
    }
    stats.eta = eta_day(stats.counts);
    stats.spread_ticks = avg_spread_ticks(day.trades, tick);
    return stats;
}

std::vector<DayStats> analyze_phase(std::span<const TradeRecord> filtered_trades, const PhaseWindow& window,
                                    const TickTable& table, microseconds vol_grid) {
    std::vector<TradeRecord> in_window;
    for (const auto& t : filtered_trades) {
        if (window.contains(date_of(t.timestamp))) in_window.push_back(t);
    }
    std::vector<DayStats> out;
    for (const auto& day : split_days(in_window)) out.push_back(compute_day_stats(day, table, vol_grid));
    return out;
}

PhaseSummary summarize_phase(std::string phase, double tick, std::span<const DayStats> days,
                             const ClassificationThresholds& t) {
    PhaseSummary s;
    s.phase = std::move(phase);
    s.tick = tick;
    s.n_days = days.size();
    s.eta = eta_period(days);

    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : days) {
        if (d.spread_ticks) {
            sum += *d.spread_ticks;
            ++n;
        }
    }
    if (n > 0) s.spread = sum / static_cast<double>(n);
    if (s.spread) {
        s.regime = classify_regime(*s.spread, t);
        if (s.eta) s.balance = classify_balance(s.eta->mean, *s.regime, t);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

ScoreCard score_prediction(Regime realized_regime, Balance realized_balance, Regime predicted_regime,
                           Balance predicted_balance) {
    ScoreCard card;
    if (realized_regime == Regime::Ambiguous || predicted_regime == Regime::Ambiguous) {
        ++card.ambiguous_stars;
    } else if (realized_regime == predicted_regime) {
        ++card.stars;
    }
    if (realized_balance == predicted_balance) ++card.stars;
    return card;
}

std::optional<double> relative_error(double predicted, double realized) {
    if (!(realized > 0.0)) return std::nullopt;
    return std::fabs(predicted - realized) / realized;
}

std::optional<double> aggregate_error(std::span<const ScoreCard> cards) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& c : cards) {
        if (c.relative_error) {
            sum += *c.relative_error;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::string stars_text(const ScoreCard& card) {
    std::string s;
    for (int i = 0; i < card.ambiguous_stars; ++i) s += "(*)";
    s.append(static_cast<std::size_t>(card.stars), '*');
    return s;
}

// ---------------------------------------------------------------------------
// Phase-pair study
// ---------------------------------------------------------------------------

std::vector<StockData> load_data_dir(const std::filesystem::path& dir, const CsvFormat& format) {
    if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
    std::vector<StockData> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        out.push_back({entry.path().stem().string(), parse_trades_file(entry.path(), format).trades});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

namespace {

std::variant<EvaluatedStock, std::string> evaluate_stock(const StockData& stock, const PhaseWindow& win_a,
                                                         const PhaseWindow& win_b, const StudyConfig& config) {
    const auto& table_a = config.table(win_a.label);
    const auto& table_b = config.table(win_b.label);
    const auto filtered = session_filter(stock.trades, config.sessions);

    const TradeRecord* last_a = nullptr;
    const TradeRecord* first_b = nullptr;
    for (const auto& t : filtered) {
        const Date d = date_of(t.timestamp);
        if (win_a.contains(d)) last_a = &t;
        if (!first_b && win_b.contains(d)) first_b = &t;
    }
    if (!last_a) return "no trades in phase " + win_a.label;
    if (!first_b) return "no trades in phase " + win_b.label;

    const ReferenceTicks reference{table_a.tick_value(last_a->price), table_b.tick_value(first_b->price)};
    const auto days_a = analyze_phase(filtered, win_a, table_a, config.vol_grid);
    const auto days_b = analyze_phase(filtered, win_b, table_b, config.vol_grid);
    auto selection = select_days(days_a, days_b, reference, config.min_days);
    if (!selection.qualifies) return selection.reason;
    if (same_tick(reference.period_a, reference.period_b)) return "tick value unchanged";

    EvaluatedStock out;
    auto& row = out.row;
    row.stock = stock.id;
    row.change = {reference.period_a, reference.period_b};
    row.before = summarize_phase(win_a.label, reference.period_a, selection.period_a, config.classification);
    row.after = summarize_phase(win_b.label, reference.period_b, selection.period_b, config.classification);
    if (!row.before.eta || !row.before.regime) return "eta unavailable in phase " + win_a.label;
    if (!row.after.eta || !row.after.regime) return "eta unavailable in phase " + win_b.label;
    if (*row.before.regime != Regime::LargeTick) return "not large tick in phase " + win_a.label;

    row.prediction = predict_with_ci(*row.before.eta, row.change, config.prediction);
    row.days_before = std::move(selection.period_a);
    row.days_after = std::move(selection.period_b);

    out.score = score_prediction(*row.after.regime, *row.after.balance, row.prediction.regime,
                                 row.prediction.balance);
    out.score.relative_error = relative_error(row.prediction.eta, row.after.eta->mean);
    return out;
}

}  // namespace

PairEvaluation evaluate_phase_pair(std::span<const StockData> stocks, std::string_view phase_a,
                                   std::string_view phase_b, const StudyConfig& config) {
    const auto& win_a = config.phase(phase_a);
    const auto& win_b = config.phase(phase_b);

    std::vector<const StockData*> ordered;
    for (const auto& s : stocks) ordered.push_back(&s);
    std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });

    PairEvaluation eval;
    eval.phase_a = win_a.label;
    eval.phase_b = win_b.label;
    for (const auto* stock : ordered) {
        auto result = evaluate_stock(*stock, win_a, win_b, config);
        if (auto* reason = std::get_if<std::string>(&result)) {
            eval.disqualified.push_back({stock->id, std::move(*reason)});
        } else {
            eval.stocks.push_back(std::move(std::get<EvaluatedStock>(result)));
        }
    }
    std::vector<ScoreCard> cards;
    for (const auto& s : eval.stocks) cards.push_back(s.score);
    eval.mean_relative_error = aggregate_error(cards);
    return eval;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

OutputFormat parse_output_format(std::string_view name) {
    if (name == "table") return OutputFormat::Table;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + std::string(name) + "' (table, csv, json)");
}

std::string format_fixed2(double value) {
    // The nudge absorbs binary representation error so 0.285 renders as 0.29.
    const double scaled = value * 100.0;
    const double rounded = std::round(scaled + std::copysign(1e-9 * std::max(1.0, std::fabs(scaled)), scaled));
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", rounded / 100.0);
    std::string s(buf);
    return s == "-0.00" ? "0.00" : s;
}

std::string format_prediction_cell(const Prediction& p) {
    return format_fixed2(p.eta) + " [" + format_fixed2(p.ci_low) + "," + format_fixed2(p.ci_high) + "]";
}

namespace {

struct Cell {
    std::string text;
    bool numeric = false;
};

struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

Cell num2(std::optional<double> v) {
    return v ? Cell{format_fixed2(*v), true} : Cell{"n/a", true};
}

Cell num(std::optional<double> v, int precision = 6) {
    if (!v) return {"n/a", true};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
    return {buf, true};
}

Cell text(std::string_view s) { return {std::string(s), false}; }

std::string csv_escape(const std::string& s, char delimiter) {
    if (s.find(delimiter) == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

json to_json(const TextTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            const auto& c = r[i];
            if (c.numeric) {
                obj[t.header[i]] = c.text == "n/a" ? json(nullptr) : json(std::stod(c.text));
            } else {
                obj[t.header[i]] = c.text;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

void write_table(std::ostream& out, const TextTable& t, OutputFormat format) {
    switch (format) {
        case OutputFormat::Csv: {
            for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_escape(t.header[i], ',');
            out << '\n';
            for (const auto& r : t.rows) {
                for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(r[i].text, ',');
                out << '\n';
            }
            break;
        }
        case OutputFormat::Json:
            out << to_json(t).dump(2) << '\n';
            break;
        case OutputFormat::Table: {
            std::vector<std::size_t> width(t.header.size());
            for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
            for (const auto& r : t.rows) {
                for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].text.size());
            }
            auto line = [&](auto&& cell_text, auto&& is_numeric) {
                std::string s;
                for (std::size_t i = 0; i < width.size(); ++i) {
                    const std::string& c = cell_text(i);
                    const std::string pad(width[i] - c.size(), ' ');
                    if (i) s += "  ";
                    s += is_numeric(i) ? pad + c : c + pad;
                }
                while (!s.empty() && s.back() == ' ') s.pop_back();
                out << s << '\n';
            };
            line([&](std::size_t i) -> const std::string& { return t.header[i]; }, [](std::size_t) { return false; });
            std::size_t total = 0;
            for (auto w : width) total += w;
            out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
            for (const auto& r : t.rows) {
                line([&](std::size_t i) -> const std::string& { return r[i].text; },
                     [&](std::size_t i) { return r[i].numeric; });
            }
            break;
        }
    }
    if (!out) throw std::runtime_error("failed writing report output");
}

std::string_view regime_cell(const std::optional<Regime>& r) {
    return r ? large_tick_label(*r) : "n/a";
}

std::string_view balance_cell(const std::optional<Balance>& b) {
    return b ? balanced_label(*b) : "n/a";
}

std::optional<double> eta_mean(const PhaseSummary& s) {
    return s.eta ? std::optional<double>(s.eta->mean) : std::nullopt;
}

}  // namespace

void render_evaluation(std::ostream& out, const PairEvaluation& eval, OutputFormat format) {
    const auto& a = eval.phase_a;
    const auto& b = eval.phase_b;
    TextTable t;
    t.header = {"stars",      "stock",         "S_" + a,       "eta_" + a,     "S_" + b,
                "eta_" + b,   "LTick_" + b,    "Bal_" + b,     "eta_" + b + "p", "LTick_" + b + "p",
                "Bal_" + b + "p", "tick_" + a, "tick_" + b,    "clamped",      "rel_error"};
    for (const auto& s : eval.stocks) {
        const auto& r = s.row;
        t.rows.push_back({text(stars_text(s.score)), text(r.stock), num2(r.before.spread), num2(eta_mean(r.before)),
                          num2(r.after.spread), num2(eta_mean(r.after)), text(regime_cell(r.after.regime)),
                          text(balance_cell(r.after.balance)), text(format_prediction_cell(r.prediction)),
                          text(large_tick_label(r.prediction.regime)), text(balanced_label(r.prediction.balance)),
                          {format_decimal(r.change.from), true}, {format_decimal(r.change.to), true},
                          text(r.prediction.clamped ? "yes" : "no"), num(s.score.relative_error, 4)});
    }

    if (format == OutputFormat::Json) {
        json j;
        j["phase_a"] = a;
        j["phase_b"] = b;
        j["rows"] = to_json(t);
        j["mean_relative_error"] = eval.mean_relative_error ? json(*eval.mean_relative_error) : json(nullptr);
        j["disqualified"] = json::array();
        for (const auto& d : eval.disqualified) j["disqualified"].push_back({{"stock", d.stock}, {"reason", d.reason}});
        out << j.dump(2) << '\n';
        return;
    }
    write_table(out, t, format);
    if (format == OutputFormat::Table) {
        out << "\nmean relative error: "
            << (eval.mean_relative_error ? format_fixed2(*eval.mean_relative_error) : std::string("n/a")) << '\n';
        for (const auto& d : eval.disqualified) out << "skipped " << d.stock << ": " << d.reason << '\n';
    }
}

void render_classification(std::ostream& out, std::span<const ClassificationRow> rows, OutputFormat format) {
    TextTable t;
    t.header = {"stock", "phase", "tick", "days", "S", "eta", "eta_q25", "eta_q75", "LTick", "Bal",
                "suitable", "market_order_cost", "implicit_spread", "mm_edge", "optimal_tick"};
    for (const auto& r : rows) {
        const auto& s = r.summary;
        const bool suitable = s.regime && s.eta && suitable_tick(*s.regime, s.eta->mean);
        std::optional<double> q25, q75, opt;
        if (s.eta) {
            q25 = s.eta->q25;
            q75 = s.eta->q75;
            if (s.tick > 0.0) opt = optimal_tick(s.eta->mean, s.tick);
        }
        std::optional<double> mo, is, edge;
        if (r.costs) {
            mo = r.costs->market_order.value;
            is = r.costs->implicit_spread;
            edge = r.costs->mm_edge;
        }
        t.rows.push_back({text(r.stock), text(s.phase), {format_decimal(s.tick), true},
                          {std::to_string(s.n_days), true}, num2(s.spread), num2(eta_mean(s)), num2(q25), num2(q75),
                          text(regime_cell(s.regime)), text(balance_cell(s.balance)), text(suitable ? "Yes" : "No"),
                          num(mo, 4), num(is, 4), num(edge, 4), num(opt, 4)});
    }
    write_table(out, t, format);
}

void render_days(std::ostream& out, std::span<const DayStats> days, OutputFormat format) {
    TextTable t;
    t.header = {"date", "N_c", "N_a", "eta", "S", "M", "sigma"};
    for (const auto& d : days) {
        t.rows.push_back({text(format_date(d.date)), {std::to_string(d.counts.continuations), true},
                          {std::to_string(d.counts.alternations), true}, num(d.eta), num(d.spread_ticks),
                          {std::to_string(d.trade_count), true}, num(d.sigma)});
    }
    write_table(out, t, format);
}

std::vector<PlotPoint> daily_eta_plot(std::span<const DayStats> before, std::string_view label_before,
                                      std::span<const DayStats> after, std::string_view label_after,
                                      std::optional<double> forecast_after) {
    std::vector<PlotPoint> points;
    auto daily = [&](std::span<const DayStats> days) {
        for (const auto& d : days) {
            if (d.eta) points.push_back({d.date, *d.eta, "daily_eta"});
        }
    };
    auto flat = [&](std::span<const DayStats> days, double value, std::string series) {
        if (days.empty()) return;
        points.push_back({days.front().date, value, series});
        points.push_back({days.back().date, value, std::move(series)});
    };
    daily(before);
    daily(after);
    if (auto e = eta_period(before)) flat(before, e->mean, "mean_" + std::string(label_before));
    if (auto e = eta_period(after)) flat(after, e->mean, "mean_" + std::string(label_after));
    if (forecast_after) flat(after, *forecast_after, "forecast_" + std::string(label_after));
    return points;
}

void render_plot_data(std::ostream& out, std::span<const PlotPoint> points, char delimiter) {
    out << "date" << delimiter << "value" << delimiter << "series\n";
    char buf[64];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.6f", p.value);
        out << format_date(p.date) << delimiter << buf << delimiter << p.series << '\n';
    }
    if (!out) throw std::runtime_error("failed writing plot data");
}

}  // namespace uzone
