// uzone: eta estimation, tick-regime classification and tick-change forecasts
// from tick-by-tick trade files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uzone/classification.hpp"
#include "uzone/costs.hpp"
#include "uzone/estimator.hpp"
#include "uzone/ingest.hpp"
#include "uzone/predictor.hpp"
#include "uzone/report.hpp"
#include "uzone/simulator.hpp"

namespace {

using namespace uzone;

struct GlobalOptions {
    std::string config_path;
    std::string data_dir;
    std::string phase;
    std::string format = "table";
    std::uint64_t seed = 1;
};

StudyConfig load_config(const GlobalOptions& g) {
    return g.config_path.empty() ? tse_study_config() : load_study_config(g.config_path);
}

std::vector<StockData> load_stocks(const std::vector<std::string>& files, const GlobalOptions& g,
                                   const StudyConfig& config) {
    std::vector<StockData> stocks;
    if (!g.data_dir.empty()) stocks = load_data_dir(g.data_dir, config.csv);
    for (const auto& f : files) {
        stocks.push_back({std::filesystem::path(f).stem().string(), parse_trades_file(f, config.csv).trades});
    }
    if (stocks.empty()) throw ConfigError("no input: pass trade files or --data-dir");
    return stocks;
}

std::vector<const PhaseWindow*> selected_phases(const StudyConfig& config, const std::string& label) {
    std::vector<const PhaseWindow*> out;
    if (!label.empty()) {
        out.push_back(&config.phase(label));
    } else {
        for (const auto& p : config.phases) out.push_back(&p);
    }
    return out;
}

std::string fixed(double v, int precision = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

// Period statistics of one stock in one phase, reference tick = tick at the
// last trade of the phase.
ClassificationRow classify_stock(const StockData& stock, const PhaseWindow& window, const StudyConfig& config,
                                 std::vector<DayStats>* kept_days = nullptr) {
    const auto filtered = session_filter(stock.trades, config.sessions);
    const auto& table = config.table(window.label);
    auto days = analyze_phase(filtered, window, table, config.vol_grid);

    ClassificationRow row;
    row.stock = stock.id;
    if (days.empty()) {
        row.summary.phase = window.label;
        return row;
    }
    double reference = 0.0;
    for (const auto& t : filtered) {
        if (window.contains(date_of(t.timestamp))) reference = table.tick_value(t.price);
    }
    std::vector<DayStats> uniform;
    for (auto& d : days) {
        if (d.observed_ticks.size() == 1 && *d.observed_ticks.begin() == reference) uniform.push_back(std::move(d));
    }
    row.summary = summarize_phase(window.label, reference, uniform, config.classification);
    if (row.summary.eta && row.summary.spread) {
        double sum_sigma = 0.0;
        std::size_t n_sigma = 0, trades = 0;
        for (const auto& d : uniform) {
            trades += d.trade_count;
            if (d.sigma) {
                sum_sigma += *d.sigma;
                ++n_sigma;
            }
        }
        if (n_sigma > 0 && !uniform.empty()) {
            const VolStat vol{sum_sigma / static_cast<double>(n_sigma), trades / uniform.size()};
            row.costs = cost_report(reference, row.summary.eta->mean, *row.summary.spread, vol);
        }
    }
    if (kept_days) *kept_days = std::move(uniform);
    return row;
}

int run_eta(const GlobalOptions& g, const std::vector<std::string>& files, const std::string& phase_b,
            bool plot_data) {
    const auto config = load_config(g);
    const auto format = parse_output_format(g.format);
    const auto stocks = load_stocks(files, g, config);
    for (const auto& stock : stocks) {
        for (const auto* window : selected_phases(config, g.phase)) {
            std::vector<DayStats> days;
            const auto row = classify_stock(stock, *window, config, &days);
            if (plot_data) {
                std::vector<DayStats> after;
                std::optional<double> forecast;
                if (!phase_b.empty()) {
                    const auto row_b = classify_stock(stock, config.phase(phase_b), config, &after);
                    if (row.summary.eta && row_b.summary.tick > 0.0 && row.summary.tick > 0.0) {
                        forecast = predict_eta(row.summary.eta->mean, {row.summary.tick, row_b.summary.tick});
                    }
                }
                render_plot_data(std::cout, daily_eta_plot(days, window->label, after, phase_b, forecast));
                continue;
            }
            std::cout << "# " << stock.id << " phase " << window->label << '\n';
            render_days(std::cout, days, format);
            if (const auto& e = row.summary.eta) {
                std::cout << "eta " << fixed(e->mean) << " q25 " << fixed(e->q25) << " q75 " << fixed(e->q75)
                          << " days " << e->n_days << "\n\n";
            } else {
                std::cout << "eta unavailable\n\n";
            }
        }
    }
    return 0;
}

int run_classify(const GlobalOptions& g, const std::vector<std::string>& files) {
    const auto config = load_config(g);
    const auto stocks = load_stocks(files, g, config);
    std::vector<ClassificationRow> rows;
    for (const auto& stock : stocks) {
        for (const auto* window : selected_phases(config, g.phase)) rows.push_back(classify_stock(stock, *window, config));
    }
    render_classification(std::cout, rows, parse_output_format(g.format));
    return 0;
}

int run_predict(const GlobalOptions& g, double eta0, double alpha0, double alpha, std::optional<double> q25,
                std::optional<double> q75) {
    const auto config = load_config(g);
    const TickChange change{alpha0, alpha};
    change.validate();
    const EtaEstimate est{eta0, q25.value_or(eta0), q75.value_or(eta0), 1};
    if (est.q25 > est.q75) throw ConfigError("--q25 must not exceed --q75");
    const auto p = predict_with_ci(est, change, config.prediction);
    const auto cost_before = market_order_cost(alpha0, eta0);
    const auto cost_after = market_order_cost(alpha, p.eta);

    if (parse_output_format(g.format) == OutputFormat::Json) {
        std::cout << "{\"eta_p\": " << p.eta << ", \"eta_raw\": " << p.eta_unclamped << ", \"ci\": [" << p.ci_low
                  << ", " << p.ci_high << "], \"clamped\": " << (p.clamped ? "true" : "false")
                  << ", \"regime\": \"" << to_string(p.regime) << "\", \"balance\": \"" << to_string(p.balance)
                  << "\", \"market_order_cost_before\": " << cost_before.value
                  << ", \"market_order_cost_after\": " << cost_after.value
                  << ", \"implicit_spread_after\": " << implicit_spread(alpha, p.eta)
                  << ", \"optimal_tick\": " << optimal_tick(eta0, alpha0) << "}\n";
        return 0;
    }
    std::cout << "eta_p            " << format_prediction_cell(p) << (p.clamped ? " (clamped)" : "") << '\n'
              << "raw forecast     " << fixed(p.eta_unclamped) << '\n'
              << "large tick       " << large_tick_label(p.regime) << '\n'
              << "balanced         " << balanced_label(p.balance) << '\n'
              << "mo cost before   " << fixed(cost_before.value) << '\n'
              << "mo cost after    " << fixed(cost_after.value)
              << (cost_after.spread_widening_expected ? " (spread widening expected)" : "") << '\n'
              << "implicit spread  " << fixed(implicit_spread(alpha, p.eta)) << '\n'
              << "optimal tick     " << fixed(optimal_tick(eta0, alpha0)) << '\n';
    return 0;
}

int run_optimal_tick(const GlobalOptions& g, double eta0, double alpha0) {
    const double a = optimal_tick(eta0, alpha0);
    if (parse_output_format(g.format) == OutputFormat::Json) {
        std::cout << "{\"optimal_tick\": " << a << "}\n";
    } else {
        std::cout << fixed(a, 6) << '\n';
    }
    return 0;
}

int run_simulate(const GlobalOptions& g, SimConfig sim, const std::string& start, const std::string& out_path) {
    const auto config = load_config(g);
    sim.seed = g.seed;
    if (!start.empty()) sim.start_date = parse_date(start);
    const auto path = simulate(sim);
    if (out_path.empty() || out_path == "-") {
        export_trades(path, std::cout, config.csv);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        export_trades(path, out, config.csv);
    }
    std::cerr << "simulated " << path.trades.size() << " trades, " << path.directions.size()
              << " price changes, eta " << sim.eta << '\n';
    return 0;
}

int run_report(const GlobalOptions& g, const std::vector<std::string>& files, const std::string& phase_a,
               const std::string& phase_b) {
    const auto config = load_config(g);
    const auto stocks = load_stocks(files, g, config);
    const auto eval = evaluate_phase_pair(stocks, phase_a, phase_b, config);
    render_evaluation(std::cout, eval, parse_output_format(g.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uzone - uncertainty-zones microstructure toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON study config (default: TSE pilot preset)");
    app.add_option("--data-dir", g.data_dir, "Directory with one trade file per instrument");
    app.add_option("--phase", g.phase, "Phase label to restrict to");
    app.add_option("--format", g.format, "table | csv | json")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--seed", g.seed, "Random seed for simulate");

    std::vector<std::string> files;
    std::string phase_b;
    bool plot_data = false;
    auto* eta = app.add_subcommand("eta", "Daily and period eta per instrument");
    eta->add_option("files", files, "Trade files")->check(CLI::ExistingFile);
    eta->add_flag("--plot-data", plot_data, "Emit date,value,series rows (daily eta and phase means)");
    eta->add_option("--phase-b", phase_b, "With --plot-data: add the next phase and the forecast line");

    auto* classify = app.add_subcommand("classify", "Spread, eta, regime, balance and cost per instrument and phase");
    classify->add_option("files", files, "Trade files")->check(CLI::ExistingFile);

    double eta0 = 0.0, alpha0 = 0.0, alpha = 0.0;
    std::optional<double> q25, q75;
    auto* predict = app.add_subcommand("predict", "Forecast eta, regime and balance after a tick change");
    predict->add_option("--eta0", eta0, "Current eta")->required();
    predict->add_option("--alpha0", alpha0, "Current tick value")->required();
    predict->add_option("--alpha", alpha, "New tick value")->required();
    predict->add_option("--q25", q25, "25% quantile of daily eta");
    predict->add_option("--q75", q75, "75% quantile of daily eta");

    auto* optimal = app.add_subcommand("optimal-tick", "Tick value giving a forecast eta of 1/2");
    optimal->add_option("--eta0", eta0, "Current eta")->required();
    optimal->add_option("--alpha0", alpha0, "Current tick value")->required();

    SimConfig sim;
    std::string start, out_path;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate synthetic trades with a known eta");
    simulate_cmd->add_option("--eta", sim.eta, "True eta in (0, 0.5]");
    simulate_cmd->add_option("--alpha", sim.alpha, "Tick value");
    simulate_cmd->add_option("--sigma", sim.sigma, "Efficient-price volatility per trading day");
    simulate_cmd->add_option("--price", sim.initial_price, "Initial price (on the tick grid)");
    simulate_cmd->add_option("--changes", sim.n_changes, "Number of price changes");
    simulate_cmd->add_option("--trades-between", sim.trades_between, "Mean same-price trades between changes");
    simulate_cmd->add_option("--start-date", start, "First trading date, YYYY-MM-DD");
    simulate_cmd->add_option("--out", out_path, "Output file (default stdout)");

    std::string phase_a = "0";
    std::string report_b = "1";
    auto* report = app.add_subcommand("report", "Forecast phase B from phase A and score it");
    report->add_option("files", files, "Trade files")->check(CLI::ExistingFile);
    report->add_option("--phase-a", phase_a, "Phase the forecast starts from");
    report->add_option("--phase-b", report_b, "Phase being forecast");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eta) return run_eta(g, files, phase_b, plot_data);
        if (*classify) return run_classify(g, files);
        if (*predict) return run_predict(g, eta0, alpha0, alpha, q25, q75);
        if (*optimal) return run_optimal_tick(g, eta0, alpha0);
        if (*simulate_cmd) return run_simulate(g, sim, start, out_path);
        if (*report) return run_report(g, files, phase_a, report_b);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
