#include "uzone/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace uzone {

namespace {

using namespace std::chrono;

// Prices are kept as integer multiples of the tick and converted through a
// power-of-ten scale so decimal ticks (0.1, 0.5) produce the closest double
// to the intended decimal price.
class PriceGrid {
public:
    explicit PriceGrid(double tick) {
        for (int s = 0; s <= 9; ++s, scale_ *= 10.0) {
            const double scaled = tick * scale_;
            if (std::fabs(scaled - std::round(scaled)) <= 1e-9 * scaled) {
                tick_units_ = static_cast<std::int64_t>(std::round(scaled));
                return;
            }
        }
        throw std::invalid_argument("simulate: tick must have at most 9 decimal places");
    }

    std::int64_t level_of(double price) const {
        return static_cast<std::int64_t>(std::llround(price * scale_)) / tick_units_;
    }
    double price(std::int64_t level) const {
        return static_cast<double>(level * tick_units_) / scale_;
    }

private:
    double scale_ = 1.0;
    std::int64_t tick_units_ = 1;
};

// Maps diffusion time (trading days since start) onto session wall-clock time.
class SessionClock {
public:
    SessionClock(Date start, const SessionSpec& spec) : date_(next_weekday(start)), sessions_(spec.sessions) {
        for (const auto& s : sessions_) day_length_ += s.close - s.open;
    }

    Timestamp at(double t_days) {
        const auto k = static_cast<std::int64_t>(std::floor(t_days));
        while (day_index_ < k) {
            date_ = next_weekday(Date{sys_days{date_} + days{1}});
            ++day_index_;
        }
        auto offset = microseconds{static_cast<std::int64_t>(
            std::floor((t_days - static_cast<double>(k)) * static_cast<double>(day_length_.count())))};
        for (const auto& s : sessions_) {
            const auto len = s.close - s.open;
            if (offset < len) return uzone::at(date_, s.open + offset);
            offset -= len;
        }
        return uzone::at(date_, sessions_.back().close - microseconds{1});
    }

private:
    static Date next_weekday(Date d) {
        weekday wd{sys_days{d}};
        while (wd == Saturday || wd == Sunday) {
            d = Date{sys_days{d} + days{1}};
            wd = weekday{sys_days{d}};
        }
        return d;
    }

    Date date_;
    std::vector<Session> sessions_;
    microseconds day_length_{0};
    std::int64_t day_index_ = 0;
};

}  // namespace

void SimConfig::validate() const {
    if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("sim config: eta must lie in (0, 0.5]");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("sim config: alpha must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sim config: sigma must be positive");
    if (!(initial_price > alpha)) {
        throw std::invalid_argument("sim config: initial price must exceed one tick");
    }
    const double levels = initial_price / alpha;
    if (std::fabs(levels - std::round(levels)) > 1e-9 * levels) {
        throw std::invalid_argument("sim config: initial price must lie on the tick grid");
    }
    if (!(trades_between >= 0.0)) throw std::invalid_argument("sim config: trades_between must be >= 0");
    if (!(steps_per_barrier >= 1.0)) throw std::invalid_argument("sim config: steps_per_barrier must be >= 1");
    if (!start_date.ok()) throw std::invalid_argument("sim config: invalid start date");
    try {
        sessions.validate();
    } catch (const ConfigError& e) {
        throw std::invalid_argument(std::string("sim config: ") + e.what());
    }
}

double continuation_prob(double eta) {
    return 2.0 * eta / (1.0 + 2.0 * eta);
}

SimPath simulate(const SimConfig& config) {
    config.validate();

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::poisson_distribution<int> same_price_trades(config.trades_between > 0.0 ? config.trades_between : 1.0);

    const PriceGrid grid(config.alpha);
    SessionClock clock(config.start_date, config.sessions);

    // After a move, the efficient price sits on the far edge of the uncertainty
    // zone it just crossed: one full tick from the next zone in the same
    // direction and 2*eta*alpha from the zone in the opposite direction.
    const double continuation_distance = config.alpha;
    const double alternation_distance = 2.0 * config.eta * config.alpha;
    const double step_sd = std::min(continuation_distance, alternation_distance) / config.steps_per_barrier;
    const double step_var = step_sd * step_sd;
    const double dt = step_var / (config.sigma * config.sigma);  // trading days

    SimPath path;
    path.eta_true = config.eta;
    path.directions.reserve(config.n_changes);
    path.trades.reserve(static_cast<std::size_t>(
        static_cast<double>(config.n_changes) * (1.0 + config.trades_between) + 1.0));

    std::int64_t level = grid.level_of(config.initial_price);
    int last_direction = +1;
    auto emit = [&](double t_days) {
        const double p = grid.price(level);
        TradeRecord rec;
        rec.timestamp = clock.at(t_days);
        rec.price = p;
        if (last_direction > 0) {
            rec.bid = grid.price(level - 1);
            rec.ask = p;
        } else {
            rec.bid = p;
            rec.ask = grid.price(level + 1);
        }
        path.trades.push_back(rec);
    };

    emit(0.0);
    std::int64_t steps = 0;
    std::vector<double> fill_times;
    for (std::size_t change = 0; change < config.n_changes; ++change) {
        const double up = last_direction > 0 ? continuation_distance : alternation_distance;
        const double down = last_direction > 0 ? alternation_distance : continuation_distance;
        const std::int64_t start_step = steps;

        double w = 0.0;
        int direction = 0;
        while (direction == 0) {
            const double next = w + step_sd * normal(rng);
            ++steps;
            if (next >= up) {
                direction = +1;
            } else if (next <= -down) {
                direction = -1;
            } else {
                // Probability that the Brownian bridge between w and next touched a barrier.
                const double p_up = std::exp(-2.0 * (up - w) * (up - next) / step_var);
                const double p_down = std::exp(-2.0 * (w + down) * (next + down) / step_var);
                const double u = uniform(rng);
                if (u < p_up) {
                    direction = +1;
                } else if (u < p_up + p_down) {
                    direction = -1;
                }
            }
            w = next;
        }

        const double t_start = static_cast<double>(start_step) * dt;
        const double t_change = static_cast<double>(steps) * dt;
        if (config.trades_between > 0.0) {
            const int n_fill = same_price_trades(rng);
            fill_times.clear();
            for (int i = 0; i < n_fill; ++i) fill_times.push_back(t_start + uniform(rng) * (t_change - t_start));
            std::sort(fill_times.begin(), fill_times.end());
            for (const double t : fill_times) emit(t);
        }

        level += direction;
        last_direction = direction;
        path.directions.push_back(static_cast<std::int8_t>(direction));
        if (level - 1 <= 0) {
            throw std::runtime_error("simulate: price path reached the zero bound; raise initial_price");
        }
        emit(t_change);
    }
    return path;
}

void export_trades(const SimPath& path, std::ostream& out, const CsvFormat& format) {
    write_trades(out, path.trades, format);
}

}  // namespace uzone
