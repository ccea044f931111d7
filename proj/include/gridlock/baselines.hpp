#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gridlock/arma.hpp"
#include "gridlock/calendar.hpp"
#include "gridlock/congestion.hpp"
#include "gridlock/travel.hpp"

namespace gridlock {

struct ArmaCstParams {
    int cutoff_minute = 6 * 60;  // traffic observed up to here
    int p_max = 4, q_max = 4;
    CongestionParams congestion;
};

/// ARMA baseline for one day: AIC order selection on the pre-cutoff travel
/// times, forecast through the morning window, congestion conditions applied
/// to the observed+forecast trajectory. nullopt when no congestion is
/// predicted or every fit fails.
inline std::optional<double> predict_cst_arma(const TravelTimeSeries& series, double fftt,
                                              const ArmaCstParams& params = {},
                                              std::string* diagnostic = nullptr) {
    const TimeGrid& grid = series.grid;
    const int cutoff_idx =
        std::min(grid.count, (params.cutoff_minute - grid.start_minute) / grid.interval_minutes);

    // Pre-cutoff history; internal gaps forward-filled, leading gaps dropped.
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cutoff_idx));
    for (int t = 0; t < cutoff_idx; ++t) {
        const auto& v = series.times[static_cast<std::size_t>(t)];
        if (v)
            history.push_back(*v);
        else if (!history.empty())
            history.push_back(history.back());
    }
    if (history.size() < 20) {
        if (diagnostic) *diagnostic = "too few pre-cutoff observations";
        return std::nullopt;
    }

    // AIC over the orders the series length can support.
    const int n = static_cast<int>(history.size());
    std::optional<ArmaModel> best;
    for (int p = 0; p <= params.p_max; ++p)
        for (int q = 0; q <= params.q_max; ++q) {
            if (n < 10 * (p + q + 1)) continue;
            try {
                ArmaModel m = fit_arma(history, p, q);
                if (!best || m.aic < best->aic) best = std::move(m);
            } catch (const NumericalError&) {
            }
        }
    if (!best) {
        if (diagnostic) *diagnostic = "every ARMA fit failed";
        return std::nullopt;
    }

    const int window_end_idx =
        std::min(grid.count, (params.congestion.window_end_minute - grid.start_minute) /
                                 grid.interval_minutes) +
        params.congestion.persistence;
    const int horizon = std::max(1, std::min(grid.count, window_end_idx) - cutoff_idx);
    const auto fc = forecast(*best, history, horizon);

    // Observed up to the cutoff, forecast beyond it.
    TravelTimeSeries trajectory = series;
    for (int t = cutoff_idx; t < grid.count; ++t) {
        const int k = t - cutoff_idx;
        trajectory.times[static_cast<std::size_t>(t)] =
            k < static_cast<int>(fc.size()) ? std::optional<double>(std::max(fc[static_cast<std::size_t>(k)], 1e-9))
                                            : std::nullopt;
    }
    return extract_cst(trajectory, fftt, params.congestion);
}

/// Mean CST over the most recent `lookback` prior weekday records; days
/// without congestion are skipped, not imputed. Records must be sorted by day.
inline std::optional<double> historical_mean_cst(const std::vector<CongestionRecord>& records,
                                                 const Date& day, int lookback = 5) {
    double sum = 0.0;
    int with_cst = 0, weekdays_seen = 0;
    for (auto it = records.rbegin(); it != records.rend() && weekdays_seen < lookback; ++it) {
        if (!(it->day < day)) continue;
        if (weekday_index(it->day) >= 5) continue;  // weekend
        ++weekdays_seen;
        if (it->cst) {
            sum += *it->cst;
            ++with_cst;
        }
    }
    if (with_cst == 0) return std::nullopt;
    return sum / static_cast<double>(with_cst);
}

/// Same lookback rule for durations.
inline std::optional<double> historical_mean_duration(const std::vector<CongestionRecord>& records,
                                                      const Date& day, int lookback = 5) {
    double sum = 0.0;
    int with_dur = 0, weekdays_seen = 0;
    for (auto it = records.rbegin(); it != records.rend() && weekdays_seen < lookback; ++it) {
        if (!(it->day < day)) continue;
        if (weekday_index(it->day) >= 5) continue;
        ++weekdays_seen;
        if (it->duration) {
            sum += *it->duration;
            ++with_dur;
        }
    }
    if (with_dur == 0) return std::nullopt;
    return sum / static_cast<double>(with_dur);
}

}  // namespace gridlock
