#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gridlock/errors.hpp"
#include "gridlock/travel.hpp"

namespace gridlock {

/// Per-(segment, day) congestion onset and duration, in fractional hours.
struct CongestionRecord {
    std::string segment_id;
    Date day;
    std::optional<double> cst;       // hours after midnight
    std::optional<double> duration;  // hours; present iff cst present
    double fftt = 0.0;               // seconds
};

struct CongestionParams {
    double ratio = 2.0;       // congested when travel time / fftt >= ratio
    int persistence = 3;      // consecutive intervals the ratio must hold (15 min at 5-min grid)
    int window_start_minute = 5 * 60;   // morning search window
    int window_end_minute = 12 * 60;
    bool interpolate_gaps = false;      // linearly fill gaps of <= 2 intervals
    bool fftt_percentile_mode = false;  // 5th percentile instead of strict minimum
};

/// FFTT of a segment: minimum travel time across all its series, or the
/// 5th percentile in robust mode (a single noisy low reading corrupts the
/// strict minimum).
inline double free_flow_travel_time(const std::vector<TravelTimeSeries>& series,
                                    bool percentile_mode = false) {
    std::vector<double> obs;
    for (const auto& s : series)
        for (const auto& t : s.times)
            if (t) obs.push_back(*t);
    if (obs.empty()) throw DataError("free_flow_travel_time: no observations");
    if (!percentile_mode) return *std::min_element(obs.begin(), obs.end());
    std::sort(obs.begin(), obs.end());
    const double rank = 0.05 * static_cast<double>(obs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, obs.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return obs[lo] * (1.0 - frac) + obs[hi] * frac;
}

namespace detail {

/// Working copy of the day's ratios r/fftt; gaps become NaN (or are filled
/// by linear interpolation across runs of <= max_fill missing intervals).
inline std::vector<double> ratio_trace(const TravelTimeSeries& s, double fftt,
                                       bool interpolate_gaps, int max_fill = 2) {
    std::vector<double> r(s.times.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t t = 0; t < s.times.size(); ++t)
        if (s.times[t]) r[t] = *s.times[t] / fftt;
    if (!interpolate_gaps) return r;
    std::size_t t = 0;
    while (t < r.size()) {
        if (!std::isnan(r[t])) {
            ++t;
            continue;
        }
        std::size_t end = t;
        while (end < r.size() && std::isnan(r[end])) ++end;
        const std::size_t len = end - t;
        if (t > 0 && end < r.size() && len <= static_cast<std::size_t>(max_fill)) {
            const double a = r[t - 1], b = r[end];
            for (std::size_t i = 0; i < len; ++i)
                r[t + i] = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(len + 1);
        }
        t = end;
    }
    return r;
}

}  // namespace detail

/// True iff r/fftt >= ratio at t, t+1, ..., t+persistence-1. Missing values
/// fail the condition unless gap interpolation filled them.
inline bool is_stationarily_congested(const TravelTimeSeries& s, int t, double fftt,
                                      const CongestionParams& params = {}) {
    if (t < 0 || t + params.persistence > s.grid.count)
        throw ContractError("is_stationarily_congested: persistence window exceeds the day");
    const auto r = detail::ratio_trace(s, fftt, params.interpolate_gaps);
    for (int i = t; i < t + params.persistence; ++i) {
        const double v = r[static_cast<std::size_t>(i)];
        if (std::isnan(v) || v < params.ratio) return false;
    }
    return true;
}

/// Earliest interval in the morning window where stationary congestion
/// begins; fractional hours, or nullopt for a congestion-free morning.
inline std::optional<double> extract_cst(const TravelTimeSeries& s, double fftt,
                                         const CongestionParams& params = {}) {
    const auto r = detail::ratio_trace(s, fftt, params.interpolate_gaps);
    const int first = std::max(0, (params.window_start_minute - s.grid.start_minute) /
                                      s.grid.interval_minutes);
    const int last = std::min(s.grid.count, (params.window_end_minute - s.grid.start_minute) /
                                                s.grid.interval_minutes);
    for (int t = first; t < last && t + params.persistence <= s.grid.count; ++t) {
        bool ok = true;
        for (int i = t; i < t + params.persistence; ++i) {
            const double v = r[static_cast<std::size_t>(i)];
            if (std::isnan(v) || v < params.ratio) {
                ok = false;
                break;
            }
        }
        if (ok) return s.grid.hours_at(t);
    }
    return std::nullopt;
}

/// Duration from cst until the start of the first persistence-length run
/// below the ratio (symmetric to the onset rule); end-of-day caps it.
inline double extract_duration(const TravelTimeSeries& s, double fftt, double cst,
                               const CongestionParams& params = {}) {
    const auto r = detail::ratio_trace(s, fftt, params.interpolate_gaps);
    const int cst_idx = static_cast<int>(
        std::lround((cst * 60.0 - s.grid.start_minute) / s.grid.interval_minutes));
    for (int t = cst_idx + 1; t + params.persistence <= s.grid.count; ++t) {
        bool below = true;
        for (int i = t; i < t + params.persistence; ++i) {
            const double v = r[static_cast<std::size_t>(i)];
            if (std::isnan(v) || v >= params.ratio) {
                below = false;
                break;
            }
        }
        if (below) return s.grid.hours_at(t) - cst;
    }
    return s.grid.end_minute() / 60.0 - cst;
}

/// Full per-day record for one segment (fftt computed across all its days).
inline std::vector<CongestionRecord> extract_congestion(
    const std::vector<TravelTimeSeries>& segment_series, const CongestionParams& params = {}) {
    const double fftt = free_flow_travel_time(segment_series, params.fftt_percentile_mode);
    std::vector<CongestionRecord> records;
    records.reserve(segment_series.size());
    for (const auto& s : segment_series) {
        CongestionRecord rec;
        rec.segment_id = s.segment_id;
        rec.day = s.day;
        rec.fftt = fftt;
        rec.cst = extract_cst(s, fftt, params);
        if (rec.cst) rec.duration = extract_duration(s, fftt, *rec.cst, params);
        records.push_back(rec);
    }
    return records;
}

}  // namespace gridlock
