#pragma once

#include <compare>

#include "gridlock/errors.hpp"

namespace gridlock {

/// Uniform time-of-day grid. Intervals are labeled by their start time and
/// are left-closed right-open: interval t covers
/// [start + t*interval, start + (t+1)*interval).
struct TimeGrid {
    int interval_minutes = 5;
    int start_minute = 0;  // minutes after midnight
    int count = 72;

    auto operator<=>(const TimeGrid&) const = default;

    static TimeGrid make(int interval_minutes, int start_minute, int end_minute) {
        if (interval_minutes <= 0 || 60 % interval_minutes != 0)
            throw ConfigError("grid interval must be a positive divisor of 60 minutes");
        if (end_minute <= start_minute || (end_minute - start_minute) % interval_minutes != 0)
            throw ConfigError("grid window must be a positive multiple of the interval");
        return TimeGrid{interval_minutes, start_minute, (end_minute - start_minute) / interval_minutes};
    }

    int end_minute() const { return start_minute + count * interval_minutes; }

    bool contains_minute(int minute_of_day) const {
        return minute_of_day >= start_minute && minute_of_day < end_minute() &&
               (minute_of_day - start_minute) % interval_minutes == 0;
    }

    int index_of(int minute_of_day) const {
        return (minute_of_day - start_minute) / interval_minutes;
    }

    int minute_at(int index) const { return start_minute + index * interval_minutes; }

    /// Interval start time as fractional hours after midnight.
    double hours_at(int index) const { return minute_at(index) / 60.0; }

    double interval_hours() const { return interval_minutes / 60.0; }

    /// Full-day grid at the given resolution (e.g. 288 intervals at 5 min).
    static TimeGrid full_day(int interval_minutes = 5) {
        return make(interval_minutes, 0, 24 * 60);
    }
};

}  // namespace gridlock
