#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridlock/calendar.hpp"
#include "gridlock/time_grid.hpp"

namespace gridlock {

/// One road segment's travel times across a full-day grid on one day.
/// Missing intervals stay unset; interpolation is a congestion-module policy.
struct TravelTimeSeries {
    std::string segment_id;  // TMC code
    Date day;
    TimeGrid grid = TimeGrid::full_day();
    std::vector<std::optional<double>> times;  // seconds, all > 0 where present

    std::size_t gap_count() const {
        std::size_t n = 0;
        for (const auto& t : times)
            if (!t) ++n;
        return n;
    }
};

}  // namespace gridlock
