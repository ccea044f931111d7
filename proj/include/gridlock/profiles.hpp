#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "gridlock/calendar.hpp"
#include "gridlock/errors.hpp"
#include "gridlock/time_grid.hpp"

namespace gridlock {

/// One household's electricity use across the grid on one day.
struct DailyProfile {
    std::string household_id;
    Date day;
    std::vector<double> values;  // kWh per interval (raw) or unit-norm (normalized)
    bool normalized = false;
    bool all_zero = false;
};

/// Scales values so the sum of squares is one. All-zero profiles are
/// returned unchanged with the all_zero flag set; they are later excluded
/// from clustering distances but kept in the panel for auditability.
inline DailyProfile normalize_profile(const DailyProfile& p) {
    if (p.normalized) throw ContractError("profile already normalized");
    DailyProfile out = p;
    double ss = 0.0;
    for (double v : p.values) ss += v * v;
    if (ss == 0.0) {
        out.all_zero = true;
        out.normalized = true;
        return out;
    }
    const double scale = 1.0 / std::sqrt(ss);
    for (double& v : out.values) v *= scale;
    out.normalized = true;
    return out;
}

/// Complete H x D grid of daily profiles sharing one TimeGrid. Households
/// are retained only if observed on every day.
struct ProfilePanel {
    TimeGrid grid;
    std::vector<std::string> households;  // ordered, size H
    std::vector<Date> days;               // ordered, size D
    std::vector<DailyProfile> profiles;   // row-major: profiles[h * D + d]

    std::size_t household_count() const { return households.size(); }
    std::size_t day_count() const { return days.size(); }

    const DailyProfile& at(std::size_t h, std::size_t d) const {
        return profiles[h * days.size() + d];
    }
    DailyProfile& at(std::size_t h, std::size_t d) { return profiles[h * days.size() + d]; }

    ProfilePanel normalized() const {
        ProfilePanel out = *this;
        for (auto& p : out.profiles) p = normalize_profile(p);
        return out;
    }
};

/// Restricts the panel to days matching the weekday set and date range.
/// Weekday indices are ISO, Monday = 0.
inline ProfilePanel filter_calendar(const ProfilePanel& panel, const std::set<int>& weekdays,
                                    const Date& first, const Date& last) {
    std::vector<std::size_t> keep;
    for (std::size_t d = 0; d < panel.days.size(); ++d) {
        const Date& day = panel.days[d];
        if (day < first || last < day) continue;
        if (!weekdays.contains(weekday_index(day))) continue;
        keep.push_back(d);
    }
    if (keep.empty()) throw DataError("calendar filter leaves no days");
    ProfilePanel out;
    out.grid = panel.grid;
    out.households = panel.households;
    out.days.reserve(keep.size());
    for (std::size_t d : keep) out.days.push_back(panel.days[d]);
    out.profiles.reserve(panel.households.size() * keep.size());
    for (std::size_t h = 0; h < panel.households.size(); ++h)
        for (std::size_t d : keep) out.profiles.push_back(panel.at(h, d));
    return out;
}

inline std::set<int> parse_weekday_set(const std::vector<std::string>& names) {
    static const std::vector<std::string> all = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    std::set<int> out;
    for (const auto& n : names) {
        auto it = std::find(all.begin(), all.end(), n);
        if (it == all.end()) throw ConfigError("unknown weekday name: '" + n + "'");
        out.insert(static_cast<int>(it - all.begin()));
    }
    return out;
}

}  // namespace gridlock
