#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridlock/calendar.hpp"
#include "gridlock/errors.hpp"
#include "gridlock/profiles.hpp"
#include "gridlock/travel.hpp"

namespace gridlock {

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double_field(const std::string& s, std::size_t line_no, const char* what) {
    double v = 0.0;
    const char* first = s.c_str();
    auto res = std::from_chars(first, first + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != first + s.size())
        throw DataError("line " + std::to_string(line_no) + ": invalid " + what + " '" + s + "'");
    return v;
}

}  // namespace detail

struct IngestReport {
    std::vector<std::string> retained_households;
    std::vector<std::string> dropped_households;  // absent on at least one day
    std::vector<std::string> days;
    std::vector<std::string> warnings;
};

/// Reads an electricity CSV (`household_id,timestamp,kwh`) into a complete
/// panel on the given grid. Rows outside the grid window are discarded.
/// Households absent for a whole day are dropped with a warning; households
/// present on a day but missing intervals are a data error.
inline ProfilePanel load_electricity_csv(const std::string& path, const TimeGrid& grid,
                                         IngestReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open electricity CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty electricity CSV: " + path);
    if (detail::split_csv_line(line) != std::vector<std::string>{"household_id", "timestamp", "kwh"})
        throw DataError("electricity CSV header must be 'household_id,timestamp,kwh'");

    // (household, day) -> per-interval values; presence tracked separately.
    std::map<std::string, std::map<Date, std::vector<std::pair<bool, double>>>> cells;
    std::set<Date> all_days;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3)
            throw DataError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        Timestamp ts;
        try {
            ts = parse_timestamp(fields[1]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const double kwh = detail::parse_double_field(fields[2], line_no, "kwh");
        if (kwh < 0.0)
            throw DataError("line " + std::to_string(line_no) + ": negative kwh " + fields[2]);
        if (!grid.contains_minute(ts.minute_of_day)) continue;
        auto& cell = cells[fields[0]][ts.date];
        if (cell.empty()) cell.resize(static_cast<std::size_t>(grid.count), {false, 0.0});
        auto& slot = cell[static_cast<std::size_t>(grid.index_of(ts.minute_of_day))];
        if (slot.first)
            throw DataError("line " + std::to_string(line_no) + ": duplicate interval for " +
                            fields[0] + " at " + fields[1]);
        slot = {true, kwh};
        all_days.insert(ts.date);
    }
    if (all_days.empty()) throw DataError("electricity CSV has no rows inside the grid window");

    ProfilePanel panel;
    panel.grid = grid;
    panel.days.assign(all_days.begin(), all_days.end());

    std::vector<std::string> gap_errors;
    for (const auto& [hh, by_day] : cells) {
        bool complete = true;
        for (const Date& day : panel.days) {
            auto it = by_day.find(day);
            if (it == by_day.end()) {
                complete = false;
                continue;
            }
            for (std::size_t t = 0; t < it->second.size(); ++t)
                if (!it->second[t].first)
                    gap_errors.push_back("(" + hh + ", " + format_date(day) + ")");
        }
        if (complete)
            panel.households.push_back(hh);
        else if (report) {
            report->dropped_households.push_back(hh);
            report->warnings.push_back("household " + hh + " dropped: not observed on every day");
        }
    }
    if (!gap_errors.empty()) {
        std::string msg = "missing intervals on kept days:";
        for (const auto& g : gap_errors) msg += " " + g;
        throw DataError(msg);
    }
    if (panel.households.empty()) throw DataError("no household observed on every day");

    panel.profiles.reserve(panel.households.size() * panel.days.size());
    for (const auto& hh : panel.households) {
        const auto& by_day = cells[hh];
        for (const Date& day : panel.days) {
            DailyProfile p;
            p.household_id = hh;
            p.day = day;
            p.values.reserve(static_cast<std::size_t>(grid.count));
            for (const auto& [present, v] : by_day.at(day)) p.values.push_back(v);
            panel.profiles.push_back(std::move(p));
        }
    }
    if (report) {
        report->retained_households = panel.households;
        for (const Date& d : panel.days) report->days.push_back(format_date(d));
    }
    return panel;
}

/// Writes a panel back to the electricity CSV schema.
inline void write_electricity_csv(const ProfilePanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "household_id,timestamp,kwh\n";
    for (std::size_t h = 0; h < panel.household_count(); ++h)
        for (std::size_t d = 0; d < panel.day_count(); ++d) {
            const DailyProfile& p = panel.at(h, d);
            for (int t = 0; t < panel.grid.count; ++t)
                out << p.household_id << ','
                    << format_timestamp({p.day, panel.grid.minute_at(t)}) << ','
                    << format_double(p.values[static_cast<std::size_t>(t)]) << '\n';
        }
}

/// Reads a travel-time CSV (`segment_id,timestamp,travel_time_s`) into one
/// series per (segment, day). Absent intervals remain gaps.
inline std::vector<TravelTimeSeries> load_travel_time_csv(const std::string& path,
                                                          int interval_minutes = 5) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open travel-time CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty travel-time CSV: " + path);
    if (detail::split_csv_line(line) !=
        std::vector<std::string>{"segment_id", "timestamp", "travel_time_s"})
        throw DataError("travel-time CSV header must be 'segment_id,timestamp,travel_time_s'");

    const TimeGrid grid = TimeGrid::full_day(interval_minutes);
    std::map<std::pair<std::string, Date>, TravelTimeSeries> series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3)
            throw DataError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        Timestamp ts;
        try {
            ts = parse_timestamp(fields[1]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const double tt = detail::parse_double_field(fields[2], line_no, "travel_time_s");
        if (tt <= 0.0)
            throw DataError("line " + std::to_string(line_no) + ": non-positive travel time " +
                            fields[2]);
        if (!grid.contains_minute(ts.minute_of_day))
            throw DataError("line " + std::to_string(line_no) + ": timestamp off the " +
                            std::to_string(interval_minutes) + "-min grid");
        auto& s = series[{fields[0], ts.date}];
        if (s.times.empty()) {
            s.segment_id = fields[0];
            s.day = ts.date;
            s.grid = grid;
            s.times.resize(static_cast<std::size_t>(grid.count));
        }
        auto& slot = s.times[static_cast<std::size_t>(grid.index_of(ts.minute_of_day))];
        if (slot)
            throw DataError("line " + std::to_string(line_no) + ": duplicate interval for " +
                            fields[0] + " at " + fields[1]);
        slot = tt;
    }
    std::vector<TravelTimeSeries> out;
    out.reserve(series.size());
    for (auto& [key, s] : series) out.push_back(std::move(s));
    return out;
}

inline void write_travel_time_csv(const std::vector<TravelTimeSeries>& series,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "segment_id,timestamp,travel_time_s\n";
    for (const auto& s : series)
        for (int t = 0; t < s.grid.count; ++t) {
            const auto& v = s.times[static_cast<std::size_t>(t)];
            if (!v) continue;
            out << s.segment_id << ',' << format_timestamp({s.day, s.grid.minute_at(t)}) << ','
                << format_double(*v) << '\n';
        }
}

}  // namespace gridlock
