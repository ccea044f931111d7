#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gridlock/calendar.hpp"
#include "gridlock/congestion.hpp"
#include "gridlock/errors.hpp"
#include "gridlock/profiles.hpp"
#include "gridlock/rng.hpp"
#include "gridlock/travel.hpp"

namespace gridlock {

/// Generator scenario with a known coupling between pattern shares and
/// congestion onset. Defaults mirror the desk-scale shape of the study:
/// 322 households, 79 Tue/Wed/Thu summer weekdays, 72 five-minute
/// intervals, 10 patterns.
struct ScenarioSpec {
    int households = 322;
    int days = 79;
    int K_true = 10;
    TimeGrid grid = TimeGrid{5, 0, 72};  // electricity window, midnight to 6 am

    /// Template profiles, one per pattern; empty = procedural defaults whose
    /// shapes differ across the whole window (so truncated-window runs can
    /// still tell patterns apart).
    std::vector<std::vector<double>> pattern_templates;

    /// Concentration of the per-day Dirichlet pattern weights; smaller
    /// values give larger day-to-day share variation.
    double day_weight_concentration = 0.5;

    /// Hours of CST shift per unit pattern share. Defaults alternate +/-0.25
    /// with the last (dropped) pattern at zero.
    std::vector<double> coupling;

    double base_cst = 7.0;          // hours
    double cst_noise_sd = 0.1;      // hours
    double duration_base = 1.0;     // hours
    std::vector<double> duration_coupling;  // defaults to 0.6 * coupling
    double duration_noise_sd = 0.15;
    double profile_noise_sd = 0.05;

    int segments = 1;
    double fftt_seconds = 100.0;          // free-flow travel time of every segment
    double congested_ratio = 2.5;         // inside the congestion block
    double segment_base_shift = 0.1;      // hours of base CST offset per segment index

    /// Optional pre-congestion ramp so a time-series model can see the
    /// break-down building up; ratio climbs from 1 to ramp_peak_ratio over
    /// ramp_intervals before the block (still below the congestion ratio).
    bool precursor_ramp = false;
    int ramp_intervals = 18;
    double ramp_peak_ratio = 1.8;

    std::uint64_t seed = 1;
};

struct SyntheticDay {
    Date day;
    std::vector<int> pattern_per_household;  // z_hd, 0-based
    std::vector<double> shares;              // realized, K entries
};

struct SyntheticSegmentDay {
    std::string segment_id;
    Date day;
    double true_cst = 0.0;       // hours, as drawn
    double true_duration = 0.0;  // hours, as drawn
    double grid_cst = 0.0;       // snapped to the travel grid
    double grid_duration = 0.0;
};

struct SyntheticData {
    ScenarioSpec spec;  // with defaults resolved
    ProfilePanel panel;  // raw kWh values
    std::vector<TravelTimeSeries> travel;
    std::vector<SyntheticDay> day_truth;
    std::vector<SyntheticSegmentDay> segment_truth;
};

namespace detail {

inline std::vector<std::vector<double>> default_templates(int K, const TimeGrid& grid) {
    std::vector<std::vector<double>> templates;
    templates.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        std::vector<double> v(static_cast<std::size_t>(grid.count));
        const double freq = 1.0 + 0.5 * k;
        const double phase = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(K);
        const double slope = (k % 2 == 0 ? 1.0 : -1.0) * 0.4;
        for (int t = 0; t < grid.count; ++t) {
            const double u = static_cast<double>(t) / static_cast<double>(grid.count);
            v[static_cast<std::size_t>(t)] =
                std::max(0.02, 1.0 + 0.6 * std::sin(2.0 * M_PI * freq * u + phase) + slope * (u - 0.5));
        }
        templates.push_back(std::move(v));
    }
    return templates;
}

inline std::vector<Date> analysis_weekdays(int count) {
    std::vector<Date> days;
    Date d{2014, 5, 5};  // a Monday
    while (static_cast<int>(days.size()) < count) {
        const int w = weekday_index(d);
        if (w == 1 || w == 2 || w == 3) days.push_back(d);  // Tue, Wed, Thu
        d = add_days(d, 1);
    }
    return days;
}

}  // namespace detail

inline ScenarioSpec resolve_defaults(ScenarioSpec spec) {
    if (spec.households < 1 || spec.days < 1 || spec.K_true < 2)
        throw ConfigError("scenario: households, days >= 1 and K_true >= 2 required");
    if (spec.pattern_templates.empty())
        spec.pattern_templates = detail::default_templates(spec.K_true, spec.grid);
    if (static_cast<int>(spec.pattern_templates.size()) != spec.K_true)
        throw ConfigError("scenario: one template per pattern required");
    for (const auto& t : spec.pattern_templates) {
        if (static_cast<int>(t.size()) != spec.grid.count)
            throw ConfigError("scenario: template length must match the grid");
        for (double v : t)
            if (v < 0.0) throw ConfigError("scenario: templates must be non-negative");
    }
    if (spec.coupling.empty()) {
        spec.coupling.assign(static_cast<std::size_t>(spec.K_true), 0.0);
        for (int k = 0; k + 1 < spec.K_true; ++k)
            spec.coupling[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 0.25 : -0.25);
        // the dropped pattern keeps zero coupling so fitted aggregate
        // coefficients estimate the couplings directly
    }
    if (static_cast<int>(spec.coupling.size()) != spec.K_true)
        throw ConfigError("scenario: one coupling per pattern required");
    if (spec.duration_coupling.empty()) {
        spec.duration_coupling = spec.coupling;
        for (auto& c : spec.duration_coupling) c *= 0.6;
    }
    if (static_cast<int>(spec.duration_coupling.size()) != spec.K_true)
        throw ConfigError("scenario: one duration coupling per pattern required");
    return spec;
}

/// Draws the joint dataset. Travel-time series are piecewise flat: free
/// flow outside the planted congestion block, congested_ratio * fftt inside,
/// so extraction recovers the planted CST to within one grid interval in
/// every FFTT mode.
inline SyntheticData generate(const ScenarioSpec& raw_spec) {
    const ScenarioSpec spec = resolve_defaults(raw_spec);
    const int H = spec.households, D = spec.days, K = spec.K_true;
    const TimeGrid travel_grid = TimeGrid::full_day();

    SyntheticData data;
    data.spec = spec;
    data.panel.grid = spec.grid;
    for (int h = 0; h < H; ++h) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "h%04d", h + 1);
        data.panel.households.push_back(buf);
    }
    data.panel.days = detail::analysis_weekdays(D);
    data.panel.profiles.resize(static_cast<std::size_t>(H) * static_cast<std::size_t>(D));

    std::mt19937_64 rng(detail::mix_seed(spec.seed, 0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::gamma_distribution<double> gamma(spec.day_weight_concentration, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int d = 0; d < D; ++d) {
        SyntheticDay day_truth;
        day_truth.day = data.panel.days[static_cast<std::size_t>(d)];

        // Per-day Dirichlet pattern weights.
        std::vector<double> weights(static_cast<std::size_t>(K));
        double wsum = 0.0;
        for (auto& w : weights) {
            w = std::max(gamma(rng), 1e-12);
            wsum += w;
        }
        for (auto& w : weights) w /= wsum;

        day_truth.pattern_per_household.resize(static_cast<std::size_t>(H));
        day_truth.shares.assign(static_cast<std::size_t>(K), 0.0);
        for (int h = 0; h < H; ++h) {
            double r = unif(rng);
            int z = K - 1;
            for (int k = 0; k < K; ++k) {
                r -= weights[static_cast<std::size_t>(k)];
                if (r <= 0.0) {
                    z = k;
                    break;
                }
            }
            day_truth.pattern_per_household[static_cast<std::size_t>(h)] = z;
            day_truth.shares[static_cast<std::size_t>(z)] += 1.0 / static_cast<double>(H);

            DailyProfile profile;
            profile.household_id = data.panel.households[static_cast<std::size_t>(h)];
            profile.day = day_truth.day;
            profile.values.resize(static_cast<std::size_t>(spec.grid.count));
            const auto& tmpl = spec.pattern_templates[static_cast<std::size_t>(z)];
            for (int t = 0; t < spec.grid.count; ++t)
                profile.values[static_cast<std::size_t>(t)] =
                    std::max(0.0, tmpl[static_cast<std::size_t>(t)] + spec.profile_noise_sd * gauss(rng));
            data.panel.at(static_cast<std::size_t>(h), static_cast<std::size_t>(d)) =
                std::move(profile);
        }
        data.day_truth.push_back(std::move(day_truth));
    }

    for (int s = 0; s < spec.segments; ++s) {
        char seg_name[24];
        std::snprintf(seg_name, sizeof(seg_name), "TMC%03d", s + 1);
        std::mt19937_64 seg_rng(detail::mix_seed(spec.seed, 10000 + static_cast<std::uint64_t>(s)));
        std::normal_distribution<double> seg_gauss(0.0, 1.0);
        for (int d = 0; d < D; ++d) {
            const auto& shares = data.day_truth[static_cast<std::size_t>(d)].shares;
            double cst = spec.base_cst + spec.segment_base_shift * s;
            double duration = spec.duration_base;
            for (int k = 0; k < K; ++k) {
                cst += spec.coupling[static_cast<std::size_t>(k)] * shares[static_cast<std::size_t>(k)];
                duration +=
                    spec.duration_coupling[static_cast<std::size_t>(k)] * shares[static_cast<std::size_t>(k)];
            }
            cst += spec.cst_noise_sd * seg_gauss(seg_rng);
            duration += spec.duration_noise_sd * seg_gauss(seg_rng);
            duration = std::max(duration, 0.25);

            const double win_lo = 5.0, win_hi = 12.0;
            if (cst < win_lo + 0.1 || cst > win_hi - 0.5 || cst + duration > 23.5)
                throw ConfigError("scenario: planted CST/duration falls outside the generable window");

            const int start_idx = static_cast<int>(std::lround(cst * 60.0 / travel_grid.interval_minutes));
            const int len = std::max(3, static_cast<int>(std::lround(duration * 60.0 /
                                                                     travel_grid.interval_minutes)));
            SyntheticSegmentDay seg_day;
            seg_day.segment_id = seg_name;
            seg_day.day = data.panel.days[static_cast<std::size_t>(d)];
            seg_day.true_cst = cst;
            seg_day.true_duration = duration;
            seg_day.grid_cst = travel_grid.hours_at(start_idx);
            seg_day.grid_duration = len * travel_grid.interval_hours();

            TravelTimeSeries series;
            series.segment_id = seg_name;
            series.day = seg_day.day;
            series.grid = travel_grid;
            series.times.resize(static_cast<std::size_t>(travel_grid.count));
            for (int t = 0; t < travel_grid.count; ++t) {
                const bool congested = t >= start_idx && t < start_idx + len;
                double ratio = congested ? spec.congested_ratio : 1.0;
                if (!congested && spec.precursor_ramp && t < start_idx &&
                    t >= start_idx - spec.ramp_intervals) {
                    const double progress = static_cast<double>(t - (start_idx - spec.ramp_intervals) + 1) /
                                            static_cast<double>(spec.ramp_intervals);
                    ratio = 1.0 + (spec.ramp_peak_ratio - 1.0) * progress;
                }
                series.times[static_cast<std::size_t>(t)] = spec.fftt_seconds * ratio;
            }
            data.travel.push_back(std::move(series));
            data.segment_truth.push_back(std::move(seg_day));
        }
    }
    return data;
}

}  // namespace gridlock
