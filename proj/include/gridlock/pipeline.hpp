#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridlock/baselines.hpp"
#include "gridlock/clustering.hpp"
#include "gridlock/congestion.hpp"
#include "gridlock/csv.hpp"
#include "gridlock/errors.hpp"
#include "gridlock/features.hpp"
#include "gridlock/parallel.hpp"
#include "gridlock/regression.hpp"
#include "gridlock/rng.hpp"
#include "gridlock/version.hpp"

namespace gridlock {

/// Batch-run configuration. Serializes to a key=value file; every key can
/// be overridden from the command line.
struct PipelineConfig {
    // paths
    std::string electricity_csv = "electricity.csv";
    std::string travel_csv = "travel.csv";
    std::string output_dir = "out";
    // electricity grid / analysis window
    int grid_interval_minutes = 5;
    int grid_start_minute = 0;
    int grid_end_minute = 6 * 60;
    // calendar filter
    std::vector<std::string> weekdays = {"Tue", "Wed", "Thu"};
    std::string first_day, last_day;  // empty = unbounded
    // clustering
    int K = 10;  // 0 = choose by GAP
    int gap_k_min = 1, gap_k_max = 15, gap_B = 20;
    int kmeans_restarts = 10, kmeans_max_iters = 300;
    double kmeans_tol = 1e-6;
    // congestion extraction
    double congestion_ratio = 2.0;
    int persistence_intervals = 3;
    int morning_window_start_minute = 5 * 60;
    int morning_window_end_minute = 12 * 60;
    bool interpolate_gaps = false;
    bool fftt_percentile = false;
    // features / evaluation
    std::string feature_kind = "aggregate";  // aggregate|disaggregate|mixed|aggregate+cst
    std::string target = "cst";              // cst|duration
    std::string eval_mode = "nested-cv";     // nested-cv|fixed-split
    int outer_folds = 3, inner_folds = 4;
    int alpha_grid_size = 50;
    double alpha_grid_span = 1e-4;
    // traffic-only baselines
    int arma_cutoff_minute = 6 * 60;
    int arma_p_max = 4, arma_q_max = 4;
    // sensitivity sweep
    std::vector<int> sweep_end_minutes = {2 * 60, 4 * 60, 6 * 60, 7 * 60};
    std::uint64_t seed = 1;
    int threads = 1;
};

namespace detail {

inline std::string join_csv(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

inline std::string join_csv(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> config_items(const PipelineConfig& c) {
    return {
        {"electricity_csv", c.electricity_csv},
        {"travel_csv", c.travel_csv},
        {"output_dir", c.output_dir},
        {"grid_interval_minutes", std::to_string(c.grid_interval_minutes)},
        {"grid_start_minute", std::to_string(c.grid_start_minute)},
        {"grid_end_minute", std::to_string(c.grid_end_minute)},
        {"weekdays", detail::join_csv(c.weekdays)},
        {"first_day", c.first_day},
        {"last_day", c.last_day},
        {"K", std::to_string(c.K)},
        {"gap_k_min", std::to_string(c.gap_k_min)},
        {"gap_k_max", std::to_string(c.gap_k_max)},
        {"gap_B", std::to_string(c.gap_B)},
        {"kmeans_restarts", std::to_string(c.kmeans_restarts)},
        {"kmeans_max_iters", std::to_string(c.kmeans_max_iters)},
        {"kmeans_tol", format_double(c.kmeans_tol)},
        {"congestion_ratio", format_double(c.congestion_ratio)},
        {"persistence_intervals", std::to_string(c.persistence_intervals)},
        {"morning_window_start_minute", std::to_string(c.morning_window_start_minute)},
        {"morning_window_end_minute", std::to_string(c.morning_window_end_minute)},
        {"interpolate_gaps", c.interpolate_gaps ? "true" : "false"},
        {"fftt_percentile", c.fftt_percentile ? "true" : "false"},
        {"feature_kind", c.feature_kind},
        {"target", c.target},
        {"eval_mode", c.eval_mode},
        {"outer_folds", std::to_string(c.outer_folds)},
        {"inner_folds", std::to_string(c.inner_folds)},
        {"alpha_grid_size", std::to_string(c.alpha_grid_size)},
        {"alpha_grid_span", format_double(c.alpha_grid_span)},
        {"arma_cutoff_minute", std::to_string(c.arma_cutoff_minute)},
        {"arma_p_max", std::to_string(c.arma_p_max)},
        {"arma_q_max", std::to_string(c.arma_q_max)},
        {"sweep_end_minutes", detail::join_csv(c.sweep_end_minutes)},
        {"seed", std::to_string(c.seed)},
        {"threads", std::to_string(c.threads)},
    };
}

inline std::string serialize_config(const PipelineConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_items(c)) out += k + "=" + v + "\n";
    return out;
}

inline void apply_config_key(PipelineConfig& c, const std::string& key, const std::string& value) {
    auto to_int = [&](const std::string& v) {
        try {
            return std::stoi(v);
        } catch (...) {
            throw ConfigError("config key '" + key + "': invalid integer '" + v + "'");
        }
    };
    auto to_double = [&](const std::string& v) {
        try {
            return std::stod(v);
        } catch (...) {
            throw ConfigError("config key '" + key + "': invalid number '" + v + "'");
        }
    };
    auto to_bool = [&](const std::string& v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError("config key '" + key + "': invalid boolean '" + v + "'");
    };
    if (key == "electricity_csv") c.electricity_csv = value;
    else if (key == "travel_csv") c.travel_csv = value;
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "grid_interval_minutes") c.grid_interval_minutes = to_int(value);
    else if (key == "grid_start_minute") c.grid_start_minute = to_int(value);
    else if (key == "grid_end_minute") c.grid_end_minute = to_int(value);
    else if (key == "weekdays") c.weekdays = detail::split_list(value);
    else if (key == "first_day") c.first_day = value;
    else if (key == "last_day") c.last_day = value;
    else if (key == "K") c.K = to_int(value);
    else if (key == "gap_k_min") c.gap_k_min = to_int(value);
    else if (key == "gap_k_max") c.gap_k_max = to_int(value);
    else if (key == "gap_B") c.gap_B = to_int(value);
    else if (key == "kmeans_restarts") c.kmeans_restarts = to_int(value);
    else if (key == "kmeans_max_iters") c.kmeans_max_iters = to_int(value);
    else if (key == "kmeans_tol") c.kmeans_tol = to_double(value);
    else if (key == "congestion_ratio") c.congestion_ratio = to_double(value);
    else if (key == "persistence_intervals") c.persistence_intervals = to_int(value);
    else if (key == "morning_window_start_minute") c.morning_window_start_minute = to_int(value);
    else if (key == "morning_window_end_minute") c.morning_window_end_minute = to_int(value);
    else if (key == "interpolate_gaps") c.interpolate_gaps = to_bool(value);
    else if (key == "fftt_percentile") c.fftt_percentile = to_bool(value);
    else if (key == "feature_kind") c.feature_kind = value;
    else if (key == "target") c.target = value;
    else if (key == "eval_mode") c.eval_mode = value;
    else if (key == "outer_folds") c.outer_folds = to_int(value);
    else if (key == "inner_folds") c.inner_folds = to_int(value);
    else if (key == "alpha_grid_size") c.alpha_grid_size = to_int(value);
    else if (key == "alpha_grid_span") c.alpha_grid_span = to_double(value);
    else if (key == "arma_cutoff_minute") c.arma_cutoff_minute = to_int(value);
    else if (key == "arma_p_max") c.arma_p_max = to_int(value);
    else if (key == "arma_q_max") c.arma_q_max = to_int(value);
    else if (key == "sweep_end_minutes") {
        c.sweep_end_minutes.clear();
        for (const auto& v : detail::split_list(value)) c.sweep_end_minutes.push_back(to_int(v));
    } else if (key == "seed") {
        try {
            c.seed = std::stoull(value);
        } catch (...) {
            throw ConfigError("config key 'seed': invalid integer '" + value + "'");
        }
    } else if (key == "threads") c.threads = to_int(value);
    else throw ConfigError("unknown config key '" + key + "'");
}

inline PipelineConfig parse_config(const std::string& text) {
    PipelineConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        apply_config_key(c, line.substr(0, eq), line.substr(eq + 1));
    }
    return c;
}

/// FNV-1a over the canonical serialization; recorded in every artifact.
/// The output directory is excluded: it never affects a computed result, so
/// identical analyses hash identically wherever they write.
inline std::string config_hash(const PipelineConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : config_items(c)) {
        if (k == "output_dir") continue;
        for (char ch : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline TimeGrid electricity_grid(const PipelineConfig& c) {
    return TimeGrid::make(c.grid_interval_minutes, c.grid_start_minute, c.grid_end_minute);
}

inline CongestionParams congestion_params(const PipelineConfig& c) {
    CongestionParams p;
    p.ratio = c.congestion_ratio;
    p.persistence = c.persistence_intervals;
    p.window_start_minute = c.morning_window_start_minute;
    p.window_end_minute = c.morning_window_end_minute;
    p.interpolate_gaps = c.interpolate_gaps;
    p.fftt_percentile_mode = c.fftt_percentile;
    return p;
}

inline KMeansParams kmeans_params(const PipelineConfig& c) {
    return KMeansParams{c.kmeans_restarts, c.kmeans_max_iters, c.kmeans_tol};
}

/// Loads, calendar-filters, and normalizes the electricity panel.
inline ProfilePanel ingest_panel(const PipelineConfig& c, IngestReport* report = nullptr) {
    ProfilePanel panel = load_electricity_csv(c.electricity_csv, electricity_grid(c), report);
    const Date first = c.first_day.empty() ? panel.days.front() : parse_date(c.first_day);
    const Date last = c.last_day.empty() ? panel.days.back() : parse_date(c.last_day);
    panel = filter_calendar(panel, parse_weekday_set(c.weekdays), first, last);
    ProfilePanel normalized = panel.normalized();
    if (report)
        for (const auto& p : normalized.profiles)
            if (p.all_zero)
                report->warnings.push_back("all-zero profile: " + p.household_id + " on " +
                                           format_date(p.day));
    return normalized;
}

struct ClusterResult {
    PatternModel model;
    std::vector<int> labels;  // per (h, d) cell, panel storage order
    std::optional<GapCurve> gap;
};

/// Clusters the DH profiles; all-zero profiles are excluded from the fit
/// but still assigned to their nearest centroid afterwards.
inline ClusterResult cluster_panel(const ProfilePanel& panel, const PipelineConfig& c) {
    std::vector<bool> all_zero;
    const Eigen::MatrixXd all_rows = profile_matrix(panel, &all_zero);
    Eigen::Index n_fit = 0;
    for (bool z : all_zero)
        if (!z) ++n_fit;
    Eigen::MatrixXd fit_rows(n_fit, all_rows.cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < all_rows.rows(); ++i)
        if (!all_zero[static_cast<std::size_t>(i)]) fit_rows.row(r++) = all_rows.row(i);

    ClusterResult result;
    int K = c.K;
    if (K <= 0) {
        std::vector<int> candidates;
        for (int k = c.gap_k_min; k <= c.gap_k_max; ++k) candidates.push_back(k);
        result.gap = gap_select_k(fit_rows, candidates, c.gap_B, c.seed, kmeans_params(c));
        K = result.gap->chosen_k;
    }
    result.model = kmeans(fit_rows, K, c.seed, kmeans_params(c));
    result.labels = assign_patterns(result.model, all_rows);
    return result;
}

inline std::map<std::string, std::vector<TravelTimeSeries>> group_by_segment(
    std::vector<TravelTimeSeries> series) {
    std::map<std::string, std::vector<TravelTimeSeries>> out;
    for (auto& s : series) out[s.segment_id].push_back(std::move(s));
    for (auto& [id, v] : out)
        std::sort(v.begin(), v.end(),
                  [](const TravelTimeSeries& a, const TravelTimeSeries& b) { return a.day < b.day; });
    return out;
}

/// Per-segment targets aligned to panel days with observed congestion;
/// congestion-free days are filtered out before feature/target alignment.
struct SegmentData {
    std::string segment_id;
    double fftt = 0.0;
    std::vector<Date> days;  // aligned, ascending
    Eigen::VectorXd cst, duration;
    std::vector<std::optional<double>> arma_cst;  // per aligned day; empty until computed
    std::size_t panel_day_total = 0;              // aligned-day denominator for coverage
};

inline SegmentData align_segment(const std::vector<CongestionRecord>& records,
                                 const std::vector<Date>& panel_days) {
    SegmentData seg;
    std::vector<double> cst, dur;
    for (const auto& rec : records) {
        if (std::find(panel_days.begin(), panel_days.end(), rec.day) == panel_days.end()) continue;
        ++seg.panel_day_total;
        if (!rec.cst) continue;
        seg.segment_id = rec.segment_id;
        seg.fftt = rec.fftt;
        seg.days.push_back(rec.day);
        cst.push_back(*rec.cst);
        dur.push_back(*rec.duration);
    }
    seg.cst = Eigen::Map<Eigen::VectorXd>(cst.data(), static_cast<Eigen::Index>(cst.size()));
    seg.duration = Eigen::Map<Eigen::VectorXd>(dur.data(), static_cast<Eigen::Index>(dur.size()));
    return seg;
}

/// Per-day ARMA CST predictions for the aligned days (parallel over days).
inline void compute_arma_predictions(SegmentData& seg,
                                     const std::vector<TravelTimeSeries>& segment_series,
                                     const PipelineConfig& c) {
    ArmaCstParams params;
    params.cutoff_minute = c.arma_cutoff_minute;
    params.p_max = c.arma_p_max;
    params.q_max = c.arma_q_max;
    params.congestion = congestion_params(c);
    seg.arma_cst = parallel_map<std::optional<double>>(seg.days.size(), [&](std::size_t i) {
        for (const auto& s : segment_series)
            if (s.day == seg.days[i]) return predict_cst_arma(s, seg.fftt, params);
        return std::optional<double>{};
    });
}

inline EvaluationOptions evaluation_options(const PipelineConfig& c, Target target,
                                            std::uint64_t seed_tag = 0) {
    EvaluationOptions opts;
    opts.outer_folds = c.outer_folds;
    opts.inner_folds = c.inner_folds;
    opts.seed = detail::mix_seed(c.seed, 50 + seed_tag);
    opts.target = target;
    return opts;
}

/// Fold-local clipped-ARMA column for mixed features: the clipping window
/// [t+, t-] comes from the training rows' CSTs only.
inline ColumnAugmenter mixed_augmenter(const SegmentData& seg) {
    return [&seg](const std::vector<Eigen::Index>& train_rows) {
        HistoricalWindow w{std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
        for (Eigen::Index i : train_rows) {
            w.t_plus = std::min(w.t_plus, seg.cst(i));
            w.t_minus = std::max(w.t_minus, seg.cst(i));
        }
        Eigen::VectorXd col(seg.cst.size());
        for (Eigen::Index i = 0; i < col.size(); ++i)
            col(i) = clip_to_window(seg.arma_cst[static_cast<std::size_t>(i)], w);
        return std::make_pair(std::string("arma_cst"), col);
    };
}

/// Fold-local predicted-CST column for duration models: a CST predictor is
/// fitted on the training rows only, then applied to every day.
inline ColumnAugmenter predicted_cst_augmenter(const FeatureMatrix& agg, const SegmentData& seg,
                                               const PipelineConfig& c) {
    return [&agg, &seg, &c](const std::vector<Eigen::Index>& train_rows) {
        FeatureMatrix Xtr;
        Xtr.kind = agg.kind;
        Xtr.names = agg.names;
        Xtr.values.resize(static_cast<Eigen::Index>(train_rows.size()), agg.values.cols());
        Eigen::VectorXd ytr(static_cast<Eigen::Index>(train_rows.size()));
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            Xtr.values.row(static_cast<Eigen::Index>(i)) = agg.values.row(train_rows[i]);
            ytr(static_cast<Eigen::Index>(i)) = seg.cst(train_rows[i]);
        }
        const auto grid = make_alpha_grid(Xtr.values, ytr, c.alpha_grid_size, c.alpha_grid_span);
        const double alpha = select_alpha(Xtr, ytr, grid, c.inner_folds,
                                          detail::mix_seed(c.seed, 77), Target::cst);
        const auto fit = fit_lasso(Xtr, ytr, alpha, Target::cst);
        return std::make_pair(std::string("predicted_cst"), fit.predict(agg.values));
    };
}

/// Evaluates one feature kind on one segment under the configured protocol.
inline EvaluationReport evaluate_segment(const PipelineConfig& c, const FeatureMatrix& agg_full,
                                         const FeatureMatrix& disagg_full, SegmentData& seg,
                                         const std::vector<TravelTimeSeries>& segment_series) {
    const Target target = c.target == "duration" ? Target::duration : Target::cst;
    const Eigen::VectorXd& y = target == Target::duration ? seg.duration : seg.cst;
    EvaluationOptions opts = evaluation_options(c, target);

    FeatureMatrix X;
    ColumnAugmenter augmenter;
    if (c.feature_kind == "aggregate") {
        X = restrict_days(agg_full, seg.days);
    } else if (c.feature_kind == "disaggregate") {
        X = restrict_days(disagg_full, seg.days);
    } else if (c.feature_kind == "mixed") {
        X = restrict_days(agg_full, seg.days);
        if (seg.arma_cst.empty()) compute_arma_predictions(seg, segment_series, c);
        augmenter = mixed_augmenter(seg);
    } else if (c.feature_kind == "aggregate+cst") {
        if (target != Target::duration)
            throw ConfigError("feature_kind aggregate+cst applies to the duration target");
        X = restrict_days(agg_full, seg.days);
        augmenter = predicted_cst_augmenter(X, seg, c);
    } else {
        throw ConfigError("unknown feature_kind '" + c.feature_kind + "'");
    }
    // Augmenters capture X for aggregate+cst; keep it alive via a copy inside.
    if (c.eval_mode == "fixed-split")
        return fixed_split_evaluate(X, y, opts, 60.0 / 79.0, augmenter);
    if (c.eval_mode != "nested-cv") throw ConfigError("unknown eval_mode '" + c.eval_mode + "'");
    return nested_cv_evaluate(X, y, opts, augmenter);
}

struct CompareRow {
    std::string segment_id;
    std::string method;
    double rmse = 0.0, mae = 0.0;
    std::optional<double> coverage;  // fraction of days with a prediction (traffic baselines)
};

/// Table-shaped method comparison for one segment.
inline std::vector<CompareRow> compare_segment(const PipelineConfig& c,
                                               const FeatureMatrix& agg_full,
                                               const FeatureMatrix& disagg_full, SegmentData& seg,
                                               const std::vector<CongestionRecord>& seg_records,
                                               const std::vector<TravelTimeSeries>& segment_series) {
    const bool duration = c.target == "duration";
    const Target target = duration ? Target::duration : Target::cst;
    const Eigen::VectorXd& y = duration ? seg.duration : seg.cst;
    std::vector<CompareRow> rows;

    auto eval_kind = [&](const std::string& kind) {
        PipelineConfig cc = c;
        cc.feature_kind = kind;
        const auto report = evaluate_segment(cc, agg_full, disagg_full, seg, segment_series);
        rows.push_back({seg.segment_id, kind, report.pooled_rmse, report.pooled_mae, std::nullopt});
    };
    eval_kind("disaggregate");
    eval_kind("aggregate");
    if (!duration) {
        eval_kind("mixed");
        // ARMA: metrics only over days it predicts at all; the coverage
        // fraction must accompany them.
        if (seg.arma_cst.empty()) compute_arma_predictions(seg, segment_series, c);
        std::vector<double> pred, actual;
        for (std::size_t i = 0; i < seg.arma_cst.size(); ++i)
            if (seg.arma_cst[i]) {
                pred.push_back(*seg.arma_cst[i]);
                actual.push_back(y(static_cast<Eigen::Index>(i)));
            }
        CompareRow arma_row{seg.segment_id, "arma", 0.0, 0.0,
                            seg.days.empty() ? 0.0
                                             : static_cast<double>(pred.size()) /
                                                   static_cast<double>(seg.days.size())};
        if (!pred.empty()) {
            const auto p = Eigen::Map<Eigen::VectorXd>(pred.data(), static_cast<Eigen::Index>(pred.size()));
            const auto a =
                Eigen::Map<Eigen::VectorXd>(actual.data(), static_cast<Eigen::Index>(actual.size()));
            arma_row.rmse = rmse(p, a);
            arma_row.mae = mae(p, a);
        }
        rows.push_back(arma_row);
    } else {
        eval_kind("aggregate+cst");
    }

    {  // historical mean of the previous five congested weekdays
        std::vector<double> pred, actual;
        for (std::size_t i = 0; i < seg.days.size(); ++i) {
            const auto hm = duration ? historical_mean_duration(seg_records, seg.days[i])
                                     : historical_mean_cst(seg_records, seg.days[i]);
            if (hm) {
                pred.push_back(*hm);
                actual.push_back(y(static_cast<Eigen::Index>(i)));
            }
        }
        CompareRow row{seg.segment_id, "historical_mean", 0.0, 0.0,
                       seg.days.empty() ? 0.0
                                        : static_cast<double>(pred.size()) /
                                              static_cast<double>(seg.days.size())};
        if (!pred.empty()) {
            const auto p = Eigen::Map<Eigen::VectorXd>(pred.data(), static_cast<Eigen::Index>(pred.size()));
            const auto a =
                Eigen::Map<Eigen::VectorXd>(actual.data(), static_cast<Eigen::Index>(actual.size()));
            row.rmse = rmse(p, a);
            row.mae = mae(p, a);
        }
        rows.push_back(row);
    }
    return rows;
}

struct SweepRow {
    int end_minute = 0;
    std::string segment_id;
    double rmse = 0.0, mae = 0.0;
    bool leakage_audit_ok = true;
};

/// Re-runs ingest -> cluster -> features -> evaluate per electricity
/// end-time, answering how early the prediction can be made.
inline std::vector<SweepRow> run_sweep(const PipelineConfig& base,
                                       const std::vector<TravelTimeSeries>& travel) {
    auto by_segment = group_by_segment(travel);
    std::vector<SweepRow> rows;
    for (int end_minute : base.sweep_end_minutes) {
        PipelineConfig c = base;
        c.grid_end_minute = end_minute;
        const ProfilePanel panel = ingest_panel(c);
        const auto cluster = cluster_panel(panel, c);
        const int K = cluster.model.K;
        const auto agg = aggregate_features(cluster.labels, panel, K);
        const auto disagg = disaggregate_features(cluster.labels, panel, K);
        for (auto& [segment_id, series] : by_segment) {
            const auto records = extract_congestion(series, congestion_params(c));
            SegmentData seg = align_segment(records, panel.days);
            if (seg.days.size() < static_cast<std::size_t>(c.outer_folds)) continue;
            const auto report = evaluate_segment(c, agg, disagg, seg, series);
            rows.push_back({end_minute, segment_id, report.pooled_rmse, report.pooled_mae,
                            report.leakage_audit_ok});
        }
    }
    return rows;
}

}  // namespace gridlock
