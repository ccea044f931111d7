#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gridlock/calendar.hpp"
#include "gridlock/congestion.hpp"
#include "gridlock/errors.hpp"
#include "gridlock/profiles.hpp"

namespace gridlock {

enum class FeatureKind { aggregate, disaggregate, mixed, aggregate_cst };

inline const char* to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::aggregate: return "aggregate";
        case FeatureKind::disaggregate: return "disaggregate";
        case FeatureKind::mixed: return "mixed";
        case FeatureKind::aggregate_cst: return "aggregate+cst";
    }
    return "?";
}

/// Per-day feature rows aligned with target days.
struct FeatureMatrix {
    std::vector<Date> days;
    std::vector<std::string> names;
    Eigen::MatrixXd values;  // days x names
    FeatureKind kind = FeatureKind::aggregate;
};

/// Shares of patterns 1..K-1 among the H households on each day; the last
/// pattern is the dropped reference category.
inline FeatureMatrix aggregate_features(const std::vector<int>& labels, const ProfilePanel& panel,
                                        int K) {
    const std::size_t H = panel.household_count(), D = panel.day_count();
    if (labels.size() != H * D) throw ContractError("aggregate_features: label count mismatch");
    FeatureMatrix fm;
    fm.kind = FeatureKind::aggregate;
    fm.days = panel.days;
    for (int k = 0; k < K - 1; ++k) fm.names.push_back("pattern_" + std::to_string(k + 1) + "_share");
    fm.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), K - 1);
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t d = 0; d < D; ++d) {
            const int k = labels[h * D + d];
            if (k < 0 || k >= K) throw ContractError("aggregate_features: pattern index out of range");
            if (k < K - 1) fm.values(static_cast<Eigen::Index>(d), k) += 1.0;
        }
    fm.values /= static_cast<double>(H);
    return fm;
}

/// One K-1 one-hot block per household per day, concatenated in household
/// order; the all-zero block encodes the dropped pattern K.
inline FeatureMatrix disaggregate_features(const std::vector<int>& labels,
                                           const ProfilePanel& panel, int K) {
    const std::size_t H = panel.household_count(), D = panel.day_count();
    if (labels.size() != H * D) throw ContractError("disaggregate_features: label count mismatch");
    FeatureMatrix fm;
    fm.kind = FeatureKind::disaggregate;
    fm.days = panel.days;
    for (std::size_t h = 0; h < H; ++h)
        for (int k = 0; k < K - 1; ++k)
            fm.names.push_back("hh_" + panel.households[h] + "_pattern_" + std::to_string(k + 1));
    fm.values =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(H * (K - 1)));
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t d = 0; d < D; ++d) {
            const int k = labels[h * D + d];
            if (k < 0 || k >= K)
                throw ContractError("disaggregate_features: pattern index out of range");
            if (k < K - 1)
                fm.values(static_cast<Eigen::Index>(d),
                          static_cast<Eigen::Index>(h * static_cast<std::size_t>(K - 1)) + k) = 1.0;
        }
    return fm;
}

/// [t+, t-]: the min/max CST observed in the training records.
struct HistoricalWindow {
    double t_plus = 0.0;   // earliest historical CST, hours
    double t_minus = 0.0;  // latest historical CST, hours
};

inline HistoricalWindow historical_window(const std::vector<CongestionRecord>& training) {
    HistoricalWindow w{std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
    for (const auto& r : training)
        if (r.cst) {
            w.t_plus = std::min(w.t_plus, *r.cst);
            w.t_minus = std::max(w.t_minus, *r.cst);
        }
    if (w.t_plus > w.t_minus) throw DataError("historical_window: no CSTs in training records");
    return w;
}

inline double clip_to_window(std::optional<double> arma_cst, const HistoricalWindow& w) {
    // No predicted congestion reads as an infinitely late CST: use t-.
    if (!arma_cst) return w.t_minus;
    return std::clamp(*arma_cst, w.t_plus, w.t_minus);
}

/// Aggregate features plus one clipped ARMA-predicted CST column.
inline FeatureMatrix mixed_features(const FeatureMatrix& agg,
                                    const std::vector<std::optional<double>>& arma_cst,
                                    const HistoricalWindow& window) {
    if (agg.kind != FeatureKind::aggregate)
        throw ContractError("mixed_features: base matrix must be aggregate");
    if (arma_cst.size() != agg.days.size())
        throw ContractError("mixed_features: one ARMA CST per day required");
    FeatureMatrix fm = agg;
    fm.kind = FeatureKind::mixed;
    fm.names.push_back("arma_cst");
    fm.values.conservativeResize(Eigen::NoChange, fm.values.cols() + 1);
    for (std::size_t d = 0; d < arma_cst.size(); ++d)
        fm.values(static_cast<Eigen::Index>(d), fm.values.cols() - 1) =
            clip_to_window(arma_cst[d], window);
    return fm;
}

/// Aggregate features plus a predicted-CST column (for duration models).
inline FeatureMatrix append_cst_feature(const FeatureMatrix& agg,
                                        const std::vector<double>& predicted_cst) {
    if (agg.kind != FeatureKind::aggregate)
        throw ContractError("append_cst_feature: base matrix must be aggregate");
    if (predicted_cst.size() != agg.days.size())
        throw ContractError("append_cst_feature: one prediction per day required");
    FeatureMatrix fm = agg;
    fm.kind = FeatureKind::aggregate_cst;
    fm.names.push_back("predicted_cst");
    fm.values.conservativeResize(Eigen::NoChange, fm.values.cols() + 1);
    for (std::size_t d = 0; d < predicted_cst.size(); ++d)
        fm.values(static_cast<Eigen::Index>(d), fm.values.cols() - 1) = predicted_cst[d];
    return fm;
}

/// Restricts a feature matrix to the given day subset (order preserved).
inline FeatureMatrix restrict_days(const FeatureMatrix& fm, const std::vector<Date>& days) {
    FeatureMatrix out;
    out.kind = fm.kind;
    out.names = fm.names;
    out.days = days;
    out.values.resize(static_cast<Eigen::Index>(days.size()), fm.values.cols());
    for (std::size_t i = 0; i < days.size(); ++i) {
        const auto it = std::find(fm.days.begin(), fm.days.end(), days[i]);
        if (it == fm.days.end())
            throw DataError("restrict_days: day " + format_date(days[i]) + " not in feature matrix");
        out.values.row(static_cast<Eigen::Index>(i)) =
            fm.values.row(static_cast<Eigen::Index>(it - fm.days.begin()));
    }
    return out;
}

}  // namespace gridlock
