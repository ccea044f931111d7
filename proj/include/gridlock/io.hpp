#pragma once

#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "gridlock/clustering.hpp"
#include "gridlock/congestion.hpp"
#include "gridlock/csv.hpp"
#include "gridlock/features.hpp"
#include "gridlock/regression.hpp"
#include "gridlock/similarity.hpp"
#include "gridlock/synthdata.hpp"

namespace gridlock {

inline void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << j.dump(2) << '\n';
}

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

inline nlohmann::json to_json(const IngestReport& r) {
    return {{"retained_households", r.retained_households},
            {"dropped_households", r.dropped_households},
            {"days", r.days},
            {"warnings", r.warnings}};
}

inline nlohmann::json to_json(const PatternModel& m) {
    nlohmann::json centroids = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.centroids.rows(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index t = 0; t < m.centroids.cols(); ++t) row.push_back(m.centroids(k, t));
        centroids.push_back(row);
    }
    return {{"K", m.K},
            {"centroids", centroids},
            {"inertia", m.inertia},
            {"seed", m.seed},
            {"converged", m.converged}};
}

inline PatternModel pattern_model_from_json(const nlohmann::json& j) {
    PatternModel m;
    m.K = j.at("K").get<int>();
    m.inertia = j.at("inertia").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.converged = j.value("converged", true);
    const auto& rows = j.at("centroids");
    if (!rows.empty()) {
        m.centroids.resize(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t k = 0; k < rows.size(); ++k)
            for (std::size_t t = 0; t < rows[k].size(); ++t)
                m.centroids(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
                    rows[k][t].get<double>();
    }
    return m;
}

/// Assignments CSV: `household_id,day,pattern` (patterns 1-based on disk).
inline void write_assignments_csv(const ProfilePanel& panel, const std::vector<int>& labels,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "household_id,day,pattern\n";
    const std::size_t D = panel.day_count();
    for (std::size_t h = 0; h < panel.household_count(); ++h)
        for (std::size_t d = 0; d < D; ++d)
            out << panel.households[h] << ',' << format_date(panel.days[d]) << ','
                << labels[h * D + d] + 1 << '\n';
}

inline nlohmann::json to_json(const FittedPredictor& m) {
    nlohmann::json coeffs = nlohmann::json::array(), means = nlohmann::json::array(),
                   scales = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.coefficients.size(); ++j) {
        coeffs.push_back(m.coefficients(j));
        means.push_back(m.column_means(j));
        scales.push_back(m.column_scales(j));
    }
    return {{"names", m.names},
            {"coefficients", coeffs},
            {"intercept", m.intercept},
            {"alpha", m.alpha},
            {"column_means", means},
            {"column_scales", scales},
            {"target", to_string(m.target)},
            {"feature_kind", to_string(m.feature_kind)},
            {"converged", m.converged}};
}

inline nlohmann::json to_json(const EvaluationReport& r) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : r.folds)
        folds.push_back({{"rmse", f.rmse},
                         {"mae", f.mae},
                         {"alpha", f.alpha},
                         {"degenerate", f.degenerate},
                         {"test_rows", f.test_rows}});
    return {{"folds", folds},
            {"mean_rmse", r.mean_rmse},
            {"mean_mae", r.mean_mae},
            {"pooled_rmse", r.pooled_rmse},
            {"pooled_mae", r.pooled_mae},
            {"leakage_audit_ok", r.leakage_audit_ok}};
}

/// Congestion CSV: `segment_id,day,cst_hours,duration_hours,fftt_s`; empty
/// cst/duration fields mark congestion-free days.
inline void write_congestion_csv(const std::vector<CongestionRecord>& records,
                                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "segment_id,day,cst_hours,duration_hours,fftt_s\n";
    for (const auto& r : records) {
        out << r.segment_id << ',' << format_date(r.day) << ',';
        if (r.cst) out << format_double(*r.cst);
        out << ',';
        if (r.duration) out << format_double(*r.duration);
        out << ',' << format_double(r.fftt) << '\n';
    }
}

inline std::vector<CongestionRecord> load_congestion_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open congestion CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty congestion CSV: " + path);
    std::vector<CongestionRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 5)
            throw DataError("line " + std::to_string(line_no) + ": expected 5 fields");
        CongestionRecord r;
        r.segment_id = fields[0];
        r.day = parse_date(fields[1]);
        if (!fields[2].empty()) r.cst = detail::parse_double_field(fields[2], line_no, "cst_hours");
        if (!fields[3].empty())
            r.duration = detail::parse_double_field(fields[3], line_no, "duration_hours");
        r.fftt = detail::parse_double_field(fields[4], line_no, "fftt_s");
        if (r.cst.has_value() != r.duration.has_value())
            throw DataError("line " + std::to_string(line_no) +
                            ": cst and duration must be present together");
        records.push_back(r);
    }
    return records;
}

/// Feature CSV: first column `day`, then one column per feature name.
inline void write_feature_csv(const FeatureMatrix& fm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "day";
    for (const auto& n : fm.names) out << ',' << n;
    out << '\n';
    for (std::size_t d = 0; d < fm.days.size(); ++d) {
        out << format_date(fm.days[d]);
        for (Eigen::Index j = 0; j < fm.values.cols(); ++j)
            out << ',' << format_double(fm.values(static_cast<Eigen::Index>(d), j));
        out << '\n';
    }
}

inline FeatureMatrix load_feature_csv(const std::string& path, FeatureKind kind) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty feature CSV: " + path);
    auto header = detail::split_csv_line(line);
    if (header.empty() || header[0] != "day")
        throw DataError("feature CSV must start with a 'day' column");
    FeatureMatrix fm;
    fm.kind = kind;
    fm.names.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("line " + std::to_string(line_no) + ": column count mismatch");
        fm.days.push_back(parse_date(fields[0]));
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j)
            row.push_back(detail::parse_double_field(fields[j], line_no, "feature"));
        rows.push_back(std::move(row));
    }
    fm.values.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(fm.names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            fm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return fm;
}

/// Similarity matrix CSV with segment ids as row/column headers.
inline void write_similarity_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& m,
                                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "segment_id";
    for (const auto& id : ids) out << ',' << id;
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
        out << '\n';
    }
}

inline nlohmann::json ground_truth_json(const SyntheticData& data) {
    nlohmann::json days = nlohmann::json::array();
    for (const auto& d : data.day_truth) {
        nlohmann::json patterns = nlohmann::json::array();
        for (int z : d.pattern_per_household) patterns.push_back(z + 1);
        days.push_back(
            {{"day", format_date(d.day)}, {"shares", d.shares}, {"patterns", patterns}});
    }
    nlohmann::json segment_days = nlohmann::json::array();
    for (const auto& s : data.segment_truth)
        segment_days.push_back({{"segment_id", s.segment_id},
                                {"day", format_date(s.day)},
                                {"true_cst", s.true_cst},
                                {"true_duration", s.true_duration},
                                {"grid_cst", s.grid_cst},
                                {"grid_duration", s.grid_duration}});
    return {{"seed", data.spec.seed},
            {"households", data.spec.households},
            {"days_count", data.spec.days},
            {"K_true", data.spec.K_true},
            {"coupling", data.spec.coupling},
            {"duration_coupling", data.spec.duration_coupling},
            {"base_cst", data.spec.base_cst},
            {"cst_noise_sd", data.spec.cst_noise_sd},
            {"days", days},
            {"segment_days", segment_days}};
}

}  // namespace gridlock
