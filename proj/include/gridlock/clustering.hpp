#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "gridlock/errors.hpp"
#include "gridlock/parallel.hpp"
#include "gridlock/profiles.hpp"
#include "gridlock/rng.hpp"

namespace gridlock {

namespace detail {

inline std::size_t count_distinct_rows(const Eigen::MatrixXd& points) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        std::vector<double> r(points.cols() >= 0 ? static_cast<std::size_t>(points.cols()) : 0);
        for (Eigen::Index j = 0; j < points.cols(); ++j) r[static_cast<std::size_t>(j)] = points(i, j);
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows.size();
}

}  // namespace detail

/// K typical patterns: centroids plus per-point labels.
struct PatternModel {
    int K = 0;
    Eigen::MatrixXd centroids;  // K x T
    std::vector<int> labels;    // per input row, 0-based pattern index
    double inertia = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> inertia_history;  // winning restart, one entry per Lloyd iteration
    bool converged = true;
};

struct KMeansParams {
    int restarts = 10;
    int max_iters = 300;
    double tol = 1e-6;  // relative inertia change
};

namespace detail {

inline int nearest_centroid(const Eigen::MatrixXd& centroids, const Eigen::VectorXd& x,
                            double* dist_out = nullptr) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
        const double d = (centroids.row(k).transpose() - x).squaredNorm();
        if (d < best_d) {  // ties resolved to the lowest index
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    if (dist_out) *dist_out = best_d;
    return best;
}

inline Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int K, std::mt19937_64& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(K, points.cols());
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centroids.row(0) = points.row(first(rng));
    Eigen::VectorXd d2(n);
    for (Eigen::Index i = 0; i < n; ++i)
        d2(i) = (points.row(i) - centroids.row(0)).squaredNorm();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 1; k < K; ++k) {
        const double total = d2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double r = unif(rng) * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                r -= d2(i);
                if (r <= 0.0) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            pick = first(rng);
        }
        centroids.row(k) = points.row(pick);
        for (Eigen::Index i = 0; i < n; ++i)
            d2(i) = std::min(d2(i), (points.row(i) - centroids.row(k)).squaredNorm());
    }
    return centroids;
}

struct LloydResult {
    Eigen::MatrixXd centroids;
    std::vector<int> labels;
    double inertia = 0.0;
    std::vector<double> history;
    bool converged = false;
};

inline LloydResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids,
                         const KMeansParams& params) {
    const Eigen::Index n = points.rows();
    const int K = static_cast<int>(centroids.rows());
    LloydResult res;
    res.labels.assign(static_cast<std::size_t>(n), -1);
    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.max_iters; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = 0.0;
            const int k = nearest_centroid(centroids, points.row(i).transpose(), &d);
            if (k != res.labels[static_cast<std::size_t>(i)]) changed = true;
            res.labels[static_cast<std::size_t>(i)] = k;
            inertia += d;
        }
        res.history.push_back(inertia);
        res.inertia = inertia;
        res.centroids = centroids;
        const bool tol_met = prev_inertia < std::numeric_limits<double>::infinity() &&
                             prev_inertia - inertia <= params.tol * std::max(prev_inertia, 1e-300);
        if (!changed) {
            // Labels are nearest w.r.t. current centroids, and centroids are
            // the means of these labels from the previous update: fixed point.
            res.converged = true;
            return res;
        }
        prev_inertia = inertia;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, points.cols());
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(K), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(res.labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(res.labels[static_cast<std::size_t>(i)])];
        }
        for (int k = 0; k < K; ++k) {
            if (counts[static_cast<std::size_t>(k)] == 0) {
                // Empty cluster: re-seed with the point farthest from its centroid.
                Eigen::Index far = 0;
                double far_d = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double d = (points.row(i) -
                                      centroids.row(res.labels[static_cast<std::size_t>(i)]))
                                         .squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids.row(k) = points.row(far);
            } else {
                centroids.row(k) =
                    sums.row(k) / static_cast<double>(counts[static_cast<std::size_t>(k)]);
            }
        }
        (void)tol_met;  // label stability is the stop rule; tol bounds polish below
    }
    return res;
}

}  // namespace detail

/// Best-of-restarts Lloyd k-means with k-means++ seeding. Deterministic for
/// a given seed; squared-Euclidean distance.
inline PatternModel kmeans(const Eigen::MatrixXd& points, int K, std::uint64_t seed,
                           const KMeansParams& params = {}) {
    if (K <= 0) throw ConfigError("kmeans: K must be positive");
    if (points.rows() == 0) throw DataError("kmeans: no points");
    if (static_cast<std::size_t>(K) > detail::count_distinct_rows(points))
        throw DataError("kmeans: K exceeds the number of distinct points");

    auto restarts = parallel_map<detail::LloydResult>(
        static_cast<std::size_t>(params.restarts), [&](std::size_t r) {
            std::mt19937_64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(r)));
            return detail::lloyd(points, detail::kmeanspp_init(points, K, rng), params);
        });
    PatternModel best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (auto& res : restarts) {
        if (res.inertia < best.inertia) {  // ties keep the earliest restart
            best.K = K;
            best.centroids = std::move(res.centroids);
            best.labels = std::move(res.labels);
            best.inertia = res.inertia;
            best.inertia_history = std::move(res.history);
            best.converged = res.converged;
            best.seed = seed;
        }
    }
    return best;
}

/// Nearest-centroid assignment; ties go to the lowest pattern index.
inline std::vector<int> assign_patterns(const PatternModel& model, const Eigen::MatrixXd& points) {
    if (points.cols() != model.centroids.cols())
        throw ContractError("assign_patterns: dimension mismatch");
    std::vector<int> labels(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        labels[static_cast<std::size_t>(i)] =
            detail::nearest_centroid(model.centroids, points.row(i).transpose());
    return labels;
}

struct GapEntry {
    int k = 0;
    double gap = 0.0;
    double s_k = 0.0;
    double log_inertia = 0.0;           // observed
    double expected_log_inertia = 0.0;  // reference mean
};

struct GapCurve {
    std::vector<GapEntry> entries;
    int B = 0;
    int chosen_k = 0;
    bool criterion_met = true;  // false: no K satisfied the gap rule, largest returned
};

/// GAP statistic K selection (uniform bounding-box reference distribution).
/// Chooses the smallest K with Gap(K) >= Gap(K+1) - s_{K+1}.
inline GapCurve gap_select_k(const Eigen::MatrixXd& points, const std::vector<int>& k_candidates,
                             int B, std::uint64_t seed, const KMeansParams& params = {}) {
    if (k_candidates.empty()) throw ConfigError("gap_select_k: no candidates");
    if (B < 2) throw ConfigError("gap_select_k: B must be at least 2");
    for (std::size_t i = 1; i < k_candidates.size(); ++i)
        if (k_candidates[i] <= k_candidates[i - 1])
            throw ConfigError("gap_select_k: candidates must be strictly increasing");

    const Eigen::VectorXd lo = points.colwise().minCoeff();
    const Eigen::VectorXd hi = points.colwise().maxCoeff();

    GapCurve curve;
    curve.B = B;
    for (std::size_t ci = 0; ci < k_candidates.size(); ++ci) {
        const int k = k_candidates[ci];
        GapEntry entry;
        entry.k = k;
        const auto model = kmeans(points, k, detail::mix_seed(seed, 1000 + ci), params);
        entry.log_inertia = std::log(std::max(model.inertia, 1e-300));

        std::vector<double> ref_logs;
        ref_logs.reserve(static_cast<std::size_t>(B));
        for (int b = 0; b < B; ++b) {
            std::mt19937_64 rng(detail::mix_seed(seed, 2000 + ci * 1000 + static_cast<std::size_t>(b)));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            Eigen::MatrixXd ref(points.rows(), points.cols());
            for (Eigen::Index i = 0; i < ref.rows(); ++i)
                for (Eigen::Index j = 0; j < ref.cols(); ++j)
                    ref(i, j) = lo(j) + unif(rng) * (hi(j) - lo(j));
            const auto ref_model =
                kmeans(ref, k, detail::mix_seed(seed, 3000 + ci * 1000 + static_cast<std::size_t>(b)),
                       params);
            ref_logs.push_back(std::log(std::max(ref_model.inertia, 1e-300)));
        }
        double mean = 0.0;
        for (double v : ref_logs) mean += v;
        mean /= static_cast<double>(B);
        double var = 0.0;
        for (double v : ref_logs) var += (v - mean) * (v - mean);
        var /= static_cast<double>(B);
        entry.expected_log_inertia = mean;
        entry.gap = mean - entry.log_inertia;
        entry.s_k = std::sqrt(var) * std::sqrt(1.0 + 1.0 / static_cast<double>(B));
        curve.entries.push_back(entry);
    }

    curve.chosen_k = curve.entries.back().k;
    curve.criterion_met = false;
    for (std::size_t i = 0; i + 1 < curve.entries.size(); ++i) {
        if (curve.entries[i].gap >= curve.entries[i + 1].gap - curve.entries[i + 1].s_k) {
            curve.chosen_k = curve.entries[i].k;
            curve.criterion_met = true;
            break;
        }
    }
    if (curve.entries.size() == 1) curve.criterion_met = false;  // singleton range: trivial choice
    return curve;
}

struct SeasonalSplit {
    std::vector<int> cluster_per_day;  // 0 or 1
    int summer_cluster = 0;            // cluster with the higher night-use share
    bool degenerate = false;           // all days identical: single season
};

/// K=2 clustering of per-day mean profiles; the cluster whose mean profile
/// concentrates more of its use in the 00:00-04:00 window is labeled summer.
inline SeasonalSplit seasonal_split(const ProfilePanel& panel, std::uint64_t seed,
                                    const KMeansParams& params = {}) {
    const std::size_t D = panel.day_count();
    const std::size_t H = panel.household_count();
    if (D < 2) throw DataError("seasonal_split: need at least 2 days");
    Eigen::MatrixXd day_means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), panel.grid.count);
    for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t h = 0; h < H; ++h)
            for (int t = 0; t < panel.grid.count; ++t)
                day_means(static_cast<Eigen::Index>(d), t) +=
                    panel.at(h, d).values[static_cast<std::size_t>(t)];
        day_means.row(static_cast<Eigen::Index>(d)) /= static_cast<double>(H);
    }

    SeasonalSplit split;
    if (detail::count_distinct_rows(day_means) < 2) {
        split.cluster_per_day.assign(D, 0);
        split.degenerate = true;
        return split;
    }
    const auto model = kmeans(day_means, 2, seed, params);
    split.cluster_per_day = model.labels;

    // Night-use share of each centroid over 00:00-04:00 (intersected with the grid).
    double share[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        double night = 0.0, total = 0.0;
        for (int t = 0; t < panel.grid.count; ++t) {
            const double v = model.centroids(k, t);
            total += v;
            if (panel.grid.minute_at(t) < 4 * 60) night += v;
        }
        share[k] = total != 0.0 ? night / total : 0.0;
    }
    split.summer_cluster = share[1] > share[0] ? 1 : 0;
    return split;
}

/// Stacks all DH daily profiles into a (D*H) x T matrix, ordered by
/// (household, day) to match ProfilePanel storage. Rows flagged all-zero
/// can be excluded via the mask output.
inline Eigen::MatrixXd profile_matrix(const ProfilePanel& panel,
                                      std::vector<bool>* all_zero_mask = nullptr) {
    const std::size_t H = panel.household_count(), D = panel.day_count();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(H * D), panel.grid.count);
    if (all_zero_mask) all_zero_mask->assign(H * D, false);
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t d = 0; d < D; ++d) {
            const auto& p = panel.at(h, d);
            for (int t = 0; t < panel.grid.count; ++t)
                m(static_cast<Eigen::Index>(h * D + d), t) = p.values[static_cast<std::size_t>(t)];
            if (all_zero_mask && p.all_zero) (*all_zero_mask)[h * D + d] = true;
        }
    return m;
}

}  // namespace gridlock
