#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gridlock/errors.hpp"
#include "gridlock/regression.hpp"

namespace gridlock {

/// Households and patterns a disaggregate LASSO fit selected for one segment.
struct SelectionProfile {
    std::string segment_id;
    std::set<std::string> selected_households;
    std::vector<double> pattern_counts;  // K entries, count of selected features per pattern
};

/// Reads the selection off a disaggregate fit: a household is selected iff
/// any of its K-1 coefficients exceeds the threshold in magnitude. The
/// threshold defaults to 0 but coordinate descent can leave near-zero dust,
/// hence the knob.
inline SelectionProfile selection_profile(const FittedPredictor& model,
                                          const std::vector<std::string>& households, int K,
                                          const std::string& segment_id, double threshold = 0.0) {
    if (model.feature_kind != FeatureKind::disaggregate)
        throw ContractError("selection_profile: model must use disaggregate features");
    const std::size_t block = static_cast<std::size_t>(K - 1);
    if (static_cast<std::size_t>(model.coefficients.size()) != households.size() * block)
        throw ContractError("selection_profile: coefficient count does not match H*(K-1)");
    SelectionProfile profile;
    profile.segment_id = segment_id;
    profile.pattern_counts.assign(static_cast<std::size_t>(K), 0.0);
    for (std::size_t h = 0; h < households.size(); ++h) {
        bool selected = false;
        for (std::size_t k = 0; k < block; ++k) {
            const double beta = model.coefficients(static_cast<Eigen::Index>(h * block + k));
            if (std::abs(beta) > threshold) {
                selected = true;
                profile.pattern_counts[k] += 1.0;
            }
        }
        if (selected) profile.selected_households.insert(households[h]);
    }
    return profile;
}

/// |A n B| / |A u B|; 1 when both sets are empty.
inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a)
        if (b.contains(x)) ++inter;
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

/// u.v / (|u||v|); 0 when either vector is zero.
inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw ContractError("cosine: length mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

struct SimilarityMatrices {
    std::vector<std::string> segment_ids;
    Eigen::MatrixXd jaccard_households;  // symmetric
    Eigen::MatrixXd cosine_patterns;     // symmetric
};

inline SimilarityMatrices pairwise_similarity(const std::vector<SelectionProfile>& profiles) {
    if (profiles.size() < 2) throw DataError("pairwise_similarity: need at least 2 profiles");
    const Eigen::Index n = static_cast<Eigen::Index>(profiles.size());
    SimilarityMatrices out;
    out.jaccard_households.resize(n, n);
    out.cosine_patterns.resize(n, n);
    for (const auto& p : profiles) out.segment_ids.push_back(p.segment_id);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const auto& a = profiles[static_cast<std::size_t>(i)];
            const auto& b = profiles[static_cast<std::size_t>(j)];
            const double jc = jaccard(a.selected_households, b.selected_households);
            const double cs = cosine(a.pattern_counts, b.pattern_counts);
            out.jaccard_households(i, j) = out.jaccard_households(j, i) = jc;
            out.cosine_patterns(i, j) = out.cosine_patterns(j, i) = cs;
        }
    return out;
}

}  // namespace gridlock
