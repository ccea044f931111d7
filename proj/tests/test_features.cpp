#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridlock/features.hpp"

using namespace gridlock;

namespace {

ProfilePanel empty_panel(int households, int days) {
    ProfilePanel panel;
    panel.grid = TimeGrid{60, 0, 2};
    for (int h = 0; h < households; ++h) panel.households.push_back("h" + std::to_string(h + 1));
    Date day{2014, 6, 3};
    for (int d = 0; d < days; ++d) {
        panel.days.push_back(day);
        day = add_days(day, 1);
    }
    panel.profiles.resize(static_cast<std::size_t>(households) * static_cast<std::size_t>(days));
    for (std::size_t h = 0; h < panel.household_count(); ++h)
        for (std::size_t d = 0; d < panel.day_count(); ++d) {
            panel.at(h, d).household_id = panel.households[h];
            panel.at(h, d).day = panel.days[d];
            panel.at(h, d).values = {0.0, 0.0};
        }
    return panel;
}

}  // namespace

TEST_CASE("aggregate_features share computation") {
    const ProfilePanel panel = empty_panel(4, 1);
    // Patterns per household on the single day: [1,1,2,3] (0-based [0,0,1,2]).
    const std::vector<int> labels{0, 0, 1, 2};
    const FeatureMatrix fm = aggregate_features(labels, panel, 3);
    REQUIRE(fm.values.rows() == 1);
    REQUIRE(fm.values.cols() == 2);
    CHECK(fm.values(0, 0) == 0.5);
    CHECK(fm.values(0, 1) == 0.25);
    CHECK(fm.names == std::vector<std::string>{"pattern_1_share", "pattern_2_share"});

    // All households in the dropped pattern K: row of zeros.
    const FeatureMatrix dropped = aggregate_features({2, 2, 2, 2}, panel, 3);
    CHECK(dropped.values.row(0).cwiseAbs().sum() == 0.0);

    // All in pattern 1: row [1, 0].
    const FeatureMatrix first = aggregate_features({0, 0, 0, 0}, panel, 3);
    CHECK(first.values(0, 0) == 1.0);
    CHECK(first.values(0, 1) == 0.0);
}

TEST_CASE("disaggregate_features one-hot encoding") {
    const ProfilePanel panel = empty_panel(2, 1);
    // h1 -> pattern 2, h2 -> pattern 3 (dropped): row [0,1, 0,0].
    const FeatureMatrix fm = disaggregate_features({1, 2}, panel, 3);
    REQUIRE(fm.values.cols() == 4);
    CHECK(fm.values(0, 0) == 0.0);
    CHECK(fm.values(0, 1) == 1.0);
    CHECK(fm.values(0, 2) == 0.0);
    CHECK(fm.values(0, 3) == 0.0);
    CHECK(fm.names[0] == "hh_h1_pattern_1");
    CHECK(fm.names[3] == "hh_h2_pattern_2");

    // K=2: one binary column per household.
    const FeatureMatrix k2 = disaggregate_features({0, 1}, panel, 2);
    CHECK(k2.values.cols() == 2);
    CHECK(k2.values(0, 0) == 1.0);
    CHECK(k2.values(0, 1) == 0.0);

    // Pattern-1 household gets block [1, 0, ...].
    const FeatureMatrix p1 = disaggregate_features({0, 0}, panel, 3);
    CHECK(p1.values(0, 0) == 1.0);
    CHECK(p1.values(0, 1) == 0.0);
}

TEST_CASE("aggregate equals block-sum of disaggregate on random assignments") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const int H = 2 + static_cast<int>(rng() % 6);
        const int D = 1 + static_cast<int>(rng() % 5);
        const int K = 2 + static_cast<int>(rng() % 5);
        const ProfilePanel panel = empty_panel(H, D);
        std::vector<int> labels(static_cast<std::size_t>(H * D));
        for (auto& l : labels) l = static_cast<int>(rng() % static_cast<std::uint64_t>(K));

        const FeatureMatrix agg = aggregate_features(labels, panel, K);
        const FeatureMatrix dis = disaggregate_features(labels, panel, K);

        // Shares plus the dropped pattern's share sum to 1 exactly.
        for (Eigen::Index d = 0; d < agg.values.rows(); ++d) {
            double used = 0.0;
            for (Eigen::Index k = 0; k < agg.values.cols(); ++k) {
                CHECK(agg.values(d, k) >= 0.0);
                CHECK(agg.values(d, k) <= 1.0);
                used += agg.values(d, k);
            }
            CHECK(used <= 1.0 + 1e-15);
        }

        // aggregate = (1/H) x column-block-sum of disaggregate, exactly.
        for (Eigen::Index d = 0; d < agg.values.rows(); ++d)
            for (int k = 0; k < K - 1; ++k) {
                double block_sum = 0.0;
                for (int h = 0; h < H; ++h) block_sum += dis.values(d, h * (K - 1) + k);
                CHECK(agg.values(d, k) == block_sum / static_cast<double>(H));
            }

        // Disaggregate row sum = households not in the dropped pattern.
        for (Eigen::Index d = 0; d < dis.values.rows(); ++d) {
            int not_dropped = 0;
            for (int h = 0; h < H; ++h)
                if (labels[static_cast<std::size_t>(h) * static_cast<std::size_t>(D) +
                           static_cast<std::size_t>(d)] != K - 1)
                    ++not_dropped;
            CHECK(dis.values.row(d).sum() == static_cast<double>(not_dropped));
        }
    }
}

TEST_CASE("historical_window and clipping rules") {
    std::vector<CongestionRecord> recs(3);
    recs[0].cst = 6.2;
    recs[1].cst = 6.5;
    recs[2].cst = 7.9;
    const HistoricalWindow w = historical_window(recs);
    CHECK(w.t_plus == 6.2);
    CHECK(w.t_minus == 7.9);

    std::vector<CongestionRecord> one(1);
    one[0].cst = 6.5;
    const HistoricalWindow w1 = historical_window(one);
    CHECK(w1.t_plus == 6.5);
    CHECK(w1.t_minus == 6.5);

    std::vector<CongestionRecord> none(2);
    CHECK_THROWS_AS(historical_window(none), DataError);

    CHECK(clip_to_window(6.8, w) == 6.8);
    CHECK(clip_to_window(5.0, w) == 6.2);
    CHECK(clip_to_window(9.0, w) == 7.9);
    CHECK(clip_to_window(std::nullopt, w) == 7.9);  // no predicted congestion: latest CST
}

TEST_CASE("mixed_features appends a clipped baseline column") {
    const ProfilePanel panel = empty_panel(2, 3);
    const FeatureMatrix agg = aggregate_features({0, 1, 0, 1, 0, 1}, panel, 2);
    const HistoricalWindow w{6.2, 7.9};
    const std::vector<std::optional<double>> arma{6.8, std::nullopt, 5.0};
    const FeatureMatrix mixed = mixed_features(agg, arma, w);
    CHECK(mixed.kind == FeatureKind::mixed);
    CHECK(mixed.names.back() == "arma_cst");
    REQUIRE(mixed.values.cols() == agg.values.cols() + 1);
    CHECK(mixed.values(0, mixed.values.cols() - 1) == 6.8);
    CHECK(mixed.values(1, mixed.values.cols() - 1) == 7.9);
    CHECK(mixed.values(2, mixed.values.cols() - 1) == 6.2);
    for (Eigen::Index d = 0; d < mixed.values.rows(); ++d) {
        CHECK(mixed.values(d, mixed.values.cols() - 1) >= w.t_plus);
        CHECK(mixed.values(d, mixed.values.cols() - 1) <= w.t_minus);
    }

    FeatureMatrix wrong = agg;
    wrong.kind = FeatureKind::disaggregate;
    CHECK_THROWS_AS(mixed_features(wrong, arma, w), ContractError);
    CHECK_THROWS_AS(mixed_features(agg, {6.8}, w), ContractError);  // length mismatch
}

TEST_CASE("append_cst_feature grows the matrix by one named column") {
    const ProfilePanel panel = empty_panel(2, 3);
    const FeatureMatrix agg = aggregate_features({0, 1, 0, 1, 0, 1}, panel, 2);
    const FeatureMatrix with_cst = append_cst_feature(agg, {6.5, 6.7, 6.4});
    CHECK(with_cst.kind == FeatureKind::aggregate_cst);
    CHECK(with_cst.values.cols() == agg.values.cols() + 1);
    CHECK(with_cst.names.back() == "predicted_cst");
    CHECK(with_cst.values(1, with_cst.values.cols() - 1) == 6.7);

    // Constant prediction column is allowed; the solver must handle it later.
    CHECK_NOTHROW(append_cst_feature(agg, {6.5, 6.5, 6.5}));
    CHECK_THROWS_AS(append_cst_feature(agg, {6.5}), ContractError);
}

TEST_CASE("restrict_days keeps order and validates membership") {
    const ProfilePanel panel = empty_panel(2, 4);
    const FeatureMatrix agg = aggregate_features({0, 1, 0, 1, 1, 0, 1, 0}, panel, 2);
    const std::vector<Date> subset{panel.days[2], panel.days[0]};
    const FeatureMatrix r = restrict_days(agg, subset);
    REQUIRE(r.values.rows() == 2);
    CHECK(r.days == subset);
    CHECK(r.values.row(0) == agg.values.row(2));
    CHECK(r.values.row(1) == agg.values.row(0));
    CHECK_THROWS_AS(restrict_days(agg, {Date{1999, 1, 1}}), DataError);
}
