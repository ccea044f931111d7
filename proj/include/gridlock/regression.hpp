#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gridlock/errors.hpp"
#include "gridlock/features.hpp"
#include "gridlock/rng.hpp"

namespace gridlock {

enum class Target { cst, duration };

inline const char* to_string(Target t) { return t == Target::cst ? "cst" : "duration"; }

/// Linear predictor with coefficients in original feature units.
struct FittedPredictor {
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    double alpha = 0.0;
    Eigen::VectorXd column_means;   // standardization used during fitting
    Eigen::VectorXd column_scales;  // zero marks a constant column (coefficient 0)
    Target target = Target::cst;
    FeatureKind feature_kind = FeatureKind::aggregate;
    bool converged = true;
    bool rank_deficient = false;
    std::vector<double> objective_history;  // LASSO objective per pass

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const {
        return (X * coefficients).array() + intercept;
    }
};

inline double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& actual) {
    if (pred.size() != actual.size() || pred.size() == 0)
        throw ContractError("rmse: length mismatch or empty");
    return std::sqrt((pred - actual).squaredNorm() / static_cast<double>(pred.size()));
}

inline double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& actual) {
    if (pred.size() != actual.size() || pred.size() == 0)
        throw ContractError("mae: length mismatch or empty");
    return (pred - actual).cwiseAbs().sum() / static_cast<double>(pred.size());
}

inline double soft_threshold(double z, double gamma) {
    if (gamma < 0.0) throw ContractError("soft_threshold: negative threshold");
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

namespace detail {

struct Standardized {
    Eigen::MatrixXd X;            // centered, unit population variance columns
    Eigen::VectorXd y;            // centered
    Eigen::VectorXd means, scales;
    double y_mean = 0.0;
};

inline Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Standardized s;
    const double n = static_cast<double>(X.rows());
    s.means = X.colwise().mean();
    s.X = X.rowwise() - s.means.transpose();
    s.scales.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double var = s.X.col(j).squaredNorm() / n;
        s.scales(j) = var > 0.0 ? std::sqrt(var) : 0.0;
        if (s.scales(j) > 0.0) s.X.col(j) /= s.scales(j);
        // constant columns stay zero and are skipped by the solver
    }
    s.y_mean = y.mean();
    s.y = y.array() - s.y_mean;
    return s;
}

}  // namespace detail

/// Smallest penalty that zeroes every coefficient: max_j |x~_j' y~| / n.
inline double alpha_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto s = detail::standardize(X, y);
    const double n = static_cast<double>(X.rows());
    double amax = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        amax = std::max(amax, std::abs(s.X.col(j).dot(s.y)) / n);
    return amax;
}

/// Log-spaced grid from alpha_max down to alpha_max * decade_span.
inline std::vector<double> make_alpha_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           int size = 50, double span = 1e-4) {
    const double amax = alpha_max(X, y);
    std::vector<double> grid(static_cast<std::size_t>(size));
    if (amax <= 0.0) {  // y constant: any alpha gives the null model
        for (auto& a : grid) a = 0.0;
        return grid;
    }
    for (int i = 0; i < size; ++i)
        grid[static_cast<std::size_t>(i)] =
            amax * std::pow(span, static_cast<double>(i) / static_cast<double>(size - 1));
    return grid;
}

struct OlsSummary {
    Eigen::VectorXd std_errors;      // per coefficient, intercept last
    Eigen::VectorXd t_values;
    Eigen::VectorXd p_values;        // two-sided, classical normal theory
    double sigma2 = 0.0;
    long residual_df = 0;
    bool valid = false;              // false when rank-deficient
};

namespace detail {

/// Regularized incomplete beta function by Lentz's continued fraction.
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    auto cont_frac = [](double a, double b, double x) {
        const double tiny = 1e-300;
        double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 300; ++m) {
            const double m2 = 2.0 * m;
            double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
            d = 1.0 + num * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + num / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
            d = 1.0 + num * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + num / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double delta = d * c;
            h *= delta;
            if (std::abs(delta - 1.0) < 1e-12) break;
        }
        return h;
    };
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(ln_front) * cont_frac(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     cont_frac(b, a, 1.0 - x) / b;
}

inline double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) return 1.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

}  // namespace detail

/// OLS with an unpenalized intercept; rank-deficient designs fall back to
/// the minimum-norm solution (flagged).
inline FittedPredictor fit_ols(const FeatureMatrix& X, const Eigen::VectorXd& y,
                               Target target = Target::cst, OlsSummary* summary = nullptr) {
    if (X.values.rows() != y.size() || y.size() < 2)
        throw DataError("fit_ols: need at least 2 aligned rows");
    const auto s = detail::standardize(X.values, y);
    // Centered design in original units (centering alone does not change slopes).
    Eigen::MatrixXd Xc = X.values.rowwise() - s.means.transpose();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Xc);
    cod.setThreshold(1e-10);
    FittedPredictor fit;
    fit.names = X.names;
    fit.target = target;
    fit.feature_kind = X.kind;
    fit.column_means = s.means;
    fit.column_scales = s.scales;
    fit.coefficients = cod.solve(s.y);
    fit.intercept = s.y_mean - fit.coefficients.dot(s.means);
    fit.rank_deficient = cod.rank() < X.values.cols();
    if (summary) {
        const long n = X.values.rows(), p = X.values.cols();
        summary->residual_df = n - p - 1;
        summary->valid = !fit.rank_deficient && summary->residual_df > 0;
        const Eigen::VectorXd resid = y - fit.predict(X.values);
        if (summary->valid) {
            summary->sigma2 = resid.squaredNorm() / static_cast<double>(summary->residual_df);
            // Covariance of [beta] from the centered design; the intercept SE
            // needs the uncentered moment matrix, assembled explicitly.
            Eigen::MatrixXd Z(n, p + 1);
            Z.col(0).setOnes();
            Z.rightCols(p) = X.values;
            const Eigen::MatrixXd cov = summary->sigma2 * (Z.transpose() * Z).inverse();
            summary->std_errors.resize(p + 1);
            summary->t_values.resize(p + 1);
            summary->p_values.resize(p + 1);
            for (long j = 0; j < p + 1; ++j) {
                const double est = j < p ? fit.coefficients(j) : fit.intercept;
                const long cj = j < p ? j + 1 : 0;
                summary->std_errors(j) = std::sqrt(std::max(cov(cj, cj), 0.0));
                summary->t_values(j) =
                    summary->std_errors(j) > 0.0 ? est / summary->std_errors(j) : 0.0;
                summary->p_values(j) = detail::student_t_two_sided_p(
                    summary->t_values(j), static_cast<double>(summary->residual_df));
            }
        }
    }
    return fit;
}

struct LassoOptions {
    double tol = 1e-7;     // max standardized-coefficient change per pass
    int max_passes = 10000;
};

/// Cyclic coordinate descent on standardized columns, unpenalized intercept.
/// Objective: (1/2n)||y - Xb||^2 + alpha * ||b~||_1 (standardized b~).
/// warm, when given, seeds the standardized coefficients (and receives the
/// converged values back) for path fits.
inline FittedPredictor fit_lasso(const FeatureMatrix& X, const Eigen::VectorXd& y, double alpha,
                                 Target target = Target::cst, const LassoOptions& opts = {},
                                 Eigen::VectorXd* warm = nullptr) {
    if (alpha < 0.0) throw ContractError("fit_lasso: negative alpha");
    if (X.values.rows() != y.size() || y.size() == 0)
        throw DataError("fit_lasso: empty or misaligned data");
    const auto s = detail::standardize(X.values, y);
    const Eigen::Index n = X.values.rows(), p = X.values.cols();
    const double nd = static_cast<double>(n);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    if (warm && warm->size() == p) beta = *warm;
    Eigen::VectorXd r = s.y - s.X * beta;

    FittedPredictor fit;
    fit.names = X.names;
    fit.alpha = alpha;
    fit.target = target;
    fit.feature_kind = X.kind;
    fit.column_means = s.means;
    fit.column_scales = s.scales;
    fit.converged = false;
    for (int pass = 0; pass < opts.max_passes; ++pass) {
        double max_delta = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (s.scales(j) == 0.0) continue;  // constant column: coefficient stays 0
            const double old = beta(j);
            const double z = s.X.col(j).dot(r) / nd + old;  // unit-variance columns
            const double nu = soft_threshold(z, alpha);
            if (nu != old) {
                r += s.X.col(j) * (old - nu);
                beta(j) = nu;
                max_delta = std::max(max_delta, std::abs(nu - old));
            }
        }
        fit.objective_history.push_back(r.squaredNorm() / (2.0 * nd) +
                                        alpha * beta.cwiseAbs().sum());
        if (max_delta < opts.tol) {
            fit.converged = true;
            break;
        }
    }
    if (warm) *warm = beta;
    fit.coefficients.resize(p);
    for (Eigen::Index j = 0; j < p; ++j)
        fit.coefficients(j) = s.scales(j) > 0.0 ? beta(j) / s.scales(j) : 0.0;
    fit.intercept = s.y_mean - fit.coefficients.dot(s.means);
    return fit;
}

/// Fits the whole grid with warm starts along decreasing alpha; grid must be
/// sorted descending.
inline std::vector<FittedPredictor> lasso_path(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                               const std::vector<double>& alphas,
                                               Target target = Target::cst,
                                               const LassoOptions& opts = {}) {
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(X.values.cols());
    std::vector<FittedPredictor> path;
    path.reserve(alphas.size());
    for (double a : alphas) path.push_back(fit_lasso(X, y, a, target, opts, &warm));
    return path;
}

namespace detail {

/// Deterministic shuffled fold assignment: fold id per row.
inline std::vector<int> fold_assignment(Eigen::Index n, int folds, std::uint64_t seed) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> fold(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i)
        fold[static_cast<std::size_t>(order[i])] = static_cast<int>(i % static_cast<std::size_t>(folds));
    return fold;
}

inline FeatureMatrix take_rows(const FeatureMatrix& X, const std::vector<Eigen::Index>& rows) {
    FeatureMatrix out;
    out.kind = X.kind;
    out.names = X.names;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), X.values.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.values.row(static_cast<Eigen::Index>(i)) = X.values.row(rows[i]);
        if (!X.days.empty()) out.days.push_back(X.days[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

inline Eigen::VectorXd take(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(rows[i]);
    return out;
}

}  // namespace detail

/// Alpha minimizing mean inner-fold RMSE, with ties resolved toward the
/// larger (sparser) alpha. The tie tolerance is calibrated to the CV curve
/// itself: mean RMSEs within half of the curve's overfitting rise (the mean
/// at the smallest grid alpha minus the minimum) are indistinguishable at
/// the resolution the curve can resolve, so the largest alpha inside that
/// band wins. When the curve has no overfitting rise the band collapses and
/// this reduces to the plain minimum with a larger-alpha tie break.
/// Grid is fitted with warm starts along decreasing alpha.
inline double select_alpha(const FeatureMatrix& X, const Eigen::VectorXd& y,
                           std::vector<double> alphas, int folds, std::uint64_t seed,
                           Target target = Target::cst, const LassoOptions& opts = {},
                           std::vector<double>* mean_rmse_out = nullptr) {
    if (alphas.empty()) throw ConfigError("select_alpha: empty alpha grid");
    if (y.size() < folds) throw DataError("select_alpha: fewer rows than folds");
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    const auto fold = detail::fold_assignment(y.size(), folds, seed);

    std::vector<std::vector<double>> fold_rmse(alphas.size());
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> train, val;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            (fold[static_cast<std::size_t>(i)] == f ? val : train).push_back(i);
        if (val.empty() || train.empty()) continue;
        const auto Xtr = detail::take_rows(X, train);
        const auto ytr = detail::take(y, train);
        const auto Xva = detail::take_rows(X, val);
        const auto yva = detail::take(y, val);
        const auto path = lasso_path(Xtr, ytr, alphas, target, opts);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            const Eigen::VectorXd pred = path[a].predict(Xva.values);
            fold_rmse[a].push_back(std::sqrt((pred - yva).squaredNorm() /
                                             static_cast<double>(yva.size())));
        }
    }
    std::vector<double> mean_rmse(alphas.size(), std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        if (fold_rmse[a].empty()) continue;
        double m = 0.0;
        for (double r : fold_rmse[a]) m += r;
        mean_rmse[a] = m / static_cast<double>(fold_rmse[a].size());
    }
    if (mean_rmse_out) *mean_rmse_out = mean_rmse;
    std::size_t lowest = 0;
    for (std::size_t a = 1; a < alphas.size(); ++a)  // descending grid: larger alpha wins ties
        if (mean_rmse[a] < mean_rmse[lowest]) lowest = a;
    // Tie band: half of the overfitting rise at the small-alpha end of the
    // grid. Curves that keep improving toward small alpha have no rise, so
    // the band is ~0 and the plain minimum is returned.
    const double tail = mean_rmse.back();
    const double band = std::isfinite(tail) ? 0.5 * std::max(0.0, tail - mean_rmse[lowest]) : 0.0;
    std::size_t best = lowest;
    for (std::size_t a = 0; a <= lowest; ++a)
        if (mean_rmse[a] <= mean_rmse[lowest] + band) {
            best = a;
            break;
        }
    return alphas[best];
}

/// Builds a fold-specific extra feature column from training rows only
/// (e.g. clipped ARMA CSTs, or predicted CSTs for duration models).
/// Returns one value per row of the full matrix.
using ColumnAugmenter =
    std::function<std::pair<std::string, Eigen::VectorXd>(const std::vector<Eigen::Index>& train_rows)>;

struct EvaluationOptions {
    int outer_folds = 3;
    int inner_folds = 4;
    std::vector<double> alpha_grid;  // empty: derived per outer-train via make_alpha_grid
    std::uint64_t seed = 0;
    Target target = Target::cst;
    LassoOptions lasso;
};

struct FoldReport {
    std::vector<Eigen::Index> train_rows, test_rows;
    double rmse = 0.0, mae = 0.0;
    double alpha = 0.0;
    bool degenerate = false;  // all training targets equal
};

struct EvaluationReport {
    std::vector<FoldReport> folds;
    double mean_rmse = 0.0, mean_mae = 0.0;      // averaged over outer folds
    double pooled_rmse = 0.0, pooled_mae = 0.0;  // over all out-of-fold predictions
    Eigen::VectorXd predictions;                 // per input row, out-of-fold
    bool leakage_audit_ok = true;
};

/// Two-level cross-validation: outer folds for performance, inner folds for
/// alpha. Fold assignment is deterministic given the seed.
inline EvaluationReport nested_cv_evaluate(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                           const EvaluationOptions& opts,
                                           const ColumnAugmenter& augmenter = nullptr) {
    if (y.size() < opts.outer_folds) throw DataError("nested_cv_evaluate: fewer rows than folds");
    const auto fold = detail::fold_assignment(y.size(), opts.outer_folds, opts.seed);

    EvaluationReport report;
    report.predictions.resize(y.size());
    double sum_sq = 0.0, sum_abs = 0.0;
    std::vector<bool> predicted(static_cast<std::size_t>(y.size()), false);
    for (int f = 0; f < opts.outer_folds; ++f) {
        FoldReport fr;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            (fold[static_cast<std::size_t>(i)] == f ? fr.test_rows : fr.train_rows).push_back(i);

        // Leakage audit: train/test disjoint, union covers all rows.
        for (Eigen::Index i : fr.test_rows)
            if (std::find(fr.train_rows.begin(), fr.train_rows.end(), i) != fr.train_rows.end())
                report.leakage_audit_ok = false;
        if (fr.train_rows.size() + fr.test_rows.size() != static_cast<std::size_t>(y.size()))
            report.leakage_audit_ok = false;

        FeatureMatrix Xf = X;
        if (augmenter) {
            auto [name, column] = augmenter(fr.train_rows);
            if (column.size() != y.size())
                throw ContractError("nested_cv_evaluate: augmenter column length mismatch");
            Xf.names.push_back(name);
            Xf.values.conservativeResize(Eigen::NoChange, Xf.values.cols() + 1);
            Xf.values.col(Xf.values.cols() - 1) = column;
        }

        const auto Xtr = detail::take_rows(Xf, fr.train_rows);
        const auto ytr = detail::take(y, fr.train_rows);
        fr.degenerate = (ytr.maxCoeff() - ytr.minCoeff()) == 0.0;

        std::vector<double> grid = opts.alpha_grid;
        if (grid.empty()) grid = make_alpha_grid(Xtr.values, ytr);
        fr.alpha = select_alpha(Xtr, ytr, grid, opts.inner_folds,
                                detail::mix_seed(opts.seed, 100 + static_cast<std::uint64_t>(f)),
                                opts.target, opts.lasso);
        const auto fit = fit_lasso(Xtr, ytr, fr.alpha, opts.target, opts.lasso);

        const auto Xte = detail::take_rows(Xf, fr.test_rows);
        const auto yte = detail::take(y, fr.test_rows);
        const Eigen::VectorXd pred = fit.predict(Xte.values);
        fr.rmse = rmse(pred, yte);
        fr.mae = mae(pred, yte);
        for (std::size_t i = 0; i < fr.test_rows.size(); ++i) {
            report.predictions(fr.test_rows[i]) = pred(static_cast<Eigen::Index>(i));
            predicted[static_cast<std::size_t>(fr.test_rows[i])] = true;
        }
        sum_sq += (pred - yte).squaredNorm();
        sum_abs += (pred - yte).cwiseAbs().sum();
        report.folds.push_back(std::move(fr));
    }
    for (bool p : predicted)
        if (!p) report.leakage_audit_ok = false;  // outer folds must partition all rows
    for (const auto& fr : report.folds) {
        report.mean_rmse += fr.rmse;
        report.mean_mae += fr.mae;
    }
    report.mean_rmse /= static_cast<double>(report.folds.size());
    report.mean_mae /= static_cast<double>(report.folds.size());
    report.pooled_rmse = std::sqrt(sum_sq / static_cast<double>(y.size()));
    report.pooled_mae = sum_abs / static_cast<double>(y.size());
    return report;
}

/// Fixed train/test split evaluation (60/19-day mode by default). The
/// split is a deterministic shuffle; train_fraction of rows train the model.
inline EvaluationReport fixed_split_evaluate(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                             const EvaluationOptions& opts,
                                             double train_fraction = 60.0 / 79.0,
                                             const ColumnAugmenter& augmenter = nullptr) {
    if (y.size() < 4) throw DataError("fixed_split_evaluate: too few rows");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(y.size()));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(opts.seed);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n_train = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(y.size()))));

    FoldReport fr;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? fr.train_rows : fr.test_rows).push_back(order[i]);
    std::sort(fr.train_rows.begin(), fr.train_rows.end());
    std::sort(fr.test_rows.begin(), fr.test_rows.end());
    if (fr.test_rows.empty()) throw DataError("fixed_split_evaluate: empty test set");

    FeatureMatrix Xf = X;
    if (augmenter) {
        auto [name, column] = augmenter(fr.train_rows);
        Xf.names.push_back(name);
        Xf.values.conservativeResize(Eigen::NoChange, Xf.values.cols() + 1);
        Xf.values.col(Xf.values.cols() - 1) = column;
    }
    const auto Xtr = detail::take_rows(Xf, fr.train_rows);
    const auto ytr = detail::take(y, fr.train_rows);
    std::vector<double> grid = opts.alpha_grid;
    if (grid.empty()) grid = make_alpha_grid(Xtr.values, ytr);
    fr.alpha = select_alpha(Xtr, ytr, grid, opts.inner_folds, detail::mix_seed(opts.seed, 7),
                            opts.target, opts.lasso);
    const auto fit = fit_lasso(Xtr, ytr, fr.alpha, opts.target, opts.lasso);
    const auto Xte = detail::take_rows(Xf, fr.test_rows);
    const auto yte = detail::take(y, fr.test_rows);
    const Eigen::VectorXd pred = fit.predict(Xte.values);
    fr.rmse = rmse(pred, yte);
    fr.mae = mae(pred, yte);

    EvaluationReport report;
    report.predictions = Eigen::VectorXd::Zero(y.size());
    for (std::size_t i = 0; i < fr.test_rows.size(); ++i)
        report.predictions(fr.test_rows[i]) = pred(static_cast<Eigen::Index>(i));
    report.mean_rmse = report.pooled_rmse = fr.rmse;
    report.mean_mae = report.pooled_mae = fr.mae;
    report.folds.push_back(std::move(fr));
    return report;
}

}  // namespace gridlock
