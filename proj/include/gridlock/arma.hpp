#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gridlock/errors.hpp"

namespace gridlock {

/// ARMA(p,q): X_t = c + delta_t + sum phi_i X_{t-i} + sum theta_i delta_{t-i}.
struct ArmaModel {
    int p = 0, q = 0;
    Eigen::VectorXd ar;     // phi_1..phi_p
    Eigen::VectorXd ma;     // theta_1..theta_q
    double constant = 0.0;  // c
    double sigma2 = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;  // 2(p+q+2) - 2 logL
};

namespace detail {

/// AR polynomial roots outside the unit circle <=> companion eigenvalues
/// inside it.
inline bool ar_stationary(const Eigen::VectorXd& phi, double margin = 1e-6) {
    const Eigen::Index p = phi.size();
    if (p == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    companion.row(0) = phi.transpose();
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    const auto eigs = companion.eigenvalues();
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (std::abs(eigs(i)) >= 1.0 - margin) return false;
    return true;
}

/// Conditional residual recursion: presample observations and innovations are
/// treated as zero, so every model yields one residual per observation and
/// likelihoods stay comparable across orders.
inline void arma_residuals(const std::vector<double>& x, double c, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& theta, std::vector<double>& eps) {
    const int p = static_cast<int>(phi.size());
    const int q = static_cast<int>(theta.size());
    const int n = static_cast<int>(x.size());
    eps.assign(static_cast<std::size_t>(n), 0.0);
    for (int t = 0; t < n; ++t) {
        double mean = c;
        for (int i = 0; i < p; ++i)
            if (t - 1 - i >= 0) mean += phi(i) * x[static_cast<std::size_t>(t - 1 - i)];
        for (int j = 0; j < q; ++j)
            if (t - 1 - j >= 0) mean += theta(j) * eps[static_cast<std::size_t>(t - 1 - j)];
        eps[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(t)] - mean;
    }
}

/// Conditional sum of squares over t = 0..n-1.
inline double arma_css(const std::vector<double>& x, double c, const Eigen::VectorXd& phi,
                       const Eigen::VectorXd& theta) {
    std::vector<double> eps;
    arma_residuals(x, c, phi, theta, eps);
    double ss = 0.0;
    for (double e : eps) ss += e * e;
    return ss;
}

/// BFGS with central-difference gradients and backtracking line search.
inline Eigen::VectorXd minimize_bfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                                     Eigen::VectorXd x, int max_iters = 200, double gtol = 1e-8) {
    const Eigen::Index n = x.size();
    if (n == 0) return x;
    const double h = 1e-6;
    auto gradient = [&](const Eigen::VectorXd& at) {
        Eigen::VectorXd g(n);
        Eigen::VectorXd probe = at;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double step = h * std::max(1.0, std::abs(at(i)));
            probe(i) = at(i) + step;
            const double fp = f(probe);
            probe(i) = at(i) - step;
            const double fm = f(probe);
            probe(i) = at(i);
            g(i) = (fp - fm) / (2.0 * step);
        }
        return g;
    };

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    double fx = f(x);
    Eigen::VectorXd g = gradient(x);
    for (int iter = 0; iter < max_iters; ++iter) {
        if (g.norm() < gtol * std::max(1.0, std::abs(fx))) break;
        Eigen::VectorXd dir = -H * g;
        if (dir.dot(g) >= 0.0) {  // lost positive definiteness: reset
            H.setIdentity();
            dir = -g;
        }
        double step = 1.0;
        double fn = fx;
        Eigen::VectorXd xn = x;
        bool ok = false;
        for (int ls = 0; ls < 40; ++ls) {
            xn = x + step * dir;
            fn = f(xn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * step * g.dot(dir)) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
        const Eigen::VectorXd gn = gradient(xn);
        const Eigen::VectorXd s = xn - x;
        const Eigen::VectorXd yv = gn - g;
        const double sy = s.dot(yv);
        if (sy > 1e-12) {
            const Eigen::VectorXd Hy = H * yv;
            H += ((sy + yv.dot(Hy)) / (sy * sy)) * (s * s.transpose()) -
                 (Hy * s.transpose() + s * Hy.transpose()) / sy;
        }
        if (std::abs(fx - fn) <= 1e-12 * std::max(1.0, std::abs(fx))) {
            x = xn;
            fx = fn;
            g = gn;
            break;
        }
        x = xn;
        fx = fn;
        g = gn;
    }
    return x;
}

/// Hannan-Rissanen two-stage initialization.
inline Eigen::VectorXd hannan_rissanen_init(const std::vector<double>& x, int p, int q) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd params = Eigen::VectorXd::Zero(1 + p + q);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    params(0) = mean;
    if (p + q == 0) return params;

    // Stage 1: long autoregression for innovation estimates.
    const int L = std::min(std::max(p + q, 8), n / 4);
    std::vector<double> eps(static_cast<std::size_t>(n), 0.0);
    if (L >= 1 && n - L > L + 2) {
        const int rows = n - L;
        Eigen::MatrixXd A(rows, L + 1);
        Eigen::VectorXd b(rows);
        for (int t = L; t < n; ++t) {
            A(t - L, 0) = 1.0;
            for (int i = 0; i < L; ++i) A(t - L, 1 + i) = x[static_cast<std::size_t>(t - 1 - i)];
            b(t - L) = x[static_cast<std::size_t>(t)];
        }
        const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
        for (int t = L; t < n; ++t) eps[static_cast<std::size_t>(t)] = b(t - L) - A.row(t - L).dot(coef);
    }

    // Stage 2: regress X_t on its own lags and lagged innovation estimates.
    const int m = std::max(p, std::max(q, std::min(std::max(p + q, 8), n / 4)));
    const int rows = n - m;
    if (rows > p + q + 2) {
        Eigen::MatrixXd A(rows, 1 + p + q);
        Eigen::VectorXd b(rows);
        for (int t = m; t < n; ++t) {
            A(t - m, 0) = 1.0;
            for (int i = 0; i < p; ++i) A(t - m, 1 + i) = x[static_cast<std::size_t>(t - 1 - i)];
            for (int j = 0; j < q; ++j) A(t - m, 1 + p + j) = eps[static_cast<std::size_t>(t - 1 - j)];
            b(t - m) = x[static_cast<std::size_t>(t)];
        }
        params = A.colPivHouseholderQr().solve(b);
    }
    return params;
}

}  // namespace detail

/// Maximizes the conditional Gaussian likelihood (CSS); rejects
/// non-stationary optima.
inline ArmaModel fit_arma(const std::vector<double>& series, int p, int q) {
    if (p < 0 || q < 0) throw ConfigError("fit_arma: negative order");
    const int n = static_cast<int>(series.size());
    if (n < 10 * (p + q + 1)) throw DataError("fit_arma: series too short for ARMA(" +
                                              std::to_string(p) + "," + std::to_string(q) + ")");

    auto unpack = [p, q](const Eigen::VectorXd& v) {
        return std::tuple<double, Eigen::VectorXd, Eigen::VectorXd>{
            v(0), v.segment(1, p), v.segment(1 + p, q)};
    };
    // Invertibility of the MA polynomial is the same root condition as AR
    // stationarity; without it the residual recursion is unstable.
    auto objective = [&](const Eigen::VectorXd& v) {
        auto [c, phi, theta] = unpack(v);
        if (!detail::ar_stationary(phi) || !detail::ar_stationary(theta))
            return std::numeric_limits<double>::infinity();
        return detail::arma_css(series, c, phi, theta);
    };

    Eigen::VectorXd init = detail::hannan_rissanen_init(series, p, q);
    // Shrink either polynomial back inside its admissible region if needed.
    for (const auto& [offset, len] : {std::pair{1, p}, std::pair{1 + p, q}}) {
        if (len == 0 || detail::ar_stationary(init.segment(offset, len))) continue;
        for (double shrink = 0.9; shrink > 0.1; shrink *= 0.9) {
            Eigen::VectorXd shrunk = init.segment(offset, len) * shrink;
            if (detail::ar_stationary(shrunk)) {
                init.segment(offset, len) = shrunk;
                break;
            }
        }
        if (!detail::ar_stationary(init.segment(offset, len))) init.segment(offset, len).setZero();
    }
    const Eigen::VectorXd opt = p + q > 0 ? detail::minimize_bfgs(objective, init) : init;

    auto [c, phi, theta] = unpack(opt);
    if (!detail::ar_stationary(phi) || !detail::ar_stationary(theta))
        throw NumericalError("fit_arma: non-stationary or non-invertible optimum");
    const double css = detail::arma_css(series, c, phi, theta);
    if (!std::isfinite(css)) throw NumericalError("fit_arma: optimizer failure");
    // Score over the full series length so AIC is comparable across orders;
    // the p conditioning residuals are zero and leave the CSS unchanged.
    const int n_eff = n;

    ArmaModel model;
    model.p = p;
    model.q = q;
    model.ar = phi;
    model.ma = theta;
    model.constant = c;
    model.sigma2 = css / static_cast<double>(n_eff);
    if (model.sigma2 <= 0.0) model.sigma2 = std::numeric_limits<double>::min();
    model.log_likelihood =
        -0.5 * static_cast<double>(n_eff) * (std::log(2.0 * M_PI * model.sigma2) + 1.0);
    model.aic = 2.0 * static_cast<double>(p + q + 2) - 2.0 * model.log_likelihood;
    return model;
}

/// Minimum-AIC model over the order grid; failed fits are skipped; ties go
/// to smaller p+q, then smaller p.
inline ArmaModel select_order_aic(const std::vector<double>& series, int p_max, int q_max) {
    const int n = static_cast<int>(series.size());
    if (n < 10 * (p_max + q_max + 1))
        throw DataError("select_order_aic: series too short for the largest candidate order");
    struct Candidate {
        ArmaModel model;
        int p, q;
    };
    std::vector<Candidate> fits;
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= q_max; ++q) {
            try {
                fits.push_back({fit_arma(series, p, q), p, q});
            } catch (const NumericalError&) {
            }
        }
    if (fits.empty()) throw NumericalError("select_order_aic: every candidate fit failed");
    std::sort(fits.begin(), fits.end(), [](const Candidate& a, const Candidate& b) {
        if (a.model.aic != b.model.aic) return a.model.aic < b.model.aic;
        if (a.p + a.q != b.p + b.q) return a.p + a.q < b.p + b.q;
        return a.p < b.p;
    });
    return fits.front().model;
}

/// Iterated conditional-expectation forecasts; future innovations are zero.
inline std::vector<double> forecast(const ArmaModel& model, const std::vector<double>& history,
                                    int horizon) {
    if (horizon < 1) throw ContractError("forecast: horizon must be at least 1");
    std::vector<double> eps;
    detail::arma_residuals(history, model.constant, model.ar, model.ma, eps);
    std::vector<double> ext = history;  // extended with forecasts
    eps.resize(history.size() + static_cast<std::size_t>(horizon), 0.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const int t = static_cast<int>(history.size()) + h;
        double mean = model.constant;
        for (int i = 0; i < model.p; ++i) mean += model.ar(i) * ext[static_cast<std::size_t>(t - 1 - i)];
        for (int j = 0; j < model.q; ++j) {
            const int s = t - 1 - j;
            if (s >= 0 && s < static_cast<int>(history.size()))
                mean += model.ma(j) * eps[static_cast<std::size_t>(s)];
        }
        ext.push_back(mean);
        out.push_back(mean);
    }
    return out;
}

}  // namespace gridlock
