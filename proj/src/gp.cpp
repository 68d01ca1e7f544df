#include "contactnet/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace contactnet {

namespace {

constexpr double kJitter = 1e-10;

double sq(double x) { return x * x; }

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const Eigen::VectorXd& log_params) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    const Eigen::VectorXd inv_l = (-log_params.head(d)).array().exp();
    const double sf2 = std::exp(2.0 * log_params(d));
    const double sn2 = std::exp(2.0 * log_params(d + 1));

    Eigen::MatrixXd scaled = X * inv_l.asDiagonal();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = sf2 + sn2 + kJitter;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double r2 = (scaled.row(i) - scaled.row(j)).squaredNorm();
            K(i, j) = K(j, i) = sf2 * std::exp(-0.5 * r2);
        }
    }
    return K;
}

// Compact Nelder-Mead on an unconstrained objective (maximization).
Eigen::VectorXd nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& start, double step, int max_iters) {
    const Eigen::Index d = start.size();
    std::vector<std::pair<double, Eigen::VectorXd>> simplex;
    simplex.reserve(static_cast<std::size_t>(d) + 1);
    simplex.emplace_back(f(start), start);
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd v = start;
        v(i) += step;
        simplex.emplace_back(f(v), v);
    }
    auto by_value_desc = [](const auto& a, const auto& b) { return a.first > b.first; };
    std::sort(simplex.begin(), simplex.end(), by_value_desc);

    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i = 0; i < d; ++i) centroid += simplex[static_cast<std::size_t>(i)].second;
        centroid /= static_cast<double>(d);
        const auto& worst = simplex.back();

        Eigen::VectorXd reflected = centroid + (centroid - worst.second);
        double fr = f(reflected);
        if (fr > simplex.front().first) {
            Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst.second);
            const double fe = f(expanded);
            simplex.back() = fe > fr ? std::make_pair(fe, expanded) : std::make_pair(fr, reflected);
        } else if (fr > simplex[simplex.size() - 2].first) {
            simplex.back() = {fr, reflected};
        } else {
            Eigen::VectorXd contracted = centroid + 0.5 * (worst.second - centroid);
            const double fc = f(contracted);
            if (fc > worst.first) {
                simplex.back() = {fc, contracted};
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i].second = simplex[0].second + 0.5 * (simplex[i].second - simplex[0].second);
                    simplex[i].first = f(simplex[i].second);
                }
            }
        }
        std::sort(simplex.begin(), simplex.end(), by_value_desc);
        if (simplex.front().first - simplex.back().first < 1e-8) break;
    }
    return simplex.front().second;
}

} // namespace

double GaussianProcess::log_marginal_likelihood(const Eigen::VectorXd& log_params) const {
    const Eigen::Index n = X_.rows();
    Eigen::MatrixXd K = kernel_matrix(X_, log_params);
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd alpha = llt.solve(y_std_);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(llt.matrixL()(i, i));
    return -0.5 * y_std_.dot(alpha) - log_det -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

void GaussianProcess::factorize(const Eigen::VectorXd& log_params) {
    log_params_ = log_params;
    Eigen::MatrixXd K = kernel_matrix(X_, log_params_);
    chol_.compute(K);
    double bump = 1e-8;
    while (chol_.info() != Eigen::Success && bump < 1.0) {
        K.diagonal().array() += bump;
        chol_.compute(K);
        bump *= 10.0;
    }
    alpha_ = chol_.solve(y_std_);
    fitted_ = true;
}

void GaussianProcess::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Rng& rng,
                          bool refit_hyperparams) {
    X_ = X;
    const Eigen::Index n = y.size();
    const Eigen::Index d = X.cols();

    y_mean_ = y.mean();
    double var = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) var += sq(y(i) - y_mean_);
    var /= std::max<double>(1.0, static_cast<double>(n));
    y_scale_ = std::sqrt(var) > 1e-12 ? std::sqrt(var) : 1.0;
    y_std_ = (y.array() - y_mean_) / y_scale_;

    const bool have_params = log_params_.size() == d + 2;
    if (!refit_hyperparams && have_params) {
        factorize(log_params_);
        return;
    }

    // Random restarts over a log-space box, then Nelder-Mead polish from
    // the best start. Inputs live in [0,1] and targets are standardized,
    // so the plausible ranges are narrow; the noise term mainly keeps the
    // factorization well conditioned (the objectives here are
    // deterministic).
    const double l_lo = std::log(0.08), l_hi = std::log(3.0);
    const double sf_lo = std::log(0.2), sf_hi = std::log(2.5);
    const double sn_lo = std::log(1e-4), sn_hi = std::log(0.2);

    Eigen::VectorXd best(d + 2);
    best.head(d).setConstant(std::log(0.3));
    best(d) = 0.0;
    best(d + 1) = std::log(1e-2);
    if (have_params) best = log_params_;
    double best_ll = log_marginal_likelihood(best);

    const int n_random = 24;
    for (int k = 0; k < n_random; ++k) {
        Eigen::VectorXd cand(d + 2);
        for (Eigen::Index i = 0; i < d; ++i) cand(i) = rng.uniform(l_lo, l_hi);
        cand(d) = rng.uniform(sf_lo, sf_hi);
        cand(d + 1) = rng.uniform(sn_lo, sn_hi);
        const double ll = log_marginal_likelihood(cand);
        if (ll > best_ll) {
            best_ll = ll;
            best = cand;
        }
    }

    auto clamped_ll = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd c = v;
        for (Eigen::Index i = 0; i < d; ++i) c(i) = std::clamp(c(i), l_lo, l_hi);
        c(d) = std::clamp(c(d), sf_lo, sf_hi);
        c(d + 1) = std::clamp(c(d + 1), sn_lo, sn_hi);
        return log_marginal_likelihood(c);
    };
    Eigen::VectorXd polished = nelder_mead_max(clamped_ll, best, 0.2, 30 * static_cast<int>(d + 2));
    for (Eigen::Index i = 0; i < d; ++i) polished(i) = std::clamp(polished(i), l_lo, l_hi);
    polished(d) = std::clamp(polished(d), sf_lo, sf_hi);
    polished(d + 1) = std::clamp(polished(d + 1), sn_lo, sn_hi);
    if (log_marginal_likelihood(polished) >= best_ll) best = polished;

    factorize(best);
}

GaussianProcess::Prediction GaussianProcess::predict(const Eigen::VectorXd& x) const {
    const Eigen::Index n = X_.rows();
    const Eigen::Index d = X_.cols();
    const Eigen::VectorXd inv_l = (-log_params_.head(d)).array().exp();
    const double sf2 = std::exp(2.0 * log_params_(d));
    const double sn2 = std::exp(2.0 * log_params_(d + 1));

    Eigen::VectorXd k_star(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r2 = ((X_.row(i).transpose() - x).cwiseProduct(inv_l)).squaredNorm();
        k_star(i) = sf2 * std::exp(-0.5 * r2);
    }
    const double mean_std = k_star.dot(alpha_);
    const Eigen::VectorXd v = chol_.matrixL().solve(k_star);
    const double var_std = std::max(0.0, sf2 + sn2 - v.squaredNorm());

    Prediction out;
    out.mean = y_mean_ + y_scale_ * mean_std;
    out.stddev = y_scale_ * std::sqrt(var_std);
    return out;
}

} // namespace contactnet
