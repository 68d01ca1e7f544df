#pragma once

#include <Eigen/Dense>

#include "contactnet/rng.hpp"

namespace contactnet {

// Gaussian-process regressor with a squared-exponential kernel and
// per-dimension length scales. Inputs are expected in [0, 1]^d; targets are
// standardized internally. Hyperparameters are fit by maximizing the log
// marginal likelihood with random restarts plus Nelder-Mead polish.
class GaussianProcess {
public:
    struct Prediction {
        double mean = 0.0;
        double stddev = 0.0;
    };

    // refit_hyperparams = false reuses the previous kernel parameters and
    // only refactorizes with the new data.
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Rng& rng,
             bool refit_hyperparams);

    Prediction predict(const Eigen::VectorXd& x) const;

    bool fitted() const { return fitted_; }
    double y_mean() const { return y_mean_; }
    double y_scale() const { return y_scale_; }

private:
    double log_marginal_likelihood(const Eigen::VectorXd& log_params) const;
    void factorize(const Eigen::VectorXd& log_params);

    Eigen::MatrixXd X_;
    Eigen::VectorXd y_std_; // standardized targets
    Eigen::VectorXd log_params_; // [log l_1..log l_d, log sigma_f, log sigma_n]
    Eigen::LLT<Eigen::MatrixXd> chol_;
    Eigen::VectorXd alpha_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    bool fitted_ = false;
};

} // namespace contactnet
