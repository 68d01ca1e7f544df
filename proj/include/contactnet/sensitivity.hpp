#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "contactnet/calibration.hpp"

namespace contactnet {

struct SensitivityConfig {
    int n_stars = 50;
    double delta_h = 0.1; // cross-section resolution in normalized space
    std::uint64_t seed = 0;
    int top_k = 6;
};

// One star of the sampling design: a centre in normalized [0, 1]^d plus,
// for every dimension, the ordered cross-section coordinates through the
// centre at spacing delta_h (the centre's own coordinate included).
struct StarSample {
    Eigen::VectorXd center;
    std::vector<std::vector<double>> section_coords; // per dimension

    int dim() const { return static_cast<int>(center.size()); }
};

// Latin-hypercube star centres with anchored cross-sections.
std::vector<StarSample> make_star_samples(int dim, const SensitivityConfig& cfg);

using Objective = std::function<double(std::span<const double>)>;

// All star evaluations in one table; each estimator below reads from it so
// the objective runs exactly once per sample point.
class EvaluatedStars {
public:
    EvaluatedStars(const Objective& objective, const std::vector<StarSample>& stars,
                   double delta_h);

    int dim() const { return dim_; }
    double delta_h() const { return delta_h_; }
    int star_count() const { return static_cast<int>(sections_.size()); }
    // y values along one cross-section, ordered by coordinate.
    std::span<const double> section_values(int star, int dimension) const;
    // Population variance over every evaluated point.
    double total_variance() const;

private:
    int dim_ = 0;
    double delta_h_ = 0.0;
    std::vector<std::vector<std::vector<double>>> sections_; // [star][dim][point]
    double total_variance_ = 0.0;
};

// Directional variogram gamma_d(h): half the mean squared response
// difference over all same-section point pairs at lag h. The lag must be a
// multiple of delta_h with at least one pair available.
double directional_variogram(const EvaluatedStars& table, int dimension, double lag);
double directional_variogram(const Objective& objective, int dimension,
                             const std::vector<StarSample>& stars, double lag);

// Integrated variogram over [0, scale] (trapezoid rule, gamma(0) = 0).
double ivars(const EvaluatedStars& table, int dimension, double scale);
double ivars(const Objective& objective, int dimension, const std::vector<StarSample>& stars,
             double scale);

// Variance-based total-order effect from the star table: the mean
// cross-section variance for the dimension over the total sample variance.
double sobol_total(const EvaluatedStars& table, int dimension);
double sobol_total(const Objective& objective, int dimension,
                   const std::vector<StarSample>& stars);

struct SensitivityReport {
    std::vector<std::string> names;
    std::vector<double> ivars10, ivars30, ivars50, sobol;
    std::vector<int> rank_ivars10, rank_ivars30, rank_ivars50, rank_sobol; // dense, 1 = top
    std::vector<double> aggregated_rank; // mean of the four dense ranks
    std::vector<int> order;              // parameter indices, most important first
    std::vector<std::string> selected;   // top min(top_k, d) by aggregated rank
};

// Dense ranks per metric (rank 1 = largest value), aggregated by mean rank
// with ties broken by parameter name order.
SensitivityReport rank_and_select(const std::vector<std::string>& names,
                                  const std::vector<double>& ivars10,
                                  const std::vector<double>& ivars30,
                                  const std::vector<double>& ivars50,
                                  const std::vector<double>& sobol, int top_k);

// Full analysis over a bounded space: parameters are normalized to [0,1]
// through their bounds, the objective runs in natural units.
SensitivityReport run_vars(const Objective& objective, const ParameterSpace& space,
                           const SensitivityConfig& cfg);

} // namespace contactnet
