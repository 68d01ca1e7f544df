#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "contactnet/contact_matrix.hpp"
#include "contactnet/formation.hpp"
#include "contactnet/fuzzy.hpp"
#include "contactnet/population.hpp"
#include "contactnet/scoring.hpp"

namespace contactnet {

// The five network model variants: random encounters only, crisp/fuzzy age,
// with or without the crisp sex feature.
enum class ModelFamily { RN, HN_Ac, HN_Af, HN_AcSc, HN_AfSc };

std::string family_tag(ModelFamily family); // "RN", "HN-A_c", ...
ModelFamily family_from_tag(const std::string& tag);
std::vector<ModelFamily> all_families();

// Structural setup of one model: family plus fuzzy-set counts for the age
// value and age-difference partitions (used only when the age feature is
// fuzzy). Default partitions span [0, 90] with spread 5.
struct ModelConfig {
    ModelFamily family = ModelFamily::HN_AfSc;
    int age_value_sets = 7;
    int age_diff_sets = 7;
    double domain_lo = 0.0;
    double domain_hi = 90.0;
    double default_sigma = 5.0;

    bool has_age() const { return family != ModelFamily::RN; }
    bool has_sex() const {
        return family == ModelFamily::HN_AcSc || family == ModelFamily::HN_AfSc;
    }
    bool age_fuzzy() const {
        return family == ModelFamily::HN_Af || family == ModelFamily::HN_AfSc;
    }
};

RepresentationPrinciple build_principle(const ModelConfig& cfg);

// Labels of the unfolded dimensions, e.g. "Age_f 1".."Age_f 7", "Sex" and
// "dAge_f 1".."dAge_f 7", "dSex".
std::vector<std::string> value_dim_labels(const ModelConfig& cfg);
std::vector<std::string> difference_dim_labels(const ModelConfig& cfg);

// --- bounded parameter spaces -------------------------------------------

struct BoundedParam {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
};

struct ParameterSpace {
    std::vector<BoundedParam> params;
    std::vector<double> init; // initialization point, natural units

    std::size_t dim() const { return params.size(); }
    void validate() const;
    bool contains(std::span<const double> values) const;
};

// Preference search space: one relaxed sign in [-1, 1] and one weight in
// (0, 1] per unfolded dimension, for both the value and difference sides.
// Signs initialise at 0 (no preference), weights at 0.5.
ParameterSpace make_preference_space(const ModelConfig& cfg);

// Membership search space over all mu/sigma of the fuzzy partitions:
// mu_k bounded by its default centre +- half the default spacing,
// sigma in [1, 9]. Names follow mu_p_k / sigma_p_k / mu_h_k / sigma_h_k.
ParameterSpace make_membership_space(const ModelConfig& cfg);

ParameterSpace subset_space(const ParameterSpace& space, const std::vector<std::string>& names);

// Relaxed sign -> trinity value: |s| < 0.33 maps to 0, otherwise sign(s).
double threshold_trinity(double relaxed_sign);

// Build the profile encoded by a preference-space value vector.
PreferenceProfile profile_from_preference_values(const ModelConfig& cfg,
                                                 std::span<const double> values);

// Build the principle encoded by membership-space values; `names` selects
// which entries of the default partitions the values override.
RepresentationPrinciple principle_from_membership_values(const ModelConfig& cfg,
                                                         std::span<const std::string> names,
                                                         std::span<const double> values);

// --- objective ------------------------------------------------------------

struct SimulationSettings {
    int n_nodes = 90;
    double encounter_rate = 0.8;
    double noise_sigma = 0.01;
    long long edge_budget = 0;
    std::uint64_t formation_seed = 0;
};

// EU distance between the target and the matrix recreated from one
// deterministic formation run under the given principle and profile.
double evaluate_candidate(const RepresentationPrinciple& principle,
                          const PreferenceProfile& profile, const ContactMatrix& target,
                          const Population& pop, const SimulationSettings& sim);

// Objective over a preference-space vector with fixed default partitions.
std::function<double(std::span<const double>)> preference_objective(
    const ModelConfig& cfg, const ContactMatrix& target, const Population& pop,
    const SimulationSettings& sim);

// Objective over a membership-space vector with a fixed profile.
std::function<double(std::span<const double>)> membership_objective(
    const ModelConfig& cfg, std::vector<std::string> names, const PreferenceProfile& profile,
    const ContactMatrix& target, const Population& pop, const SimulationSettings& sim);

// --- optimizers ------------------------------------------------------------

struct BoConfig {
    int budget = 100;
    std::uint64_t seed = 0;
    double xi = 0.01;        // expected-improvement exploration margin
    int candidate_pool = 512;
    int initial_design = 0;  // 0 = automatic
    int hyper_refit_every = 8;
};

struct CalibrationResult {
    std::vector<double> best_params;
    double best_eu = 0.0;
    long eval_count = 0;
    std::vector<std::pair<std::vector<double>, double>> trace;
    double runtime_seconds = 0.0;
};

// Sequential Gaussian-process optimization with expected improvement.
// The initial design is the space's init point plus a Latin-hypercube fill;
// the objective is called exactly min(budget, ...) = budget times.
CalibrationResult bayesian_optimize(const ParameterSpace& space,
                                    const std::function<double(std::span<const double>)>& objective,
                                    const BoConfig& cfg);

// --- model selection --------------------------------------------------------

struct FamilyResult {
    ModelFamily family = ModelFamily::RN;
    double best_eu = 0.0;
    double runtime_seconds = 0.0;
    long eval_count = 0;
    PreferenceProfile best_profile;
};

// Calibrate every family under equal budgets against the same target.
std::vector<FamilyResult> compare_model_families(const ContactMatrix& target,
                                                 const Population& pop,
                                                 const SimulationSettings& sim, int budget,
                                                 std::uint64_t seed);

struct GridSearchConfig {
    int value_lo = 1, value_hi = 10;
    int diff_lo = 1, diff_hi = 10;
    int inner_budget = 25;
    std::uint64_t seed = 0;
};

struct GridSearchResult {
    int best_value_sets = 0;
    int best_diff_sets = 0;
    double best_eu = 0.0;
    Eigen::MatrixXd eu; // rows: value-set count, cols: diff-set count
    PreferenceProfile best_profile;
    std::vector<double> best_preference_values;
};

// Fuzzy-set-count grid for the fuzzy age + crisp sex family: per cell, a
// small preference optimization; returns the winning cell and the full grid.
GridSearchResult grid_search_fuzzy_sets(const ContactMatrix& target, const Population& pop,
                                        const SimulationSettings& sim,
                                        const GridSearchConfig& cfg);

} // namespace contactnet
