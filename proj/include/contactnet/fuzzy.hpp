#pragma once

#include <optional>
#include <span>
#include <vector>

namespace contactnet {

// One Gaussian membership function: location mu, spread sigma (> 0).
struct MembershipFunction {
    double mu = 0.0;
    double sigma = 1.0;
};

// membership(x) = exp(-0.5 * ((x - mu) / sigma)^2), always in (0, 1].
double membership_degree(double x, const MembershipFunction& mf);

// Ordered set of membership functions over a closed value range.
// mu values strictly increasing; mu may lie outside the domain (the
// calibrator exploits that), the domain only anchors default layouts.
struct FuzzyPartition {
    std::vector<MembershipFunction> sets;
    double domain_lo = 0.0;
    double domain_hi = 90.0;

    std::size_t size() const { return sets.size(); }
    void validate() const; // throws std::invalid_argument on violation
};

// Equally spaced partition: mu at both domain endpoints for n_sets >= 2,
// a single set anchored at the lower bound for n_sets == 1. All spreads
// equal to sigma.
FuzzyPartition default_partition(int n_sets, double domain_lo, double domain_hi, double sigma);

// Per-feature choice of crisp vs fuzzy representation, separately for the
// feature value and for pairwise feature differences.
struct FeatureRepresentation {
    bool fuzzy_value = false;
    std::optional<FuzzyPartition> value_partition;
    bool fuzzy_difference = false;
    std::optional<FuzzyPartition> difference_partition;
};

struct RepresentationPrinciple {
    std::vector<FeatureRepresentation> features;

    std::size_t feature_count() const { return features.size(); }
    // Unfolded evaluation-vector length z (crisp features contribute 1,
    // fuzzy features contribute their set count).
    std::size_t value_dim() const;
    // Unfolded difference-vector length z_h.
    std::size_t difference_dim() const;
    void validate() const;
};

// Expand a crisp feature vector into its evaluation vector: crisp features
// pass through, fuzzy features become their membership degrees in partition
// order. Output length is value_dim().
std::vector<double> unfold_values(std::span<const double> features,
                                  const RepresentationPrinciple& principle);

// Same for pairwise differences |a_k - b_k|; output length difference_dim().
std::vector<double> unfold_differences(std::span<const double> a, std::span<const double> b,
                                       const RepresentationPrinciple& principle);

} // namespace contactnet
