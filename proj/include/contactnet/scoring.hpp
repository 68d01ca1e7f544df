#pragma once

#include <vector>

#include "contactnet/fuzzy.hpp"
#include "contactnet/population.hpp"

namespace contactnet {

// Node preferences over unfolded features (p, w_p) and unfolded feature
// differences (h, w_h). Sign vectors take values in {-1, 0, +1}; weights
// lie in (0, 1].
struct PreferenceProfile {
    std::vector<double> p;
    std::vector<double> w_p;
    std::vector<double> h;
    std::vector<double> w_h;

    void validate(const RepresentationPrinciple& principle) const;
};

// Node -> profile lookup; either one shared profile or one per node.
class ProfileSet {
public:
    static ProfileSet shared(PreferenceProfile profile);
    static ProfileSet per_node(std::vector<PreferenceProfile> profiles);

    const PreferenceProfile& of(int node_id) const;
    bool is_shared() const { return shared_; }

private:
    ProfileSet() = default;
    bool shared_ = true;
    std::vector<PreferenceProfile> profiles_;
};

// Node -> representation principle lookup, same shape as ProfileSet.
class PrincipleSet {
public:
    static PrincipleSet shared(RepresentationPrinciple principle);
    static PrincipleSet per_node(std::vector<RepresentationPrinciple> principles);

    const RepresentationPrinciple& of(int node_id) const;
    bool is_shared() const { return shared_; }

private:
    PrincipleSet() = default;
    bool shared_ = true;
    std::vector<RepresentationPrinciple> principles_;
};

// Mutual preference for the other node's feature values:
//   f^u(b|a) . (p_a o w_a)  +  f^u(a|b) . (p_b o w_b)
double pa_score(const NodeFeatures& a, const NodeFeatures& b, const ProfileSet& profiles,
                const PrincipleSet& principles);

// Mutual preference for the pair's feature differences, over unfolded
// |f_a - f_b| with (h o w_h).
double homophily_score(const NodeFeatures& a, const NodeFeatures& b, const ProfileSet& profiles,
                       const PrincipleSet& principles);

// Full pair score (0.5*pa + 0.5*homophily + noise_sigma*normal_draw) * I,
// where I is the encounter indicator. All randomness is owned by the
// caller: normal_draw is a standard normal variate.
double pair_score(const NodeFeatures& a, const NodeFeatures& b, const ProfileSet& profiles,
                  const PrincipleSet& principles, double noise_sigma, bool encounter,
                  double normal_draw);

} // namespace contactnet
