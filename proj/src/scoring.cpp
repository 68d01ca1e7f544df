#include "contactnet/scoring.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace contactnet {

namespace {

void check_vector(const std::vector<double>& v, std::size_t want, const char* name, bool trinity) {
    if (v.size() != want)
        throw std::invalid_argument(std::string("PreferenceProfile: ") + name + " has " +
                                    std::to_string(v.size()) + " entries, expected " +
                                    std::to_string(want));
    for (double x : v) {
        if (trinity) {
            if (x != -1.0 && x != 0.0 && x != 1.0)
                throw std::invalid_argument(std::string("PreferenceProfile: ") + name +
                                            " entries must be -1, 0 or +1");
        } else if (!(x > 0.0 && x <= 1.0)) {
            throw std::invalid_argument(std::string("PreferenceProfile: ") + name +
                                        " entries must lie in (0, 1]");
        }
    }
}

} // namespace

void PreferenceProfile::validate(const RepresentationPrinciple& principle) const {
    const std::size_t z = principle.value_dim();
    const std::size_t zh = principle.difference_dim();
    check_vector(p, z, "p", true);
    check_vector(w_p, z, "w_p", false);
    check_vector(h, zh, "h", true);
    check_vector(w_h, zh, "w_h", false);
}

ProfileSet ProfileSet::shared(PreferenceProfile profile) {
    ProfileSet s;
    s.shared_ = true;
    s.profiles_.push_back(std::move(profile));
    return s;
}

ProfileSet ProfileSet::per_node(std::vector<PreferenceProfile> profiles) {
    if (profiles.empty()) throw std::invalid_argument("ProfileSet::per_node: empty");
    ProfileSet s;
    s.shared_ = false;
    s.profiles_ = std::move(profiles);
    return s;
}

const PreferenceProfile& ProfileSet::of(int node_id) const {
    if (shared_) return profiles_.front();
    return profiles_.at(static_cast<std::size_t>(node_id));
}

PrincipleSet PrincipleSet::shared(RepresentationPrinciple principle) {
    PrincipleSet s;
    s.shared_ = true;
    s.principles_.push_back(std::move(principle));
    return s;
}

PrincipleSet PrincipleSet::per_node(std::vector<RepresentationPrinciple> principles) {
    if (principles.empty()) throw std::invalid_argument("PrincipleSet::per_node: empty");
    PrincipleSet s;
    s.shared_ = false;
    s.principles_ = std::move(principles);
    return s;
}

const RepresentationPrinciple& PrincipleSet::of(int node_id) const {
    if (shared_) return principles_.front();
    return principles_.at(static_cast<std::size_t>(node_id));
}

namespace {

// One directional term of the preferential-attachment score: the viewer's
// unfolding of the other node's features dotted with (signs o weights).
// Accumulates without materializing the unfolded vector.
double value_term(const NodeFeatures& other, const RepresentationPrinciple& viewer_principle,
                  const std::vector<double>& signs, const std::vector<double>& weights) {
    const auto feats = feature_vector(other);
    const std::size_t k = viewer_principle.feature_count();
    if (k > feats.size())
        throw std::invalid_argument("pa_score: principle describes more features than nodes carry");
    if (signs.size() != viewer_principle.value_dim() || weights.size() != signs.size())
        throw std::invalid_argument("pa_score: profile length does not match principle");

    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const auto& rep = viewer_principle.features[f];
        if (rep.fuzzy_value) {
            for (const auto& mf : rep.value_partition->sets) {
                acc += membership_degree(feats[f], mf) * signs[idx] * weights[idx];
                ++idx;
            }
        } else {
            acc += feats[f] * signs[idx] * weights[idx];
            ++idx;
        }
    }
    return acc;
}

// One directional term of the homophily score over |f_a - f_b|.
double difference_term(const NodeFeatures& a, const NodeFeatures& b,
                       const RepresentationPrinciple& viewer_principle,
                       const std::vector<double>& signs, const std::vector<double>& weights) {
    const auto fa = feature_vector(a);
    const auto fb = feature_vector(b);
    const std::size_t k = viewer_principle.feature_count();
    if (k > fa.size())
        throw std::invalid_argument("homophily_score: principle describes more features than nodes carry");
    if (signs.size() != viewer_principle.difference_dim() || weights.size() != signs.size())
        throw std::invalid_argument("homophily_score: profile length does not match principle");

    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const double delta = std::abs(fa[f] - fb[f]);
        const auto& rep = viewer_principle.features[f];
        if (rep.fuzzy_difference) {
            for (const auto& mf : rep.difference_partition->sets) {
                acc += membership_degree(delta, mf) * signs[idx] * weights[idx];
                ++idx;
            }
        } else {
            acc += delta * signs[idx] * weights[idx];
            ++idx;
        }
    }
    return acc;
}

} // namespace

double pa_score(const NodeFeatures& a, const NodeFeatures& b, const ProfileSet& profiles,
                const PrincipleSet& principles) {
    const auto& pa = profiles.of(a.id);
    const auto& pb = profiles.of(b.id);
    return value_term(b, principles.of(a.id), pa.p, pa.w_p) +
           value_term(a, principles.of(b.id), pb.p, pb.w_p);
}

double homophily_score(const NodeFeatures& a, const NodeFeatures& b, const ProfileSet& profiles,
                       const PrincipleSet& principles) {
    const auto& pa = profiles.of(a.id);
    const auto& pb = profiles.of(b.id);
    return difference_term(a, b, principles.of(a.id), pa.h, pa.w_h) +
           difference_term(a, b, principles.of(b.id), pb.h, pb.w_h);
}

double pair_score(const NodeFeatures& a, const NodeFeatures& b, const ProfileSet& profiles,
                  const PrincipleSet& principles, double noise_sigma, bool encounter,
                  double normal_draw) {
    if (noise_sigma < 0.0) throw std::invalid_argument("pair_score: noise_sigma must be >= 0");
    if (!encounter) return 0.0;
    return 0.5 * pa_score(a, b, profiles, principles) +
           0.5 * homophily_score(a, b, profiles, principles) + noise_sigma * normal_draw;
}

} // namespace contactnet
