#include "contactnet/fuzzy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace contactnet {

double membership_degree(double x, const MembershipFunction& mf) {
    if (!std::isfinite(x)) throw std::invalid_argument("membership_degree: x must be finite");
    if (!(mf.sigma > 0.0) || !std::isfinite(mf.sigma) || !std::isfinite(mf.mu))
        throw std::invalid_argument("membership_degree: sigma must be finite and > 0");
    const double t = (x - mf.mu) / mf.sigma;
    return std::exp(-0.5 * t * t);
}

void FuzzyPartition::validate() const {
    if (sets.empty()) throw std::invalid_argument("FuzzyPartition: needs at least one set");
    if (!(domain_lo < domain_hi))
        throw std::invalid_argument("FuzzyPartition: empty domain interval");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (!(sets[i].sigma > 0.0))
            throw std::invalid_argument("FuzzyPartition: sigma must be > 0 (set " +
                                        std::to_string(i + 1) + ")");
        if (i > 0 && !(sets[i - 1].mu < sets[i].mu))
            throw std::invalid_argument("FuzzyPartition: mu values must be strictly increasing");
    }
}

FuzzyPartition default_partition(int n_sets, double domain_lo, double domain_hi, double sigma) {
    if (n_sets < 1) throw std::invalid_argument("default_partition: n_sets must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("default_partition: sigma must be > 0");
    if (!(domain_lo < domain_hi))
        throw std::invalid_argument("default_partition: empty domain interval");

    FuzzyPartition part;
    part.domain_lo = domain_lo;
    part.domain_hi = domain_hi;
    part.sets.reserve(static_cast<std::size_t>(n_sets));
    if (n_sets == 1) {
        part.sets.push_back({domain_lo, sigma});
    } else {
        const double spacing = (domain_hi - domain_lo) / (n_sets - 1);
        for (int i = 0; i < n_sets; ++i)
            part.sets.push_back({domain_lo + spacing * i, sigma});
    }
    return part;
}

std::size_t RepresentationPrinciple::value_dim() const {
    std::size_t z = 0;
    for (const auto& f : features) z += f.fuzzy_value ? f.value_partition->size() : 1;
    return z;
}

std::size_t RepresentationPrinciple::difference_dim() const {
    std::size_t z = 0;
    for (const auto& f : features) z += f.fuzzy_difference ? f.difference_partition->size() : 1;
    return z;
}

void RepresentationPrinciple::validate() const {
    for (const auto& f : features) {
        if (f.fuzzy_value != f.value_partition.has_value())
            throw std::invalid_argument(
                "RepresentationPrinciple: fuzzy_value flag and value_partition must agree");
        if (f.fuzzy_difference != f.difference_partition.has_value())
            throw std::invalid_argument(
                "RepresentationPrinciple: fuzzy_difference flag and difference_partition must agree");
        if (f.value_partition) f.value_partition->validate();
        if (f.difference_partition) f.difference_partition->validate();
    }
}

namespace {

void check_width(std::size_t got, std::size_t want, const char* where) {
    if (got != want)
        throw std::invalid_argument(std::string(where) + ": feature vector has " +
                                    std::to_string(got) + " entries but principle describes " +
                                    std::to_string(want));
}

} // namespace

std::vector<double> unfold_values(std::span<const double> features,
                                  const RepresentationPrinciple& principle) {
    check_width(features.size(), principle.feature_count(), "unfold_values");
    std::vector<double> out;
    out.reserve(principle.value_dim());
    for (std::size_t k = 0; k < features.size(); ++k) {
        const auto& rep = principle.features[k];
        if (rep.fuzzy_value) {
            for (const auto& mf : rep.value_partition->sets)
                out.push_back(membership_degree(features[k], mf));
        } else {
            if (!std::isfinite(features[k]))
                throw std::invalid_argument("unfold_values: non-finite feature value");
            out.push_back(features[k]);
        }
    }
    return out;
}

std::vector<double> unfold_differences(std::span<const double> a, std::span<const double> b,
                                       const RepresentationPrinciple& principle) {
    check_width(a.size(), principle.feature_count(), "unfold_differences");
    check_width(b.size(), principle.feature_count(), "unfold_differences");
    std::vector<double> out;
    out.reserve(principle.difference_dim());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double delta = std::abs(a[k] - b[k]);
        const auto& rep = principle.features[k];
        if (rep.fuzzy_difference) {
            for (const auto& mf : rep.difference_partition->sets)
                out.push_back(membership_degree(delta, mf));
        } else {
            if (!std::isfinite(delta))
                throw std::invalid_argument("unfold_differences: non-finite feature value");
            out.push_back(delta);
        }
    }
    return out;
}

} // namespace contactnet
