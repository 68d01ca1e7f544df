#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace contactnet {

// Two implemented node features: age in whole years within [0, 89] and
// sex as a binary value (1 = male, 0 = female).
struct NodeFeatures {
    int id = 0;
    int age = 0;
    int sex = 0;
};

// Feature vector in the fixed [age, sex] order. Principles covering fewer
// features use a prefix of this vector.
inline std::array<double, 2> feature_vector(const NodeFeatures& nf) {
    return {static_cast<double>(nf.age), static_cast<double>(nf.sex)};
}

struct PyramidBin {
    double age_lo = 0.0; // inclusive
    double age_hi = 0.0; // exclusive
    int sex = 0;
    double share = 0.0;
};

// Age & sex distribution of a country's population. Bins tile [0, 90)
// per sex without overlap; shares sum to 1.
struct AgeSexPyramid {
    std::string country;
    std::vector<PyramidBin> bins;

    void validate() const; // throws ConfigError on violation
};

struct Population {
    std::string country;
    std::vector<NodeFeatures> nodes;

    int size() const { return static_cast<int>(nodes.size()); }
};

// Sample n nodes from the pyramid: counts per (age decade x sex) group are
// apportioned by largest remainder, ages are drawn uniformly inside each
// decade. Deterministic for a given seed.
Population sample_population(const AgeSexPyramid& pyramid, int n, std::uint64_t seed);

// Largest-remainder apportionment of n units over nonnegative shares.
std::vector<int> largest_remainder_counts(std::span<const double> shares, int n);

// Effective number of equally-common groups at order q (q >= 0). q = 1 is
// the Shannon limit exp(-sum p ln p); zero-count groups are ignored.
double hill_number(std::span<const int> counts, double q);

enum class Grouping { AgeDecade, Sex, AgeDecadeBySex };

constexpr int group_count(Grouping g) {
    return g == Grouping::AgeDecade ? 9 : g == Grouping::Sex ? 2 : 18;
}

// Group index: AgeDecade -> age/10; Sex -> sex; AgeDecadeBySex -> decade*2+sex.
int group_index(const NodeFeatures& nf, Grouping g);
std::string group_label(Grouping g, int index);

std::vector<int> group_counts(const Population& pop, Grouping g);

} // namespace contactnet
