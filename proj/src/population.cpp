#include "contactnet/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "contactnet/errors.hpp"
#include "contactnet/rng.hpp"

namespace contactnet {

void AgeSexPyramid::validate() const {
    if (bins.empty()) throw ConfigError("pyramid '" + country + "': no bins");
    double total = 0.0;
    for (const auto& b : bins) {
        if (b.share < 0.0) throw ConfigError("pyramid '" + country + "': negative share");
        if (b.sex != 0 && b.sex != 1) throw ConfigError("pyramid '" + country + "': sex must be 0 or 1");
        if (!(b.age_lo < b.age_hi) || b.age_lo < 0.0 || b.age_hi > 90.0)
            throw ConfigError("pyramid '" + country + "': bins must lie within [0, 90)");
        total += b.share;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("pyramid '" + country + "': shares sum to " + std::to_string(total));
    // Per-sex coverage of [0, 90): widths must add up and bins must not overlap.
    for (int sex = 0; sex <= 1; ++sex) {
        std::vector<std::pair<double, double>> spans;
        for (const auto& b : bins)
            if (b.sex == sex) spans.emplace_back(b.age_lo, b.age_hi);
        std::sort(spans.begin(), spans.end());
        double cursor = 0.0;
        for (const auto& [lo, hi] : spans) {
            if (std::abs(lo - cursor) > 1e-9)
                throw ConfigError("pyramid '" + country + "': bins leave a gap or overlap at age " +
                                  std::to_string(lo));
            cursor = hi;
        }
        if (std::abs(cursor - 90.0) > 1e-9)
            throw ConfigError("pyramid '" + country + "': bins do not cover [0, 90)");
    }
}

std::vector<int> largest_remainder_counts(std::span<const double> shares, int n) {
    const std::size_t g = shares.size();
    std::vector<int> counts(g, 0);
    std::vector<std::pair<double, std::size_t>> remainders; // (-fraction, index) for stable order
    remainders.reserve(g);
    int assigned = 0;
    for (std::size_t i = 0; i < g; ++i) {
        const double exact = shares[i] * n;
        counts[i] = static_cast<int>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(-(exact - std::floor(exact)), i);
    }
    std::sort(remainders.begin(), remainders.end()); // largest fraction first, ties by index
    for (int k = 0; k < n - assigned; ++k) counts[remainders[static_cast<std::size_t>(k)].second] += 1;
    return counts;
}

Population sample_population(const AgeSexPyramid& pyramid, int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample_population: n must be >= 1");
    pyramid.validate();

    // Aggregate pyramid shares into the 18 decade x sex groups, splitting
    // bins that straddle decade boundaries proportionally to overlap.
    std::array<double, 18> shares{};
    for (const auto& b : pyramid.bins) {
        const double width = b.age_hi - b.age_lo;
        for (int d = 0; d < 9; ++d) {
            const double lo = std::max(b.age_lo, 10.0 * d);
            const double hi = std::min(b.age_hi, 10.0 * (d + 1));
            if (hi <= lo) continue;
            const bool whole_bin = lo == b.age_lo && hi == b.age_hi;
            shares[static_cast<std::size_t>(d * 2 + b.sex)] +=
                whole_bin ? b.share : b.share * (hi - lo) / width;
        }
    }

    const std::vector<int> counts = largest_remainder_counts(shares, n);

    Population pop;
    pop.country = pyramid.country;
    pop.nodes.reserve(static_cast<std::size_t>(n));
    Rng rng(seed);
    int id = 0;
    for (int d = 0; d < 9; ++d) {
        for (int sex = 0; sex <= 1; ++sex) {
            const int c = counts[static_cast<std::size_t>(d * 2 + sex)];
            for (int k = 0; k < c; ++k) {
                const int age = static_cast<int>(rng.uniform_int(10 * d, 10 * d + 9));
                pop.nodes.push_back({id++, age, sex});
            }
        }
    }
    return pop;
}

double hill_number(std::span<const int> counts, double q) {
    if (q < 0.0) throw std::invalid_argument("hill_number: q must be >= 0");
    long long total = 0;
    for (int c : counts) {
        if (c < 0) throw std::invalid_argument("hill_number: negative count");
        total += c;
    }
    if (total == 0) throw std::invalid_argument("hill_number: all counts are zero");

    if (q == 1.0) {
        double entropy = 0.0;
        for (int c : counts) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / static_cast<double>(total);
            entropy -= p * std::log(p);
        }
        return std::exp(entropy);
    }
    double sum = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum += std::pow(p, q);
    }
    return std::pow(sum, 1.0 / (1.0 - q));
}

int group_index(const NodeFeatures& nf, Grouping g) {
    const int decade = nf.age / 10;
    switch (g) {
        case Grouping::AgeDecade: return decade;
        case Grouping::Sex: return nf.sex;
        case Grouping::AgeDecadeBySex: return decade * 2 + nf.sex;
    }
    return 0;
}

std::string group_label(Grouping g, int index) {
    const auto decade_label = [](int d) {
        return std::to_string(10 * d) + "-" + std::to_string(10 * d + 9);
    };
    switch (g) {
        case Grouping::AgeDecade: return decade_label(index);
        case Grouping::Sex: return index == 1 ? "male" : "female";
        case Grouping::AgeDecadeBySex:
            return decade_label(index / 2) + (index % 2 == 1 ? " male" : " female");
    }
    return {};
}

std::vector<int> group_counts(const Population& pop, Grouping g) {
    std::vector<int> counts(static_cast<std::size_t>(group_count(g)), 0);
    for (const auto& nf : pop.nodes) counts[static_cast<std::size_t>(group_index(nf, g))] += 1;
    return counts;
}

} // namespace contactnet
