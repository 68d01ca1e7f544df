// Regenerates the bundled synthetic country fixtures under data/: age&sex
// pyramids, survey-style contact matrices scaled to the documented edge
// budgets, and the six-country batch configuration.
//
// Usage: make_fixtures [output-dir]   (default: data)

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "contactnet/contact_matrix.hpp"
#include "contactnet/io.hpp"
#include "contactnet/population.hpp"
#include "contactnet/rng.hpp"

using namespace contactnet;

namespace {

struct CountrySpec {
    std::string name;
    long long target_edges;
    double population_2005; // survey-scale total population
    std::array<double, 9> decade_weight;
    std::array<double, 9> female_fraction;
    std::array<double, 9> activity; // contact activity per decade bin
    double homophily_width;         // in bins
    double parenthood_amplitude;
    double floor_rate;
    std::uint64_t jitter_seed;
};

const std::vector<CountrySpec> kCountries = {
    {"Belgium", 614, 10.4e6,
     {11.0, 11.5, 12.0, 12.5, 13.0, 12.0, 11.0, 9.5, 7.5},
     {0.49, 0.49, 0.495, 0.50, 0.50, 0.51, 0.53, 0.57, 0.63},
     {0.9, 1.2, 1.3, 1.2, 1.1, 1.0, 0.8, 0.6, 0.5},
     0.9, 0.35, 0.08, 101},
    {"Finland", 336, 5.2e6,
     {10.0, 11.0, 12.0, 14.0, 15.0, 14.0, 11.0, 8.0, 5.0},
     {0.49, 0.49, 0.49, 0.50, 0.50, 0.51, 0.54, 0.59, 0.66},
     {1.0, 1.6, 1.3, 0.8, 0.6, 0.45, 0.25, 0.12, 0.08},
     0.7, 0.30, 0.03, 102},
    {"Germany", 462, 82.5e6,
     {9.0, 10.0, 12.0, 15.0, 16.0, 14.0, 11.0, 8.0, 5.0},
     {0.49, 0.49, 0.49, 0.50, 0.50, 0.51, 0.53, 0.58, 0.65},
     {0.9, 1.4, 1.2, 1.0, 0.9, 0.7, 0.45, 0.25, 0.15},
     0.8, 0.30, 0.05, 103},
    {"Italy", 770, 58.6e6,
     {8.0, 10.0, 13.0, 16.0, 16.0, 14.0, 11.0, 7.0, 5.0},
     {0.49, 0.49, 0.49, 0.50, 0.50, 0.51, 0.54, 0.58, 0.66},
     {1.0, 1.3, 1.3, 1.2, 1.1, 0.9, 0.7, 0.5, 0.35},
     1.0, 0.30, 0.10, 104},
    {"Luxembourg", 687, 0.46e6,
     {11.0, 12.0, 13.0, 15.0, 15.0, 13.0, 10.0, 7.0, 4.0},
     {0.49, 0.49, 0.49, 0.50, 0.50, 0.51, 0.53, 0.57, 0.64},
     {0.9, 1.3, 1.25, 1.15, 1.0, 0.8, 0.5, 0.3, 0.18},
     0.9, 0.30, 0.07, 105},
    {"Poland", 793, 38.2e6,
     {11.0, 13.0, 14.0, 15.0, 14.0, 12.0, 10.0, 7.0, 4.0},
     {0.49, 0.49, 0.49, 0.50, 0.50, 0.51, 0.54, 0.59, 0.66},
     {1.1, 1.25, 1.25, 1.2, 1.1, 1.0, 0.85, 0.7, 0.6},
     1.1, 0.25, 0.12, 106},
};

AgeSexPyramid build_pyramid(const CountrySpec& spec) {
    AgeSexPyramid pyramid;
    pyramid.country = spec.name;
    double total = 0.0;
    for (double w : spec.decade_weight) total += w;
    for (int d = 0; d < 9; ++d) {
        const double decade_share = spec.decade_weight[static_cast<std::size_t>(d)] / total;
        const double female = spec.female_fraction[static_cast<std::size_t>(d)];
        pyramid.bins.push_back({10.0 * d, 10.0 * (d + 1), 0, decade_share * female});
        pyramid.bins.push_back({10.0 * d, 10.0 * (d + 1), 1, decade_share * (1.0 - female)});
    }
    // Remove float drift so the shares sum to 1 exactly.
    double sum = 0.0;
    for (const auto& b : pyramid.bins) sum += b.share;
    pyramid.bins.back().share += 1.0 - sum;
    return pyramid;
}

ContactMatrix build_matrix(const CountrySpec& spec, const AgeSexPyramid& pyramid,
                           const Population& sim_pop) {
    ContactMatrix m;
    m.bin_labels = decade_bin_labels();
    m.rates = Eigen::MatrixXd::Zero(9, 9);
    m.pop_sizes = Eigen::VectorXd::Zero(9);

    // Survey-scale bin populations from the pyramid.
    for (const auto& b : pyramid.bins) {
        const int d = static_cast<int>(b.age_lo) / 10;
        m.pop_sizes(d) += b.share * spec.population_2005;
    }
    for (int i = 0; i < 9; ++i) m.pop_sizes(i) = std::round(m.pop_sizes(i));

    Rng rng(spec.jitter_seed);
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            const double diff = std::abs(i - j);
            const double band =
                std::exp(-0.5 * (diff / spec.homophily_width) * (diff / spec.homophily_width));
            const double parenthood = spec.parenthood_amplitude *
                                      std::exp(-0.5 * (diff - 3.0) * (diff - 3.0) / (0.8 * 0.8));
            const double level = spec.activity[static_cast<std::size_t>(i)] *
                                 spec.activity[static_cast<std::size_t>(j)] *
                                 (band + parenthood + spec.floor_rate);
            // Survey-style asymmetric reporting noise.
            m.rates(i, j) = level * (1.0 + 0.08 * (rng.uniform01() - 0.5));
        }
    }

    // Scale so the simulation-side edge budget lands exactly on target.
    const ContactMatrix prepared = rescale_to_population(reciprocal_adjust(m), sim_pop);
    const auto counts = group_counts(sim_pop, Grouping::AgeDecade);
    double total = 0.0;
    for (int i = 0; i < 9; ++i)
        total += prepared.rates.row(i).sum() * counts[static_cast<std::size_t>(i)];
    m.rates *= 2.0 * static_cast<double>(spec.target_edges) / total;
    return m;
}

void write_pyramid_csv(const std::filesystem::path& path, const AgeSexPyramid& pyramid) {
    std::ofstream out(path);
    out << "country,age_lo,age_hi,sex,share\n";
    for (const auto& b : pyramid.bins) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", b.share);
        out << pyramid.country << "," << b.age_lo << "," << b.age_hi << ","
            << (b.sex == 1 ? "male" : "female") << "," << buf << "\n";
    }
}

void write_batch_config(const std::filesystem::path& path) {
    std::ofstream out(path);
    out << "{\n  \"output_root\": \"out\",\n  \"countries\": [\n";
    for (std::size_t i = 0; i < kCountries.size(); ++i) {
        const auto& spec = kCountries[i];
        std::string lower = spec.name;
        for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out << "    {\n"
            << "      \"country\": \"" << spec.name << "\",\n"
            << "      \"pyramid\": \"" << lower << "_pyramid.csv\",\n"
            << "      \"contact_matrix\": \"" << lower << "_matrix.csv\",\n"
            << "      \"n_nodes\": 90,\n"
            << "      \"encounter_rate\": 0.8,\n"
            << "      \"noise_sigma\": 0.01,\n"
            << "      \"seeds\": {\"population\": 1, \"formation\": 7, \"epidemic\": 11},\n"
            << "      \"model\": \"HN-A_f-S_c\",\n"
            << "      \"fuzzy_sets\": \"grid\",\n"
            << "      \"optimization_budget\": 60,\n"
            << "      \"family_budget\": 40,\n"
            << "      \"grid_inner_budget\": 25,\n"
            << "      \"sensitivity\": {\"stars\": 16, \"delta_h\": 0.1, \"top_k\": 6},\n"
            << "      \"epidemic\": {\"gamma\": 0.8, \"max_steps\": 6}\n"
            << "    }" << (i + 1 < kCountries.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

} // namespace

int main(int argc, char** argv) {
    const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(out_dir);

    double best_hill = 0.0;
    std::string best_country;
    for (const auto& spec : kCountries) {
        const AgeSexPyramid pyramid = build_pyramid(spec);
        pyramid.validate();
        const Population pop = sample_population(pyramid, 90, 1);
        const ContactMatrix matrix = build_matrix(spec, pyramid, pop);

        // Round-trip check: the shipped file must reproduce the edge budget.
        std::string lower = spec.name;
        for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        write_pyramid_csv(out_dir / (lower + "_pyramid.csv"), pyramid);
        write_contact_matrix_csv(out_dir / (lower + "_matrix.csv"), matrix);

        const ContactMatrix reread = read_contact_matrix_csv(out_dir / (lower + "_matrix.csv"));
        const ContactMatrix prepared = rescale_to_population(reciprocal_adjust(reread), pop);
        const long long budget = derive_edge_budget(prepared, pop);
        const double hill = hill_number(group_counts(pop, Grouping::AgeDecadeBySex), 2.0);
        std::cout << spec.name << ": edges " << budget << " (target " << spec.target_edges
                  << "), age&sex Hill q=2 " << hill << "\n";
        if (budget != spec.target_edges) {
            std::cerr << "edge budget mismatch for " << spec.name << "\n";
            return 1;
        }
        if (hill > best_hill) {
            best_hill = hill;
            best_country = spec.name;
        }
    }
    if (best_country != "Belgium") {
        std::cerr << "diversity ordering broken: " << best_country << " tops the Hill numbers\n";
        return 1;
    }

    write_batch_config(out_dir / "batch.json");
    std::cout << "fixtures written to " << out_dir.string() << "\n";
    return 0;
}
