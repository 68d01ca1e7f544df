#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contactnet/calibration.hpp"
#include "contactnet/scoring.hpp"
#include "contactnet/sensitivity.hpp"

namespace contactnet {

struct SeedConfig {
    std::uint64_t population = 1;
    std::uint64_t formation = 7;
    std::uint64_t epidemic = 11;
};

struct EpidemicSettings {
    double gamma = 0.8;
    int max_steps = 6;
};

// One country block of the run configuration.
struct CountryConfig {
    std::string country;
    std::filesystem::path pyramid_path;
    std::filesystem::path matrix_path;
    int n_nodes = 90;
    double encounter_rate = 0.8;
    double noise_sigma = 0.01;
    SeedConfig seeds;
    ModelFamily model = ModelFamily::HN_AfSc;
    bool grid_sets = false; // "fuzzy_sets": "grid" runs the 10x10 search
    int age_value_sets = 7;
    int age_diff_sets = 7;
    int optimization_budget = 100;
    int family_budget = 40;
    int grid_inner_budget = 25;
    SensitivityConfig sensitivity;
    EpidemicSettings epidemic;
    std::vector<double> hill_q; // defaults to a 0..5 sweep in steps of 0.5
    std::optional<std::filesystem::path> params_path; // calibrated-model JSON
    std::string output_dir; // defaults to the country name

    void validate() const; // throws ConfigError
};

struct BatchConfig {
    std::filesystem::path output_root = "out";
    std::vector<CountryConfig> countries;
};

// Load a JSON run configuration. The file either carries a "countries"
// array or is itself a single country block. Relative paths resolve
// against the config file's directory. The CONTACTNET_OUTPUT_ROOT
// environment variable overrides output_root.
BatchConfig load_config(const std::filesystem::path& path);

// A fully specified, runnable model: structure, partitions and preferences.
struct CalibratedModel {
    std::string country;
    ModelConfig config;
    RepresentationPrinciple principle;
    PreferenceProfile profile;
    double eu = 0.0;
};

void write_calibrated_model(const std::filesystem::path& path, const CalibratedModel& model);
CalibratedModel read_calibrated_model(const std::filesystem::path& path);

} // namespace contactnet
