#include "contactnet/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "contactnet/errors.hpp"

namespace contactnet {

using nlohmann::json;

void CountryConfig::validate() const {
    if (country.empty()) throw ConfigError("country block without a country name");
    if (pyramid_path.empty()) throw ConfigError(country + ": missing pyramid path");
    if (matrix_path.empty()) throw ConfigError(country + ": missing contact-matrix path");
    if (n_nodes < 1) throw ConfigError(country + ": n_nodes must be >= 1");
    if (!(encounter_rate >= 0.0 && encounter_rate <= 1.0))
        throw ConfigError(country + ": encounter_rate must lie in [0, 1]");
    if (noise_sigma < 0.0) throw ConfigError(country + ": noise_sigma must be >= 0");
    if (age_value_sets < 1 || age_value_sets > 10 || age_diff_sets < 1 || age_diff_sets > 10)
        throw ConfigError(country + ": fuzzy-set counts must lie in 1..10");
    if (optimization_budget < 1 || family_budget < 1 || grid_inner_budget < 1)
        throw ConfigError(country + ": budgets must be >= 1");
    if (!(epidemic.gamma >= 0.0 && epidemic.gamma <= 1.0))
        throw ConfigError(country + ": gamma must lie in [0, 1]");
    if (epidemic.max_steps < 0) throw ConfigError(country + ": max_steps must be >= 0");
    if (sensitivity.n_stars < 2) throw ConfigError(country + ": sensitivity needs >= 2 stars");
    for (double q : hill_q)
        if (q < 0.0) throw ConfigError(country + ": hill_q values must be >= 0");
}

namespace {

std::vector<double> default_hill_q() {
    std::vector<double> qs;
    for (int i = 0; i <= 10; ++i) qs.push_back(0.5 * i);
    return qs;
}

CountryConfig parse_country(const json& j, const std::filesystem::path& base) {
    CountryConfig cfg;
    const auto resolve = [&base](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    cfg.country = j.value("country", "");
    if (j.contains("pyramid")) cfg.pyramid_path = resolve(j.at("pyramid").get<std::string>());
    if (j.contains("contact_matrix"))
        cfg.matrix_path = resolve(j.at("contact_matrix").get<std::string>());
    cfg.n_nodes = j.value("n_nodes", cfg.n_nodes);
    cfg.encounter_rate = j.value("encounter_rate", cfg.encounter_rate);
    cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
    if (j.contains("seeds")) {
        const auto& s = j.at("seeds");
        cfg.seeds.population = s.value("population", cfg.seeds.population);
        cfg.seeds.formation = s.value("formation", cfg.seeds.formation);
        cfg.seeds.epidemic = s.value("epidemic", cfg.seeds.epidemic);
    }
    if (j.contains("model")) cfg.model = family_from_tag(j.at("model").get<std::string>());
    if (j.contains("fuzzy_sets")) {
        const auto& fs = j.at("fuzzy_sets");
        if (fs.is_string()) {
            if (fs.get<std::string>() != "grid")
                throw ConfigError(cfg.country + ": fuzzy_sets must be \"grid\" or an object");
            cfg.grid_sets = true;
        } else {
            cfg.age_value_sets = fs.value("age", cfg.age_value_sets);
            cfg.age_diff_sets = fs.value("age_difference", cfg.age_diff_sets);
        }
    }
    cfg.optimization_budget = j.value("optimization_budget", cfg.optimization_budget);
    cfg.family_budget = j.value("family_budget", cfg.family_budget);
    cfg.grid_inner_budget = j.value("grid_inner_budget", cfg.grid_inner_budget);
    if (j.contains("sensitivity")) {
        const auto& s = j.at("sensitivity");
        cfg.sensitivity.n_stars = s.value("stars", cfg.sensitivity.n_stars);
        cfg.sensitivity.delta_h = s.value("delta_h", cfg.sensitivity.delta_h);
        cfg.sensitivity.top_k = s.value("top_k", cfg.sensitivity.top_k);
        cfg.sensitivity.seed = s.value("seed", cfg.sensitivity.seed);
    }
    if (j.contains("epidemic")) {
        const auto& e = j.at("epidemic");
        cfg.epidemic.gamma = e.value("gamma", cfg.epidemic.gamma);
        cfg.epidemic.max_steps = e.value("max_steps", cfg.epidemic.max_steps);
    }
    if (j.contains("hill_q")) cfg.hill_q = j.at("hill_q").get<std::vector<double>>();
    if (cfg.hill_q.empty()) cfg.hill_q = default_hill_q();
    if (j.contains("params")) cfg.params_path = resolve(j.at("params").get<std::string>());
    cfg.output_dir = j.value("output_dir", cfg.country);
    return cfg;
}

} // namespace

BatchConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
    }

    BatchConfig batch;
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    try {
        if (j.contains("output_root"))
            batch.output_root = std::filesystem::path(j.at("output_root").get<std::string>());
        if (j.contains("countries")) {
            for (const auto& c : j.at("countries")) batch.countries.push_back(parse_country(c, base));
        } else {
            batch.countries.push_back(parse_country(j, base));
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, std::string("bad config structure: ") + e.what());
    }
    if (const char* env_root = std::getenv("CONTACTNET_OUTPUT_ROOT"))
        batch.output_root = std::filesystem::path(env_root);
    if (batch.output_root.is_relative()) batch.output_root = base / batch.output_root;
    for (const auto& c : batch.countries) c.validate();
    return batch;
}

namespace {

json partition_to_json(const FuzzyPartition& part) {
    json j;
    j["domain"] = {part.domain_lo, part.domain_hi};
    std::vector<double> mu, sigma;
    for (const auto& mf : part.sets) {
        mu.push_back(mf.mu);
        sigma.push_back(mf.sigma);
    }
    j["mu"] = mu;
    j["sigma"] = sigma;
    return j;
}

FuzzyPartition partition_from_json(const json& j) {
    FuzzyPartition part;
    part.domain_lo = j.at("domain").at(0).get<double>();
    part.domain_hi = j.at("domain").at(1).get<double>();
    const auto mu = j.at("mu").get<std::vector<double>>();
    const auto sigma = j.at("sigma").get<std::vector<double>>();
    if (mu.size() != sigma.size()) throw ConfigError("calibrated model: mu/sigma length mismatch");
    for (std::size_t i = 0; i < mu.size(); ++i) part.sets.push_back({mu[i], sigma[i]});
    part.validate();
    return part;
}

} // namespace

void write_calibrated_model(const std::filesystem::path& path, const CalibratedModel& model) {
    json j;
    j["country"] = model.country;
    j["model"] = family_tag(model.config.family);
    j["age_value_sets"] = model.config.age_value_sets;
    j["age_diff_sets"] = model.config.age_diff_sets;
    j["eu"] = model.eu;
    if (model.config.has_age() && model.config.age_fuzzy()) {
        const auto& age = model.principle.features.front();
        j["value_partition"] = partition_to_json(*age.value_partition);
        j["difference_partition"] = partition_to_json(*age.difference_partition);
    }
    j["profile"] = {{"p", model.profile.p},
                    {"w_p", model.profile.w_p},
                    {"h", model.profile.h},
                    {"w_h", model.profile.w_h}};
    j["value_labels"] = value_dim_labels(model.config);
    j["difference_labels"] = difference_dim_labels(model.config);

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

CalibratedModel read_calibrated_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open params file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
    }
    try {
        CalibratedModel model;
        model.country = j.value("country", "");
        model.config.family = family_from_tag(j.at("model").get<std::string>());
        model.config.age_value_sets = j.value("age_value_sets", 7);
        model.config.age_diff_sets = j.value("age_diff_sets", 7);
        model.principle = build_principle(model.config);
        if (model.config.has_age() && model.config.age_fuzzy()) {
            auto& age = model.principle.features.front();
            age.value_partition = partition_from_json(j.at("value_partition"));
            age.difference_partition = partition_from_json(j.at("difference_partition"));
        }
        const auto& p = j.at("profile");
        model.profile.p = p.at("p").get<std::vector<double>>();
        model.profile.w_p = p.at("w_p").get<std::vector<double>>();
        model.profile.h = p.at("h").get<std::vector<double>>();
        model.profile.w_h = p.at("w_h").get<std::vector<double>>();
        model.eu = j.value("eu", 0.0);
        model.profile.validate(model.principle);
        return model;
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, std::string("bad params structure: ") + e.what());
    }
}

} // namespace contactnet
