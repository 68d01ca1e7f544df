#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "contactnet/errors.hpp"
#include "contactnet/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitRuntime = 4;

struct Overrides {
    std::optional<std::string> country;
    std::optional<int> n_nodes;
    std::optional<double> encounter_rate;
    std::optional<double> noise_sigma;
    std::optional<std::uint64_t> population_seed;
    std::optional<std::uint64_t> formation_seed;
    std::optional<std::uint64_t> epidemic_seed;
    std::optional<std::string> model;
    std::optional<int> budget;
    std::optional<std::string> output_root;
    std::optional<std::string> params;
};

void apply_overrides(contactnet::BatchConfig& batch, const Overrides& ov) {
    if (ov.output_root) batch.output_root = *ov.output_root;
    if (ov.country) {
        std::erase_if(batch.countries, [&](const contactnet::CountryConfig& c) {
            return c.country != *ov.country;
        });
        if (batch.countries.empty())
            throw contactnet::ConfigError("config has no country named '" + *ov.country + "'");
    }
    for (auto& c : batch.countries) {
        if (ov.n_nodes) c.n_nodes = *ov.n_nodes;
        if (ov.encounter_rate) c.encounter_rate = *ov.encounter_rate;
        if (ov.noise_sigma) c.noise_sigma = *ov.noise_sigma;
        if (ov.population_seed) c.seeds.population = *ov.population_seed;
        if (ov.formation_seed) c.seeds.formation = *ov.formation_seed;
        if (ov.epidemic_seed) c.seeds.epidemic = *ov.epidemic_seed;
        if (ov.model) c.model = contactnet::family_from_tag(*ov.model);
        if (ov.budget) c.optimization_budget = *ov.budget;
        if (ov.params) c.params_path = std::filesystem::path(*ov.params);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social contact network simulator and calibration toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "Run configuration (JSON)")->required();
        cmd->add_option("--country", ov.country, "Run a single country from the config");
        cmd->add_option("--n-nodes", ov.n_nodes, "Override the node count");
        cmd->add_option("--encounter-rate", ov.encounter_rate, "Override the encounter rate");
        cmd->add_option("--noise-sigma", ov.noise_sigma, "Override the score-noise spread");
        cmd->add_option("--population-seed", ov.population_seed, "Override the population seed");
        cmd->add_option("--formation-seed", ov.formation_seed, "Override the formation seed");
        cmd->add_option("--epidemic-seed", ov.epidemic_seed, "Override the epidemic seed");
        cmd->add_option("--model", ov.model, "Override the model family tag");
        cmd->add_option("--budget", ov.budget, "Override the optimization budget");
        cmd->add_option("--output-root", ov.output_root, "Override the output root directory");
        cmd->add_option("--params", ov.params, "Calibrated-model JSON to simulate with");
    };

    CLI::App* cmd_population = app.add_subcommand("population", "Sample populations and report diversity");
    CLI::App* cmd_simulate = app.add_subcommand("simulate", "Form networks and report topology");
    CLI::App* cmd_calibrate = app.add_subcommand("calibrate", "Fit preferences and fuzzy sets to the target matrices");
    CLI::App* cmd_sensitivity = app.add_subcommand("sensitivity", "Variogram-based sensitivity of membership parameters");
    CLI::App* cmd_epidemic = app.add_subcommand("epidemic", "Run the SI process and report people at risk");
    CLI::App* cmd_report_all = app.add_subcommand("report-all", "Full per-country pipeline");
    for (CLI::App* cmd : {cmd_population, cmd_simulate, cmd_calibrate, cmd_sensitivity,
                          cmd_epidemic, cmd_report_all})
        add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        contactnet::BatchConfig batch = contactnet::load_config(config_path);
        apply_overrides(batch, ov);

        if (cmd_report_all->parsed()) {
            contactnet::run_report_all(batch);
            return kExitOk;
        }

        const auto contexts = contactnet::prepare_batch(batch);
        for (const auto& ctx : contexts) {
            if (cmd_population->parsed()) {
                contactnet::run_population(ctx);
            } else if (cmd_simulate->parsed()) {
                contactnet::run_simulate(ctx, std::nullopt);
            } else if (cmd_calibrate->parsed()) {
                contactnet::run_calibrate(ctx);
            } else if (cmd_sensitivity->parsed()) {
                contactnet::run_sensitivity(ctx, std::nullopt);
            } else if (cmd_epidemic->parsed()) {
                contactnet::run_epidemic(ctx, std::nullopt);
            }
        }
        return kExitOk;
    } catch (const contactnet::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const contactnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
