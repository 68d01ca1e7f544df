#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "contactnet/errors.hpp"
#include "contactnet/io.hpp"
#include "contactnet/pipeline.hpp"

using namespace contactnet;

namespace {

const std::filesystem::path kData = CONTACTNET_DATA_DIR;
const std::filesystem::path kWork = CONTACTNET_WORK_DIR;

CountryConfig belgium_config(const std::string& out_name) {
    CountryConfig cfg;
    cfg.country = "Belgium";
    cfg.pyramid_path = kData / "belgium_pyramid.csv";
    cfg.matrix_path = kData / "belgium_matrix.csv";
    cfg.output_dir = out_name;
    cfg.optimization_budget = 12;
    cfg.family_budget = 8;
    cfg.grid_inner_budget = 5;
    cfg.sensitivity.n_stars = 4;
    return cfg;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("context preparation fails fast on missing inputs") {
    CountryConfig cfg = belgium_config("ctx");
    cfg.pyramid_path = kData / "no_such_file.csv";
    CHECK_THROWS_AS(prepare_context(cfg, kWork), ParseError);

    CountryConfig bad = belgium_config("ctx");
    bad.encounter_rate = 1.5;
    CHECK_THROWS_AS(prepare_context(bad, kWork), ConfigError);
}

TEST_CASE("population artifacts and determinism") {
    const auto ctx = prepare_context(belgium_config("pop_a"), kWork);
    const auto art = run_population(ctx);
    CHECK(art.pop.size() == 90);
    CHECK(std::filesystem::exists(ctx.out_dir / "population.csv"));
    CHECK(std::filesystem::exists(ctx.out_dir / "hill_numbers.csv"));
    CHECK(std::filesystem::exists(ctx.out_dir / "hill_numbers.json"));

    // Identical config and seeds produce byte-identical outputs.
    run_population(ctx);
    const std::string first = read_file(ctx.out_dir / "population.csv");
    const auto ctx2 = prepare_context(belgium_config("pop_b"), kWork);
    run_population(ctx2);
    CHECK(read_file(ctx2.out_dir / "population.csv") == first);
    CHECK(read_file(ctx2.out_dir / "hill_numbers.csv") ==
          read_file(ctx.out_dir / "hill_numbers.csv"));
}

TEST_CASE("simulate derives the documented edge budget and writes artifacts") {
    const auto ctx = prepare_context(belgium_config("sim"), kWork);
    const auto art = run_simulate(ctx, std::nullopt);
    CHECK(art.edge_budget == 614);
    CHECK(art.net.edge_count() == 614);
    for (const char* name :
         {"edges.csv", "topology_summary.csv", "topology_summary.json",
          "degree_distribution.csv", "clustering_distribution.csv",
          "path_length_distribution.csv", "recreated_matrix.csv", "recreated_matrix.svg",
          "target_matrix.csv", "target_matrix.svg"})
        CHECK(std::filesystem::exists(ctx.out_dir / name));

    // Table-style row: average degree 2*614/90 = 13.64.
    const std::string summary = read_file(ctx.out_dir / "topology_summary.csv");
    CHECK(summary.find("Belgium,") != std::string::npos);
    CHECK(summary.find(",614,") != std::string::npos);
    CHECK(summary.find("13.64") != std::string::npos);

    // Deterministic outputs across repeated runs.
    const std::string edges_first = read_file(ctx.out_dir / "edges.csv");
    run_simulate(ctx, std::nullopt);
    CHECK(read_file(ctx.out_dir / "edges.csv") == edges_first);
}

TEST_CASE("calibrated models round-trip through JSON") {
    const auto ctx = prepare_context(belgium_config("roundtrip"), kWork);
    CalibratedModel model;
    model.country = "Belgium";
    model.config.family = ModelFamily::HN_AfSc;
    model.config.age_value_sets = 1;
    model.config.age_diff_sets = 4;
    model.principle = build_principle(model.config);
    model.profile.p = {1.0, 1.0};
    model.profile.w_p = {0.6, 1.0};
    model.profile.h = {1.0, 0.0, -1.0, 0.0, 1.0};
    model.profile.w_h = {1.0, 0.5, 0.8, 0.5, 0.9};
    model.eu = 3.47;
    const auto path = ctx.out_dir / "model.json";
    write_calibrated_model(path, model);
    const CalibratedModel back = read_calibrated_model(path);
    CHECK(back.config.family == ModelFamily::HN_AfSc);
    CHECK(back.config.age_value_sets == 1);
    CHECK(back.profile.h == model.profile.h);
    CHECK(back.eu == doctest::Approx(3.47));
    const auto& age = back.principle.features.front();
    REQUIRE(age.fuzzy_value);
    CHECK(age.value_partition->size() == 1);
    CHECK(age.difference_partition->size() == 4);

    // Simulating under an explicit model reproduces the same network as
    // passing the params file through the config.
    const auto direct = run_simulate(ctx, model);
    CountryConfig with_params = belgium_config("roundtrip2");
    with_params.params_path = path;
    const auto ctx2 = prepare_context(with_params, kWork);
    const auto via_file = run_simulate(ctx2, std::nullopt);
    CHECK(direct.net.edges == via_file.net.edges);
    CHECK(direct.eu == via_file.eu);
}

TEST_CASE("epidemic artifacts") {
    CountryConfig cfg = belgium_config("epi");
    const auto ctx = prepare_context(cfg, kWork);
    const auto art = run_epidemic(ctx, std::nullopt);
    CHECK(art.trace.seed_id >= 0);
    CHECK(art.terminal_par > 0.0);
    CHECK(art.terminal_par <= 1.0);
    for (const char* name : {"epidemic_trace.csv", "par_surface.csv", "par_by_group.csv",
                             "epidemic_summary.json"})
        CHECK(std::filesystem::exists(ctx.out_dir / name));

    // The PaR surface respects D <= T and is non-decreasing along T.
    const std::string surface = read_file(ctx.out_dir / "par_surface.csv");
    CHECK(surface.rfind("T,D,par", 0) == 0);

    // The group report covers only non-empty groups of the 90-node sample.
    const std::string groups = read_file(ctx.out_dir / "par_by_group.csv");
    CHECK(groups.find("female") != std::string::npos);
}

TEST_CASE("batch config loading with overrides") {
    const auto batch = load_config(kData / "batch.json");
    CHECK(batch.countries.size() == 6);
    CHECK(batch.countries.front().country == "Belgium");
    CHECK(batch.countries.front().grid_sets);
    CHECK(batch.countries.front().n_nodes == 90);
    CHECK(batch.countries.front().encounter_rate == 0.8);
    CHECK(batch.countries.back().country == "Poland");
    // Paths resolve relative to the config file.
    CHECK(std::filesystem::exists(batch.countries.front().pyramid_path));

    CHECK_THROWS_AS(load_config(kData / "missing.json"), ConfigError);
}

TEST_CASE("config validation catches bad blocks") {
    CountryConfig cfg = belgium_config("bad");
    cfg.age_value_sets = 11;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = belgium_config("bad");
    cfg.epidemic.gamma = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = belgium_config("bad");
    cfg.country.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
