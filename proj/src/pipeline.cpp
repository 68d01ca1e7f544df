#include "contactnet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "contactnet/errors.hpp"
#include "contactnet/io.hpp"
#include "contactnet/rng.hpp"

namespace contactnet {

using nlohmann::json;

namespace {

std::mutex g_console_mutex;

void log_line(const std::string& country, const std::string& message) {
    std::lock_guard<std::mutex> lock(g_console_mutex);
    std::cout << "[" << country << "] " << message << "\n" << std::flush;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Population make_population(const PipelineContext& ctx) {
    return sample_population(ctx.pyramid, ctx.cfg.n_nodes, ctx.cfg.seeds.population);
}

// Survey matrix -> reciprocity-adjusted matrix anchored to the simulated
// population's decade bins.
ContactMatrix make_target(const PipelineContext& ctx, const Population& pop) {
    return rescale_to_population(reciprocal_adjust(ctx.raw_matrix), pop);
}

SimulationSettings make_sim(const PipelineContext& ctx, long long edge_budget) {
    SimulationSettings sim;
    sim.n_nodes = ctx.cfg.n_nodes;
    sim.encounter_rate = ctx.cfg.encounter_rate;
    sim.noise_sigma = ctx.cfg.noise_sigma;
    sim.edge_budget = edge_budget;
    sim.formation_seed = ctx.cfg.seeds.formation;
    return sim;
}

ModelConfig model_config_for(const CountryConfig& cfg) {
    ModelConfig mc;
    mc.family = cfg.model;
    mc.age_value_sets = cfg.age_value_sets;
    mc.age_diff_sets = cfg.age_diff_sets;
    return mc;
}

// Zero-preference model: scores carry only noise, so formation reduces to
// random ranking among encountered pairs.
CalibratedModel neutral_model(const CountryConfig& cfg) {
    CalibratedModel model;
    model.country = cfg.country;
    model.config = model_config_for(cfg);
    model.principle = build_principle(model.config);
    const std::size_t z = model.principle.value_dim();
    const std::size_t zh = model.principle.difference_dim();
    model.profile.p.assign(z, 0.0);
    model.profile.w_p.assign(z, 0.5);
    model.profile.h.assign(zh, 0.0);
    model.profile.w_h.assign(zh, 0.5);
    return model;
}

CalibratedModel resolve_model(const PipelineContext& ctx,
                              const std::optional<CalibratedModel>& model) {
    if (model) return *model;
    if (ctx.cfg.params_path) return read_calibrated_model(*ctx.cfg.params_path);
    log_line(ctx.cfg.country, "no calibrated parameters supplied; using a neutral profile");
    return neutral_model(ctx.cfg);
}

Network form_from_model(const PipelineContext& ctx, const CalibratedModel& model,
                        long long edge_budget) {
    FormationConfig fc;
    fc.encounter_rate = ctx.cfg.encounter_rate;
    fc.edge_budget = edge_budget;
    fc.noise_sigma = ctx.cfg.noise_sigma;
    fc.seed = ctx.cfg.seeds.formation;
    return form_network(make_population(ctx), ProfileSet::shared(model.profile),
                        PrincipleSet::shared(model.principle), fc);
}

void write_sensitivity_artifacts(const std::filesystem::path& dir,
                                 const SensitivityReport& report) {
    {
        CsvWriter csv(dir / "sensitivity.csv");
        csv.row({"parameter", "ivars10", "ivars30", "ivars50", "sobol_total", "rank_ivars10",
                 "rank_ivars30", "rank_ivars50", "rank_sobol", "aggregated_rank", "selected"});
        for (std::size_t i = 0; i < report.names.size(); ++i) {
            const bool selected = std::find(report.selected.begin(), report.selected.end(),
                                            report.names[i]) != report.selected.end();
            csv.row({report.names[i], CsvWriter::num(report.ivars10[i]),
                     CsvWriter::num(report.ivars30[i]), CsvWriter::num(report.ivars50[i]),
                     CsvWriter::num(report.sobol[i]),
                     CsvWriter::num(static_cast<long long>(report.rank_ivars10[i])),
                     CsvWriter::num(static_cast<long long>(report.rank_ivars30[i])),
                     CsvWriter::num(static_cast<long long>(report.rank_ivars50[i])),
                     CsvWriter::num(static_cast<long long>(report.rank_sobol[i])),
                     CsvWriter::num(report.aggregated_rank[i]), selected ? "1" : "0"});
        }
    }
    json j;
    j["parameters"] = report.names;
    j["ivars10"] = report.ivars10;
    j["ivars30"] = report.ivars30;
    j["ivars50"] = report.ivars50;
    j["sobol_total"] = report.sobol;
    j["aggregated_rank"] = report.aggregated_rank;
    j["selected"] = report.selected;
    write_json_file(dir / "sensitivity.json", j);

    // Ordered most-important-first, log-scale bars like the ranking plots.
    std::vector<std::string> ordered_names;
    std::vector<std::vector<double>> series(4);
    for (int idx : report.order) {
        const std::size_t i = static_cast<std::size_t>(idx);
        ordered_names.push_back(report.names[i]);
        series[0].push_back(report.ivars10[i]);
        series[1].push_back(report.ivars30[i]);
        series[2].push_back(report.ivars50[i]);
        series[3].push_back(report.sobol[i]);
    }
    write_bar_chart_svg(dir / "sensitivity.svg", ordered_names,
                        {"IVARS10", "IVARS30", "IVARS50", "Sobol"}, series,
                        "Parameter sensitivity (log scale)");
}

std::string ranking_string(const SensitivityReport& report) {
    std::string s;
    for (std::size_t i = 0; i < report.order.size(); ++i) {
        if (i) s += " > ";
        s += report.names[static_cast<std::size_t>(report.order[i])];
    }
    return s;
}

} // namespace

PipelineContext prepare_context(const CountryConfig& cfg,
                                const std::filesystem::path& output_root) {
    cfg.validate();
    PipelineContext ctx;
    ctx.cfg = cfg;
    ctx.out_dir = output_root / cfg.output_dir;
    ctx.pyramid = read_pyramid_csv(cfg.pyramid_path);
    ctx.pyramid.country = cfg.country;
    ctx.pyramid.validate();
    ctx.raw_matrix = read_contact_matrix_csv(cfg.matrix_path);
    if (ctx.raw_matrix.bins() != 9)
        throw ConfigError(cfg.country + ": expected nine 10-year bins, found " +
                          std::to_string(ctx.raw_matrix.bins()));
    if (cfg.params_path) read_calibrated_model(*cfg.params_path); // parse now, fail fast
    return ctx;
}

std::vector<PipelineContext> prepare_batch(const BatchConfig& batch) {
    if (batch.countries.empty()) throw ConfigError("config lists no countries");
    std::vector<PipelineContext> out;
    out.reserve(batch.countries.size());
    for (const auto& c : batch.countries) out.push_back(prepare_context(c, batch.output_root));
    return out;
}

PopulationArtifacts run_population(const PipelineContext& ctx) {
    PopulationArtifacts art;
    art.pop = make_population(ctx);
    write_population_csv(ctx.out_dir / "population.csv", art.pop);

    json j;
    {
        CsvWriter csv(ctx.out_dir / "hill_numbers.csv");
        csv.row({"grouping", "q", "hill_number"});
        const std::pair<Grouping, std::string> groupings[] = {
            {Grouping::AgeDecade, "age"}, {Grouping::Sex, "sex"},
            {Grouping::AgeDecadeBySex, "age_sex"}};
        for (const auto& [grouping, name] : groupings) {
            const auto counts = group_counts(art.pop, grouping);
            json values = json::array();
            for (double q : ctx.cfg.hill_q) {
                const double h = hill_number(counts, q);
                csv.row({name, CsvWriter::num(q), CsvWriter::num(h)});
                values.push_back({{"q", q}, {"hill_number", h}});
            }
            j[name] = values;
        }
    }
    j["country"] = ctx.cfg.country;
    j["n_nodes"] = ctx.cfg.n_nodes;
    write_json_file(ctx.out_dir / "hill_numbers.json", j);
    log_line(ctx.cfg.country, "population sampled and diversity report written");
    return art;
}

SimulateArtifacts run_simulate(const PipelineContext& ctx,
                               const std::optional<CalibratedModel>& model) {
    SimulateArtifacts art;
    art.pop = make_population(ctx);
    art.target = make_target(ctx, art.pop);
    art.edge_budget = derive_edge_budget(art.target, art.pop);

    const CalibratedModel m = resolve_model(ctx, model);
    art.net = form_from_model(ctx, m, art.edge_budget);
    if (art.net.edges.empty())
        log_line(ctx.cfg.country, "warning: formation produced an empty network");
    if (art.net.shortfall)
        log_line(ctx.cfg.country, "warning: fewer encountered pairs than the edge budget");

    art.recreated = matrix_from_network(art.net, art.pop);
    art.eu = eu_distance(art.recreated, art.target);

    write_edge_list_csv(ctx.out_dir / "edges.csv", art.net);
    write_contact_matrix_csv(ctx.out_dir / "recreated_matrix.csv", art.recreated);
    write_heatmap_svg(ctx.out_dir / "recreated_matrix.svg", art.recreated.rates,
                      art.recreated.bin_labels, art.recreated.bin_labels,
                      ctx.cfg.country + ": recreated contact matrix");
    write_contact_matrix_csv(ctx.out_dir / "target_matrix.csv", art.target);
    write_heatmap_svg(ctx.out_dir / "target_matrix.svg", art.target.rates, art.target.bin_labels,
                      art.target.bin_labels, ctx.cfg.country + ": target contact matrix");

    const DegreeStats deg = degree_stats(art.net);
    const ClusteringStats clus = clustering_stats(art.net);
    const PathStats paths = shortest_path_matrix(art.net);

    {
        CsvWriter csv(ctx.out_dir / "degree_distribution.csv");
        csv.row({"id", "age", "sex", "degree"});
        for (const auto& nf : art.pop.nodes)
            csv.row({CsvWriter::num(static_cast<long long>(nf.id)),
                     CsvWriter::num(static_cast<long long>(nf.age)),
                     CsvWriter::num(static_cast<long long>(nf.sex)),
                     CsvWriter::num(static_cast<long long>(
                         deg.degree[static_cast<std::size_t>(nf.id)]))});
    }
    {
        CsvWriter csv(ctx.out_dir / "clustering_distribution.csv");
        csv.row({"id", "age", "sex", "clustering"});
        for (const auto& nf : art.pop.nodes)
            csv.row({CsvWriter::num(static_cast<long long>(nf.id)),
                     CsvWriter::num(static_cast<long long>(nf.age)),
                     CsvWriter::num(static_cast<long long>(nf.sex)),
                     CsvWriter::num(clus.coefficient[static_cast<std::size_t>(nf.id)])});
    }
    {
        // Unordered pairs with a male-male / male-female / female-female tag.
        CsvWriter csv(ctx.out_dir / "path_length_distribution.csv");
        csv.row({"u", "v", "age_u", "age_v", "pair", "length"});
        for (int u = 0; u < art.net.n; ++u) {
            for (int v = u + 1; v < art.net.n; ++v) {
                const auto& a = art.pop.nodes[static_cast<std::size_t>(u)];
                const auto& b = art.pop.nodes[static_cast<std::size_t>(v)];
                const char* pair = a.sex == b.sex ? (a.sex == 1 ? "male-male" : "female-female")
                                                  : "male-female";
                csv.row({CsvWriter::num(static_cast<long long>(u)),
                         CsvWriter::num(static_cast<long long>(v)),
                         CsvWriter::num(static_cast<long long>(a.age)),
                         CsvWriter::num(static_cast<long long>(b.age)), pair,
                         CsvWriter::num(paths.at(u, v))});
            }
        }
    }
    {
        CsvWriter csv(ctx.out_dir / "topology_summary.csv");
        csv.row({"country", "nodes_connected", "nodes_unconnected", "edges", "degree_avg",
                 "degree_std", "degree_max", "degree_min", "clustering_avg", "clustering_std",
                 "clustering_max", "clustering_min", "fake_paths_unordered", "fake_paths_ordered",
                 "path_avg", "path_std", "path_max", "path_min"});
        csv.row({ctx.cfg.country, CsvWriter::num(static_cast<long long>(deg.connected)),
                 CsvWriter::num(static_cast<long long>(deg.unconnected)),
                 CsvWriter::num(art.net.edge_count()), CsvWriter::num(deg.avg),
                 CsvWriter::num(deg.stddev), CsvWriter::num(static_cast<long long>(deg.max_degree)),
                 CsvWriter::num(static_cast<long long>(deg.min_degree)), CsvWriter::num(clus.avg),
                 CsvWriter::num(clus.stddev), CsvWriter::num(clus.max_coeff),
                 CsvWriter::num(clus.min_coeff), CsvWriter::num(paths.fake_unordered),
                 CsvWriter::num(paths.fake_ordered), CsvWriter::num(paths.avg),
                 CsvWriter::num(paths.stddev), CsvWriter::num(paths.max_length),
                 CsvWriter::num(paths.min_length)});
    }
    json j;
    j["country"] = ctx.cfg.country;
    j["edges"] = art.net.edge_count();
    j["edge_budget"] = art.edge_budget;
    j["eu_distance"] = art.eu;
    j["nodes_connected"] = deg.connected;
    j["nodes_unconnected"] = deg.unconnected;
    j["degree"] = {{"avg", deg.avg}, {"std", deg.stddev}, {"max", deg.max_degree},
                   {"min", deg.min_degree}};
    j["clustering"] = {{"avg", clus.avg}, {"std", clus.stddev}, {"max", clus.max_coeff},
                       {"min", clus.min_coeff}};
    j["shortest_path"] = {{"avg", paths.avg},
                          {"std", paths.stddev},
                          {"max", paths.max_length},
                          {"min", paths.min_length},
                          {"fake_unordered", paths.fake_unordered},
                          {"fake_ordered", paths.fake_ordered},
                          {"fake_length", paths.fake_length}};
    write_json_file(ctx.out_dir / "topology_summary.json", j);
    log_line(ctx.cfg.country, "network simulated: " + std::to_string(art.net.edge_count()) +
                                  " edges, EU distance " + format_double(art.eu));
    return art;
}

CalibrationArtifacts run_calibrate(const PipelineContext& ctx) {
    CalibrationArtifacts art;
    const Population pop = make_population(ctx);
    const ContactMatrix target = make_target(ctx, pop);
    art.edge_budget = derive_edge_budget(target, pop);
    const SimulationSettings sim = make_sim(ctx, art.edge_budget);
    const std::uint64_t opt_seed = derive_seed(ctx.cfg.seeds.formation, 0xCA11);

    // Stage A: family comparison under equal budgets.
    log_line(ctx.cfg.country, "calibration stage A: model families");
    art.families = compare_model_families(target, pop, sim, ctx.cfg.family_budget, opt_seed);
    {
        CsvWriter csv(ctx.out_dir / "model_families.csv");
        csv.row({"family", "eu_distance", "runtime_seconds", "evaluations"});
        for (const auto& fr : art.families)
            csv.row({family_tag(fr.family), CsvWriter::num(fr.best_eu),
                     CsvWriter::num(fr.runtime_seconds),
                     CsvWriter::num(static_cast<long long>(fr.eval_count))});
        json j = json::array();
        for (const auto& fr : art.families)
            j.push_back({{"family", family_tag(fr.family)},
                         {"eu_distance", fr.best_eu},
                         {"runtime_seconds", fr.runtime_seconds},
                         {"evaluations", fr.eval_count}});
        write_json_file(ctx.out_dir / "model_families.json", json{{"families", j}});
    }

    ModelConfig mc = model_config_for(ctx.cfg);
    PreferenceProfile profile;

    // Stage B: structure selection and preference optimization.
    if (mc.family == ModelFamily::RN) {
        art.initial_eu = evaluate_candidate(build_principle(mc), profile, target, pop, sim);
    } else {
        if (mc.age_fuzzy() && ctx.cfg.grid_sets) {
            log_line(ctx.cfg.country, "calibration stage B: fuzzy-set grid search");
            GridSearchConfig gc;
            gc.inner_budget = ctx.cfg.grid_inner_budget;
            gc.seed = derive_seed(opt_seed, 1);
            art.grid = grid_search_fuzzy_sets(target, pop, sim, gc);
            mc.age_value_sets = art.grid->best_value_sets;
            mc.age_diff_sets = art.grid->best_diff_sets;
            {
                CsvWriter csv(ctx.out_dir / "eu_grid.csv");
                std::vector<std::string> header{"value_sets\\diff_sets"};
                for (int h = gc.diff_lo; h <= gc.diff_hi; ++h)
                    header.push_back(std::to_string(h));
                csv.row(header);
                for (int p = gc.value_lo; p <= gc.value_hi; ++p) {
                    std::vector<std::string> row{std::to_string(p)};
                    for (int h = gc.diff_lo; h <= gc.diff_hi; ++h)
                        row.push_back(CsvWriter::num(art.grid->eu(p - gc.value_lo, h - gc.diff_lo)));
                    csv.row(row);
                }
            }
            std::vector<std::string> row_labels, col_labels;
            for (int p = gc.value_lo; p <= gc.value_hi; ++p) row_labels.push_back(std::to_string(p));
            for (int h = gc.diff_lo; h <= gc.diff_hi; ++h) col_labels.push_back(std::to_string(h));
            write_heatmap_svg(ctx.out_dir / "eu_grid.svg", art.grid->eu, row_labels, col_labels,
                              ctx.cfg.country + ": EU distance by fuzzy-set counts", false);
        }
        log_line(ctx.cfg.country, "calibration stage B: preference optimization");
        const ParameterSpace space = make_preference_space(mc);
        BoConfig bo;
        bo.budget = ctx.cfg.optimization_budget;
        bo.seed = derive_seed(opt_seed, 2);
        const CalibrationResult pref =
            bayesian_optimize(space, preference_objective(mc, target, pop, sim), bo);
        profile = profile_from_preference_values(mc, pref.best_params);
        art.initial_eu = pref.best_eu;
    }
    art.improved_eu = art.initial_eu;
    RepresentationPrinciple principle = build_principle(mc);

    // Stage C: membership-parameter sensitivity and tuning (fuzzy only).
    std::string ranking;
    if (mc.age_fuzzy()) {
        log_line(ctx.cfg.country, "calibration stage C: sensitivity and parameter tuning");
        const ParameterSpace mem_space = make_membership_space(mc);
        std::vector<std::string> names;
        for (const auto& p : mem_space.params) names.push_back(p.name);
        SensitivityConfig sens = ctx.cfg.sensitivity;
        sens.seed = derive_seed(opt_seed, 3);
        try {
            art.vars = run_vars(membership_objective(mc, names, profile, target, pop, sim),
                                mem_space, sens);
        } catch (const std::invalid_argument& e) {
            // A flat response surface (e.g. an all-zero preference profile)
            // has no variance to decompose; keep the stage-B result.
            log_line(ctx.cfg.country, std::string("sensitivity skipped: ") + e.what());
        }
        if (art.vars) {
            ranking = ranking_string(*art.vars);
            const ParameterSpace sel_space = subset_space(mem_space, art.vars->selected);
            BoConfig bo;
            bo.budget = ctx.cfg.optimization_budget;
            bo.seed = derive_seed(opt_seed, 4);
            const CalibrationResult tuned = bayesian_optimize(
                sel_space,
                membership_objective(mc, art.vars->selected, profile, target, pop, sim), bo);
            if (tuned.best_eu <= art.initial_eu) {
                art.improved_eu = tuned.best_eu;
                principle =
                    principle_from_membership_values(mc, art.vars->selected, tuned.best_params);
            }
        }
    }

    art.model.country = ctx.cfg.country;
    art.model.config = mc;
    art.model.principle = principle;
    art.model.profile = profile;
    art.model.eu = art.improved_eu;
    write_calibrated_model(ctx.out_dir / "best_params.json", art.model);

    {
        CsvWriter csv(ctx.out_dir / "calibration_report.csv");
        csv.row({"country", "family", "age_value_sets", "age_diff_sets", "initial_eu",
                 "parameter_ranking", "selected_parameters", "improved_eu"});
        std::string selected;
        if (art.vars)
            for (std::size_t i = 0; i < art.vars->selected.size(); ++i)
                selected += (i ? " " : "") + art.vars->selected[i];
        csv.row({ctx.cfg.country, family_tag(mc.family),
                 CsvWriter::num(static_cast<long long>(mc.age_value_sets)),
                 CsvWriter::num(static_cast<long long>(mc.age_diff_sets)),
                 CsvWriter::num(art.initial_eu), ranking, selected,
                 CsvWriter::num(art.improved_eu)});
    }
    json j;
    j["country"] = ctx.cfg.country;
    j["family"] = family_tag(mc.family);
    j["age_value_sets"] = mc.age_value_sets;
    j["age_diff_sets"] = mc.age_diff_sets;
    j["initial_eu"] = art.initial_eu;
    j["improved_eu"] = art.improved_eu;
    j["edge_budget"] = art.edge_budget;
    if (art.vars) {
        j["parameter_ranking"] = ranking;
        j["selected_parameters"] = art.vars->selected;
    }
    {
        json fam = json::array();
        for (const auto& fr : art.families)
            fam.push_back({{"family", family_tag(fr.family)}, {"eu_distance", fr.best_eu}});
        j["families"] = fam;
    }
    {
        // Profile in report form: label, sign, weight per unfolded dimension.
        json dims = json::array();
        const auto vl = value_dim_labels(mc);
        for (std::size_t i = 0; i < vl.size(); ++i)
            dims.push_back({{"label", vl[i]}, {"sign", profile.p[i]}, {"weight", profile.w_p[i]}});
        const auto dl = difference_dim_labels(mc);
        for (std::size_t i = 0; i < dl.size(); ++i)
            dims.push_back({{"label", dl[i]}, {"sign", profile.h[i]}, {"weight", profile.w_h[i]}});
        j["preferences"] = dims;
    }
    write_json_file(ctx.out_dir / "calibration_report.json", j);
    if (art.vars) write_sensitivity_artifacts(ctx.out_dir, *art.vars);

    log_line(ctx.cfg.country, "calibration finished: EU " + format_double(art.initial_eu) +
                                  " -> " + format_double(art.improved_eu));
    return art;
}

SensitivityReport run_sensitivity(const PipelineContext& ctx,
                                  const std::optional<CalibratedModel>& model) {
    const Population pop = make_population(ctx);
    const ContactMatrix target = make_target(ctx, pop);
    const long long edge_budget = derive_edge_budget(target, pop);
    const SimulationSettings sim = make_sim(ctx, edge_budget);
    const std::uint64_t opt_seed = derive_seed(ctx.cfg.seeds.formation, 0xCA11);

    ModelConfig mc = model_config_for(ctx.cfg);
    PreferenceProfile profile;
    if (model || ctx.cfg.params_path) {
        const CalibratedModel m = model ? *model : read_calibrated_model(*ctx.cfg.params_path);
        mc = m.config;
        profile = m.profile;
    } else {
        // No calibrated profile supplied: fit preferences first so the
        // response surface is informative.
        if (!mc.age_fuzzy())
            throw ConfigError(ctx.cfg.country + ": model family has no membership parameters");
        log_line(ctx.cfg.country, "sensitivity: fitting preferences first");
        const ParameterSpace space = make_preference_space(mc);
        BoConfig bo;
        bo.budget = ctx.cfg.family_budget;
        bo.seed = derive_seed(opt_seed, 2);
        const CalibrationResult pref =
            bayesian_optimize(space, preference_objective(mc, target, pop, sim), bo);
        profile = profile_from_preference_values(mc, pref.best_params);
    }
    if (!mc.age_fuzzy())
        throw ConfigError(ctx.cfg.country + ": model family has no membership parameters");

    const ParameterSpace mem_space = make_membership_space(mc);
    std::vector<std::string> names;
    for (const auto& p : mem_space.params) names.push_back(p.name);
    SensitivityConfig sens = ctx.cfg.sensitivity;
    sens.seed = derive_seed(opt_seed, 3);
    const SensitivityReport report =
        run_vars(membership_objective(mc, names, profile, target, pop, sim), mem_space, sens);
    write_sensitivity_artifacts(ctx.out_dir, report);
    log_line(ctx.cfg.country, "sensitivity report written");
    return report;
}

EpidemicArtifacts run_epidemic(const PipelineContext& ctx,
                               const std::optional<CalibratedModel>& model) {
    const Population pop = make_population(ctx);
    const ContactMatrix target = make_target(ctx, pop);
    const long long edge_budget = derive_edge_budget(target, pop);
    const CalibratedModel m = resolve_model(ctx, model);
    const Network net = form_from_model(ctx, m, edge_budget);

    EpidemicParams params;
    params.gamma = ctx.cfg.epidemic.gamma;
    params.max_steps = ctx.cfg.epidemic.max_steps;
    params.rng_seed = ctx.cfg.seeds.epidemic;

    EpidemicArtifacts art;
    art.trace = run_si(net, params);
    art.terminal_par = par(art.trace, params.max_steps,
                           std::min(params.max_steps, static_cast<int>(art.trace.fake_distance)),
                           pop.size());
    art.first_step_groups = par_by_group(art.trace, pop, 1, 1);

    {
        CsvWriter csv(ctx.out_dir / "epidemic_trace.csv");
        csv.row({"node", "age", "sex", "distance", "infection_time"});
        for (const auto& nf : pop.nodes) {
            const std::size_t v = static_cast<std::size_t>(nf.id);
            csv.row({CsvWriter::num(static_cast<long long>(nf.id)),
                     CsvWriter::num(static_cast<long long>(nf.age)),
                     CsvWriter::num(static_cast<long long>(nf.sex)),
                     CsvWriter::num(static_cast<long long>(art.trace.distance_to_seed[v])),
                     CsvWriter::num(static_cast<long long>(art.trace.infection_time[v]))});
        }
    }
    {
        CsvWriter csv(ctx.out_dir / "par_surface.csv");
        csv.row({"T", "D", "par"});
        for (int t = 0; t <= params.max_steps; ++t)
            for (int d = 0; d <= t; ++d)
                csv.row({CsvWriter::num(static_cast<long long>(t)),
                         CsvWriter::num(static_cast<long long>(d)),
                         CsvWriter::num(par(art.trace, t, d, pop.size()))});
    }
    {
        CsvWriter csv(ctx.out_dir / "par_by_group.csv");
        csv.row({"group", "size", "infected", "par_1_1"});
        for (const auto& g : art.first_step_groups)
            csv.row({g.label, CsvWriter::num(static_cast<long long>(g.group_size)),
                     CsvWriter::num(static_cast<long long>(g.infected)),
                     CsvWriter::num(g.value)});
    }
    const auto& seed_node = pop.nodes[static_cast<std::size_t>(art.trace.seed_id)];
    json j;
    j["country"] = ctx.cfg.country;
    j["seed"] = {{"id", art.trace.seed_id},
                 {"age", seed_node.age},
                 {"sex", seed_node.sex == 1 ? "male" : "female"}};
    j["gamma"] = params.gamma;
    j["max_steps"] = params.max_steps;
    j["steps_run"] = art.trace.steps_run;
    j["terminal_par"] = art.terminal_par;
    int infected = 0;
    for (int t : art.trace.infection_time)
        if (t >= 0) ++infected;
    j["infected"] = infected;
    write_json_file(ctx.out_dir / "epidemic_summary.json", j);
    log_line(ctx.cfg.country,
             "epidemic simulated: seed " + std::to_string(art.trace.seed_id) + ", terminal PaR " +
                 format_double(art.terminal_par));
    return art;
}

void run_report_all(const BatchConfig& batch) {
    const auto contexts = prepare_batch(batch);
    std::vector<std::future<void>> tasks;
    tasks.reserve(contexts.size());
    for (const auto& ctx : contexts) {
        tasks.push_back(std::async(std::launch::async, [&ctx]() {
            run_population(ctx);
            const CalibrationArtifacts cal = run_calibrate(ctx);
            run_simulate(ctx, cal.model);
            run_epidemic(ctx, cal.model);
        }));
    }
    // Surface the first failure after all countries finish.
    std::exception_ptr first_error;
    for (auto& t : tasks) {
        try {
            t.get();
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace contactnet
