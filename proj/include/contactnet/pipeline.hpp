#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contactnet/config.hpp"
#include "contactnet/contact_matrix.hpp"
#include "contactnet/epidemic.hpp"
#include "contactnet/formation.hpp"
#include "contactnet/population.hpp"
#include "contactnet/sensitivity.hpp"

namespace contactnet {

// Inputs loaded and validated up front, before anything is written.
struct PipelineContext {
    CountryConfig cfg;
    std::filesystem::path out_dir;
    AgeSexPyramid pyramid;
    ContactMatrix raw_matrix;
};

PipelineContext prepare_context(const CountryConfig& cfg,
                                const std::filesystem::path& output_root);

// Fail-fast batch preparation: every referenced file must parse before any
// country starts producing outputs.
std::vector<PipelineContext> prepare_batch(const BatchConfig& batch);

// --- per-command artifact producers -----------------------------------------

struct PopulationArtifacts {
    Population pop;
};
PopulationArtifacts run_population(const PipelineContext& ctx);

struct SimulateArtifacts {
    Population pop;
    Network net;
    ContactMatrix target;   // adjusted and rescaled to the simulated bins
    ContactMatrix recreated;
    long long edge_budget = 0;
    double eu = 0.0;
};
// When no calibrated model is supplied one is read from cfg.params_path,
// or a neutral zero-preference profile is used as a last resort.
SimulateArtifacts run_simulate(const PipelineContext& ctx,
                               const std::optional<CalibratedModel>& model);

struct CalibrationArtifacts {
    CalibratedModel model;
    std::vector<FamilyResult> families;
    std::optional<GridSearchResult> grid;
    std::optional<SensitivityReport> vars;
    double initial_eu = 0.0; // after structure selection, before parameter tuning
    double improved_eu = 0.0;
    long long edge_budget = 0;
};
CalibrationArtifacts run_calibrate(const PipelineContext& ctx);

SensitivityReport run_sensitivity(const PipelineContext& ctx,
                                  const std::optional<CalibratedModel>& model);

struct EpidemicArtifacts {
    EpidemicTrace trace;
    double terminal_par = 0.0;
    std::vector<GroupPar> first_step_groups; // PaR(1,1) per age&sex group
};
EpidemicArtifacts run_epidemic(const PipelineContext& ctx,
                               const std::optional<CalibratedModel>& model);

// Full per-country chain: population -> calibrate -> simulate -> sensitivity
// -> epidemic. Countries run concurrently; console progress is line-buffered
// per country.
void run_report_all(const BatchConfig& batch);

} // namespace contactnet
