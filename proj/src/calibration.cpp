#include "contactnet/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "contactnet/errors.hpp"
#include "contactnet/gp.hpp"
#include "contactnet/rng.hpp"

namespace contactnet {

std::string family_tag(ModelFamily family) {
    switch (family) {
        case ModelFamily::RN: return "RN";
        case ModelFamily::HN_Ac: return "HN-A_c";
        case ModelFamily::HN_Af: return "HN-A_f";
        case ModelFamily::HN_AcSc: return "HN-A_c-S_c";
        case ModelFamily::HN_AfSc: return "HN-A_f-S_c";
    }
    return "RN";
}

ModelFamily family_from_tag(const std::string& tag) {
    for (ModelFamily f : all_families())
        if (family_tag(f) == tag) return f;
    throw ConfigError("unknown model family '" + tag + "'");
}

std::vector<ModelFamily> all_families() {
    return {ModelFamily::RN, ModelFamily::HN_Ac, ModelFamily::HN_Af, ModelFamily::HN_AcSc,
            ModelFamily::HN_AfSc};
}

RepresentationPrinciple build_principle(const ModelConfig& cfg) {
    RepresentationPrinciple principle;
    if (cfg.has_age()) {
        FeatureRepresentation age;
        if (cfg.age_fuzzy()) {
            age.fuzzy_value = true;
            age.value_partition =
                default_partition(cfg.age_value_sets, cfg.domain_lo, cfg.domain_hi, cfg.default_sigma);
            age.fuzzy_difference = true;
            age.difference_partition =
                default_partition(cfg.age_diff_sets, cfg.domain_lo, cfg.domain_hi, cfg.default_sigma);
        }
        principle.features.push_back(std::move(age));
    }
    if (cfg.has_sex()) principle.features.push_back(FeatureRepresentation{});
    return principle;
}

std::vector<std::string> value_dim_labels(const ModelConfig& cfg) {
    std::vector<std::string> labels;
    if (cfg.has_age()) {
        if (cfg.age_fuzzy()) {
            for (int i = 1; i <= cfg.age_value_sets; ++i)
                labels.push_back("Age_f " + std::to_string(i));
        } else {
            labels.push_back("Age");
        }
    }
    if (cfg.has_sex()) labels.push_back("Sex");
    return labels;
}

std::vector<std::string> difference_dim_labels(const ModelConfig& cfg) {
    std::vector<std::string> labels;
    if (cfg.has_age()) {
        if (cfg.age_fuzzy()) {
            for (int i = 1; i <= cfg.age_diff_sets; ++i)
                labels.push_back("dAge_f " + std::to_string(i));
        } else {
            labels.push_back("dAge");
        }
    }
    if (cfg.has_sex()) labels.push_back("dSex");
    return labels;
}

void ParameterSpace::validate() const {
    if (params.empty()) throw std::invalid_argument("ParameterSpace: empty");
    if (init.size() != params.size())
        throw std::invalid_argument("ParameterSpace: init point has wrong dimension");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i].lo < params[i].hi))
            throw std::invalid_argument("ParameterSpace: empty interval for " + params[i].name);
        if (init[i] < params[i].lo || init[i] > params[i].hi)
            throw std::invalid_argument("ParameterSpace: init outside bounds for " + params[i].name);
    }
}

bool ParameterSpace::contains(std::span<const double> values) const {
    if (values.size() != params.size()) return false;
    for (std::size_t i = 0; i < params.size(); ++i)
        if (values[i] < params[i].lo || values[i] > params[i].hi) return false;
    return true;
}

namespace {

constexpr double kWeightFloor = 1e-3; // weights live in (0, 1]

} // namespace

ParameterSpace make_preference_space(const ModelConfig& cfg) {
    ParameterSpace space;
    const auto add_dims = [&space](const std::vector<std::string>& labels, const std::string& side) {
        for (const auto& label : labels) {
            space.params.push_back({side + "_sign " + label, -1.0, 1.0});
            space.init.push_back(0.0);
            space.params.push_back({side + "_weight " + label, kWeightFloor, 1.0});
            space.init.push_back(0.5);
        }
    };
    add_dims(value_dim_labels(cfg), "p");
    add_dims(difference_dim_labels(cfg), "h");
    return space;
}

ParameterSpace make_membership_space(const ModelConfig& cfg) {
    if (!cfg.age_fuzzy())
        throw std::invalid_argument("make_membership_space: family has no fuzzy partitions");
    ParameterSpace space;
    const auto add_partition = [&](int n_sets, const char* prefix) {
        const FuzzyPartition part =
            default_partition(n_sets, cfg.domain_lo, cfg.domain_hi, cfg.default_sigma);
        const double spacing = n_sets >= 2 ? (cfg.domain_hi - cfg.domain_lo) / (n_sets - 1)
                                           : (cfg.domain_hi - cfg.domain_lo);
        for (int k = 0; k < n_sets; ++k) {
            const double mu = part.sets[static_cast<std::size_t>(k)].mu;
            space.params.push_back(
                {std::string("mu_") + prefix + "_" + std::to_string(k + 1), mu - 0.5 * spacing,
                 mu + 0.5 * spacing});
            space.init.push_back(mu);
            space.params.push_back(
                {std::string("sigma_") + prefix + "_" + std::to_string(k + 1), 1.0, 9.0});
            space.init.push_back(cfg.default_sigma);
        }
    };
    add_partition(cfg.age_value_sets, "p");
    add_partition(cfg.age_diff_sets, "h");
    return space;
}

ParameterSpace subset_space(const ParameterSpace& space, const std::vector<std::string>& names) {
    ParameterSpace out;
    for (const auto& name : names) {
        bool found = false;
        for (std::size_t i = 0; i < space.params.size(); ++i) {
            if (space.params[i].name == name) {
                out.params.push_back(space.params[i]);
                out.init.push_back(space.init[i]);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("subset_space: unknown parameter '" + name + "'");
    }
    return out;
}

double threshold_trinity(double relaxed_sign) {
    if (relaxed_sign >= 0.33) return 1.0;
    if (relaxed_sign <= -0.33) return -1.0;
    return 0.0;
}

PreferenceProfile profile_from_preference_values(const ModelConfig& cfg,
                                                 std::span<const double> values) {
    const std::size_t z = value_dim_labels(cfg).size();
    const std::size_t zh = difference_dim_labels(cfg).size();
    if (values.size() != 2 * (z + zh))
        throw std::invalid_argument("profile_from_preference_values: wrong vector length");
    PreferenceProfile profile;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < z; ++i) {
        profile.p.push_back(threshold_trinity(values[idx++]));
        profile.w_p.push_back(values[idx++]);
    }
    for (std::size_t i = 0; i < zh; ++i) {
        profile.h.push_back(threshold_trinity(values[idx++]));
        profile.w_h.push_back(values[idx++]);
    }
    return profile;
}

RepresentationPrinciple principle_from_membership_values(const ModelConfig& cfg,
                                                          std::span<const std::string> names,
                                                          std::span<const double> values) {
    if (names.size() != values.size())
        throw std::invalid_argument("principle_from_membership_values: names/values mismatch");
    RepresentationPrinciple principle = build_principle(cfg);
    FeatureRepresentation& age = principle.features.front();
    if (!cfg.age_fuzzy())
        throw std::invalid_argument("principle_from_membership_values: family has no fuzzy partitions");

    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string& name = names[i];
        // Parse "mu_p_3" / "sigma_h_1" style names.
        const bool is_mu = name.rfind("mu_", 0) == 0;
        const bool is_sigma = name.rfind("sigma_", 0) == 0;
        if (!is_mu && !is_sigma)
            throw std::invalid_argument("principle_from_membership_values: bad name '" + name + "'");
        const std::string rest = name.substr(is_mu ? 3 : 6); // "p_3"
        if (rest.size() < 3 || rest[1] != '_' || (rest[0] != 'p' && rest[0] != 'h'))
            throw std::invalid_argument("principle_from_membership_values: bad name '" + name + "'");
        const bool value_side = rest[0] == 'p';
        const int k = std::stoi(rest.substr(2)) - 1;
        FuzzyPartition& part = value_side ? *age.value_partition : *age.difference_partition;
        if (k < 0 || k >= static_cast<int>(part.size()))
            throw std::invalid_argument("principle_from_membership_values: set index out of range in '" +
                                        name + "'");
        if (is_mu)
            part.sets[static_cast<std::size_t>(k)].mu = values[i];
        else
            part.sets[static_cast<std::size_t>(k)].sigma = values[i];
    }
    // Optimized mu values may reorder; keep each partition sorted so the
    // strictly-increasing invariant holds (set identity is positional only
    // in the report labels).
    const auto sort_sets = [](FuzzyPartition& part) {
        std::sort(part.sets.begin(), part.sets.end(),
                  [](const MembershipFunction& a, const MembershipFunction& b) { return a.mu < b.mu; });
        for (std::size_t i = 1; i < part.sets.size(); ++i)
            if (part.sets[i].mu <= part.sets[i - 1].mu)
                part.sets[i].mu = std::nextafter(part.sets[i - 1].mu,
                                                 std::numeric_limits<double>::infinity());
    };
    sort_sets(*age.value_partition);
    sort_sets(*age.difference_partition);
    return principle;
}

double evaluate_candidate(const RepresentationPrinciple& principle,
                          const PreferenceProfile& profile, const ContactMatrix& target,
                          const Population& pop, const SimulationSettings& sim) {
    FormationConfig fc;
    fc.encounter_rate = sim.encounter_rate;
    fc.edge_budget = sim.edge_budget;
    fc.noise_sigma = sim.noise_sigma;
    fc.seed = sim.formation_seed;
    const Network net = form_network(pop, ProfileSet::shared(profile),
                                     PrincipleSet::shared(principle), fc);
    return eu_distance(matrix_from_network(net, pop), target);
}

std::function<double(std::span<const double>)> preference_objective(
    const ModelConfig& cfg, const ContactMatrix& target, const Population& pop,
    const SimulationSettings& sim) {
    return [cfg, &target, &pop, sim](std::span<const double> values) {
        const RepresentationPrinciple principle = build_principle(cfg);
        const PreferenceProfile profile = profile_from_preference_values(cfg, values);
        return evaluate_candidate(principle, profile, target, pop, sim);
    };
}

std::function<double(std::span<const double>)> membership_objective(
    const ModelConfig& cfg, std::vector<std::string> names, const PreferenceProfile& profile,
    const ContactMatrix& target, const Population& pop, const SimulationSettings& sim) {
    return [cfg, names = std::move(names), profile, &target, &pop,
            sim](std::span<const double> values) {
        const RepresentationPrinciple principle =
            principle_from_membership_values(cfg, names, values);
        return evaluate_candidate(principle, profile, target, pop, sim);
    };
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Expected improvement for minimization, computed on the surrogate's
// standardized scale.
double expected_improvement(const GaussianProcess& gp, const Eigen::VectorXd& x, double best_std,
                            double xi) {
    const auto pred = gp.predict(x);
    const double mean_std = (pred.mean - gp.y_mean()) / gp.y_scale();
    const double sd_std = pred.stddev / gp.y_scale();
    if (sd_std < 1e-12) return 0.0;
    const double z = (best_std - mean_std - xi) / sd_std;
    return sd_std * (z * normal_cdf(z) + normal_pdf(z));
}

// Latin hypercube sample of n points in [0,1]^d.
std::vector<Eigen::VectorXd> latin_hypercube(int n, int d, Rng& rng) {
    std::vector<Eigen::VectorXd> points(static_cast<std::size_t>(n), Eigen::VectorXd(d));
    for (int dim = 0; dim < d; ++dim) {
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
        for (int i = 0; i < n; ++i)
            points[static_cast<std::size_t>(i)](dim) =
                (order[static_cast<std::size_t>(i)] + rng.uniform01()) / n;
    }
    return points;
}

} // namespace

CalibrationResult bayesian_optimize(const ParameterSpace& space,
                                    const std::function<double(std::span<const double>)>& objective,
                                    const BoConfig& cfg) {
    space.validate();
    if (cfg.budget < 1) throw std::invalid_argument("bayesian_optimize: budget must be >= 1");
    const auto start_time = std::chrono::steady_clock::now();
    const int d = static_cast<int>(space.dim());

    Rng rng = Rng::stream(cfg.seed, 0xB0);
    CalibrationResult result;
    result.best_eu = std::numeric_limits<double>::infinity();

    std::vector<Eigen::VectorXd> xs_norm; // evaluated points, normalized
    std::vector<double> ys;

    const auto to_natural = [&](const Eigen::VectorXd& u) {
        std::vector<double> v(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            const auto& p = space.params[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(i)] = p.lo + u(i) * (p.hi - p.lo);
        }
        return v;
    };
    const auto evaluate_at = [&](const Eigen::VectorXd& u) {
        std::vector<double> natural = to_natural(u);
        double y;
        try {
            y = objective(natural);
        } catch (const std::exception& e) {
            std::string msg = "objective failed at [";
            for (std::size_t i = 0; i < natural.size(); ++i)
                msg += (i ? ", " : "") + std::to_string(natural[i]);
            throw std::runtime_error(msg + "]: " + e.what());
        }
        xs_norm.push_back(u);
        ys.push_back(y);
        result.trace.emplace_back(natural, y);
        result.eval_count += 1;
        if (y < result.best_eu) {
            result.best_eu = y;
            result.best_params = std::move(natural);
        }
        return y;
    };

    // Initial design: the init point first, then a Latin-hypercube fill.
    Eigen::VectorXd init_norm(d);
    for (int i = 0; i < d; ++i) {
        const auto& p = space.params[static_cast<std::size_t>(i)];
        init_norm(i) = (space.init[static_cast<std::size_t>(i)] - p.lo) / (p.hi - p.lo);
    }
    evaluate_at(init_norm);

    int n_init = cfg.initial_design > 0
                     ? cfg.initial_design
                     : std::clamp(d / 2 + 3, 5, std::max(5, cfg.budget / 3));
    n_init = std::min(n_init, cfg.budget);
    if (n_init > 1) {
        const auto fill = latin_hypercube(n_init - 1, d, rng);
        for (const auto& u : fill) {
            if (result.eval_count >= cfg.budget) break;
            evaluate_at(u);
        }
    }

    GaussianProcess gp;
    int since_refit = 0;
    while (result.eval_count < cfg.budget) {
        const int n = static_cast<int>(ys.size());
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            X.row(i) = xs_norm[static_cast<std::size_t>(i)].transpose();
            y(i) = ys[static_cast<std::size_t>(i)];
        }
        const int refit_every = n <= 30 ? 4 : cfg.hyper_refit_every;
        const bool refit = !gp.fitted() || since_refit >= refit_every;
        gp.fit(X, y, rng, refit);
        since_refit = refit ? 0 : since_refit + 1;

        const double best_std = (result.best_eu - gp.y_mean()) / gp.y_scale();

        // Incumbent set: up to three of the best distinct-valued points.
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return ys[static_cast<std::size_t>(a)] < ys[static_cast<std::size_t>(b)]; });
        std::vector<int> incumbents{order.front()};
        for (int idx : order) {
            if (static_cast<int>(incumbents.size()) >= 3) break;
            if (ys[static_cast<std::size_t>(idx)] !=
                ys[static_cast<std::size_t>(incumbents.back())])
                incumbents.push_back(idx);
        }

        // Candidate pool: global Latin-hypercube coverage that anneals
        // toward incumbent moves as the budget is spent. Most local moves
        // resample a small random subset of coordinates (effective on the
        // plateaus the sign thresholding creates), the remainder jitter
        // every coordinate.
        const double progress = static_cast<double>(result.eval_count) / cfg.budget;
        const double global_fraction = std::max(0.2, 0.35 * (1.0 - progress));
        const int n_global = static_cast<int>(cfg.candidate_pool * global_fraction);
        const int n_local = cfg.candidate_pool - n_global;
        std::vector<Eigen::VectorXd> candidates = latin_hypercube(n_global, d, rng);
        for (int k = 0; k < n_local; ++k) {
            const int which = static_cast<int>(
                incumbents[static_cast<std::size_t>(rng.uniform_int(
                    0, static_cast<long long>(incumbents.size()) - 1))]);
            Eigen::VectorXd c = xs_norm[static_cast<std::size_t>(which)];
            switch (k % 4) {
                case 0: { // resample a few random coordinates
                    int moves = 1;
                    while (moves < d && rng.uniform01() < 0.5) ++moves;
                    for (int m = 0; m < moves; ++m)
                        c(rng.uniform_int(0, d - 1)) = rng.uniform01();
                    break;
                }
                case 1:
                case 2: { // resample an adjacent coordinate block
                    const int i = static_cast<int>(rng.uniform_int(0, d - 1));
                    c(i) = rng.uniform01();
                    if (i + 1 < d) c(i + 1) = rng.uniform01();
                    break;
                }
                default: // jitter every coordinate
                    for (int i = 0; i < d; ++i)
                        c(i) = std::clamp(c(i) + 0.1 * rng.normal(), 0.0, 1.0);
            }
            candidates.push_back(std::move(c));
        }

        // The objective is deterministic: re-evaluating a known point is
        // pure waste, so exact duplicates are skipped.
        const auto already_evaluated = [&](const Eigen::VectorXd& c) {
            for (const auto& x : xs_norm)
                if ((x - c).cwiseAbs().maxCoeff() == 0.0) return true;
            return false;
        };

        double best_ei = -1.0;
        const Eigen::VectorXd* chosen = nullptr;
        for (const auto& c : candidates) {
            if (already_evaluated(c)) continue;
            const double ei = expected_improvement(gp, c, best_std, cfg.xi);
            if (ei > best_ei) {
                best_ei = ei;
                chosen = &c;
            }
        }
        // Degenerate surrogate or an exhausted pool: take a fresh point.
        Eigen::VectorXd next;
        if (chosen != nullptr && best_ei > 0.0) {
            next = *chosen;
            // Coordinate-descent polish of the acquisition around the pool
            // winner; surrogate-only, costs no objective evaluations.
            for (int sweep = 0; sweep < 2; ++sweep) {
                for (int i = 0; i < d; ++i) {
                    for (double step : {0.1, -0.1, 0.03, -0.03}) {
                        Eigen::VectorXd probe = next;
                        probe(i) = std::clamp(probe(i) + step, 0.0, 1.0);
                        const double ei = expected_improvement(gp, probe, best_std, cfg.xi);
                        if (ei > best_ei && !already_evaluated(probe)) {
                            best_ei = ei;
                            next = std::move(probe);
                        }
                    }
                }
            }
        } else {
            next.resize(d);
            for (int i = 0; i < d; ++i) next(i) = rng.uniform01();
        }
        evaluate_at(next);
        ++since_refit;
    }

    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return result;
}

std::vector<FamilyResult> compare_model_families(const ContactMatrix& target,
                                                 const Population& pop,
                                                 const SimulationSettings& sim, int budget,
                                                 std::uint64_t seed) {
    std::vector<FamilyResult> results;
    for (ModelFamily family : all_families()) {
        ModelConfig cfg;
        cfg.family = family;
        FamilyResult fr;
        fr.family = family;
        const auto start = std::chrono::steady_clock::now();
        if (family == ModelFamily::RN) {
            // No features, hence no preference parameters: a single run.
            const RepresentationPrinciple principle = build_principle(cfg);
            fr.best_eu = evaluate_candidate(principle, PreferenceProfile{}, target, pop, sim);
            fr.eval_count = 1;
        } else {
            const ParameterSpace space = make_preference_space(cfg);
            BoConfig bo;
            bo.budget = budget;
            bo.seed = derive_seed(seed, static_cast<std::uint64_t>(family));
            const CalibrationResult r =
                bayesian_optimize(space, preference_objective(cfg, target, pop, sim), bo);
            fr.best_eu = r.best_eu;
            fr.eval_count = r.eval_count;
            fr.best_profile = profile_from_preference_values(cfg, r.best_params);
        }
        fr.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(fr));
    }
    return results;
}

GridSearchResult grid_search_fuzzy_sets(const ContactMatrix& target, const Population& pop,
                                        const SimulationSettings& sim,
                                        const GridSearchConfig& cfg) {
    if (cfg.value_lo < 1 || cfg.diff_lo < 1 || cfg.value_hi < cfg.value_lo ||
        cfg.diff_hi < cfg.diff_lo)
        throw std::invalid_argument("grid_search_fuzzy_sets: bad set-count ranges");

    GridSearchResult out;
    const int rows = cfg.value_hi - cfg.value_lo + 1;
    const int cols = cfg.diff_hi - cfg.diff_lo + 1;
    out.eu = Eigen::MatrixXd::Zero(rows, cols);
    out.best_eu = std::numeric_limits<double>::infinity();

    for (int p = cfg.value_lo; p <= cfg.value_hi; ++p) {
        for (int h = cfg.diff_lo; h <= cfg.diff_hi; ++h) {
            ModelConfig mc;
            mc.family = ModelFamily::HN_AfSc;
            mc.age_value_sets = p;
            mc.age_diff_sets = h;
            const ParameterSpace space = make_preference_space(mc);
            BoConfig bo;
            bo.budget = cfg.inner_budget;
            // One shared optimizer seed across cells: cell comparisons are
            // then paired (common random numbers), so the argmin reflects
            // structure rather than per-cell sampling luck.
            bo.seed = cfg.seed;
            const CalibrationResult r =
                bayesian_optimize(space, preference_objective(mc, target, pop, sim), bo);
            out.eu(p - cfg.value_lo, h - cfg.diff_lo) = r.best_eu;
            if (r.best_eu < out.best_eu) {
                out.best_eu = r.best_eu;
                out.best_value_sets = p;
                out.best_diff_sets = h;
                out.best_profile = profile_from_preference_values(mc, r.best_params);
                out.best_preference_values = r.best_params;
            }
        }
    }
    return out;
}

} // namespace contactnet
