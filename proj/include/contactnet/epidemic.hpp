#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contactnet/formation.hpp"
#include "contactnet/population.hpp"

namespace contactnet {

struct EpidemicParams {
    double gamma = 0.8; // transmissibility per infected contact per step
    double eta = 0.0;   // recovery rate; the SI pipeline keeps this at 0
    std::optional<int> seed_node; // explicit seed id; otherwise highest degree
    std::uint64_t rng_seed = 0;
    int max_steps = 6;

    void validate() const; // throws std::invalid_argument
};

struct EpidemicTrace {
    int seed_id = -1;
    std::vector<int> infection_time;   // step of first infection, -1 if never
    std::vector<int> distance_to_seed; // BFS hops; fake_distance if unreachable
    int steps_run = 0;
    double fake_distance = 90.0;
};

// Highest-degree node; ties broken by lowest id.
int select_seed(const Network& net);

// One synchronous update: a healthy node with k infected neighbours becomes
// infected with probability 1 - (1 - gamma)^k, all transitions evaluated
// against the previous step's state. With eta > 0 infected nodes recover
// with probability eta in the same sweep.
std::vector<std::uint8_t> step_infection(const std::vector<std::uint8_t>& state,
                                         const std::vector<std::vector<int>>& adjacency,
                                         double gamma, double eta, class Rng& rng);

// SI run from the selected seed until no healthy node is exposed or
// max_steps elapse. Deterministic for a given rng_seed.
EpidemicTrace run_si(const Network& net, const EpidemicParams& params);

// Proportion of the population infected within T steps and D hops of the
// seed (cumulative in both axes). Requires D <= T.
double par(const EpidemicTrace& trace, int t_steps, int d_hops, int population_size);

struct GroupPar {
    std::string label;
    int group_size = 0;
    int infected = 0;
    double value = 0.0;
};

// PaR per (age decade x sex) group; empty groups are omitted.
std::vector<GroupPar> par_by_group(const EpidemicTrace& trace, const Population& pop, int t_steps,
                                   int d_hops);

} // namespace contactnet
