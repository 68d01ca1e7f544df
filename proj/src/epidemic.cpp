#include "contactnet/epidemic.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "contactnet/rng.hpp"

namespace contactnet {

void EpidemicParams::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("EpidemicParams: gamma must lie in [0, 1]");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("EpidemicParams: eta must lie in [0, 1]");
    if (max_steps < 0) throw std::invalid_argument("EpidemicParams: max_steps must be >= 0");
}

int select_seed(const Network& net) {
    if (net.n == 0) throw std::invalid_argument("select_seed: empty network");
    const auto st = degree_stats(net);
    int best = 0;
    for (int v = 1; v < net.n; ++v)
        if (st.degree[static_cast<std::size_t>(v)] > st.degree[static_cast<std::size_t>(best)])
            best = v;
    return best;
}

std::vector<std::uint8_t> step_infection(const std::vector<std::uint8_t>& state,
                                         const std::vector<std::vector<int>>& adjacency,
                                         double gamma, double eta, Rng& rng) {
    const std::size_t n = state.size();
    std::vector<std::uint8_t> next = state;
    for (std::size_t v = 0; v < n; ++v) {
        if (state[v]) continue;
        int infected_neighbours = 0;
        for (int w : adjacency[v])
            if (state[static_cast<std::size_t>(w)]) ++infected_neighbours;
        if (infected_neighbours == 0) continue;
        const double p_infect = 1.0 - std::pow(1.0 - gamma, infected_neighbours);
        if (rng.uniform01() < p_infect) next[v] = 1;
    }
    if (eta > 0.0) {
        for (std::size_t v = 0; v < n; ++v)
            if (state[v] && rng.uniform01() < eta) next[v] = 0;
    }
    return next;
}

EpidemicTrace run_si(const Network& net, const EpidemicParams& params) {
    params.validate();
    const int n = net.n;
    EpidemicTrace trace;
    trace.seed_id = params.seed_node ? *params.seed_node : select_seed(net);
    if (trace.seed_id < 0 || trace.seed_id >= n)
        throw std::invalid_argument("run_si: seed node out of range");

    const auto adjacency = build_adjacency(net);

    trace.distance_to_seed.assign(static_cast<std::size_t>(n),
                                  static_cast<int>(trace.fake_distance));
    {
        std::deque<int> queue{trace.seed_id};
        trace.distance_to_seed[static_cast<std::size_t>(trace.seed_id)] = 0;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : adjacency[static_cast<std::size_t>(v)]) {
                if (trace.distance_to_seed[static_cast<std::size_t>(w)] ==
                    static_cast<int>(trace.fake_distance)) {
                    trace.distance_to_seed[static_cast<std::size_t>(w)] =
                        trace.distance_to_seed[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    std::vector<std::uint8_t> state(static_cast<std::size_t>(n), 0);
    state[static_cast<std::size_t>(trace.seed_id)] = 1;
    trace.infection_time.assign(static_cast<std::size_t>(n), -1);
    trace.infection_time[static_cast<std::size_t>(trace.seed_id)] = 0;

    Rng rng(params.rng_seed);
    for (int step = 1; step <= params.max_steps; ++step) {
        bool exposed = false;
        for (int v = 0; v < n && !exposed; ++v) {
            if (state[static_cast<std::size_t>(v)]) continue;
            for (int w : adjacency[static_cast<std::size_t>(v)]) {
                if (state[static_cast<std::size_t>(w)]) {
                    exposed = true;
                    break;
                }
            }
        }
        if (!exposed) break;
        state = step_infection(state, adjacency, params.gamma, params.eta, rng);
        for (int v = 0; v < n; ++v) {
            if (state[static_cast<std::size_t>(v)] &&
                trace.infection_time[static_cast<std::size_t>(v)] < 0)
                trace.infection_time[static_cast<std::size_t>(v)] = step;
        }
        trace.steps_run = step;
    }
    return trace;
}

double par(const EpidemicTrace& trace, int t_steps, int d_hops, int population_size) {
    if (d_hops > t_steps) throw std::invalid_argument("par: requires D <= T");
    if (t_steps < 0 || population_size <= 0) throw std::invalid_argument("par: bad arguments");
    int count = 0;
    for (std::size_t v = 0; v < trace.infection_time.size(); ++v) {
        if (trace.infection_time[v] >= 0 && trace.infection_time[v] <= t_steps &&
            trace.distance_to_seed[v] <= d_hops)
            ++count;
    }
    return static_cast<double>(count) / static_cast<double>(population_size);
}

std::vector<GroupPar> par_by_group(const EpidemicTrace& trace, const Population& pop, int t_steps,
                                   int d_hops) {
    if (d_hops > t_steps) throw std::invalid_argument("par_by_group: requires D <= T");
    const int g = group_count(Grouping::AgeDecadeBySex);
    std::vector<int> sizes(static_cast<std::size_t>(g), 0);
    std::vector<int> infected(static_cast<std::size_t>(g), 0);
    for (const auto& nf : pop.nodes) {
        const std::size_t gi = static_cast<std::size_t>(group_index(nf, Grouping::AgeDecadeBySex));
        sizes[gi] += 1;
        const std::size_t v = static_cast<std::size_t>(nf.id);
        if (trace.infection_time[v] >= 0 && trace.infection_time[v] <= t_steps &&
            trace.distance_to_seed[v] <= d_hops)
            infected[gi] += 1;
    }
    std::vector<GroupPar> out;
    for (int i = 0; i < g; ++i) {
        if (sizes[static_cast<std::size_t>(i)] == 0) continue;
        GroupPar gp;
        gp.label = group_label(Grouping::AgeDecadeBySex, i);
        gp.group_size = sizes[static_cast<std::size_t>(i)];
        gp.infected = infected[static_cast<std::size_t>(i)];
        gp.value = static_cast<double>(gp.infected) / static_cast<double>(gp.group_size);
        out.push_back(std::move(gp));
    }
    return out;
}

} // namespace contactnet
