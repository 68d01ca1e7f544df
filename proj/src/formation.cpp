#include "contactnet/formation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "contactnet/errors.hpp"
#include "contactnet/rng.hpp"

namespace contactnet {

void FormationConfig::validate(int n) const {
    if (!(encounter_rate >= 0.0 && encounter_rate <= 1.0))
        throw ConfigError("FormationConfig: encounter_rate must lie in [0, 1]");
    if (noise_sigma < 0.0) throw ConfigError("FormationConfig: noise_sigma must be >= 0");
    const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (edge_budget < 0) throw ConfigError("FormationConfig: edge_budget must be >= 0");
    if (edge_budget > total_pairs)
        throw ConfigError("FormationConfig: edge_budget " + std::to_string(edge_budget) +
                          " exceeds the " + std::to_string(total_pairs) + " node pairs");
}

Network form_network(const Population& pop, const ProfileSet& profiles,
                     const PrincipleSet& principles, const FormationConfig& cfg) {
    const int n = pop.size();
    cfg.validate(n);

    struct ScoredPair {
        double score;
        long long pair_index;
        int u, v;
    };

    Rng encounter_rng = Rng::stream(cfg.seed, 0);
    Rng noise_rng = Rng::stream(cfg.seed, 1);

    std::vector<ScoredPair> met;
    long long pair_index = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++pair_index) {
            const double u_enc = encounter_rng.uniform01();
            const double eps = noise_rng.normal();
            if (u_enc < cfg.encounter_rate) {
                const double s = pair_score(pop.nodes[static_cast<std::size_t>(i)],
                                            pop.nodes[static_cast<std::size_t>(j)], profiles,
                                            principles, cfg.noise_sigma, true, eps);
                met.push_back({s, pair_index, i, j});
            }
        }
    }

    std::sort(met.begin(), met.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.pair_index < b.pair_index;
    });

    Network net;
    net.n = n;
    const std::size_t keep =
        std::min<std::size_t>(met.size(), static_cast<std::size_t>(cfg.edge_budget));
    net.shortfall = static_cast<long long>(met.size()) < cfg.edge_budget;
    net.edges.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) net.edges.emplace_back(met[k].u, met[k].v);
    std::sort(net.edges.begin(), net.edges.end());
    return net;
}

std::vector<std::vector<int>> build_adjacency(const Network& net) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(net.n));
    for (const auto& [u, v] : net.edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

namespace {

template <typename T>
std::pair<double, double> mean_and_stddev(const std::vector<T>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (const T& x : xs) mean += static_cast<double>(x);
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (const T& x : xs) {
        const double d = static_cast<double>(x) - mean;
        var += d * d;
    }
    var /= static_cast<double>(xs.size());
    return {mean, std::sqrt(var)};
}

} // namespace

DegreeStats degree_stats(const Network& net) {
    DegreeStats st;
    st.degree.assign(static_cast<std::size_t>(net.n), 0);
    for (const auto& [u, v] : net.edges) {
        st.degree[static_cast<std::size_t>(u)] += 1;
        st.degree[static_cast<std::size_t>(v)] += 1;
    }
    if (net.n == 0) return st;
    std::tie(st.avg, st.stddev) = mean_and_stddev(st.degree);
    st.max_degree = *std::max_element(st.degree.begin(), st.degree.end());
    st.min_degree = *std::min_element(st.degree.begin(), st.degree.end());
    for (int d : st.degree) (d > 0 ? st.connected : st.unconnected) += 1;
    return st;
}

ClusteringStats clustering_stats(const Network& net) {
    ClusteringStats st;
    st.coefficient.assign(static_cast<std::size_t>(net.n), 0.0);
    auto adj = build_adjacency(net);
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());

    for (int v = 0; v < net.n; ++v) {
        const auto& nbrs = adj[static_cast<std::size_t>(v)];
        const std::size_t d = nbrs.size();
        if (d < 2) continue;
        long long links = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const auto& other = adj[static_cast<std::size_t>(nbrs[i])];
            for (std::size_t j = i + 1; j < d; ++j)
                if (std::binary_search(other.begin(), other.end(), nbrs[j])) ++links;
        }
        st.coefficient[static_cast<std::size_t>(v)] =
            2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
    }
    if (net.n == 0) return st;
    std::tie(st.avg, st.stddev) = mean_and_stddev(st.coefficient);
    st.max_coeff = *std::max_element(st.coefficient.begin(), st.coefficient.end());
    st.min_coeff = *std::min_element(st.coefficient.begin(), st.coefficient.end());
    return st;
}

PathStats shortest_path_matrix(const Network& net, double fake_length) {
    PathStats st;
    st.n = net.n;
    st.fake_length = fake_length;
    const std::size_t n = static_cast<std::size_t>(net.n);
    st.dist.assign(n * n, fake_length);
    const auto adj = build_adjacency(net);

    std::vector<int> hops(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(hops.begin(), hops.end(), -1);
        hops[s] = 0;
        std::deque<int> queue{static_cast<int>(s)};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (hops[static_cast<std::size_t>(w)] < 0) {
                    hops[static_cast<std::size_t>(w)] = hops[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (std::size_t t = 0; t < n; ++t)
            if (hops[t] >= 0) st.dist[s * n + t] = static_cast<double>(hops[t]);
        st.dist[s * n + s] = 0.0;
    }

    if (net.n < 2) return st;
    double sum = 0.0, sumsq = 0.0;
    double max_len = 0.0, min_len = fake_length;
    long long fakes = 0;
    const double count = static_cast<double>(net.n) * (net.n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = st.dist[i * n + j];
            if (d == fake_length) ++fakes;
            sum += d;
            sumsq += d * d;
            max_len = std::max(max_len, d);
            min_len = std::min(min_len, d);
        }
    }
    st.fake_ordered = fakes;
    st.fake_unordered = fakes / 2;
    st.avg = sum / count;
    st.stddev = std::sqrt(std::max(0.0, sumsq / count - st.avg * st.avg));
    st.max_length = max_len;
    st.min_length = min_len;
    return st;
}

} // namespace contactnet
