#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "contactnet/population.hpp"
#include "contactnet/scoring.hpp"

namespace contactnet {

// Undirected simple graph over node ids 0..n-1. Edges are stored as (u, v)
// with u < v, in ascending pair order.
struct Network {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    // True when fewer pairs were encountered than the edge budget asked for.
    bool shortfall = false;

    long long edge_count() const { return static_cast<long long>(edges.size()); }
};

struct FormationConfig {
    double encounter_rate = 0.8; // zeta
    long long edge_budget = 0;   // lambda_e
    double noise_sigma = 0.01;   // spread of the score noise epsilon
    std::uint64_t seed = 0;

    void validate(int n) const; // throws ConfigError
};

// Score every node pair under Bernoulli(zeta) encounters and keep the
// edge_budget highest-scoring encountered pairs. One encounter uniform and
// one noise draw per unordered pair in pair-id order; the two streams are
// independent, so encounter-rate sweeps reuse the same uniforms.
Network form_network(const Population& pop, const ProfileSet& profiles,
                     const PrincipleSet& principles, const FormationConfig& cfg);

std::vector<std::vector<int>> build_adjacency(const Network& net);

struct DegreeStats {
    std::vector<int> degree;
    double avg = 0.0, stddev = 0.0;
    int max_degree = 0, min_degree = 0;
    int connected = 0, unconnected = 0; // nodes with degree > 0 / == 0
};
DegreeStats degree_stats(const Network& net);

// Local clustering coefficient per node: triangles / (deg choose 2);
// nodes with degree < 2 get coefficient 0.
struct ClusteringStats {
    std::vector<double> coefficient;
    double avg = 0.0, stddev = 0.0, max_coeff = 0.0, min_coeff = 0.0;
};
ClusteringStats clustering_stats(const Network& net);

// All-pairs BFS hop distances with unreachable pairs set to fake_length.
// Summary statistics run over ordered off-diagonal entries.
struct PathStats {
    int n = 0;
    std::vector<double> dist; // row-major n*n, diagonal 0
    double fake_length = 90.0;
    long long fake_ordered = 0;
    long long fake_unordered = 0;
    double avg = 0.0, stddev = 0.0, max_length = 0.0, min_length = 0.0;

    double at(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
};
PathStats shortest_path_matrix(const Network& net, double fake_length = 90.0);

} // namespace contactnet
