#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "contactnet/formation.hpp"
#include "contactnet/population.hpp"

namespace contactnet {

// Age-binned average-contacts-per-person matrix with per-bin population
// sizes. rates(i, j) is the average number of contacts a member of bin i
// reports with members of bin j.
struct ContactMatrix {
    std::vector<std::string> bin_labels;
    Eigen::MatrixXd rates;
    Eigen::VectorXd pop_sizes;

    int bins() const { return static_cast<int>(rates.rows()); }
    void validate() const; // throws std::invalid_argument
};

// The default nine 10-year bins over [0, 90).
std::vector<std::string> decade_bin_labels();

// Enforce total-contact symmetry: m'_ij = (m_ij*N_i + m_ji*N_j) / (2*N_i).
// Bins with zero population must have zero contacts everywhere; otherwise
// the bin is degenerate and an error is raised.
ContactMatrix reciprocal_adjust(const ContactMatrix& raw);

// Recreate a contact matrix from a simulated network: per-endpoint contact
// counts between decade bins divided by bin populations. Within-bin edges
// contribute one contact per endpoint.
ContactMatrix matrix_from_network(const Network& net, const Population& pop);

// Frobenius distance between the per-person rate matrices.
double eu_distance(const ContactMatrix& a, const ContactMatrix& b);

// Keep the per-person rates but re-anchor to the simulated population's
// decade-bin sizes, re-applying the reciprocity adjustment for those sizes.
ContactMatrix rescale_to_population(const ContactMatrix& adjusted, const Population& pop);

// Number of edges implied by an adjusted matrix over the simulation bins:
// round(sum_ij m_ij * N_i / 2) with N_i taken from the population.
// Expects a matrix already adjusted and rescaled to this population.
long long derive_edge_budget(const ContactMatrix& target, const Population& pop);

} // namespace contactnet
