#include "contactnet/contact_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace contactnet {

void ContactMatrix::validate() const {
    if (rates.rows() != rates.cols()) throw std::invalid_argument("ContactMatrix: must be square");
    if (static_cast<Eigen::Index>(bin_labels.size()) != rates.rows())
        throw std::invalid_argument("ContactMatrix: bin label count does not match matrix size");
    if (pop_sizes.size() != rates.rows())
        throw std::invalid_argument("ContactMatrix: pop_sizes length does not match matrix size");
    if ((rates.array() < 0.0).any())
        throw std::invalid_argument("ContactMatrix: negative contact rate");
    if ((pop_sizes.array() < 0.0).any())
        throw std::invalid_argument("ContactMatrix: negative population size");
}

std::vector<std::string> decade_bin_labels() {
    std::vector<std::string> labels;
    labels.reserve(9);
    for (int d = 0; d < 9; ++d)
        labels.push_back(std::to_string(10 * d) + "-" + std::to_string(10 * d + 9));
    return labels;
}

ContactMatrix reciprocal_adjust(const ContactMatrix& raw) {
    raw.validate();
    const int b = raw.bins();
    ContactMatrix out = raw;
    for (int i = 0; i < b; ++i) {
        if (raw.pop_sizes(i) > 0.0) continue;
        const bool row_zero = (raw.rates.row(i).array() == 0.0).all();
        const bool col_zero = (raw.rates.col(i).array() == 0.0).all();
        if (!row_zero || !col_zero)
            throw std::invalid_argument("reciprocal_adjust: bin '" + raw.bin_labels[static_cast<std::size_t>(i)] +
                                        "' has zero population but nonzero contacts");
    }
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < b; ++j) {
            if (raw.pop_sizes(i) == 0.0) {
                out.rates(i, j) = 0.0;
                continue;
            }
            out.rates(i, j) = (raw.rates(i, j) * raw.pop_sizes(i) + raw.rates(j, i) * raw.pop_sizes(j)) /
                              (2.0 * raw.pop_sizes(i));
        }
    }
    return out;
}

ContactMatrix matrix_from_network(const Network& net, const Population& pop) {
    const int b = 9;
    ContactMatrix out;
    out.bin_labels = decade_bin_labels();
    out.rates = Eigen::MatrixXd::Zero(b, b);
    out.pop_sizes = Eigen::VectorXd::Zero(b);

    const auto counts = group_counts(pop, Grouping::AgeDecade);
    for (int i = 0; i < b; ++i) out.pop_sizes(i) = counts[static_cast<std::size_t>(i)];

    Eigen::MatrixXd contacts = Eigen::MatrixXd::Zero(b, b);
    for (const auto& [u, v] : net.edges) {
        const int bi = pop.nodes[static_cast<std::size_t>(u)].age / 10;
        const int bj = pop.nodes[static_cast<std::size_t>(v)].age / 10;
        contacts(bi, bj) += 1.0;
        contacts(bj, bi) += 1.0; // within-bin edges land here twice, once per endpoint
    }
    for (int i = 0; i < b; ++i)
        if (out.pop_sizes(i) > 0.0) out.rates.row(i) = contacts.row(i) / out.pop_sizes(i);
    return out;
}

double eu_distance(const ContactMatrix& a, const ContactMatrix& b) {
    if (a.rates.rows() != b.rates.rows() || a.rates.cols() != b.rates.cols())
        throw std::invalid_argument("eu_distance: bin structures differ");
    return (a.rates - b.rates).norm();
}

ContactMatrix rescale_to_population(const ContactMatrix& adjusted, const Population& pop) {
    if (adjusted.bins() != 9)
        throw std::invalid_argument("rescale_to_population: expected nine 10-year bins");
    ContactMatrix out = adjusted;
    const auto counts = group_counts(pop, Grouping::AgeDecade);
    for (int i = 0; i < 9; ++i) out.pop_sizes(i) = counts[static_cast<std::size_t>(i)];
    // Bins empty in the simulated population cannot report contacts.
    for (int i = 0; i < 9; ++i) {
        if (out.pop_sizes(i) == 0.0) {
            out.rates.row(i).setZero();
            out.rates.col(i).setZero();
        }
    }
    return reciprocal_adjust(out);
}

long long derive_edge_budget(const ContactMatrix& target, const Population& pop) {
    target.validate();
    const auto counts = group_counts(pop, Grouping::AgeDecade);
    if (target.bins() != static_cast<int>(counts.size()))
        throw std::invalid_argument("derive_edge_budget: matrix bins do not match population bins");
    double total = 0.0;
    for (int i = 0; i < target.bins(); ++i)
        total += target.rates.row(i).sum() * counts[static_cast<std::size_t>(i)];
    return std::llround(total / 2.0);
}

} // namespace contactnet
