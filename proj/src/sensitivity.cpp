#include "contactnet/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "contactnet/rng.hpp"

namespace contactnet {

std::vector<StarSample> make_star_samples(int dim, const SensitivityConfig& cfg) {
    if (dim < 1) throw std::invalid_argument("make_star_samples: dim must be >= 1");
    if (!(cfg.delta_h > 0.0 && cfg.delta_h <= 0.5))
        throw std::invalid_argument("make_star_samples: delta_h must lie in (0, 0.5]");
    if (cfg.n_stars < 1) throw std::invalid_argument("make_star_samples: need at least one star");

    Rng rng = Rng::stream(cfg.seed, 0x5A);
    const int n = cfg.n_stars;

    // Latin-hypercube centres.
    std::vector<StarSample> stars(static_cast<std::size_t>(n));
    for (auto& s : stars) s.center = Eigen::VectorXd(dim);
    for (int d = 0; d < dim; ++d) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
        for (int i = 0; i < n; ++i)
            stars[static_cast<std::size_t>(i)].center(d) =
                (order[static_cast<std::size_t>(i)] + rng.uniform01()) / n;
    }

    for (auto& s : stars) {
        s.section_coords.resize(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d) {
            const double c = s.center(d);
            // Grid through the centre at spacing delta_h, clipped to [0, 1].
            const int k_lo = -static_cast<int>(std::floor(c / cfg.delta_h + 1e-12));
            const int k_hi = static_cast<int>(std::floor((1.0 - c) / cfg.delta_h + 1e-12));
            auto& coords = s.section_coords[static_cast<std::size_t>(d)];
            coords.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
            for (int k = k_lo; k <= k_hi; ++k) coords.push_back(c + k * cfg.delta_h);
        }
    }
    return stars;
}

EvaluatedStars::EvaluatedStars(const Objective& objective, const std::vector<StarSample>& stars,
                               double delta_h)
    : delta_h_(delta_h) {
    if (stars.empty()) throw std::invalid_argument("EvaluatedStars: no stars");
    dim_ = stars.front().dim();

    double sum = 0.0, sumsq = 0.0;
    long long count = 0;
    sections_.reserve(stars.size());
    for (const auto& star : stars) {
        std::vector<std::vector<double>> per_dim(static_cast<std::size_t>(dim_));
        // Evaluate the centre once and reuse it in every cross-section.
        std::vector<double> point(static_cast<std::size_t>(dim_));
        for (int d = 0; d < dim_; ++d) point[static_cast<std::size_t>(d)] = star.center(d);
        const double y_center = objective(point);
        sum += y_center;
        sumsq += y_center * y_center;
        ++count;

        for (int d = 0; d < dim_; ++d) {
            const auto& coords = star.section_coords[static_cast<std::size_t>(d)];
            auto& ys = per_dim[static_cast<std::size_t>(d)];
            ys.reserve(coords.size());
            for (double c : coords) {
                if (std::abs(c - star.center(d)) < 1e-12) {
                    ys.push_back(y_center);
                    continue;
                }
                point[static_cast<std::size_t>(d)] = c;
                const double y = objective(point);
                ys.push_back(y);
                sum += y;
                sumsq += y * y;
                ++count;
            }
            point[static_cast<std::size_t>(d)] = star.center(d);
        }
        sections_.push_back(std::move(per_dim));
    }
    const double mean = sum / static_cast<double>(count);
    total_variance_ = std::max(0.0, sumsq / static_cast<double>(count) - mean * mean);
}

std::span<const double> EvaluatedStars::section_values(int star, int dimension) const {
    return sections_[static_cast<std::size_t>(star)][static_cast<std::size_t>(dimension)];
}

double EvaluatedStars::total_variance() const { return total_variance_; }

namespace {

int lag_steps(double lag, double delta_h) {
    const double ratio = lag / delta_h;
    const int steps = static_cast<int>(std::llround(ratio));
    if (steps < 1 || std::abs(ratio - steps) > 1e-9)
        throw std::invalid_argument("variogram lag must be a positive multiple of delta_h");
    return steps;
}

} // namespace

double directional_variogram(const EvaluatedStars& table, int dimension, double lag) {
    if (dimension < 0 || dimension >= table.dim())
        throw std::invalid_argument("directional_variogram: dimension out of range");
    const int steps = lag_steps(lag, table.delta_h());

    double sum = 0.0;
    long long pairs = 0;
    for (int s = 0; s < table.star_count(); ++s) {
        const auto ys = table.section_values(s, dimension);
        for (std::size_t i = 0; i + static_cast<std::size_t>(steps) < ys.size(); ++i) {
            const double diff = ys[i + static_cast<std::size_t>(steps)] - ys[i];
            sum += diff * diff;
            ++pairs;
        }
    }
    if (pairs == 0)
        throw std::invalid_argument("directional_variogram: no point pairs at the requested lag");
    return 0.5 * sum / static_cast<double>(pairs);
}

double directional_variogram(const Objective& objective, int dimension,
                             const std::vector<StarSample>& stars, double lag) {
    double delta_h = 0.5;
    if (!stars.empty() && stars.front().dim() > 0) {
        const auto& coords = stars.front().section_coords.front();
        if (coords.size() >= 2) delta_h = coords[1] - coords[0];
    }
    return directional_variogram(EvaluatedStars(objective, stars, delta_h), dimension, lag);
}

double ivars(const EvaluatedStars& table, int dimension, double scale) {
    if (!(scale > 0.0 && scale <= 0.5))
        throw std::invalid_argument("ivars: scale must lie in (0, 0.5]");
    if (table.delta_h() > scale + 1e-12)
        throw std::invalid_argument("ivars: delta_h exceeds the integration scale");
    const int steps = static_cast<int>(std::llround(scale / table.delta_h()));
    if (std::abs(scale / table.delta_h() - steps) > 1e-9)
        throw std::invalid_argument("ivars: scale must be a multiple of delta_h");

    // Trapezoid over h = 0, delta_h, ..., scale with gamma(0) = 0.
    double integral = 0.0;
    double prev = 0.0;
    for (int k = 1; k <= steps; ++k) {
        const double gamma = directional_variogram(table, dimension, k * table.delta_h());
        integral += 0.5 * (prev + gamma) * table.delta_h();
        prev = gamma;
    }
    return integral;
}

double ivars(const Objective& objective, int dimension, const std::vector<StarSample>& stars,
             double scale) {
    double delta_h = 0.5;
    if (!stars.empty() && stars.front().dim() > 0) {
        const auto& coords = stars.front().section_coords.front();
        if (coords.size() >= 2) delta_h = coords[1] - coords[0];
    }
    return ivars(EvaluatedStars(objective, stars, delta_h), dimension, scale);
}

double sobol_total(const EvaluatedStars& table, int dimension) {
    if (dimension < 0 || dimension >= table.dim())
        throw std::invalid_argument("sobol_total: dimension out of range");
    if (table.star_count() < 2)
        throw std::invalid_argument("sobol_total: needs at least two stars");
    const double total_var = table.total_variance();
    if (total_var <= 0.0)
        throw std::invalid_argument("sobol_total: total variance of the responses is zero");

    // Mean per-section variance: each cross-section fixes every coordinate
    // except `dimension`, so its variance estimates V(y | x_~d).
    double acc = 0.0;
    int sections = 0;
    for (int s = 0; s < table.star_count(); ++s) {
        const auto ys = table.section_values(s, dimension);
        if (ys.size() < 2) continue;
        double mean = 0.0;
        for (double y : ys) mean += y;
        mean /= static_cast<double>(ys.size());
        double var = 0.0;
        for (double y : ys) var += (y - mean) * (y - mean);
        var /= static_cast<double>(ys.size());
        acc += var;
        ++sections;
    }
    if (sections == 0) throw std::invalid_argument("sobol_total: no usable cross-sections");
    return (acc / static_cast<double>(sections)) / total_var;
}

double sobol_total(const Objective& objective, int dimension,
                   const std::vector<StarSample>& stars) {
    double delta_h = 0.5;
    if (!stars.empty() && stars.front().dim() > 0) {
        const auto& coords = stars.front().section_coords.front();
        if (coords.size() >= 2) delta_h = coords[1] - coords[0];
    }
    return sobol_total(EvaluatedStars(objective, stars, delta_h), dimension);
}

namespace {

// Dense descending ranks: the largest value gets rank 1; equal values share
// a rank and the next distinct value gets the following rank.
std::vector<int> dense_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<int> ranks(values.size(), 0);
    int rank = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || values[order[i]] != prev) {
            ++rank;
            prev = values[order[i]];
        }
        ranks[order[i]] = rank;
    }
    return ranks;
}

} // namespace

SensitivityReport rank_and_select(const std::vector<std::string>& names,
                                  const std::vector<double>& ivars10,
                                  const std::vector<double>& ivars30,
                                  const std::vector<double>& ivars50,
                                  const std::vector<double>& sobol, int top_k) {
    const std::size_t d = names.size();
    if (ivars10.size() != d || ivars30.size() != d || ivars50.size() != d || sobol.size() != d)
        throw std::invalid_argument("rank_and_select: metric vectors must match names");

    SensitivityReport report;
    report.names = names;
    report.ivars10 = ivars10;
    report.ivars30 = ivars30;
    report.ivars50 = ivars50;
    report.sobol = sobol;
    report.rank_ivars10 = dense_ranks(ivars10);
    report.rank_ivars30 = dense_ranks(ivars30);
    report.rank_ivars50 = dense_ranks(ivars50);
    report.rank_sobol = dense_ranks(sobol);

    report.aggregated_rank.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        report.aggregated_rank[i] = (report.rank_ivars10[i] + report.rank_ivars30[i] +
                                     report.rank_ivars50[i] + report.rank_sobol[i]) /
                                    4.0;

    report.order.resize(d);
    std::iota(report.order.begin(), report.order.end(), 0);
    std::sort(report.order.begin(), report.order.end(), [&](int a, int b) {
        const std::size_t ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
        if (report.aggregated_rank[ia] != report.aggregated_rank[ib])
            return report.aggregated_rank[ia] < report.aggregated_rank[ib];
        return names[ia] < names[ib];
    });

    const int keep = std::min<int>(top_k, static_cast<int>(d));
    for (int i = 0; i < keep; ++i)
        report.selected.push_back(names[static_cast<std::size_t>(report.order[static_cast<std::size_t>(i)])]);
    return report;
}

SensitivityReport run_vars(const Objective& objective, const ParameterSpace& space,
                           const SensitivityConfig& cfg) {
    space.validate();
    const int d = static_cast<int>(space.dim());
    const auto stars = make_star_samples(d, cfg);

    // Evaluate in natural units; sampling happens in normalized space.
    const Objective normalized = [&](std::span<const double> u) {
        std::vector<double> natural(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            const auto& p = space.params[i];
            natural[i] = p.lo + u[i] * (p.hi - p.lo);
        }
        return objective(natural);
    };
    const EvaluatedStars table(normalized, stars, cfg.delta_h);

    std::vector<std::string> names;
    names.reserve(space.params.size());
    for (const auto& p : space.params) names.push_back(p.name);

    std::vector<double> v10(static_cast<std::size_t>(d)), v30(static_cast<std::size_t>(d)),
        v50(static_cast<std::size_t>(d)), st(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        v10[static_cast<std::size_t>(i)] = ivars(table, i, 0.10);
        v30[static_cast<std::size_t>(i)] = ivars(table, i, 0.30);
        v50[static_cast<std::size_t>(i)] = ivars(table, i, 0.50);
        st[static_cast<std::size_t>(i)] = sobol_total(table, i);
    }
    return rank_and_select(names, v10, v30, v50, st, cfg.top_k);
}

} // namespace contactnet
