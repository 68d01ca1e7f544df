#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "contactnet/sensitivity.hpp"

using namespace contactnet;

namespace {

SensitivityConfig config(int stars = 50, double delta_h = 0.1, std::uint64_t seed = 1) {
    SensitivityConfig cfg;
    cfg.n_stars = stars;
    cfg.delta_h = delta_h;
    cfg.seed = seed;
    return cfg;
}

Objective linear(std::vector<double> a) {
    return [a = std::move(a)](std::span<const double> x) {
        double y = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) y += a[i] * x[i];
        return y;
    };
}

} // namespace

TEST_CASE("star samples have the declared structure") {
    const auto cfg = config(20, 0.1, 3);
    const auto stars = make_star_samples(3, cfg);
    REQUIRE(stars.size() == 20);
    for (const auto& star : stars) {
        REQUIRE(star.dim() == 3);
        for (int d = 0; d < 3; ++d) {
            CHECK(star.center(d) >= 0.0);
            CHECK(star.center(d) <= 1.0);
            const auto& coords = star.section_coords[static_cast<std::size_t>(d)];
            REQUIRE(coords.size() >= 2);
            bool hits_center = false;
            for (std::size_t k = 0; k < coords.size(); ++k) {
                CHECK(coords[k] >= -1e-12);
                CHECK(coords[k] <= 1.0 + 1e-12);
                if (k > 0) CHECK(coords[k] - coords[k - 1] == doctest::Approx(0.1).epsilon(1e-12));
                if (std::abs(coords[k] - star.center(d)) < 1e-12) hits_center = true;
            }
            CHECK(hits_center); // the cross-section passes through the centre
        }
    }
}

TEST_CASE("constant objective has zero variogram and zero ivars") {
    const auto stars = make_star_samples(2, config(10));
    const Objective constant = [](std::span<const double>) { return 3.5; };
    for (int d = 0; d < 2; ++d) {
        CHECK(directional_variogram(constant, d, stars, 0.1) == 0.0);
        CHECK(directional_variogram(constant, d, stars, 0.3) == 0.0);
        CHECK(ivars(constant, d, stars, 0.1) == 0.0);
        CHECK(ivars(constant, d, stars, 0.5) == 0.0);
    }
}

TEST_CASE("linear objective matches the analytic variogram a^2 h^2 / 2") {
    const auto stars = make_star_samples(3, config(50));
    const Objective f = linear({5.0, 3.0, 1.0});
    const double a[] = {5.0, 3.0, 1.0};
    for (int d = 0; d < 3; ++d) {
        for (double h : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            const double expected = a[d] * a[d] * h * h / 2.0;
            CHECK(directional_variogram(f, d, stars, h) ==
                  doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("objective ignoring a dimension scores zero along it") {
    const auto stars = make_star_samples(3, config(30));
    const Objective f = linear({2.0, 0.0, 1.0});
    CHECK(directional_variogram(f, 1, stars, 0.1) == 0.0);
    CHECK(ivars(f, 1, stars, 0.5) == 0.0);
    CHECK(sobol_total(f, 1, stars) == doctest::Approx(0.0).epsilon(0.02));
}

TEST_CASE("ivars trapezoid values for a linear objective") {
    // gamma(h) = a^2 h^2 / 2; trapezoid with delta_h = 0.1:
    //   scale 0.1 -> 0.1 * (0 + g(0.1)) / 2            = 0.00025 a^2
    //   scale 0.3 -> + g(0.1..0.3) terms               = 0.00475 a^2
    //   scale 0.5 -> full sum                          = 0.02125 a^2
    const auto stars = make_star_samples(2, config(40));
    const double a = 3.0;
    const Objective f = linear({a, 0.5});
    CHECK(ivars(f, 0, stars, 0.1) == doctest::Approx(0.00025 * a * a).epsilon(1e-9));
    CHECK(ivars(f, 0, stars, 0.3) == doctest::Approx(0.00475 * a * a).epsilon(1e-9));
    CHECK(ivars(f, 0, stars, 0.5) == doctest::Approx(0.02125 * a * a).epsilon(1e-9));
}

TEST_CASE("ivars is monotone in scale") {
    const auto stars = make_star_samples(4, config(25, 0.1, 9));
    const Objective f = [](std::span<const double> x) {
        return std::sin(3.0 * x[0]) + x[1] * x[1] + 0.3 * x[2] * x[3];
    };
    for (int d = 0; d < 4; ++d) {
        const double v10 = ivars(f, d, stars, 0.1);
        const double v30 = ivars(f, d, stars, 0.3);
        const double v50 = ivars(f, d, stars, 0.5);
        CHECK(v10 >= 0.0);
        CHECK(v30 >= v10 - 1e-15);
        CHECK(v50 >= v30 - 1e-15);
    }
}

TEST_CASE("sobol total ordering on an additive objective") {
    const auto stars = make_star_samples(4, config(50));
    const Objective f = linear({5.0, 3.0, 1.0, 0.0});
    const double s0 = sobol_total(f, 0, stars);
    const double s1 = sobol_total(f, 1, stars);
    const double s2 = sobol_total(f, 2, stars);
    const double s3 = sobol_total(f, 3, stars);
    CHECK(s0 > s1);
    CHECK(s1 > s2);
    CHECK(s2 > s3);
    CHECK(s3 == doctest::Approx(0.0).epsilon(0.02));
    // Analytic proportions: ST_i ~ a_i^2 / sum a_j^2 = 25/35, 9/35, 1/35.
    CHECK(s0 / (s0 + s1 + s2 + 1e-300) == doctest::Approx(25.0 / 35.0).epsilon(0.05));
}

TEST_CASE("single active dimension approaches index one") {
    const auto stars = make_star_samples(3, config(50));
    const Objective f = linear({2.0, 0.0, 0.0});
    CHECK(sobol_total(f, 0, stars) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("degenerate inputs raise errors") {
    const auto stars = make_star_samples(2, config(10));
    const Objective constant = [](std::span<const double>) { return 1.0; };
    CHECK_THROWS_AS(sobol_total(constant, 0, stars), std::invalid_argument);

    const Objective f = linear({1.0, 1.0});
    CHECK_THROWS_AS(directional_variogram(f, 0, stars, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(directional_variogram(f, 0, stars, 2.0), std::invalid_argument);

    std::vector<StarSample> single;
    single.push_back(stars.front());
    CHECK_THROWS_AS(sobol_total(f, 0, single), std::invalid_argument);
}

TEST_CASE("all four metrics rank an additive function identically") {
    const auto cfg = config(50, 0.1, 12);
    const auto stars = make_star_samples(4, cfg);
    const Objective f = linear({5.0, 3.0, 1.0, 0.5});
    const EvaluatedStars table(f, stars, cfg.delta_h);
    std::vector<double> v10, v30, v50, st;
    for (int d = 0; d < 4; ++d) {
        v10.push_back(ivars(table, d, 0.10));
        v30.push_back(ivars(table, d, 0.30));
        v50.push_back(ivars(table, d, 0.50));
        st.push_back(sobol_total(table, d));
    }
    const auto report = rank_and_select({"a", "b", "c", "d"}, v10, v30, v50, st, 6);
    CHECK(report.rank_ivars10 == std::vector<int>{1, 2, 3, 4});
    CHECK(report.rank_ivars30 == std::vector<int>{1, 2, 3, 4});
    CHECK(report.rank_ivars50 == std::vector<int>{1, 2, 3, 4});
    CHECK(report.rank_sobol == std::vector<int>{1, 2, 3, 4});
    CHECK(report.selected == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("rankings are invariant under positive affine transforms") {
    const auto cfg = config(30, 0.1, 21);
    const auto stars = make_star_samples(3, cfg);
    const Objective f = [](std::span<const double> x) {
        return 2.0 * x[0] * x[0] + std::cos(4.0 * x[1]) + 0.2 * x[2];
    };
    const Objective g = [&f](std::span<const double> x) { return 7.0 * f(x) + 3.0; };
    const EvaluatedStars tf(f, stars, cfg.delta_h);
    const EvaluatedStars tg(g, stars, cfg.delta_h);
    for (int d = 0; d < 3; ++d) {
        CHECK(ivars(tg, d, 0.5) == doctest::Approx(49.0 * ivars(tf, d, 0.5)).epsilon(1e-9));
        CHECK(sobol_total(tg, d) == doctest::Approx(sobol_total(tf, d)).epsilon(1e-9));
    }
}

TEST_CASE("rank_and_select aggregates mean ranks with name tie-breaks") {
    // Metrics disagree; aggregated rank decides, ties resolve by name.
    const std::vector<std::string> names{"p1", "p2", "p3"};
    const auto report = rank_and_select(names, {3.0, 2.0, 1.0}, {3.0, 2.0, 1.0},
                                        {2.0, 3.0, 1.0}, {2.0, 3.0, 1.0}, 2);
    // p1 and p2 both average rank 1.5, p3 averages 3.
    CHECK(report.aggregated_rank[0] == doctest::Approx(1.5));
    CHECK(report.aggregated_rank[1] == doctest::Approx(1.5));
    CHECK(report.selected == std::vector<std::string>{"p1", "p2"});

    // Fewer parameters than top_k selects them all.
    const auto small = rank_and_select({"x", "y"}, {1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0},
                                       {1.0, 2.0}, 6);
    CHECK(small.selected.size() == 2);
    CHECK(small.selected.front() == "y");
}

TEST_CASE("run_vars over a bounded space reports in parameter names") {
    ParameterSpace space;
    space.params = {{"slope", 0.0, 10.0}, {"offset", -5.0, 5.0}};
    space.init = {5.0, 0.0};
    // Natural-units objective: only "slope" matters.
    const Objective f = [](std::span<const double> x) { return x[0] * 2.0; };
    SensitivityConfig cfg = config(20, 0.1, 31);
    const auto report = run_vars(f, space, cfg);
    CHECK(report.names == std::vector<std::string>{"slope", "offset"});
    CHECK(report.selected.front() == "slope");
    CHECK(report.ivars50[0] > report.ivars50[1]);
    CHECK(report.ivars50[1] == 0.0);
}
