#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "frechet/coupling.hpp"
#include "frechet/risk_measures.hpp"
#include "test_support.hpp"

using namespace frechet;
using namespace testutil;

TEST_CASE("distortion evaluation") {
    CHECK(DistortionFunction::identity()(0.37) == 0.37);
    CHECK(DistortionFunction::tvar_level(0.5)(0.25) == 0.5); // min{0.25/0.5, 1}
    CHECK(DistortionFunction::proportional_hazard(0.5)(0.25) == 0.5);
    CHECK(DistortionFunction::dual_power(2.0)(0.5) == 0.75);

    const auto v = DistortionFunction::var_level(0.6);
    CHECK(v(0.4) == 0.0); // jumps strictly above 1-p
    CHECK(v(0.4 + 1e-9) == 1.0);
    CHECK(v(0.0) == 0.0);
    CHECK(v(1.0) == 1.0);

    CHECK_THROWS_AS(DistortionFunction::identity()(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(DistortionFunction::identity()(1.1), std::invalid_argument);
}

TEST_CASE("distortion catalog concavity flags") {
    CHECK(DistortionFunction::identity().is_concave());
    CHECK(DistortionFunction::tvar_level(0.9).is_concave());
    CHECK_FALSE(DistortionFunction::var_level(0.9).is_concave());
    CHECK(DistortionFunction::proportional_hazard(0.5).is_concave());
    CHECK_FALSE(DistortionFunction::proportional_hazard(2.0).is_concave());
    CHECK(DistortionFunction::dual_power(2.0).is_concave());
    CHECK_FALSE(DistortionFunction::dual_power(0.5).is_concave());
}

TEST_CASE("piecewise-linear distortions are validated at construction") {
    const auto ok = DistortionFunction::piecewise_linear({{0, 0}, {0.25, 0.5}, {1, 1}});
    CHECK(ok.is_concave());
    CHECK(close(ok(0.125), 0.25));
    CHECK(close(ok(0.625), 0.75));

    const auto convex = DistortionFunction::piecewise_linear({{0, 0}, {0.5, 0.25}, {1, 1}});
    CHECK_FALSE(convex.is_concave());

    CHECK_THROWS_AS(DistortionFunction::piecewise_linear({{0, 0.1}, {1, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DistortionFunction::piecewise_linear({{0, 0}, {0.9, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DistortionFunction::piecewise_linear({{0, 0}, {0.5, 0.8}, {0.5, 0.9}, {1, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DistortionFunction::piecewise_linear({{0, 0}, {0.5, 0.8}, {1, 0.7}}),
                    std::invalid_argument);
}

TEST_CASE("layer-sum rho on worked values") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        const auto d = random_lattice_dist(rng);
        CHECK(close(rho(DistortionFunction::identity(), d), d.mean(), 1e-12));
    }

    // both integral branches by hand: g(0.5) * 1 on [0,1) plus (g(0.5)-1) * 1 on [-1,0)
    const auto sym = dist({-1, 1}, {0.5, 0.5});
    CHECK(close(rho(DistortionFunction::proportional_hazard(0.5), sym),
                2.0 * std::sqrt(0.5) - 1.0, 1e-12));

    CHECK(rho(DistortionFunction::var_level(0.6), uniform4()) == 3.0);
    CHECK(rho(DistortionFunction::var_level(0.6), uniform4()) == uniform4().quantile(0.6));
}

TEST_CASE("catalog coherence: rho reproduces VaR, TVaR and the mean") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 40; ++rep) {
        const auto d = random_lattice_dist(rng);
        for (double p : {0.3, 0.6, 0.9}) {
            CHECK(close(rho(DistortionFunction::tvar_level(p), d), tail_value_at_risk(d, p), 1e-9));
            CHECK(rho(DistortionFunction::var_level(p), d) == value_at_risk(d, p));
        }
        CHECK(close(rho(DistortionFunction::identity(), d), d.mean(), 1e-9));
    }
}

TEST_CASE("rho is translative and positively homogeneous") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 25; ++rep) {
        const auto d = random_lattice_dist(rng);
        for (const auto& g : distortion_catalog()) {
            for (double c : {-3.0, 0.5, 10.0}) {
                CHECK(close(rho(g, d.shift(c)), rho(g, d) + c, 1e-9));
            }
            for (double lambda : {0.5, 2.0}) {
                CHECK(close(rho(g, d.scale(lambda)), lambda * rho(g, d), 1e-9));
            }
        }
    }
}

TEST_CASE("spectral cross-check agrees with the layer sum") {
    const auto sym = dist({-1, 1}, {0.5, 0.5});
    CHECK(close(rho_spectral(DistortionFunction::proportional_hazard(0.5), sym, 1000000),
                2.0 * std::sqrt(0.5) - 1.0, 1e-3));

    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 5; ++rep) {
        const auto d = random_lattice_dist(rng);
        const auto [lo, hi] = d.essential_bounds();
        CHECK(close(rho_spectral(DistortionFunction::identity(), d, 100000), d.mean(),
                    1e-4 * (hi - lo)));
        for (const auto& g : concave_distortion_catalog()) {
            CHECK(close(rho_spectral(g, d, 100000), rho(g, d), 1e-3 * std::max(hi - lo, 1.0)));
        }
    }

    CHECK_THROWS_AS(rho_spectral(DistortionFunction::var_level(0.6), uniform4(), 100000),
                    std::domain_error);
    CHECK_THROWS_AS(rho_spectral(DistortionFunction::identity(), uniform4(), 999),
                    std::invalid_argument);
}

TEST_CASE("parallel and serial spectral sums are bit-identical") {
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 5; ++rep) {
        const auto d = random_lattice_dist(rng);
        for (const auto& g : concave_distortion_catalog()) {
            CHECK(rho_spectral(g, d, 200000) == rho_spectral_serial(g, d, 200000));
        }
    }
}

TEST_CASE("value at risk") {
    CHECK(value_at_risk(uniform4(), 0.6) == 3.0); // F(2) = 0.5 < 0.6 <= F(3)
    CHECK(value_at_risk(point(7), 0.5) == 7.0);
    CHECK(value_at_risk(bernoulli(0.5), 0.5) == 0.0);
    CHECK_THROWS_AS(value_at_risk(uniform4(), 0.0), std::invalid_argument);
}

TEST_CASE("tail value at risk with fractional atom splitting") {
    CHECK(close(tail_value_at_risk(uniform4(), 0.0), uniform4().mean()));
    CHECK(close(tail_value_at_risk(uniform4(), 0.5), 3.5));   // 2*(0.25*3 + 0.25*4)
    CHECK(close(tail_value_at_risk(uniform4(), 0.875), 4.0)); // inside the top atom
    CHECK_THROWS_AS(tail_value_at_risk(uniform4(), 1.0), std::invalid_argument);

    // quadrature oracle: (1/(1-p)) * int_p^1 VaR_w dw on a fine grid
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        const auto d = random_lattice_dist(rng);
        for (double p : {0.0, 0.25, 0.5, 0.8}) {
            const long steps = 200000;
            double acc = 0.0;
            for (long k = 0; k < steps; ++k) {
                const double w = p + (1.0 - p) * (k + 0.5) / steps;
                acc += d.quantile(w);
            }
            acc /= steps;
            CHECK(close(tail_value_at_risk(d, p), acc, 1e-3));
        }
    }
}

TEST_CASE("comonotonic additivity and subadditivity of concave rho") {
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<DiscreteDistribution> ms;
        const int n = static_cast<int>(draw_int(rng, 2, 4));
        for (int i = 0; i < n; ++i) ms.push_back(random_lattice_dist(rng));
        const FrechetClass c(ms);
        const auto sum_c = sum_distribution(comonotonic(c));
        const auto j = sample_coupling(c, rng());
        const auto sum_j = sum_distribution(j);

        for (const auto& g : distortion_catalog()) {
            double total = 0.0;
            for (const auto& m : ms) total += rho(g, m);
            CHECK(close(rho(g, sum_c), total, 1e-9));
            if (g.is_concave()) {
                CHECK(rho(g, sum_j) <= total + 1e-9);
            }
        }
    }
}
