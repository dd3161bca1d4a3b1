#include <doctest.h>

#include <random>

#include "frechet/coupling.hpp"
#include "frechet/orders.hpp"
#include "test_support.hpp"

using namespace frechet;
using namespace testutil;

namespace {

// Dense-grid oracle: compares the stop-loss transforms at every support
// point and at off-kink retentions; sufficient because both transforms are
// piecewise linear between the sampled points.
bool sl_oracle(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    const double lo = std::min(x.support().front(), y.support().front()) - 1.5;
    const double hi = std::max(x.support().back(), y.support().back()) + 1.5;
    for (double d = lo; d <= hi; d += 0.03125) {
        if (x.stop_loss(d) > y.stop_loss(d) + 1e-9) return false;
    }
    for (double d : x.support()) {
        if (x.stop_loss(d) > y.stop_loss(d) + 1e-9) return false;
    }
    for (double d : y.support()) {
        if (x.stop_loss(d) > y.stop_loss(d) + 1e-9) return false;
    }
    return true;
}

} // namespace

TEST_CASE("stop-loss order on worked pairs") {
    const auto u = uniform4();
    CHECK(sl_order(u, u).holds);

    const auto spread = dist({0, 2}, {0.5, 0.5});
    CHECK(sl_order(point(1), spread).holds); // at d = 1: 0 <= 0.5

    const auto fails = sl_order(spread, point(1));
    CHECK_FALSE(fails.holds);
    REQUIRE(fails.witness.has_value());
    CHECK(fails.witness->kind == OrderWitness::Kind::retention);
    CHECK(fails.witness->value == 1.0);
    CHECK(close(fails.witness->lhs, 0.5));
    CHECK(close(fails.witness->rhs, 0.0));
    // the witness reproduces the violated comparison
    CHECK(close(spread.stop_loss(fails.witness->value), fails.witness->lhs));
    CHECK(close(point(1).stop_loss(fails.witness->value), fails.witness->rhs));
}

TEST_CASE("convex order adds the mean gate") {
    const auto spread = dist({0, 2}, {0.5, 0.5});
    CHECK(cx_order(point(1), spread).holds);

    const auto mean_gap = cx_order(point(0), point(1));
    CHECK_FALSE(mean_gap.holds);
    REQUIRE(mean_gap.witness.has_value());
    CHECK(mean_gap.witness->kind == OrderWitness::Kind::mean);

    // independent Bernoulli(1/2) pair sum against the comonotonic pair sum
    const auto indep = dist({0, 1, 2}, {0.25, 0.5, 0.25});
    const auto como = dist({0, 2}, {0.5, 0.5});
    CHECK(cx_order(indep, como).holds);
    CHECK(indep.stop_loss(1) == 0.25); // strict at d = 1
    CHECK(como.stop_loss(1) == 0.5);
}

TEST_CASE("TVaR route on worked pairs") {
    const auto u = uniform4();
    CHECK(sl_order_via_tvar(u, u).holds);
    CHECK(sl_order_via_tvar(point(1), dist({0, 2}, {0.5, 0.5})).holds);

    const auto fails = sl_order_via_tvar(dist({0, 2}, {0.5, 0.5}), point(1));
    CHECK_FALSE(fails.holds);
    REQUIRE(fails.witness.has_value());
    CHECK(fails.witness->kind == OrderWitness::Kind::level);
}

TEST_CASE("the two stop-loss routes and the dense oracle agree") {
    std::mt19937_64 rng(71);
    int holds_seen = 0, fails_seen = 0;
    for (int rep = 0; rep < 250; ++rep) {
        DiscreteDistribution x = random_lattice_dist(rng);
        DiscreteDistribution y = random_lattice_dist(rng);
        if (rep % 3 == 0) {
            // ordered pair with equal means: coupling sum vs comonotonic sum
            std::vector<DiscreteDistribution> ms{x, y};
            const FrechetClass c(ms);
            x = sum_distribution(sample_coupling(c, rng()));
            y = sum_distribution(comonotonic(c));
        } else if (rep % 3 == 1) {
            // perturbed pair: pull the right side down so the order breaks
            y = y.shift(-0.5);
        }
        const auto direct = sl_order(x, y);
        const auto via_tvar = sl_order_via_tvar(x, y);
        CHECK(direct.holds == via_tvar.holds);
        CHECK(direct.holds == sl_oracle(x, y));
        (direct.holds ? holds_seen : fails_seen)++;
    }
    CHECK(holds_seen > 0);
    CHECK(fails_seen > 0);
}

TEST_CASE("convex test expectations") {
    const auto spread = dist({0, 2}, {0.5, 0.5});
    const auto sq = convex_test_expectations(spread, point(1), {TestFunction::square()});
    CHECK(sq[0].first == 2.0);
    CHECK(sq[0].second == 1.0);

    std::mt19937_64 rng(73);
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = random_lattice_dist(rng);
        for (double t : {-1.0, 0.0, 1.5, 3.0}) {
            const auto hinge = convex_test_expectations(d, d, {TestFunction::hinge(t)});
            CHECK(close(hinge[0].first, d.stop_loss(t)));
            CHECK(hinge[0].first == hinge[0].second);
        }
        const auto fp = convex_test_expectations(d, d, {TestFunction::fourth_power()});
        CHECK(fp[0].first == fp[0].second);
    }
}

TEST_CASE("consistency with the convex-function characterization") {
    std::mt19937_64 rng(79);
    const std::vector<TestFunction> fs{TestFunction::square(), TestFunction::fourth_power(),
                                       TestFunction::hinge(0.0), TestFunction::hinge(2.0)};
    for (int rep = 0; rep < 60; ++rep) {
        std::vector<DiscreteDistribution> ms{random_lattice_dist(rng), random_lattice_dist(rng)};
        const FrechetClass c(ms);
        const auto x = sum_distribution(sample_coupling(c, rng()));
        const auto y = sum_distribution(comonotonic(c));
        if (!cx_order(x, y).holds) continue;
        for (const auto& [ex, ey] : convex_test_expectations(x, y, fs)) {
            CHECK(ex <= ey + 1e-9);
        }
    }
}

TEST_CASE("stop-loss curve kink lists") {
    const auto pm = stop_loss_curve(point(5));
    REQUIRE(pm.size() == 3);
    CHECK(pm[0] == std::pair<double, double>{4, 1});
    CHECK(pm[1] == std::pair<double, double>{5, 0});
    CHECK(pm[2] == std::pair<double, double>{6, 0});

    const auto u = stop_loss_curve(uniform4());
    const std::vector<std::pair<double, double>> expected{{0, 2.5}, {1, 1.5}, {2, 0.75},
                                                          {3, 0.25}, {4, 0}, {5, 0}};
    REQUIRE(u.size() == expected.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(u[k].first == expected[k].first);
        CHECK(close(u[k].second, expected[k].second));
    }

    std::mt19937_64 rng(83);
    for (int rep = 0; rep < 20; ++rep) {
        const auto curve = stop_loss_curve(random_lattice_dist(rng));
        for (std::size_t k = 1; k < curve.size(); ++k) {
            CHECK(curve[k].second <= curve[k - 1].second + 1e-12);
            if (k >= 2) {
                const double s1 = (curve[k - 1].second - curve[k - 2].second) /
                                  (curve[k - 1].first - curve[k - 2].first);
                const double s2 = (curve[k].second - curve[k - 1].second) /
                                  (curve[k].first - curve[k - 1].first);
                CHECK(s2 >= s1 - 1e-12);
            }
        }
    }
}

TEST_CASE("tvar curve starts at the mean and is nondecreasing") {
    std::mt19937_64 rng(89);
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = random_lattice_dist(rng);
        const auto curve = tvar_curve(d);
        CHECK(close(curve.front().second, d.mean()));
        for (std::size_t k = 1; k < curve.size(); ++k) {
            CHECK(curve[k].second >= curve[k - 1].second - 1e-12);
        }
    }
}

TEST_CASE("cx order is antisymmetric up to law and transitive") {
    std::mt19937_64 rng(97);
    for (int rep = 0; rep < 60; ++rep) {
        const auto x = random_lattice_dist(rng);
        const auto y = random_lattice_dist(rng);
        if (cx_order(x, y).holds && cx_order(y, x).holds) {
            CHECK(equal_in_distribution(x, y, 1e-9));
        }
    }

    // chains countermonotonic sum <= coupling sum <= comonotonic sum
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<DiscreteDistribution> ms{random_lattice_dist(rng), random_lattice_dist(rng)};
        const FrechetClass c(ms);
        const auto low = sum_distribution(countermonotonic(ms[0], ms[1]));
        const auto mid = sum_distribution(sample_coupling(c, rng()));
        const auto high = sum_distribution(comonotonic(c));
        if (cx_order(low, mid).holds && cx_order(mid, high).holds) {
            CHECK(cx_order(low, high).holds);
        }
    }
}

TEST_CASE("cx order is invariant under shift and negation") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 60; ++rep) {
        const auto x = random_lattice_dist(rng);
        const auto y = random_lattice_dist(rng);
        const bool base = cx_order(x, y).holds;
        for (double c : {-2.0, 3.5}) {
            CHECK(cx_order(x.shift(c), y.shift(c)).holds == base);
        }
        CHECK(cx_order(x.negate(), y.negate()).holds == base);
    }
}
