#include <doctest.h>

#include <stdexcept>

#include <json.hpp>

#include "frechet/json_io.hpp"
#include "frechet/verify.hpp"

using namespace frechet;

TEST_CASE("random classes are seed-deterministic and on the 1/64 lattice") {
    const ClassConfig cfg = default_class_config();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto a = random_class(cfg, seed);
        const auto b = random_class(cfg, seed);
        CHECK(to_json(a) == to_json(b));
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (double p : a.marginal(i).probs()) {
                const double units = p * 64.0;
                CHECK(units == static_cast<double>(static_cast<long>(units)));
            }
        }
        CHECK(a.dim() >= 2);
        CHECK(a.dim() <= 4);
    }
}

TEST_CASE("feasible mode forces the mutual-exclusivity condition") {
    const ClassConfig cfg = me_class_config();
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto c = random_class(cfg, seed);
        CHECK(me_feasible(c, Side::below));
        CHECK(c.dim() >= 3);
        // constructor round trip on the generated classes
        const auto j = mutually_exclusive(c, Side::below);
        CHECK(is_member(j, c, 1e-9));
        CHECK(is_mutually_exclusive(j, Side::below, 1e-9));
    }
}

TEST_CASE("zero-min mode pins every essential infimum at zero") {
    const ClassConfig cfg = lemma32_class_config();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto c = random_class(cfg, seed);
        for (std::size_t i = 0; i < c.dim(); ++i) {
            CHECK(c.marginal(i).essential_bounds().first == 0.0);
        }
        CHECK(me_feasible(c, Side::below));
    }
}

TEST_CASE("config validation") {
    ClassConfig bad = default_class_config();
    bad.n_min = 1;
    CHECK_THROWS_AS(random_class(bad, 1), std::invalid_argument);
    bad = default_class_config();
    bad.value_max = bad.value_min + 2; // grid smaller than the largest support
    CHECK_THROWS_AS(random_class(bad, 1), std::invalid_argument);
}

TEST_CASE("suites pass on short runs") {
    CHECK(verify_thm11_forward(default_class_config(), 7, 60).all_passed());
    CHECK(verify_thm11_converse(default_class_config(), 7, 60).all_passed());
    CHECK(verify_thm12_forward(me_class_config(), 7, 60).all_passed());
    CHECK(verify_thm12_converse(me_class_config(), 7, 60).all_passed());
    CHECK(verify_lemma22(default_class_config(), 7, 40, concave_distortion_catalog())
              .all_passed());
    const std::vector<TestFunction> fs{TestFunction::square(), TestFunction::fourth_power(),
                                       TestFunction::hinge(1.0)};
    CHECK(verify_lemma32(lemma32_class_config(), 7, 40, fs).all_passed());
    CHECK(verify_countermonotonic_bound(7, 60).all_passed());
}

TEST_CASE("zero trials is a vacuous pass") {
    const auto report = verify_thm11_forward(default_class_config(), 1, 0);
    CHECK(report.attempted == 0);
    CHECK(report.passed == 0);
    CHECK(report.all_passed());
    CHECK_FALSE(report.has_margin);
    CHECK(report.to_json().find("\"worst_margin\":null") != std::string::npos);
}

TEST_CASE("serial and parallel runners produce byte-identical reports") {
    const auto names = {"thm11-forward", "thm11-converse", "thm12-forward", "thm12-converse",
                        "lemma22",       "lemma32",         "countermonotonic"};
    for (const char* name : names) {
        const auto serial = run_named_suite(name, 42, 40, RunMode::serial);
        const auto parallel = run_named_suite(name, 42, 40, RunMode::parallel);
        CHECK(serial.to_json() == parallel.to_json());
        const auto rerun = run_named_suite(name, 42, 40, RunMode::parallel);
        CHECK(parallel.to_json() == rerun.to_json());
    }
}

TEST_CASE("reports serialize with the fixed field order") {
    const auto report = verify_thm11_forward(default_class_config(), 3, 25);
    const auto j = nlohmann::json::parse(report.to_json());
    CHECK(j["suite"] == "thm11-forward");
    CHECK(j["seed"] == 3);
    CHECK(j["attempted"] == 25);
    CHECK(j["passed"].get<int>() + j["skipped"].get<int>() == 25);
    CHECK(j["counterexample"].is_null());
    CHECK(j["worst_margin"].is_number());
    CHECK(j["worst_margin"].get<double>() >= -1e-9);
}

TEST_CASE("suite preconditions are enforced") {
    CHECK_THROWS_AS(verify_thm12_forward(default_class_config(), 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(verify_thm12_converse(default_class_config(), 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma32(default_class_config(), 1, 10, {TestFunction::square()}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        verify_lemma22(default_class_config(), 1, 10, {DistortionFunction::var_level(0.5)}),
        std::domain_error);
    CHECK_THROWS_AS(run_named_suite("nonsense", 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(verify_thm11_forward(default_class_config(), 1, -1), std::invalid_argument);
}

TEST_CASE("converse suites account for skips separately") {
    const auto report = verify_thm12_converse(me_class_config(), 5, 200);
    CHECK(report.attempted == 200);
    CHECK(report.passed + report.skipped == 200);
    CHECK(report.skipped > 0); // degenerate draws do land on exclusive couplings
    CHECK(report.all_passed());
}
