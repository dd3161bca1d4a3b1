#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frechet/coupling.hpp"
#include "frechet/distribution.hpp"
#include "frechet/orders.hpp"
#include "frechet/risk_measures.hpp"

namespace frechet {

/// Generation recipe for random Frechet classes. Values are drawn from an
/// integer grid and probabilities from the 1/64 lattice, so all masses are
/// dyadic and sums are exact in binary floating point.
struct ClassConfig {
    int n_min = 2;
    int n_max = 4;
    int support_min = 2;
    int support_max = 5;
    int value_min = 0;
    int value_max = 8;
    /// Rescales tail masses so that sum_i P(X_i > l_i) <= 1 holds.
    bool me_feasible_mode = false;
    /// Shifts every marginal so its essential infimum is 0.
    bool zero_min = false;
};

/// Deterministic class for a given (config, seed).
FrechetClass random_class(const ClassConfig& cfg, std::uint64_t seed);

struct Counterexample {
    int trial = 0;
    std::string description;
    std::string class_json = "null";
    std::string coupling_json = "null";
    std::string witness_json = "null";
};

/// Outcome of a seeded suite: counts, the minimum slack observed across all
/// asserted comparisons, and the lowest-indexed counterexample if any trial
/// failed. Serializes to a fixed-field-order JSON object; identical inputs
/// produce byte-identical reports whether the runner is serial or parallel.
struct VerificationReport {
    std::string suite;
    std::uint64_t seed = 0;
    int attempted = 0;
    int passed = 0;
    int skipped = 0;
    bool has_margin = false;
    double worst_margin = 0.0;
    std::optional<Counterexample> counterexample;

    int failed() const { return attempted - passed - skipped; }
    bool all_passed() const { return failed() == 0; }
    std::string to_json() const;
};

/// Trial execution mode. Trials are pure functions of (master seed, index),
/// so both modes produce identical reports; `parallel` fans the trial loop
/// out with OpenMP, `serial` is the reference path used by tests and the
/// benchmark.
enum class RunMode { serial, parallel };

/// Forward half of the comonotonic characterization: every sampled
/// coupling's sum precedes the comonotonic sum in convex order.
VerificationReport verify_thm11_forward(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                        RunMode mode = RunMode::parallel);

/// Converse half, in the distributional-equality form: a non-comonotonic
/// coupling's sum law differs from the comonotonic sum law. Bivariate
/// classes with at most 16 cells are additionally checked over every vertex
/// of the transportation polytope.
VerificationReport verify_thm11_converse(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                         RunMode mode = RunMode::parallel);

/// Forward half of the mutual-exclusivity characterization (n >= 3, feasible
/// classes): the mutually exclusive sum is the convex-order minimum. Both
/// sides are exercised: from below directly, from above through negation.
VerificationReport verify_thm12_forward(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                        RunMode mode = RunMode::parallel);

/// Converse half: a coupling that is not mutually exclusive from below has a
/// sum law different from the mutually exclusive sum law.
VerificationReport verify_thm12_converse(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                         RunMode mode = RunMode::parallel);

/// Subadditivity of concave distortion risk measures over sampled couplings,
/// with the comonotonic coupling checked for equality (additivity).
/// Throws std::domain_error if any supplied distortion is not concave.
VerificationReport verify_lemma22(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                  const std::vector<DistortionFunction>& gs,
                                  RunMode mode = RunMode::parallel);

/// Convex lower bound E f(S) >= sum_i E f(X_i) - (n-1) f(0) on nonnegative
/// classes with zero essential infima; equality for mutually exclusive
/// couplings, strict gap for the square on non-exclusive couplings.
VerificationReport verify_lemma32(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                  const std::vector<TestFunction>& fs,
                                  RunMode mode = RunMode::parallel);

/// Bivariate lower bound: the countermonotonic sum precedes every coupling
/// sum in convex order; small classes are checked over all polytope
/// vertices as well.
VerificationReport verify_countermonotonic_bound(std::uint64_t seed, int trials,
                                                 RunMode mode = RunMode::parallel);

/// Suite presets shared by the CLI and the acceptance harness.
ClassConfig default_class_config();
ClassConfig me_class_config();       // n in [3,4], feasible from below
ClassConfig lemma32_class_config();  // nonnegative, zero infima, feasible
ClassConfig bivariate_class_config();

/// Runs the named suite ("thm11-forward", "thm11-converse", "thm12-forward",
/// "thm12-converse", "lemma22", "lemma32", "countermonotonic") with its
/// preset configuration. Throws std::invalid_argument for unknown names.
VerificationReport run_named_suite(const std::string& name, std::uint64_t seed, int trials,
                                   RunMode mode = RunMode::parallel);

} // namespace frechet
