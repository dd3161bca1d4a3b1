#include "frechet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "frechet/json_io.hpp"
#include "frechet/rng.hpp"

namespace frechet {

namespace {

struct MarginalDraft {
    std::vector<double> values;
    std::vector<int> units; // probability numerators over 64
};

constexpr int kLattice = 64;

MarginalDraft draw_marginal(std::mt19937_64& rng, const ClassConfig& cfg) {
    const int grid_size = cfg.value_max - cfg.value_min + 1;
    const int k = static_cast<int>(draw_int(rng, cfg.support_min, cfg.support_max));

    std::vector<double> grid(static_cast<std::size_t>(grid_size));
    for (int v = 0; v < grid_size; ++v) grid[static_cast<std::size_t>(v)] = cfg.value_min + v;
    for (int t = 0; t < k; ++t) {
        const auto pick = t + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(grid_size - t)));
        std::swap(grid[static_cast<std::size_t>(t)], grid[static_cast<std::size_t>(pick)]);
    }
    MarginalDraft m;
    m.values.assign(grid.begin(), grid.begin() + k);
    std::sort(m.values.begin(), m.values.end());

    m.units.assign(static_cast<std::size_t>(k), 1);
    for (int r = 0; r < kLattice - k; ++r) {
        m.units[draw_below(rng, static_cast<std::uint64_t>(k))]++;
    }
    return m;
}

// Shrinks tail masses (everything above each minimum) proportionally on the
// 1/64 lattice until sum_i P(X_i > l_i) <= 1; removed units move to the
// bottom atom, so each marginal stays on the lattice.
void enforce_me_feasible(std::vector<MarginalDraft>& drafts) {
    long total_tail = 0;
    for (const auto& m : drafts) total_tail += kLattice - m.units[0];
    if (total_tail <= kLattice) return;

    for (auto& m : drafts) {
        const long tail = kLattice - m.units[0];
        const long target = tail * kLattice / total_tail;
        long remove = tail - target;
        for (std::size_t k = m.units.size(); k-- > 1 && remove > 0;) {
            const long take = std::min<long>(remove, m.units[k]);
            m.units[k] -= static_cast<int>(take);
            m.units[0] += static_cast<int>(take);
            remove -= take;
        }
    }
}

} // namespace

FrechetClass random_class(const ClassConfig& cfg, std::uint64_t seed) {
    if (cfg.n_min < 2 || cfg.n_max < cfg.n_min) {
        throw std::invalid_argument("random_class: dimension range must satisfy 2 <= n_min <= n_max");
    }
    if (cfg.support_min < 1 || cfg.support_max < cfg.support_min) {
        throw std::invalid_argument("random_class: invalid support size range");
    }
    if (cfg.value_max - cfg.value_min + 1 < cfg.support_max) {
        throw std::invalid_argument("random_class: value grid too small for the support sizes");
    }

    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(draw_int(rng, cfg.n_min, cfg.n_max));

    std::vector<MarginalDraft> drafts;
    drafts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) drafts.push_back(draw_marginal(rng, cfg));

    if (cfg.zero_min) {
        for (auto& m : drafts) {
            const double lo = m.values.front();
            for (double& v : m.values) v -= lo;
        }
    }
    if (cfg.me_feasible_mode) enforce_me_feasible(drafts);

    std::vector<DiscreteDistribution> marginals;
    marginals.reserve(drafts.size());
    for (const auto& m : drafts) {
        std::vector<double> probs;
        probs.reserve(m.units.size());
        for (int u : m.units) probs.push_back(static_cast<double>(u) / kLattice);
        marginals.push_back(DiscreteDistribution::make(m.values, std::move(probs)));
    }
    return FrechetClass(std::move(marginals));
}

namespace {

struct TrialOutcome {
    enum class Status { passed, failed, skipped };
    Status status = Status::passed;
    bool has_margin = false;
    double margin = std::numeric_limits<double>::infinity();
    std::string description;
    std::string class_json = "null";
    std::string coupling_json = "null";
    std::string witness_json = "null";
};

void note_margin(TrialOutcome& out, double slack) {
    out.has_margin = true;
    out.margin = std::min(out.margin, slack);
}

void fail(TrialOutcome& out, std::string description) {
    out.status = TrialOutcome::Status::failed;
    out.description = std::move(description);
}

std::string witness_to_json(const OrderWitness& w) {
    const char* kind = w.kind == OrderWitness::Kind::retention ? "retention"
                       : w.kind == OrderWitness::Kind::level   ? "level"
                                                               : "mean";
    std::string out = "{\"kind\":\"";
    out += kind;
    out += "\",\"value\":" + format_number(w.value);
    out += ",\"lhs\":" + format_number(w.lhs);
    out += ",\"rhs\":" + format_number(w.rhs) + "}";
    return out;
}

// Largest discrepancy between two merged laws: probability differences on
// aligned atoms, full atom mass where one support point has no partner.
double law_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    std::size_t i = 0, k = 0;
    double dist = 0.0;
    while (i < a.size() && k < b.size()) {
        if (std::abs(a.support()[i] - b.support()[k]) <= kMergeTol) {
            dist = std::max(dist, std::abs(a.probs()[i] - b.probs()[k]));
            ++i, ++k;
        } else if (a.support()[i] < b.support()[k]) {
            dist = std::max(dist, a.probs()[i]);
            ++i;
        } else {
            dist = std::max(dist, b.probs()[k]);
            ++k;
        }
    }
    for (; i < a.size(); ++i) dist = std::max(dist, a.probs()[i]);
    for (; k < b.size(); ++k) dist = std::max(dist, b.probs()[k]);
    return dist;
}

template <typename TrialFn>
VerificationReport run_suite(std::string suite, std::uint64_t seed, int trials, RunMode mode,
                             TrialFn&& trial_fn) {
    if (trials < 0) throw std::invalid_argument("verify: trial count must be nonnegative");

    auto guarded = [&](int index) -> TrialOutcome {
        try {
            return trial_fn(index, derive_seed(seed, static_cast<std::uint64_t>(index)));
        } catch (const std::exception& e) {
            TrialOutcome out;
            fail(out, std::string("harness error: ") + e.what());
            out.witness_json = "{\"kind\":\"harness-error\"}";
            return out;
        }
    };

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < trials; ++i) outcomes[static_cast<std::size_t>(i)] = guarded(i);
    } else {
        for (int i = 0; i < trials; ++i) outcomes[static_cast<std::size_t>(i)] = guarded(i);
    }

    VerificationReport report;
    report.suite = std::move(suite);
    report.seed = seed;
    report.attempted = trials;
    for (int i = 0; i < trials; ++i) {
        const TrialOutcome& out = outcomes[static_cast<std::size_t>(i)];
        switch (out.status) {
            case TrialOutcome::Status::passed: ++report.passed; break;
            case TrialOutcome::Status::skipped: ++report.skipped; break;
            case TrialOutcome::Status::failed:
                if (!report.counterexample) {
                    report.counterexample = Counterexample{i, out.description, out.class_json,
                                                           out.coupling_json, out.witness_json};
                }
                break;
        }
        if (out.has_margin) {
            report.worst_margin = report.has_margin ? std::min(report.worst_margin, out.margin)
                                                    : out.margin;
            report.has_margin = true;
        }
    }
    return report;
}

// Draws the trial's class and a sampled member coupling, re-checking
// membership so a generator bug surfaces as a harness error rather than a
// theorem counterexample.
struct TrialData {
    FrechetClass cls;
    JointDistribution coupling;
};

TrialData draw_trial(const ClassConfig& cfg, std::uint64_t trial_seed) {
    FrechetClass cls = random_class(cfg, derive_seed(trial_seed, 1));
    JointDistribution j = sample_coupling(cls, derive_seed(trial_seed, 2));
    if (!is_member(j, cls, kMergeTol)) {
        throw std::runtime_error("sampled coupling failed the membership guard");
    }
    return {std::move(cls), std::move(j)};
}

void attach_context(TrialOutcome& out, const TrialData& data) {
    out.class_json = to_json(data.cls);
    out.coupling_json = to_json(data.coupling);
}

} // namespace

VerificationReport verify_thm11_forward(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                        RunMode mode) {
    return run_suite("thm11-forward", seed, trials, mode, [&cfg](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);
        const DiscreteDistribution sum_j = sum_distribution(data.coupling);
        const DiscreteDistribution sum_c = sum_distribution(comonotonic(data.cls));
        note_margin(out, sl_margin(sum_j, sum_c));
        const OrderVerdict v = cx_order(sum_j, sum_c);
        if (!v.holds) {
            attach_context(out, data);
            out.witness_json = witness_to_json(*v.witness);
            fail(out, "coupling sum is not convex-dominated by the comonotonic sum");
        }
        return out;
    });
}

VerificationReport verify_thm11_converse(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                         RunMode mode) {
    return run_suite("thm11-converse", seed, trials, mode, [&cfg](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);
        const DiscreteDistribution sum_c = sum_distribution(comonotonic(data.cls));

        bool asserted = false;
        if (!is_comonotonic(data.coupling, kMergeTol)) {
            asserted = true;
            const double dist = law_distance(sum_distribution(data.coupling), sum_c);
            note_margin(out, dist);
            if (dist <= kMergeTol) {
                attach_context(out, data);
                fail(out, "non-comonotonic coupling reproduced the comonotonic sum law");
                return out;
            }
        }

        if (data.cls.dim() == 2) {
            const auto& f1 = data.cls.marginal(0);
            const auto& f2 = data.cls.marginal(1);
            if (f1.size() * f2.size() <= 16) {
                for (const JointDistribution& vtx : enumerate_vertex_couplings(f1, f2)) {
                    if (is_comonotonic(vtx, kMergeTol)) continue;
                    asserted = true;
                    const double dist = law_distance(sum_distribution(vtx), sum_c);
                    note_margin(out, dist);
                    if (dist <= kMergeTol) {
                        out.class_json = to_json(data.cls);
                        out.coupling_json = to_json(vtx);
                        fail(out, "non-comonotonic vertex coupling reproduced the comonotonic sum law");
                        return out;
                    }
                }
            }
        }
        if (!asserted) out.status = TrialOutcome::Status::skipped;
        return out;
    });
}

namespace {

void require_me_config(const ClassConfig& cfg, const char* suite) {
    if (!cfg.me_feasible_mode || cfg.n_min < 3) {
        throw std::invalid_argument(std::string(suite) +
                                    ": config must force feasibility and n >= 3");
    }
}

} // namespace

VerificationReport verify_thm12_forward(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                        RunMode mode) {
    require_me_config(cfg, "thm12-forward");
    return run_suite("thm12-forward", seed, trials, mode, [&cfg](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);

        const DiscreteDistribution sum_j = sum_distribution(data.coupling);
        const DiscreteDistribution sum_me =
            sum_distribution(mutually_exclusive(data.cls, Side::below));
        note_margin(out, sl_margin(sum_me, sum_j));
        OrderVerdict v = cx_order(sum_me, sum_j);
        if (!v.holds) {
            attach_context(out, data);
            out.witness_json = witness_to_json(*v.witness);
            fail(out, "mutually exclusive sum (from below) is not the convex minimum");
            return out;
        }

        // Above side through the reflection argument: negate the class and
        // the coupling, build from above, compare.
        std::vector<DiscreteDistribution> flipped;
        for (std::size_t i = 0; i < data.cls.dim(); ++i) {
            flipped.push_back(data.cls.marginal(i).negate());
        }
        const FrechetClass neg_cls(std::move(flipped));
        const JointDistribution neg_j = data.coupling.negate();
        const DiscreteDistribution sum_me_above =
            sum_distribution(mutually_exclusive(neg_cls, Side::above));
        const DiscreteDistribution sum_neg_j = sum_distribution(neg_j);
        note_margin(out, sl_margin(sum_me_above, sum_neg_j));
        v = cx_order(sum_me_above, sum_neg_j);
        if (!v.holds) {
            attach_context(out, data);
            out.witness_json = witness_to_json(*v.witness);
            fail(out, "mutually exclusive sum (from above) is not the convex minimum");
        }
        return out;
    });
}

VerificationReport verify_thm12_converse(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                         RunMode mode) {
    require_me_config(cfg, "thm12-converse");
    return run_suite("thm12-converse", seed, trials, mode, [&cfg](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);
        if (is_mutually_exclusive(data.coupling, Side::below, kMergeTol)) {
            out.status = TrialOutcome::Status::skipped;
            return out;
        }
        const DiscreteDistribution sum_me =
            sum_distribution(mutually_exclusive(data.cls, Side::below));
        const double dist = law_distance(sum_distribution(data.coupling), sum_me);
        note_margin(out, dist);
        if (dist <= kMergeTol) {
            attach_context(out, data);
            fail(out, "non-exclusive coupling reproduced the mutually exclusive sum law");
        }
        return out;
    });
}

VerificationReport verify_lemma22(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                  const std::vector<DistortionFunction>& gs, RunMode mode) {
    for (const auto& g : gs) {
        if (!g.is_concave()) {
            throw std::domain_error("lemma22: distortion " + g.name() + " is not concave");
        }
    }
    return run_suite("lemma22", seed, trials, mode, [&cfg, &gs](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);
        const DiscreteDistribution sum_j = sum_distribution(data.coupling);
        const DiscreteDistribution sum_c = sum_distribution(comonotonic(data.cls));

        for (const auto& g : gs) {
            double marginal_total = 0.0;
            for (std::size_t i = 0; i < data.cls.dim(); ++i) {
                marginal_total += rho(g, data.cls.marginal(i));
            }
            const double slack = marginal_total - rho(g, sum_j);
            note_margin(out, slack);
            if (slack < -kMergeTol) {
                attach_context(out, data);
                fail(out, "subadditivity violated for " + g.name());
                return out;
            }
            // Comonotonic couplings attain the bound with equality.
            const double comon_gap = marginal_total - rho(g, sum_c);
            note_margin(out, comon_gap);
            if (std::abs(comon_gap) > kMergeTol) {
                attach_context(out, data);
                fail(out, "comonotonic additivity violated for " + g.name());
                return out;
            }
        }
        return out;
    });
}

VerificationReport verify_lemma32(const ClassConfig& cfg, std::uint64_t seed, int trials,
                                  const std::vector<TestFunction>& fs, RunMode mode) {
    if (!cfg.me_feasible_mode || !cfg.zero_min || cfg.value_min < 0) {
        throw std::invalid_argument(
            "lemma32: config must generate nonnegative feasible classes with zero infima");
    }
    return run_suite("lemma32", seed, trials, mode, [&cfg, &fs](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);
        const std::size_t n = data.cls.dim();
        for (std::size_t i = 0; i < n; ++i) {
            if (data.cls.marginal(i).essential_bounds().first < 0.0) {
                throw std::runtime_error("lemma32: marginal with negative support");
            }
        }

        auto expect = [](const DiscreteDistribution& d, const TestFunction& f) {
            double s = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) s += f(d.support()[k]) * d.probs()[k];
            return s;
        };

        const DiscreteDistribution sum_j = sum_distribution(data.coupling);
        const JointDistribution me = mutually_exclusive(data.cls, Side::below);
        const DiscreteDistribution sum_me = sum_distribution(me);

        for (const auto& f : fs) {
            double bound = -static_cast<double>(n - 1) * f(0.0);
            for (std::size_t i = 0; i < n; ++i) bound += expect(data.cls.marginal(i), f);

            const double slack = expect(sum_j, f) - bound;
            note_margin(out, slack);
            if (slack < -kMergeTol) {
                attach_context(out, data);
                fail(out, "lower bound violated for " + f.name());
                return out;
            }
            // Mutually exclusive couplings attain the bound for every convex f.
            const double me_gap = expect(sum_me, f) - bound;
            note_margin(out, -std::abs(me_gap));
            if (std::abs(me_gap) > kMergeTol) {
                out.class_json = to_json(data.cls);
                out.coupling_json = to_json(me);
                fail(out, "mutually exclusive coupling missed equality for " + f.name());
                return out;
            }
        }

        // Strict convexity separates: a non-exclusive coupling must sit
        // strictly above the bound for the square.
        if (!is_mutually_exclusive(data.coupling, Side::below, kMergeTol)) {
            const TestFunction sq = TestFunction::square();
            double bound = -static_cast<double>(n - 1) * sq(0.0);
            for (std::size_t i = 0; i < n; ++i) bound += expect(data.cls.marginal(i), sq);
            const double gap = expect(sum_j, sq) - bound;
            note_margin(out, gap);
            if (gap <= kMergeTol) {
                attach_context(out, data);
                fail(out, "non-exclusive coupling attained the strictly convex bound");
            }
        }
        return out;
    });
}

VerificationReport verify_countermonotonic_bound(std::uint64_t seed, int trials, RunMode mode) {
    const ClassConfig cfg = bivariate_class_config();
    return run_suite("countermonotonic", seed, trials, mode, [cfg](int, std::uint64_t ts) {
        TrialOutcome out;
        const TrialData data = draw_trial(cfg, ts);
        const auto& f1 = data.cls.marginal(0);
        const auto& f2 = data.cls.marginal(1);
        const DiscreteDistribution sum_cm = sum_distribution(countermonotonic(f1, f2));

        const DiscreteDistribution sum_j = sum_distribution(data.coupling);
        note_margin(out, sl_margin(sum_cm, sum_j));
        OrderVerdict v = cx_order(sum_cm, sum_j);
        if (!v.holds) {
            attach_context(out, data);
            out.witness_json = witness_to_json(*v.witness);
            fail(out, "countermonotonic sum is not convex-dominated by the coupling sum");
            return out;
        }

        if (f1.size() * f2.size() <= 16) {
            for (const JointDistribution& vtx : enumerate_vertex_couplings(f1, f2)) {
                const DiscreteDistribution sum_v = sum_distribution(vtx);
                note_margin(out, sl_margin(sum_cm, sum_v));
                v = cx_order(sum_cm, sum_v);
                if (!v.holds) {
                    out.class_json = to_json(data.cls);
                    out.coupling_json = to_json(vtx);
                    out.witness_json = witness_to_json(*v.witness);
                    fail(out, "countermonotonic sum is not below a vertex coupling sum");
                    return out;
                }
            }
        }
        return out;
    });
}

std::string VerificationReport::to_json() const {
    std::string out = "{\"suite\":\"" + suite + "\"";
    out += ",\"seed\":" + std::to_string(seed);
    out += ",\"attempted\":" + std::to_string(attempted);
    out += ",\"passed\":" + std::to_string(passed);
    out += ",\"skipped\":" + std::to_string(skipped);
    out += ",\"worst_margin\":";
    out += has_margin ? format_number(worst_margin) : "null";
    out += ",\"counterexample\":";
    if (counterexample) {
        out += "{\"trial\":" + std::to_string(counterexample->trial);
        out += ",\"description\":\"" + counterexample->description + "\"";
        out += ",\"class\":" + counterexample->class_json;
        out += ",\"coupling\":" + counterexample->coupling_json;
        out += ",\"witness\":" + counterexample->witness_json + "}";
    } else {
        out += "null";
    }
    out += "}";
    return out;
}

ClassConfig default_class_config() {
    return {};
}

ClassConfig me_class_config() {
    ClassConfig cfg;
    cfg.n_min = 3;
    cfg.n_max = 4;
    cfg.me_feasible_mode = true;
    return cfg;
}

ClassConfig lemma32_class_config() {
    ClassConfig cfg;
    cfg.me_feasible_mode = true;
    cfg.zero_min = true;
    return cfg;
}

ClassConfig bivariate_class_config() {
    ClassConfig cfg;
    cfg.n_min = 2;
    cfg.n_max = 2;
    cfg.value_min = -4;
    cfg.value_max = 4;
    return cfg;
}

VerificationReport run_named_suite(const std::string& name, std::uint64_t seed, int trials,
                                   RunMode mode) {
    if (name == "thm11-forward") {
        return verify_thm11_forward(default_class_config(), seed, trials, mode);
    }
    if (name == "thm11-converse") {
        return verify_thm11_converse(default_class_config(), seed, trials, mode);
    }
    if (name == "thm12-forward") {
        return verify_thm12_forward(me_class_config(), seed, trials, mode);
    }
    if (name == "thm12-converse") {
        return verify_thm12_converse(me_class_config(), seed, trials, mode);
    }
    if (name == "lemma22") {
        return verify_lemma22(default_class_config(), seed, trials, concave_distortion_catalog(),
                              mode);
    }
    if (name == "lemma32") {
        const std::vector<TestFunction> fs{TestFunction::square(), TestFunction::fourth_power(),
                                           TestFunction::hinge(1.0)};
        return verify_lemma32(lemma32_class_config(), seed, trials, fs, mode);
    }
    if (name == "countermonotonic") {
        return verify_countermonotonic_bound(seed, trials, mode);
    }
    throw std::invalid_argument("unknown verification suite \"" + name + "\"");
}

} // namespace frechet
