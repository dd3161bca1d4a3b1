#pragma once

#include <string>
#include <utility>
#include <vector>

#include "frechet/distribution.hpp"

namespace frechet {

/// A distortion function g: [0,1] -> [0,1], nondecreasing with g(0) = 0 and
/// g(1) = 1, from a fixed catalog or piecewise linear. The concavity flag is
/// derived from the kind and parameters at construction.
class DistortionFunction {
public:
    enum class Kind { identity, var_level, tvar_level, proportional_hazard, dual_power,
                      piecewise_linear };

    static DistortionFunction identity();
    /// g(u) = 1 for u > 1-p, else 0; rho_g is VaR at level p. Never concave.
    static DistortionFunction var_level(double p);
    /// g(u) = min(u / (1-p), 1); rho_g is TVaR at level p. Always concave.
    static DistortionFunction tvar_level(double p);
    /// g(u) = u^r for r > 0; concave iff r <= 1.
    static DistortionFunction proportional_hazard(double r);
    /// g(u) = 1 - (1-u)^s for s > 0; concave iff s >= 1.
    static DistortionFunction dual_power(double s);
    /// Piecewise-linear g through the given (u, g(u)) knots. Validated at
    /// construction: endpoints (0,0) and (1,1), u strictly increasing,
    /// values nondecreasing; concave iff slopes are nonincreasing.
    static DistortionFunction piecewise_linear(std::vector<std::pair<double, double>> points);

    /// g(u) for u in [0,1]; throws outside the unit interval.
    double operator()(double u) const;

    Kind kind() const { return kind_; }
    bool is_concave() const { return concave_; }
    double param() const { return param_; }
    const std::vector<std::pair<double, double>>& points() const { return points_; }

    /// Short display name, e.g. "tvar(0.9)" or "ph(0.5)".
    std::string name() const;

private:
    DistortionFunction(Kind kind, double param, bool concave)
        : kind_(kind), param_(param), concave_(concave) {}

    Kind kind_;
    double param_ = 0.0;
    bool concave_ = false;
    std::vector<std::pair<double, double>> points_;
};

/// The distortion risk measure rho_g as an exact layer sum over the step
/// tail function: with support x_1 < ... < x_m and tail levels
/// s_k = P(X > x_k), s_0 = 1, returns sum_k x_k (g(s_{k-1}) - g(s_k)).
/// Evaluates both defining integrals exactly, including negative support.
double rho(const DistortionFunction& g, const DiscreteDistribution& d);

/// Numerical quantile-form cross-check int_0^1 VaR_{1-q} dg(q) on a uniform
/// q-grid, valid for concave g only (throws std::domain_error otherwise;
/// std::invalid_argument for steps < 1000). The grid is summed in fixed
/// blocks so the result is identical whether or not OpenMP splits the work.
double rho_spectral(const DistortionFunction& g, const DiscreteDistribution& d, long steps);

/// Same computation with the block loop forced serial; kept as the
/// reference path for tests and the benchmark.
double rho_spectral_serial(const DistortionFunction& g, const DiscreteDistribution& d, long steps);

/// VaR_p = inf{x : F(x) >= p}, p in (0,1].
double value_at_risk(const DiscreteDistribution& d, double p);

/// TVaR_p = (1/(1-p)) int_p^1 VaR_w dw, p in [0,1), computed exactly with
/// fractional splitting of the atom straddling level p.
double tail_value_at_risk(const DiscreteDistribution& d, double p);

/// The full distortion catalog used by the verification suites: identity,
/// VaR and TVaR distortions at levels 0.3/0.6/0.9, proportional hazard 0.5,
/// dual power 2.
std::vector<DistortionFunction> distortion_catalog();

/// The concave subset of the catalog.
std::vector<DistortionFunction> concave_distortion_catalog();

} // namespace frechet
